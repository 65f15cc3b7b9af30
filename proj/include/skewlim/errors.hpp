#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewlim {

// Base for all domain errors. `kind()` is a stable machine-readable tag used
// by the CLI when rendering failure reports.
class error : public std::runtime_error {
 public:
  error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct malformed_input : error {
  explicit malformed_input(const std::string& what) : error("MalformedInput", what) {}
};

struct period_overflow : error {
  explicit period_overflow(const std::string& what) : error("PeriodOverflow", what) {}
};

struct not_a_limit : error {
  explicit not_a_limit(const std::string& what) : error("NotALimit", what) {}
};

struct not_injective : error {
  explicit not_injective(const std::string& what) : error("NotInjective", what) {}
};

struct not_representable : error {
  explicit not_representable(const std::string& what) : error("NotRepresentable", what) {}
};

struct syntax_error : error {
  syntax_error(std::size_t position, const std::string& what)
      : error("SyntaxError", what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

struct unbound_variable : error {
  explicit unbound_variable(const std::string& what) : error("UnboundVariable", what) {}
};

struct arity_mismatch : error {
  explicit arity_mismatch(const std::string& what) : error("ArityMismatch", what) {}
};

struct missing_level : error {
  explicit missing_level(const std::string& what) : error("MissingLevel", what) {}
};

struct rank_too_high : error {
  explicit rank_too_high(const std::string& what) : error("RankTooHigh", what) {}
};

struct stage_cap_exceeded : error {
  explicit stage_cap_exceeded(const std::string& what) : error("StageCapExceeded", what) {}
};

struct no_representative : error {
  explicit no_representative(const std::string& what) : error("NoRepresentative", what) {}
};

struct invalid_representative : error {
  explicit invalid_representative(const std::string& what)
      : error("InvalidRepresentative", what) {}
};

struct diagram_violation : error {
  diagram_violation(std::string which_diagram, std::string witness_element)
      : error("DiagramViolation", which_diagram + ": witness " + witness_element),
        which(std::move(which_diagram)),
        witness(std::move(witness_element)) {}
  std::string which;
  std::string witness;
};

}  // namespace skewlim
