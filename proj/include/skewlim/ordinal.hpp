#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace skewlim {

// Ordinals below omega^2, written w*B+C.  Order is lexicographic on
// (omega_coeff, finite_part), so the defaulted comparison is the real one.
struct small_ordinal {
  std::int64_t omega_coeff = 0;
  std::int64_t finite_part = 0;

  friend auto operator<=>(const small_ordinal&, const small_ordinal&) = default;

  bool is_finite() const { return omega_coeff == 0; }
};

inline small_ordinal ord_finite(std::int64_t n) { return {0, n}; }
inline small_ordinal ord_omega(std::int64_t coeff = 1, std::int64_t tail = 0) {
  return {coeff, tail};
}

std::strong_ordering ord_compare(small_ordinal a, small_ordinal b);
small_ordinal ord_succ(small_ordinal a);
bool ord_is_limit(small_ordinal a);

// n-th entry of the fundamental sequence of a limit ordinal:
// fund(w*c, n) = w*(c-1) + n.  Throws not_a_limit otherwise.
small_ordinal ord_fund_seq(small_ordinal limit, std::int64_t n);

// Accepts "w*B+C" and the shorthands "C", "w", "w+C", "w*B".
small_ordinal ord_parse(std::string_view text);
std::string to_string(small_ordinal a);

}  // namespace skewlim
