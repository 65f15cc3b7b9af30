#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace skewlim {

inline constexpr std::int64_t default_period_cap = 1'000'000;

enum class set_kind { finite, cofinite, bilateral };
enum class set_op { set_union, set_intersection, set_difference };

// Eventually periodic subset of the naturals in canonical form: an explicit
// prefix of length `threshold` followed by the residue rule `n mod period in
// residues`.  Canonical means the period is minimal and the threshold is the
// least one compatible with the rule, so structural equality is extensional
// equality.
class periodic_set {
 public:
  periodic_set();  // empty set

  // Canonicalizes; throws malformed_input on period < 1, residues out of
  // range, or prefix length != threshold.
  static periodic_set from_parts(std::int64_t threshold, std::int64_t period,
                                 std::vector<std::int64_t> residues, std::vector<bool> prefix);

  static periodic_set empty_set();
  static periodic_set full_set();
  // { n : n ≡ r (mod m) }
  static periodic_set residue_class(std::int64_t m, std::int64_t r);
  static periodic_set singleton(std::int64_t n);

  // DSL "N:p:{r1,r2,...}:prefixbits", e.g. the evens are "0:2:{0}:".
  static periodic_set parse(std::string_view text);
  std::string to_string() const;

  nlohmann::json to_json() const;
  static periodic_set from_json(const nlohmann::json& j);

  bool contains(std::int64_t n) const;
  set_kind classify() const;
  bool is_empty() const;
  bool is_full() const;

  std::int64_t threshold() const { return threshold_; }
  std::int64_t period() const { return period_; }
  std::vector<std::int64_t> residues() const;          // sorted
  bool eventual_bit(std::int64_t r) const;             // rule at class r mod period
  const std::vector<bool>& prefix() const { return prefix_; }

  friend bool operator==(const periodic_set&, const periodic_set&) = default;

 private:
  std::int64_t threshold_;
  std::int64_t period_;
  std::vector<bool> rule_;    // size period_
  std::vector<bool> prefix_;  // size threshold_

  void canonicalize();
};

periodic_set complement(const periodic_set& a);
periodic_set combine(set_op op, const periodic_set& a, const periodic_set& b,
                     std::int64_t period_cap = default_period_cap);
periodic_set set_union(const periodic_set& a, const periodic_set& b,
                       std::int64_t period_cap = default_period_cap);
periodic_set set_intersection(const periodic_set& a, const periodic_set& b,
                              std::int64_t period_cap = default_period_cap);
periodic_set set_difference(const periodic_set& a, const periodic_set& b,
                            std::int64_t period_cap = default_period_cap);

std::int64_t lcm_capped(std::int64_t a, std::int64_t b, std::int64_t cap);

}  // namespace skewlim
