#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "skewlim/periodic.hpp"

namespace skewlim {

// One eventual branch: on its residue class the value is
// step * floor(n / period) + offset, i.e. affine in the index of n within the
// class.  Steps are naturals; offsets may be negative as long as the value is
// a natural for every n >= threshold in the class.
struct affine_branch {
  std::int64_t step = 0;
  std::int64_t offset = 0;
  friend bool operator==(const affine_branch&, const affine_branch&) = default;
};

enum class relation { lt, le, eq };

// Quasi-affine eventually periodic map on the naturals, canonical form:
// minimal period, then minimal threshold.
class ep_function {
 public:
  ep_function();  // identity

  static ep_function from_parts(std::int64_t threshold, std::int64_t period,
                                std::vector<affine_branch> branches,
                                std::vector<std::int64_t> prefix);

  static ep_function identity();
  static ep_function constant(std::int64_t c);
  // n |-> a*n + b with b >= 0 (period 1)
  static ep_function affine(std::int64_t a, std::int64_t b);

  // DSL "N:p:[(a0,b0),(a1,b1),...]:v0,v1,...", e.g. doubling is "0:1:[(2,0)]:".
  static ep_function parse(std::string_view text);
  std::string to_string() const;

  nlohmann::json to_json() const;
  static ep_function from_json(const nlohmann::json& j);

  std::int64_t operator()(std::int64_t n) const;

  std::int64_t threshold() const { return threshold_; }
  std::int64_t period() const { return period_; }
  const std::vector<affine_branch>& branches() const { return branches_; }
  const std::vector<std::int64_t>& prefix() const { return prefix_; }

  bool is_identity() const;
  // true when the eventual part is a single constant on every class
  bool eventually_constant() const;

  friend bool operator==(const ep_function&, const ep_function&) = default;

 private:
  std::int64_t threshold_;
  std::int64_t period_;
  std::vector<affine_branch> branches_;  // size period_
  std::vector<std::int64_t> prefix_;     // size threshold_

  void canonicalize();
  std::int64_t rule_value(std::int64_t n) const;  // eventual rule, ignores prefix

  friend ep_function compose(const ep_function&, const ep_function&, std::int64_t);
  friend periodic_set compare_set(relation, const ep_function&, const ep_function&, std::int64_t);
  friend periodic_set preimage(const ep_function&, const periodic_set&, std::int64_t);
  friend ep_function left_inverse(const ep_function&, std::int64_t);
  friend bool is_injective(const ep_function&);
};

// h with h(n) = f(g(n)) for every n; PeriodOverflow when the refined period
// or threshold exceeds the cap.
ep_function compose(const ep_function& f, const ep_function& g,
                    std::int64_t period_cap = default_period_cap);

// { n : f(n) rel g(n) }
periodic_set compare_set(relation rel, const ep_function& f, const ep_function& g,
                         std::int64_t period_cap = default_period_cap);

// { n : f(n) in a }
periodic_set preimage(const ep_function& f, const periodic_set& a,
                      std::int64_t period_cap = default_period_cap);

bool is_injective(const ep_function& f);

// g with g(f(n)) = n for all n >= f.threshold(); value 0 off the image.
// NotInjective / NotRepresentable.
ep_function left_inverse(const ep_function& f, std::int64_t period_cap = default_period_cap);

}  // namespace skewlim
