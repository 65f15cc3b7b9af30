#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewlim/epfunc.hpp"
#include "skewlim/periodic.hpp"
#include "skewlim/report.hpp"

namespace skewlim {

// A point of the profinite completion of the naturals, given either as a
// plain integer or as a finite digit table {modulus -> residue}.  The table
// is completed canonically: for each prime the component is read off the
// listed modulus carrying the highest power of that prime (ties broken by
// the smallest such modulus), every other prime gets component 0.  residue()
// is then total and coherent across all moduli by construction.
class profinite_point {
 public:
  profinite_point() = default;  // the zero point

  static profinite_point from_integer(std::int64_t x);
  static profinite_point from_table(std::vector<std::pair<std::int64_t, std::int64_t>> entries);

  // "0" or "{2->1,6->5}"
  static profinite_point parse(std::string_view text);
  std::string to_string() const;
  nlohmann::json to_json() const;
  static profinite_point from_json(const nlohmann::json& j);

  std::int64_t residue(std::int64_t m) const;

  // divisor law on the listed table only: k | m implies r_m ≡ r_k (mod k)
  bool listed_coherent() const;

  bool is_integer() const { return from_integer_; }
  std::int64_t base_integer() const { return base_; }
  const std::vector<std::pair<std::int64_t, std::int64_t>>& table() const { return table_; }

  friend bool operator==(const profinite_point&, const profinite_point&) = default;

 private:
  bool from_integer_ = true;
  std::int64_t base_ = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> table_;  // sorted by modulus
};

enum class uf_kind { principal, profinite, mapped };

// Ultrafilter on the algebra of eventually periodic sets, in one of three
// representable forms.  mapped(pt, f) is the pushforward of profinite(pt)
// along f; construction normalizes: an identity map collapses to profinite,
// and a slope-0 branch at the point's class collapses to principal.
class rep_ultrafilter {
 public:
  rep_ultrafilter() : kind_(uf_kind::profinite) {}

  static rep_ultrafilter principal(std::int64_t n);
  static rep_ultrafilter profinite(profinite_point pt);
  static rep_ultrafilter mapped(profinite_point pt, ep_function f);

  uf_kind kind() const { return kind_; }
  std::int64_t principal_point() const { return principal_; }
  const profinite_point& point() const { return point_; }
  const ep_function& map() const { return map_; }

  // "principal:7" | "profinite:0" | "profinite:{2->1,6->5}"
  // | "mapped:(profinite:0; 0:1:[(2,0)]:)"
  static rep_ultrafilter parse(std::string_view text);
  std::string to_string() const;
  nlohmann::json to_json() const;
  static rep_ultrafilter from_json(const nlohmann::json& j);

  friend bool operator==(const rep_ultrafilter&, const rep_ultrafilter&) = default;

 private:
  uf_kind kind_;
  std::int64_t principal_ = 0;
  profinite_point point_;
  ep_function map_;
};

bool uf_member(const rep_ultrafilter& u, const periodic_set& a,
               std::int64_t period_cap = default_period_cap);

rep_ultrafilter uf_pushforward(const ep_function& f, const rep_ultrafilter& u,
                               std::int64_t period_cap = default_period_cap);

// class of the index "at u" mod m; decides membership of any set through its
// eventual part alone, so it is only meaningful for non-principal u (for
// principal u it is just the point's class and ignores prefixes)
std::int64_t effective_residue(const rep_ultrafilter& u, std::int64_t m);

struct uf_compare_result {
  bool equal = true;
  std::int64_t bound = 0;
  periodic_set witness;  // meaningful only when !equal
};

// scans residue-class generators with modulus <= bound, then co-singletons
// ω∖{j} for j < bound, then a seed-fixed random sample; first disagreement
// wins and is returned as the witness
uf_compare_result uf_equal_bounded(const rep_ultrafilter& u, const rep_ultrafilter& v,
                                   std::int64_t bound);

bool uf_coherence_check(const profinite_point& pt);

// dichotomy per sample set, intersection closure and monotonicity over
// pairs, cofinite membership for non-principal u
audit_report uf_check_axioms(const rep_ultrafilter& u, const std::vector<periodic_set>& sample);

}  // namespace skewlim
