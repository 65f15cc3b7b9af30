#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "skewlim/periodic.hpp"
#include "skewlim/rng.hpp"
#include "skewlim/ultrafilter.hpp"

namespace skewlim {

struct term;
using term_ptr = std::shared_ptr<const term>;

// linear term calculus over the iterated ultrapowers of (ω, ≤): constants,
// level variables, sums, natural scalings, residue cases and finite patches
// on a level.  No variable products, so every sliced comparison is affine.
struct term {
  enum class node { constant, variable, sum, scale, residue_case, patch };
  node kind = node::constant;
  std::int64_t number = 0;            // constant value, scale factor, or case modulus
  int level = 0;                      // variable, case, or patch level (>= 1)
  std::vector<term_ptr> children;     // sum: 2; scale: 1; case: modulus branches;
                                      // patch: one term per key, then the default
  std::vector<std::int64_t> keys;     // patch keys, strictly increasing
};

term_ptr t_const(std::int64_t c);
term_ptr t_var(int level);
term_ptr t_sum(term_ptr a, term_ptr b);
term_ptr t_scale(std::int64_t c, term_ptr a);
term_ptr t_case(std::int64_t modulus, int level, std::vector<term_ptr> branches);
term_ptr t_patch(int level, std::vector<std::pair<std::int64_t, term_ptr>> entries,
                 term_ptr dflt);

bool term_equal(const term_ptr& a, const term_ptr& b);

int term_rank(const term_ptr& t);

// env maps levels to naturals and must cover every level used
std::int64_t term_eval(const term_ptr& t, const std::map<int, std::int64_t>& env);

// substitute level k by the value n, resolving cases and patches at that level
term_ptr term_slice(const term_ptr& t, int k, std::int64_t n);

// embedding action on terms: remap listed levels (strictly monotone), then
// shift everything
struct substitution {
  int shift = 0;
  std::vector<std::pair<int, int>> level_map;  // sorted by source level
};

term_ptr term_apply(const substitution& sub, const term_ptr& t);

term_ptr embed_diagonal(const term_ptr& t, int k);
term_ptr embed_skew(const term_ptr& t, int k);

// sum-of-scaled-variables normal form with sorted levels; cases and patches
// survive as atoms (with normalized children) when they do not collapse
term_ptr term_normalize(const term_ptr& t);

// coefficient vector (c_0, c_1, ..., c_k) of the linear form the term equals
// almost everywhere mod u: cases resolve at the point's residues, patches to
// their defaults
std::vector<std::int64_t> term_typical_form(const term_ptr& t, const rep_ultrafilter& u,
                                            int k);

// syntactic occurrence of the level, counting case and patch scrutinees
bool term_uses_level(const term_ptr& t, int level);

// the =_u-equal term with every case resolved at u's residue class and every
// patch at its default (at the point itself when u is principal)
term_ptr term_resolve_typical(const term_ptr& t, const rep_ultrafilter& u);

enum class order_verdict { less, equal, greater };

std::string to_string(order_verdict v);

struct compare_report {
  order_verdict verdict = order_verdict::equal;
  std::int64_t rank = 0;
  // verdict sets over the top-level index: exact, canonical, a partition of ω
  periodic_set less, equal, greater;
};

// order of the k-fold ultrapower of (ω, ≤) mod u, by recursion on k: slice at
// the top level, the three verdict sets are eventually periodic, and the
// answer is the one u picks.  u must be profinite.
compare_report term_compare_report(const term_ptr& t, const term_ptr& s,
                                   const rep_ultrafilter& u, int k,
                                   std::int64_t period_cap = default_period_cap);

order_verdict term_compare(const term_ptr& t, const term_ptr& s, const rep_ultrafilter& u,
                           int k, std::int64_t period_cap = default_period_cap);

// DSL: "5", "v1", "v1 + 2*v2", "case(2; v1 | 0 @ v1)", "patch(v1; 0->7; v1)"
term_ptr term_parse(std::string_view text);
std::string term_to_string(const term_ptr& t);
nlohmann::json term_to_json(const term_ptr& t);
term_ptr term_from_json(const nlohmann::json& j);

term_ptr random_term(rng& gen, int max_rank, int depth, std::int64_t max_const);

}  // namespace skewlim
