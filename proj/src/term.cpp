#include "skewlim/term.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "skewlim/errors.hpp"

namespace skewlim {

term_ptr t_const(std::int64_t c) {
  if (c < 0) throw malformed_input("constants are naturals");
  auto t = std::make_shared<term>();
  t->kind = term::node::constant;
  t->number = c;
  return t;
}

term_ptr t_var(int level) {
  if (level < 1) throw malformed_input("variable levels start at 1");
  auto t = std::make_shared<term>();
  t->kind = term::node::variable;
  t->level = level;
  return t;
}

term_ptr t_sum(term_ptr a, term_ptr b) {
  auto t = std::make_shared<term>();
  t->kind = term::node::sum;
  t->children = {std::move(a), std::move(b)};
  return t;
}

term_ptr t_scale(std::int64_t c, term_ptr a) {
  if (c < 0) throw malformed_input("scale factors are naturals");
  auto t = std::make_shared<term>();
  t->kind = term::node::scale;
  t->number = c;
  t->children = {std::move(a)};
  return t;
}

term_ptr t_case(std::int64_t modulus, int level, std::vector<term_ptr> branches) {
  if (modulus < 1) throw malformed_input("case modulus must be >= 1");
  if (level < 1) throw malformed_input("case level must be >= 1");
  if (static_cast<std::int64_t>(branches.size()) != modulus)
    throw malformed_input("branch count must equal the modulus");
  auto t = std::make_shared<term>();
  t->kind = term::node::residue_case;
  t->number = modulus;
  t->level = level;
  t->children = std::move(branches);
  return t;
}

term_ptr t_patch(int level, std::vector<std::pair<std::int64_t, term_ptr>> entries,
                 term_ptr dflt) {
  if (level < 1) throw malformed_input("patch level must be >= 1");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  auto t = std::make_shared<term>();
  t->kind = term::node::patch;
  t->level = level;
  for (auto& [k, sub] : entries) {
    if (k < 0) throw malformed_input("patch keys are naturals");
    if (!t->keys.empty() && t->keys.back() == k)
      throw malformed_input("duplicate patch key " + std::to_string(k));
    t->keys.push_back(k);
    t->children.push_back(std::move(sub));
  }
  t->children.push_back(std::move(dflt));
  return t;
}

bool term_equal(const term_ptr& a, const term_ptr& b) {
  if (a->kind != b->kind || a->number != b->number || a->level != b->level ||
      a->keys != b->keys || a->children.size() != b->children.size())
    return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!term_equal(a->children[i], b->children[i])) return false;
  return true;
}

int term_rank(const term_ptr& t) {
  int r = 0;
  switch (t->kind) {
    case term::node::variable:
    case term::node::residue_case:
    case term::node::patch:
      r = t->level;
      break;
    default:
      break;
  }
  for (const term_ptr& c : t->children) r = std::max(r, term_rank(c));
  return r;
}

std::int64_t term_eval(const term_ptr& t, const std::map<int, std::int64_t>& env) {
  auto at = [&](int level) {
    auto it = env.find(level);
    if (it == env.end())
      throw missing_level("no value for level " + std::to_string(level));
    return it->second;
  };
  switch (t->kind) {
    case term::node::constant:
      return t->number;
    case term::node::variable:
      return at(t->level);
    case term::node::sum:
      return term_eval(t->children[0], env) + term_eval(t->children[1], env);
    case term::node::scale:
      return t->number * term_eval(t->children[0], env);
    case term::node::residue_case:
      return term_eval(t->children[static_cast<std::size_t>(at(t->level) % t->number)], env);
    case term::node::patch: {
      std::int64_t v = at(t->level);
      for (std::size_t i = 0; i < t->keys.size(); ++i)
        if (t->keys[i] == v) return term_eval(t->children[i], env);
      return term_eval(t->children.back(), env);
    }
  }
  return 0;
}

term_ptr term_slice(const term_ptr& t, int k, std::int64_t n) {
  switch (t->kind) {
    case term::node::constant:
      return t;
    case term::node::variable:
      return t->level == k ? t_const(n) : t;
    case term::node::sum:
      return t_sum(term_slice(t->children[0], k, n), term_slice(t->children[1], k, n));
    case term::node::scale:
      return t_scale(t->number, term_slice(t->children[0], k, n));
    case term::node::residue_case: {
      if (t->level == k)
        return term_slice(t->children[static_cast<std::size_t>(n % t->number)], k, n);
      std::vector<term_ptr> branches;
      for (const term_ptr& c : t->children) branches.push_back(term_slice(c, k, n));
      return t_case(t->number, t->level, std::move(branches));
    }
    case term::node::patch: {
      if (t->level == k) {
        for (std::size_t i = 0; i < t->keys.size(); ++i)
          if (t->keys[i] == n) return term_slice(t->children[i], k, n);
        return term_slice(t->children.back(), k, n);
      }
      std::vector<std::pair<std::int64_t, term_ptr>> entries;
      for (std::size_t i = 0; i < t->keys.size(); ++i)
        entries.push_back({t->keys[i], term_slice(t->children[i], k, n)});
      return t_patch(t->level, std::move(entries), term_slice(t->children.back(), k, n));
    }
  }
  return t;
}

namespace {

int apply_level(const substitution& sub, int level) {
  for (std::size_t i = 1; i < sub.level_map.size(); ++i)
    if (sub.level_map[i].first <= sub.level_map[i - 1].first ||
        sub.level_map[i].second <= sub.level_map[i - 1].second)
      throw malformed_input("level map must be strictly monotone");
  int mapped = level;
  for (auto [from, to] : sub.level_map)
    if (from == level) mapped = to;
  int out = mapped + sub.shift;
  if (out < 1) throw malformed_input("substitution drops a level below 1");
  return out;
}

}  // namespace

term_ptr term_apply(const substitution& sub, const term_ptr& t) {
  switch (t->kind) {
    case term::node::constant:
      return t;
    case term::node::variable:
      return t_var(apply_level(sub, t->level));
    case term::node::sum:
      return t_sum(term_apply(sub, t->children[0]), term_apply(sub, t->children[1]));
    case term::node::scale:
      return t_scale(t->number, term_apply(sub, t->children[0]));
    case term::node::residue_case: {
      std::vector<term_ptr> branches;
      for (const term_ptr& c : t->children) branches.push_back(term_apply(sub, c));
      return t_case(t->number, apply_level(sub, t->level), std::move(branches));
    }
    case term::node::patch: {
      std::vector<std::pair<std::int64_t, term_ptr>> entries;
      for (std::size_t i = 0; i < t->keys.size(); ++i)
        entries.push_back({t->keys[i], term_apply(sub, t->children[i])});
      return t_patch(apply_level(sub, t->level), std::move(entries),
                     term_apply(sub, t->children.back()));
    }
  }
  return t;
}

term_ptr embed_diagonal(const term_ptr& t, int k) {
  if (term_rank(t) > k) throw rank_too_high("term rank exceeds the stated rank");
  return t;
}

term_ptr embed_skew(const term_ptr& t, int k) {
  if (k < 1) throw malformed_input("skew embedding starts at rank 1");
  if (term_rank(t) > k) throw rank_too_high("term rank exceeds the stated rank");
  return term_apply({.shift = 1, .level_map = {}}, t);
}

namespace {

struct linear_acc {
  std::int64_t constant = 0;
  std::map<int, std::int64_t> coeffs;
  std::vector<std::pair<std::int64_t, term_ptr>> atoms;  // multiplier, case or patch
};

void normalize_rec(const term_ptr& t, std::int64_t mult, linear_acc& acc) {
  if (mult == 0) return;
  switch (t->kind) {
    case term::node::constant:
      acc.constant += mult * t->number;
      return;
    case term::node::variable:
      acc.coeffs[t->level] += mult;
      return;
    case term::node::sum:
      normalize_rec(t->children[0], mult, acc);
      normalize_rec(t->children[1], mult, acc);
      return;
    case term::node::scale:
      normalize_rec(t->children[0], mult * t->number, acc);
      return;
    case term::node::residue_case: {
      std::vector<term_ptr> branches;
      for (const term_ptr& c : t->children) branches.push_back(term_normalize(c));
      bool uniform = true;
      for (std::size_t i = 1; i < branches.size(); ++i)
        if (!term_equal(branches[i], branches[0])) uniform = false;
      if (uniform) {
        normalize_rec(branches[0], mult, acc);
        return;
      }
      acc.atoms.push_back({mult, t_case(t->number, t->level, std::move(branches))});
      return;
    }
    case term::node::patch: {
      term_ptr dflt = term_normalize(t->children.back());
      std::vector<std::pair<std::int64_t, term_ptr>> entries;
      for (std::size_t i = 0; i < t->keys.size(); ++i) {
        term_ptr e = term_normalize(t->children[i]);
        if (!term_equal(e, dflt)) entries.push_back({t->keys[i], std::move(e)});
      }
      if (entries.empty()) {
        normalize_rec(dflt, mult, acc);
        return;
      }
      acc.atoms.push_back({mult, t_patch(t->level, std::move(entries), std::move(dflt))});
      return;
    }
  }
}

}  // namespace

term_ptr term_normalize(const term_ptr& t) {
  linear_acc acc;
  normalize_rec(t, 1, acc);
  // merge equal atoms, then order them by their printed form
  std::vector<std::pair<std::int64_t, term_ptr>> atoms;
  for (auto& [mult, atom] : acc.atoms) {
    bool merged = false;
    for (auto& [m2, a2] : atoms)
      if (term_equal(atom, a2)) {
        m2 += mult;
        merged = true;
        break;
      }
    if (!merged) atoms.push_back({mult, atom});
  }
  std::erase_if(atoms, [](const auto& p) { return p.first == 0; });
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
    return term_to_string(a.second) < term_to_string(b.second);
  });
  term_ptr out;
  auto add = [&](term_ptr piece) { out = out ? t_sum(std::move(out), std::move(piece)) : piece; };
  for (auto& [level, coeff] : acc.coeffs) {
    if (coeff == 0) continue;
    add(coeff == 1 ? t_var(level) : t_scale(coeff, t_var(level)));
  }
  for (auto& [mult, atom] : atoms) add(mult == 1 ? atom : t_scale(mult, atom));
  if (!out || acc.constant != 0) add(t_const(acc.constant));
  return out;
}

namespace {

// coefficients of the linear form the term takes on the u-typical classes,
// with level k read off separately when class_r >= 0 (resolving level-k cases
// at class_r and level-k patches to the default)
void typical_rec(const term_ptr& t, const rep_ultrafilter& u, int k, std::int64_t class_r,
                 std::int64_t mult, std::vector<std::int64_t>& coeffs,
                 std::int64_t& top_coeff) {
  if (mult == 0) return;
  switch (t->kind) {
    case term::node::constant:
      coeffs[0] += mult * t->number;
      return;
    case term::node::variable:
      if (t->level > k) throw rank_too_high("variable level exceeds the rank");
      if (t->level == k && class_r >= 0)
        top_coeff += mult;
      else
        coeffs[static_cast<std::size_t>(t->level)] += mult;
      return;
    case term::node::sum:
      typical_rec(t->children[0], u, k, class_r, mult, coeffs, top_coeff);
      typical_rec(t->children[1], u, k, class_r, mult, coeffs, top_coeff);
      return;
    case term::node::scale:
      typical_rec(t->children[0], u, k, class_r, mult * t->number, coeffs, top_coeff);
      return;
    case term::node::residue_case: {
      std::int64_t pick = t->level == k && class_r >= 0 ? class_r % t->number
                                                        : u.point().residue(t->number);
      typical_rec(t->children[static_cast<std::size_t>(pick)], u, k, class_r, mult, coeffs,
                  top_coeff);
      return;
    }
    case term::node::patch:
      // finitely many exceptions never decide membership mod u
      typical_rec(t->children.back(), u, k, class_r, mult, coeffs, top_coeff);
      return;
  }
}

void collect_level_data(const term_ptr& t, int k, std::int64_t& modulus_lcm,
                        std::vector<std::int64_t>& patch_keys, std::int64_t cap) {
  if (t->kind == term::node::residue_case && t->level == k)
    modulus_lcm = lcm_capped(modulus_lcm, t->number, cap);
  if (t->kind == term::node::patch && t->level == k)
    for (std::int64_t key : t->keys) patch_keys.push_back(key);
  for (const term_ptr& c : t->children) collect_level_data(c, k, modulus_lcm, patch_keys, cap);
}

int sign_of(std::int64_t v) { return v < 0 ? -1 : v > 0 ? 1 : 0; }

order_verdict verdict_from_sign(int s) {
  return s < 0 ? order_verdict::less : s > 0 ? order_verdict::greater : order_verdict::equal;
}

}  // namespace

std::vector<std::int64_t> term_typical_form(const term_ptr& t, const rep_ultrafilter& u,
                                            int k) {
  if (u.kind() != uf_kind::profinite)
    throw malformed_input("typical form needs a profinite ultrafilter");
  std::vector<std::int64_t> coeffs(static_cast<std::size_t>(k) + 1, 0);
  std::int64_t unused = 0;
  typical_rec(t, u, k, -1, 1, coeffs, unused);
  return coeffs;
}

bool term_uses_level(const term_ptr& t, int level) {
  switch (t->kind) {
    case term::node::constant:
      return false;
    case term::node::variable:
      return t->level == level;
    case term::node::residue_case:
    case term::node::patch:
      if (t->level == level) return true;
      break;
    default:
      break;
  }
  for (const term_ptr& c : t->children)
    if (term_uses_level(c, level)) return true;
  return false;
}

term_ptr term_resolve_typical(const term_ptr& t, const rep_ultrafilter& u) {
  switch (t->kind) {
    case term::node::constant:
    case term::node::variable:
      return t;
    case term::node::sum:
      return t_sum(term_resolve_typical(t->children[0], u),
                   term_resolve_typical(t->children[1], u));
    case term::node::scale:
      return t_scale(t->number, term_resolve_typical(t->children[0], u));
    case term::node::residue_case: {
      std::int64_t r = effective_residue(u, t->number);
      return term_resolve_typical(t->children[static_cast<std::size_t>(r)], u);
    }
    case term::node::patch: {
      if (u.kind() == uf_kind::principal) {
        std::int64_t n = u.principal_point();
        for (std::size_t i = 0; i < t->keys.size(); ++i)
          if (t->keys[i] == n) return term_resolve_typical(t->children[i], u);
      }
      // every singleton is small for a non-principal u
      return term_resolve_typical(t->children.back(), u);
    }
  }
  return t;
}

std::string to_string(order_verdict v) {
  switch (v) {
    case order_verdict::less:
      return "Less";
    case order_verdict::equal:
      return "Equal";
    case order_verdict::greater:
      return "Greater";
  }
  return "";
}

compare_report term_compare_report(const term_ptr& t, const term_ptr& s,
                                   const rep_ultrafilter& u, int k,
                                   std::int64_t period_cap) {
  if (u.kind() != uf_kind::profinite)
    throw malformed_input("term comparison needs a profinite ultrafilter");
  if (term_rank(t) > k || term_rank(s) > k)
    throw rank_too_high("term rank exceeds the comparison rank");
  compare_report rep;
  rep.rank = k;
  if (k == 0) {
    std::int64_t vt = term_eval(t, {}), vs = term_eval(s, {});
    rep.verdict = verdict_from_sign(sign_of(vt - vs));
    rep.less = vt < vs ? periodic_set::full_set() : periodic_set::empty_set();
    rep.equal = vt == vs ? periodic_set::full_set() : periodic_set::empty_set();
    rep.greater = vt > vs ? periodic_set::full_set() : periodic_set::empty_set();
    return rep;
  }

  std::int64_t period = 1;
  std::vector<std::int64_t> patch_keys;
  collect_level_data(t, k, period, patch_keys, period_cap);
  collect_level_data(s, k, period, patch_keys, period_cap);

  // eventual verdict per class of the top level: the sliced comparison at
  // rank k-1 is decided by the first nonzero difference among the inner
  // coefficients, then the top-level slope, then the constant
  std::vector<order_verdict> eventual(static_cast<std::size_t>(period));
  std::int64_t threshold = 0;
  for (std::int64_t key : patch_keys) threshold = std::max(threshold, key + 1);
  for (std::int64_t r = 0; r < period; ++r) {
    std::vector<std::int64_t> ct(static_cast<std::size_t>(k), 0),
        cs(static_cast<std::size_t>(k), 0);
    std::int64_t at = 0, as = 0;
    typical_rec(t, u, k, r, 1, ct, at);
    typical_rec(s, u, k, r, 1, cs, as);
    int sig = 0;
    for (int i = 1; i < k && sig == 0; ++i)
      sig = sign_of(ct[static_cast<std::size_t>(i)] - cs[static_cast<std::size_t>(i)]);
    if (sig == 0) {
      std::int64_t dk = at - as, d0 = ct[0] - cs[0];
      if (dk != 0) {
        sig = sign_of(dk);
        threshold = std::max(threshold, std::abs(d0) / std::abs(dk) + 1);
      } else {
        sig = sign_of(d0);
      }
    }
    eventual[static_cast<std::size_t>(r)] = verdict_from_sign(sig);
  }
  if (threshold > period_cap)
    throw period_overflow("comparison threshold " + std::to_string(threshold) +
                          " exceeds cap " + std::to_string(period_cap));

  std::vector<std::int64_t> res_less, res_equal, res_greater;
  for (std::int64_t r = 0; r < period; ++r) {
    switch (eventual[static_cast<std::size_t>(r)]) {
      case order_verdict::less:
        res_less.push_back(r);
        break;
      case order_verdict::equal:
        res_equal.push_back(r);
        break;
      case order_verdict::greater:
        res_greater.push_back(r);
        break;
    }
  }
  std::vector<bool> pre_less(static_cast<std::size_t>(threshold)),
      pre_equal(static_cast<std::size_t>(threshold)),
      pre_greater(static_cast<std::size_t>(threshold));
  for (std::int64_t n = 0; n < threshold; ++n) {
    order_verdict v =
        term_compare(term_slice(t, k, n), term_slice(s, k, n), u, k - 1, period_cap);
    pre_less[static_cast<std::size_t>(n)] = v == order_verdict::less;
    pre_equal[static_cast<std::size_t>(n)] = v == order_verdict::equal;
    pre_greater[static_cast<std::size_t>(n)] = v == order_verdict::greater;
  }
  rep.less = periodic_set::from_parts(threshold, period, std::move(res_less),
                                      std::move(pre_less));
  rep.equal = periodic_set::from_parts(threshold, period, std::move(res_equal),
                                       std::move(pre_equal));
  rep.greater = periodic_set::from_parts(threshold, period, std::move(res_greater),
                                         std::move(pre_greater));

  if (!set_intersection(rep.less, rep.equal).is_empty() ||
      !set_intersection(rep.less, rep.greater).is_empty() ||
      !set_intersection(rep.equal, rep.greater).is_empty() ||
      !set_union(set_union(rep.less, rep.equal), rep.greater).is_full())
    throw std::logic_error("verdict sets do not partition the index set");

  bool in_less = uf_member(u, rep.less, period_cap);
  bool in_equal = uf_member(u, rep.equal, period_cap);
  bool in_greater = uf_member(u, rep.greater, period_cap);
  if (in_less + in_equal + in_greater != 1)
    throw std::logic_error("ultrafilter picks a bad number of verdict sets");
  rep.verdict = in_less    ? order_verdict::less
                : in_equal ? order_verdict::equal
                           : order_verdict::greater;
  return rep;
}

order_verdict term_compare(const term_ptr& t, const term_ptr& s, const rep_ultrafilter& u,
                           int k, std::int64_t period_cap) {
  if (term_equal(term_normalize(t), term_normalize(s))) {
    if (term_rank(t) > k || term_rank(s) > k)
      throw rank_too_high("term rank exceeds the comparison rank");
    return order_verdict::equal;
  }
  return term_compare_report(t, s, u, k, period_cap).verdict;
}

namespace {

struct term_parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) throw syntax_error(pos, std::string("expected '") + c + "' in term");
  }

  bool digit_next() {
    skip();
    return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]));
  }

  std::int64_t number() {
    skip();
    if (!digit_next()) throw syntax_error(pos, "expected a number");
    std::int64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      v = v * 10 + (text[pos++] - '0');
    return v;
  }

  bool keyword(std::string_view kw) {
    skip();
    if (text.substr(pos, kw.size()) != kw) return false;
    pos += kw.size();
    return true;
  }

  int variable() {
    skip();
    if (pos >= text.size() || text[pos] != 'v')
      throw syntax_error(pos, "expected a variable");
    ++pos;
    return static_cast<int>(number());
  }

  term_ptr factor() {
    skip();
    if (pos >= text.size()) throw syntax_error(pos, "expected a term");
    if (keyword("case(")) {
      std::int64_t p = number();
      expect(';');
      std::vector<term_ptr> branches;
      branches.push_back(expr());
      while (eat('|')) branches.push_back(expr());
      expect('@');
      int level = variable();
      expect(')');
      return t_case(p, level, std::move(branches));
    }
    if (keyword("patch(")) {
      int level = variable();
      expect(';');
      std::vector<std::pair<std::int64_t, term_ptr>> entries;
      while (true) {
        skip();
        if (pos < text.size() && text[pos] == ';') break;
        std::int64_t key = number();
        expect('-');
        expect('>');
        entries.push_back({key, expr()});
        if (!eat(',')) break;
      }
      expect(';');
      term_ptr dflt = expr();
      expect(')');
      return t_patch(level, std::move(entries), std::move(dflt));
    }
    if (text[pos] == 'v') return t_var(variable());
    if (text[pos] == '(') {
      ++pos;
      term_ptr inner = expr();
      expect(')');
      return inner;
    }
    return t_const(number());
  }

  term_ptr summand() {
    skip();
    if (digit_next()) {
      std::int64_t n = number();
      if (eat('*')) return t_scale(n, factor());
      return t_const(n);
    }
    return factor();
  }

  term_ptr expr() {
    term_ptr t = summand();
    while (eat('+')) t = t_sum(std::move(t), summand());
    return t;
  }
};

}  // namespace

term_ptr term_parse(std::string_view text) {
  term_parser p{text};
  term_ptr t = p.expr();
  p.skip();
  if (p.pos != text.size()) throw syntax_error(p.pos, "trailing characters in term");
  return t;
}

std::string term_to_string(const term_ptr& t) {
  switch (t->kind) {
    case term::node::constant:
      return std::to_string(t->number);
    case term::node::variable:
      return "v" + std::to_string(t->level);
    case term::node::sum: {
      const term_ptr& rhs = t->children[1];
      std::string right = term_to_string(rhs);
      if (rhs->kind == term::node::sum) right = "(" + right + ")";
      return term_to_string(t->children[0]) + " + " + right;
    }
    case term::node::scale: {
      const term_ptr& inner = t->children[0];
      std::string body = term_to_string(inner);
      if (inner->kind == term::node::sum || inner->kind == term::node::scale ||
          inner->kind == term::node::constant)
        body = "(" + body + ")";
      return std::to_string(t->number) + "*" + body;
    }
    case term::node::residue_case: {
      std::string out = "case(" + std::to_string(t->number) + "; ";
      for (std::size_t i = 0; i < t->children.size(); ++i) {
        if (i) out += " | ";
        out += term_to_string(t->children[i]);
      }
      return out + " @ v" + std::to_string(t->level) + ")";
    }
    case term::node::patch: {
      std::string out = "patch(v" + std::to_string(t->level) + "; ";
      for (std::size_t i = 0; i < t->keys.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(t->keys[i]) + "->" + term_to_string(t->children[i]);
      }
      return out + "; " + term_to_string(t->children.back()) + ")";
    }
  }
  return "";
}

nlohmann::json term_to_json(const term_ptr& t) {
  switch (t->kind) {
    case term::node::constant:
      return nlohmann::json{{"const", t->number}};
    case term::node::variable:
      return nlohmann::json{{"var", t->level}};
    case term::node::sum:
      return nlohmann::json{
          {"sum", {term_to_json(t->children[0]), term_to_json(t->children[1])}}};
    case term::node::scale:
      return nlohmann::json{{"scale", {t->number, term_to_json(t->children[0])}}};
    case term::node::residue_case: {
      nlohmann::json branches = nlohmann::json::array();
      for (const term_ptr& c : t->children) branches.push_back(term_to_json(c));
      return nlohmann::json{
          {"case", {{"mod", t->number}, {"level", t->level}, {"branches", branches}}}};
    }
    case term::node::patch: {
      nlohmann::json entries = nlohmann::json::array();
      for (std::size_t i = 0; i < t->keys.size(); ++i)
        entries.push_back({t->keys[i], term_to_json(t->children[i])});
      return nlohmann::json{{"patch",
                             {{"level", t->level},
                              {"entries", entries},
                              {"default", term_to_json(t->children.back())}}}};
    }
  }
  return {};
}

term_ptr term_from_json(const nlohmann::json& j) {
  if (j.contains("const")) return t_const(j.at("const").get<std::int64_t>());
  if (j.contains("var")) return t_var(j.at("var").get<int>());
  if (j.contains("sum"))
    return t_sum(term_from_json(j.at("sum").at(0)), term_from_json(j.at("sum").at(1)));
  if (j.contains("scale"))
    return t_scale(j.at("scale").at(0).get<std::int64_t>(),
                   term_from_json(j.at("scale").at(1)));
  if (j.contains("case")) {
    const auto& c = j.at("case");
    std::vector<term_ptr> branches;
    for (const auto& b : c.at("branches")) branches.push_back(term_from_json(b));
    return t_case(c.at("mod").get<std::int64_t>(), c.at("level").get<int>(),
                  std::move(branches));
  }
  if (j.contains("patch")) {
    const auto& p = j.at("patch");
    std::vector<std::pair<std::int64_t, term_ptr>> entries;
    for (const auto& e : p.at("entries"))
      entries.push_back({e.at(0).get<std::int64_t>(), term_from_json(e.at(1))});
    return t_patch(p.at("level").get<int>(), std::move(entries),
                   term_from_json(p.at("default")));
  }
  throw malformed_input("unknown term node in JSON");
}

term_ptr random_term(rng& gen, int max_rank, int depth, std::int64_t max_const) {
  auto leaf = [&]() {
    if (max_rank >= 1 && gen.coin()) return t_var(1 + static_cast<int>(gen.below(max_rank)));
    return t_const(gen.below(max_const + 1));
  };
  if (depth <= 0 || max_rank < 1) return leaf();
  switch (gen.below(8)) {
    case 0:
    case 1:
      return t_sum(random_term(gen, max_rank, depth - 1, max_const),
                   random_term(gen, max_rank, depth - 1, max_const));
    case 2:
      return t_scale(gen.below(4), random_term(gen, max_rank, depth - 1, max_const));
    case 3:
    case 4: {
      std::int64_t p = 2 + gen.below(3);
      std::vector<term_ptr> branches;
      for (std::int64_t i = 0; i < p; ++i)
        branches.push_back(random_term(gen, max_rank, depth - 1, max_const));
      return t_case(p, 1 + static_cast<int>(gen.below(max_rank)), std::move(branches));
    }
    case 5: {
      std::vector<std::pair<std::int64_t, term_ptr>> entries;
      std::int64_t key = gen.below(max_const + 1);
      entries.push_back({key, random_term(gen, max_rank, depth - 1, max_const)});
      if (gen.coin())
        entries.push_back({key + 1 + gen.below(4),
                           random_term(gen, max_rank, depth - 1, max_const)});
      return t_patch(1 + static_cast<int>(gen.below(max_rank)), std::move(entries),
                     random_term(gen, max_rank, depth - 1, max_const));
    }
    default:
      return leaf();
  }
}

}  // namespace skewlim
