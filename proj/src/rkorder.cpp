#include "skewlim/rkorder.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "skewlim/errors.hpp"

namespace skewlim {

std::string to_string(rk_verdict v) {
  return v == rk_verdict::equivalent ? "Equivalent" : "Unconfirmed";
}

nlohmann::json rk_witness::to_json() const {
  return {{"f", f.to_string()},
          {"g", g.to_string()},
          {"bound", bound},
          {"verdict", to_string(verdict)}};
}

namespace {

// assembled parts before canonicalization
struct map_parts {
  std::int64_t threshold = 0;
  std::int64_t period = 1;
  std::vector<affine_branch> branches;
  std::vector<std::int64_t> prefix;
};

// the branch of f on the class r mod a multiple p of f's period, rewritten so
// that the index runs over the wider period
affine_branch rebase(const map_parts& f, std::int64_t p, std::int64_t r) {
  const affine_branch& b = f.branches[static_cast<std::size_t>(r % f.period)];
  std::int64_t stride = p / f.period;
  return {b.step * stride, b.step * (r / f.period) + b.offset};
}

std::int64_t eval_parts(const map_parts& f, std::int64_t n) {
  if (n < f.threshold) return f.prefix[static_cast<std::size_t>(n)];
  const affine_branch& b = f.branches[static_cast<std::size_t>(n % f.period)];
  return b.step * (n / f.period) + b.offset;
}

map_parts build_parts(const term_ptr& t) {
  switch (t->kind) {
    case term::node::constant:
      return {0, 1, {{0, t->number}}, {}};
    case term::node::variable:
      return {0, 1, {{1, 0}}, {}};
    case term::node::scale: {
      map_parts inner = build_parts(t->children[0]);
      for (affine_branch& b : inner.branches) {
        b.step *= t->number;
        b.offset *= t->number;
      }
      for (std::int64_t& v : inner.prefix) v *= t->number;
      return inner;
    }
    case term::node::sum: {
      map_parts lhs = build_parts(t->children[0]);
      map_parts rhs = build_parts(t->children[1]);
      map_parts out;
      out.threshold = std::max(lhs.threshold, rhs.threshold);
      out.period = std::lcm(lhs.period, rhs.period);
      for (std::int64_t r = 0; r < out.period; ++r) {
        affine_branch a = rebase(lhs, out.period, r);
        affine_branch b = rebase(rhs, out.period, r);
        out.branches.push_back({a.step + b.step, a.offset + b.offset});
      }
      for (std::int64_t n = 0; n < out.threshold; ++n)
        out.prefix.push_back(eval_parts(lhs, n) + eval_parts(rhs, n));
      return out;
    }
    case term::node::residue_case: {
      std::vector<map_parts> kids;
      for (const term_ptr& c : t->children) kids.push_back(build_parts(c));
      map_parts out;
      out.period = t->number;
      for (const map_parts& k : kids) {
        out.period = std::lcm(out.period, k.period);
        out.threshold = std::max(out.threshold, k.threshold);
      }
      for (std::int64_t r = 0; r < out.period; ++r)
        out.branches.push_back(
            rebase(kids[static_cast<std::size_t>(r % t->number)], out.period, r));
      for (std::int64_t n = 0; n < out.threshold; ++n)
        out.prefix.push_back(eval_parts(kids[static_cast<std::size_t>(n % t->number)], n));
      return out;
    }
    case term::node::patch: {
      map_parts out = build_parts(t->children.back());
      std::int64_t top = out.threshold;
      for (std::int64_t k : t->keys) top = std::max(top, k + 1);
      std::vector<std::int64_t> prefix;
      for (std::int64_t n = 0; n < top; ++n) prefix.push_back(eval_parts(out, n));
      for (std::size_t i = 0; i < t->keys.size(); ++i)
        prefix[static_cast<std::size_t>(t->keys[i])] =
            term_eval(t->children[i], {{1, t->keys[i]}});
      out.threshold = top;
      out.prefix = std::move(prefix);
      return out;
    }
  }
  throw malformed_input("unreachable term kind");
}

}  // namespace

ep_function term_to_map(const term_ptr& t) {
  if (term_rank(t) > 1)
    throw rank_too_high("rank " + std::to_string(term_rank(t)) +
                        " payload is not a map on the naturals");
  map_parts p = build_parts(t);
  return ep_function::from_parts(p.threshold, p.period, std::move(p.branches),
                                 std::move(p.prefix));
}

bool rk_le_check(const rep_ultrafilter& u, const rep_ultrafilter& v, const ep_function& f,
                 std::int64_t bound) {
  return uf_equal_bounded(uf_pushforward(f, v), u, bound).equal;
}

rk_witness rk_equiv_injective(const ep_function& f, const rep_ultrafilter& u,
                              std::int64_t bound) {
  if (!is_injective(f)) throw not_injective("the certificate map must be injective");
  rk_witness w;
  w.f = f;
  w.g = left_inverse(f);
  w.bound = bound;
  rep_ultrafilter image = uf_pushforward(f, u);
  bool down = rk_le_check(image, u, f, bound);  // f pushes u onto its image type
  bool up = rk_le_check(u, image, w.g, bound);  // and g pushes the image back
  w.verdict = down && up ? rk_verdict::equivalent : rk_verdict::unconfirmed;
  return w;
}

std::string order_export(const std::vector<term_ptr>& terms, const rep_ultrafilter& u, int k,
                         export_format format) {
  for (const term_ptr& t : terms)
    if (term_rank(t) > k)
      throw rank_too_high("term " + term_to_string(t) + " exceeds rank " + std::to_string(k));
  // insertion sort against the mod-u order, grouping Equal terms as we go
  std::vector<std::vector<term_ptr>> groups;
  for (const term_ptr& t : terms) {
    bool placed = false;
    for (std::size_t i = 0; i < groups.size() && !placed; ++i) {
      order_verdict v = term_compare(t, groups[i][0], u, k);
      if (v == order_verdict::equal) {
        groups[i].push_back(t);
        placed = true;
      } else if (v == order_verdict::less) {
        groups.insert(groups.begin() + static_cast<std::ptrdiff_t>(i), {t});
        placed = true;
      }
    }
    if (!placed) groups.push_back({t});
  }
  std::vector<std::vector<std::string>> named;
  for (const auto& g : groups) {
    std::set<std::string> dedup;
    for (const term_ptr& t : g) dedup.insert(term_to_string(t));
    named.emplace_back(dedup.begin(), dedup.end());
  }
  if (format == export_format::json) {
    nlohmann::json j = named;
    return j.dump(2) + "\n";
  }
  std::string out = "digraph rk_order {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < named.size(); ++i) {
    std::string label;
    for (std::size_t p = 0; p < named[i].size(); ++p) label += (p ? " = " : "") + named[i][p];
    out += "  n" + std::to_string(i) + " [label=\"" + label + "\"];\n";
  }
  for (std::size_t i = 0; i + 1 < named.size(); ++i)
    out += "  n" + std::to_string(i) + " -> n" + std::to_string(i + 1) + ";\n";
  return out + "}\n";
}

}  // namespace skewlim
