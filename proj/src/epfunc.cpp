#include "skewlim/epfunc.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "json.hpp"

#include "skewlim/errors.hpp"

namespace skewlim {

namespace {

std::int64_t floordiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

std::int64_t nonneg_mod(std::int64_t a, std::int64_t b) { return a - floordiv(a, b) * b; }

std::int64_t ceildiv(std::int64_t a, std::int64_t b) { return -floordiv(-a, b); }

// first n >= lo with n ≡ r (mod p)
std::int64_t first_in_class(std::int64_t lo, std::int64_t p, std::int64_t r) {
  return lo + nonneg_mod(r - lo, p);
}

void check_threshold(std::int64_t t, std::int64_t cap) {
  if (t > cap)
    throw period_overflow("threshold " + std::to_string(t) + " exceeds cap " +
                          std::to_string(cap));
}

// branch of f re-expressed at period big_p (period() | big_p), class big_r
affine_branch expand_branch(const ep_function& f, std::int64_t big_p, std::int64_t big_r) {
  std::int64_t p = f.period();
  std::int64_t r = big_r % p;
  const affine_branch& br = f.branches()[static_cast<std::size_t>(r)];
  return {br.step * (big_p / p), br.step * ((big_r - r) / p) + br.offset};
}

}  // namespace

ep_function::ep_function() : threshold_(0), period_(1), branches_{{1, 0}} {}

ep_function ep_function::from_parts(std::int64_t threshold, std::int64_t period,
                                    std::vector<affine_branch> branches,
                                    std::vector<std::int64_t> prefix) {
  if (period < 1) throw malformed_input("period must be >= 1");
  if (threshold < 0) throw malformed_input("threshold must be a natural");
  if (static_cast<std::int64_t>(branches.size()) != period)
    throw malformed_input("branch count must equal period");
  if (static_cast<std::int64_t>(prefix.size()) != threshold)
    throw malformed_input("prefix length must equal threshold");
  for (std::int64_t v : prefix)
    if (v < 0) throw malformed_input("prefix values must be naturals");
  ep_function f;
  f.threshold_ = threshold;
  f.period_ = period;
  f.branches_ = std::move(branches);
  f.prefix_ = std::move(prefix);
  for (std::int64_t r = 0; r < period; ++r) {
    const affine_branch& br = f.branches_[static_cast<std::size_t>(r)];
    if (br.step < 0) throw malformed_input("branch steps must be naturals");
    std::int64_t n0 = first_in_class(threshold, period, r);
    if (br.step * (n0 / period) + br.offset < 0)
      throw malformed_input("branch value negative at n=" + std::to_string(n0));
  }
  f.canonicalize();
  return f;
}

void ep_function::canonicalize() {
  for (std::int64_t d = 1; d <= period_; ++d) {
    if (period_ % d != 0) continue;
    std::int64_t blow = period_ / d;
    std::vector<affine_branch> reduced(static_cast<std::size_t>(d));
    bool ok = true;
    for (std::int64_t c = 0; c < d && ok; ++c) {
      std::int64_t a = branches_[static_cast<std::size_t>(c)].step;
      if (a % blow != 0) {
        ok = false;
        break;
      }
      std::int64_t astar = a / blow;
      std::int64_t bstar =
          branches_[static_cast<std::size_t>(c)].offset;  // r' = c gives offset directly
      for (std::int64_t r = c; r < period_ && ok; r += d) {
        const affine_branch& br = branches_[static_cast<std::size_t>(r)];
        ok = br.step == a && br.offset == astar * ((r - c) / d) + bstar;
      }
      reduced[static_cast<std::size_t>(c)] = {astar, bstar};
    }
    if (ok) {
      branches_ = std::move(reduced);
      period_ = d;
      break;
    }
  }
  while (threshold_ > 0) {
    std::int64_t n = threshold_ - 1;
    if (rule_value(n) != prefix_.back()) break;
    prefix_.pop_back();
    --threshold_;
  }
}

std::int64_t ep_function::rule_value(std::int64_t n) const {
  const affine_branch& br = branches_[static_cast<std::size_t>(n % period_)];
  return br.step * (n / period_) + br.offset;
}

std::int64_t ep_function::operator()(std::int64_t n) const {
  if (n < 0) throw malformed_input("argument must be a natural");
  if (n < threshold_) return prefix_[static_cast<std::size_t>(n)];
  return rule_value(n);
}

ep_function ep_function::identity() { return ep_function(); }

ep_function ep_function::constant(std::int64_t c) { return from_parts(0, 1, {{0, c}}, {}); }

ep_function ep_function::affine(std::int64_t a, std::int64_t b) {
  return from_parts(0, 1, {{a, b}}, {});
}

bool ep_function::is_identity() const { return *this == ep_function(); }

bool ep_function::eventually_constant() const {
  return std::all_of(branches_.begin(), branches_.end(),
                     [](const affine_branch& b) { return b.step == 0; });
}

ep_function compose(const ep_function& f, const ep_function& g, std::int64_t period_cap) {
  std::int64_t p = g.period_;
  for (std::int64_t r = 0; r < g.period_; ++r) {
    std::int64_t a = g.branches_[static_cast<std::size_t>(r)].step;
    if (a == 0) continue;
    std::int64_t m = f.period_ / std::gcd(a, f.period_);
    p = lcm_capped(p, g.period_ * m, period_cap);
  }
  std::int64_t t = g.threshold_;
  for (std::int64_t r = 0; r < g.period_; ++r) {
    const affine_branch& br = g.branches_[static_cast<std::size_t>(r)];
    if (br.step == 0) continue;
    std::int64_t n0 = first_in_class(g.threshold_, g.period_, r);
    std::int64_t jreq = std::max(n0 / g.period_, ceildiv(f.threshold_ - br.offset, br.step));
    t = std::max(t, r + g.period_ * jreq);
  }
  check_threshold(t, period_cap);

  std::vector<affine_branch> branches(static_cast<std::size_t>(p));
  for (std::int64_t cls = 0; cls < p; ++cls) {
    affine_branch gb = expand_branch(g, p, cls);
    if (gb.step == 0) {
      branches[static_cast<std::size_t>(cls)] = {0, f(gb.offset)};
      continue;
    }
    std::int64_t n0 = first_in_class(t, p, cls);
    std::int64_t v0 = g.rule_value(n0);
    std::int64_t s = v0 % f.period_;
    const affine_branch& fb = f.branches_[static_cast<std::size_t>(s)];
    // f.period_ divides gb.step by choice of p, and gb.offset ≡ s (mod f.period_)
    branches[static_cast<std::size_t>(cls)] = {
        fb.step * (gb.step / f.period_),
        fb.step * floordiv(gb.offset - s, f.period_) + fb.offset};
  }
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(t));
  for (std::int64_t n = 0; n < t; ++n) prefix[static_cast<std::size_t>(n)] = f(g(n));
  return ep_function::from_parts(t, p, std::move(branches), std::move(prefix));
}

periodic_set compare_set(relation rel, const ep_function& f, const ep_function& g,
                         std::int64_t period_cap) {
  std::int64_t p = lcm_capped(f.period_, g.period_, period_cap);
  std::int64_t t0 = std::max(f.threshold_, g.threshold_);
  auto eventual = [rel](std::int64_t da, std::int64_t db) {
    if (da != 0) return rel != relation::eq && da < 0;
    switch (rel) {
      case relation::lt: return db < 0;
      case relation::le: return db <= 0;
      case relation::eq: return db == 0;
    }
    return false;
  };
  std::int64_t t = t0;
  std::vector<std::int64_t> residues;
  for (std::int64_t cls = 0; cls < p; ++cls) {
    affine_branch fb = expand_branch(f, p, cls);
    affine_branch gb = expand_branch(g, p, cls);
    std::int64_t da = fb.step - gb.step, db = fb.offset - gb.offset;
    if (da != 0) {
      std::int64_t jstar = std::abs(db) / std::abs(da) + 1;
      t = std::max(t, cls + p * jstar);
    }
    if (eventual(da, db)) residues.push_back(cls);
  }
  check_threshold(t, period_cap);
  auto holds = [rel](std::int64_t x, std::int64_t y) {
    switch (rel) {
      case relation::lt: return x < y;
      case relation::le: return x <= y;
      case relation::eq: return x == y;
    }
    return false;
  };
  std::vector<bool> prefix(static_cast<std::size_t>(t));
  for (std::int64_t n = 0; n < t; ++n) prefix[static_cast<std::size_t>(n)] = holds(f(n), g(n));
  return periodic_set::from_parts(t, p, std::move(residues), std::move(prefix));
}

periodic_set preimage(const ep_function& f, const periodic_set& a, std::int64_t period_cap) {
  std::int64_t p = f.period_;
  for (std::int64_t r = 0; r < f.period_; ++r) {
    std::int64_t step = f.branches_[static_cast<std::size_t>(r)].step;
    if (step == 0) continue;
    std::int64_t m = a.period() / std::gcd(step, a.period());
    p = lcm_capped(p, f.period_ * m, period_cap);
  }
  std::int64_t t = f.threshold_;
  for (std::int64_t r = 0; r < f.period_; ++r) {
    const affine_branch& br = f.branches_[static_cast<std::size_t>(r)];
    if (br.step == 0) continue;
    std::int64_t n0 = first_in_class(f.threshold_, f.period_, r);
    std::int64_t jreq = std::max(n0 / f.period_, ceildiv(a.threshold() - br.offset, br.step));
    t = std::max(t, r + f.period_ * jreq);
  }
  check_threshold(t, period_cap);

  std::vector<std::int64_t> residues;
  for (std::int64_t cls = 0; cls < p; ++cls) {
    affine_branch fb = expand_branch(f, p, cls);
    bool bit;
    if (fb.step == 0) {
      bit = a.contains(fb.offset);
    } else {
      std::int64_t n0 = first_in_class(t, p, cls);
      bit = a.eventual_bit(f.rule_value(n0) % a.period());
    }
    if (bit) residues.push_back(cls);
  }
  std::vector<bool> prefix(static_cast<std::size_t>(t));
  for (std::int64_t n = 0; n < t; ++n) prefix[static_cast<std::size_t>(n)] = a.contains(f(n));
  return periodic_set::from_parts(t, p, std::move(residues), std::move(prefix));
}

bool is_injective(const ep_function& f) {
  for (const affine_branch& br : f.branches())
    if (br.step == 0) return false;
  // eventual image of class r is the progression {v0, v0 + step, ...}; two
  // distinct classes collide iff their progressions share a point
  std::vector<std::pair<std::int64_t, std::int64_t>> rays;  // (start, step)
  for (std::int64_t r = 0; r < f.period(); ++r) {
    const affine_branch& br = f.branches()[static_cast<std::size_t>(r)];
    std::int64_t n0 = first_in_class(f.threshold(), f.period(), r);
    rays.push_back({br.step * (n0 / f.period()) + br.offset, br.step});
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      auto [s1, d1] = rays[i];
      auto [s2, d2] = rays[j];
      // common points form a progression mod lcm(d1, d2) once both rays have
      // started, so existence reduces to the CRT compatibility test
      if (nonneg_mod(s1 - s2, std::gcd(d1, d2)) == 0) return false;
    }
  }
  std::vector<std::int64_t> seen(f.prefix());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  for (std::int64_t v : f.prefix()) {
    for (std::int64_t r = 0; r < f.period(); ++r) {
      const affine_branch& br = f.branches()[static_cast<std::size_t>(r)];
      std::int64_t n0 = first_in_class(f.threshold(), f.period(), r);
      std::int64_t v0 = br.step * (n0 / f.period()) + br.offset;
      if (v >= v0 && (v - v0) % br.step == 0) return false;
    }
  }
  return true;
}

ep_function left_inverse(const ep_function& f, std::int64_t period_cap) {
  if (!is_injective(f)) throw not_injective("left inverse requires an injective map");
  std::int64_t big = 1;
  try {
    for (const affine_branch& br : f.branches_) big = lcm_capped(big, br.step, period_cap);
  } catch (const period_overflow&) {
    throw not_representable("inverse period exceeds the cap");
  }
  std::vector<affine_branch> branches(static_cast<std::size_t>(big), affine_branch{0, 0});
  std::vector<bool> assigned(static_cast<std::size_t>(big), false);
  for (std::int64_t r = 0; r < f.period_; ++r) {
    const affine_branch& br = f.branches_[static_cast<std::size_t>(r)];
    std::int64_t c0 = nonneg_mod(br.offset, br.step);
    for (std::int64_t c = c0; c < big; c += br.step) {
      if (assigned[static_cast<std::size_t>(c)])
        throw not_injective("image residue classes overlap");
      assigned[static_cast<std::size_t>(c)] = true;
      branches[static_cast<std::size_t>(c)] = {f.period_ * (big / br.step),
                                               r + f.period_ * ((c - br.offset) / br.step)};
    }
  }
  // push the threshold past every ray start and every prefix image so the
  // prefix can record exact inverses there; beyond it each class is either
  // fully in the image (rule inverts) or fully off it (zero)
  std::int64_t t = 0;
  for (std::int64_t c = 0; c < big; ++c) {
    const affine_branch& br = branches[static_cast<std::size_t>(c)];
    if (br.step > 0 && br.offset < 0) t = std::max(t, c + big * ceildiv(-br.offset, br.step));
  }
  for (std::int64_t r = 0; r < f.period_; ++r) {
    std::int64_t n0 = first_in_class(f.threshold_, f.period_, r);
    t = std::max(t, f.rule_value(n0) + 1);
  }
  for (std::int64_t v : f.prefix_) t = std::max(t, v + 1);
  check_threshold(t, period_cap);
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(t), 0);
  for (std::int64_t m = 0; m < t; ++m) {
    bool done = false;
    for (std::int64_t n = 0; n < f.threshold_ && !done; ++n)
      if (f.prefix_[static_cast<std::size_t>(n)] == m) {
        prefix[static_cast<std::size_t>(m)] = n;
        done = true;
      }
    for (std::int64_t r = 0; r < f.period_ && !done; ++r) {
      const affine_branch& br = f.branches_[static_cast<std::size_t>(r)];
      if (nonneg_mod(m - br.offset, br.step) != 0) continue;
      std::int64_t k = (m - br.offset) / br.step;
      std::int64_t n = r + f.period_ * k;
      if (k >= 0 && n >= f.threshold_ && f.rule_value(n) == m) {
        prefix[static_cast<std::size_t>(m)] = n;
        done = true;
      }
    }
  }
  return ep_function::from_parts(t, big, std::move(branches), std::move(prefix));
}

namespace {

std::int64_t parse_num(std::string_view s, std::size_t& i, bool allow_sign) {
  bool neg = false;
  if (allow_sign && i < s.size() && s[i] == '-') {
    neg = true;
    ++i;
  }
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
    throw syntax_error(i, "expected a number");
  std::int64_t v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + (s[i] - '0');
    ++i;
  }
  return neg ? -v : v;
}

void expect(std::string_view s, std::size_t& i, char c) {
  if (i >= s.size() || s[i] != c)
    throw syntax_error(i, std::string("expected '") + c + "' in map literal");
  ++i;
}

}  // namespace

ep_function ep_function::parse(std::string_view text) {
  std::size_t i = 0;
  std::int64_t threshold = parse_num(text, i, false);
  expect(text, i, ':');
  std::int64_t period = parse_num(text, i, false);
  expect(text, i, ':');
  expect(text, i, '[');
  std::vector<affine_branch> branches;
  while (i < text.size() && text[i] == '(') {
    ++i;
    std::int64_t a = parse_num(text, i, false);
    expect(text, i, ',');
    std::int64_t b = parse_num(text, i, true);
    expect(text, i, ')');
    branches.push_back({a, b});
    if (i < text.size() && text[i] == ',') ++i;
  }
  expect(text, i, ']');
  expect(text, i, ':');
  std::vector<std::int64_t> prefix;
  if (i < text.size()) {
    prefix.push_back(parse_num(text, i, false));
    while (i < text.size() && text[i] == ',') {
      ++i;
      prefix.push_back(parse_num(text, i, false));
    }
  }
  if (i != text.size()) throw syntax_error(i, "trailing characters in map literal");
  return from_parts(threshold, period, std::move(branches), std::move(prefix));
}

std::string ep_function::to_string() const {
  std::string out = std::to_string(threshold_) + ":" + std::to_string(period_) + ":[";
  for (std::size_t k = 0; k < branches_.size(); ++k) {
    if (k) out += ",";
    out += "(" + std::to_string(branches_[k].step) + "," + std::to_string(branches_[k].offset) +
           ")";
  }
  out += "]:";
  for (std::size_t k = 0; k < prefix_.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(prefix_[k]);
  }
  return out;
}

nlohmann::json ep_function::to_json() const {
  nlohmann::json br = nlohmann::json::array();
  for (const affine_branch& b : branches_) br.push_back({b.step, b.offset});
  return nlohmann::json{
      {"threshold", threshold_}, {"period", period_}, {"branches", br}, {"prefix", prefix_}};
}

ep_function ep_function::from_json(const nlohmann::json& j) {
  std::vector<affine_branch> branches;
  for (const auto& b : j.at("branches"))
    branches.push_back({b.at(0).get<std::int64_t>(), b.at(1).get<std::int64_t>()});
  return from_parts(j.at("threshold").get<std::int64_t>(), j.at("period").get<std::int64_t>(),
                    std::move(branches), j.at("prefix").get<std::vector<std::int64_t>>());
}

}  // namespace skewlim
