#include "skewlim/periodic.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "json.hpp"

#include "skewlim/errors.hpp"

namespace skewlim {

std::int64_t lcm_capped(std::int64_t a, std::int64_t b, std::int64_t cap) {
  std::int64_t g = std::gcd(a, b);
  std::int64_t q = a / g;
  if (b != 0 && q > cap / b + 1) throw period_overflow("lcm exceeds period cap");
  std::int64_t l = q * b;
  if (l > cap)
    throw period_overflow("period " + std::to_string(l) + " exceeds cap " + std::to_string(cap));
  return l;
}

periodic_set::periodic_set() : threshold_(0), period_(1), rule_{false} {}

periodic_set periodic_set::from_parts(std::int64_t threshold, std::int64_t period,
                                      std::vector<std::int64_t> residues,
                                      std::vector<bool> prefix) {
  if (period < 1) throw malformed_input("period must be >= 1");
  if (threshold < 0) throw malformed_input("threshold must be a natural");
  if (static_cast<std::int64_t>(prefix.size()) != threshold)
    throw malformed_input("prefix length must equal threshold");
  periodic_set s;
  s.threshold_ = threshold;
  s.period_ = period;
  s.rule_.assign(static_cast<std::size_t>(period), false);
  for (std::int64_t r : residues) {
    if (r < 0 || r >= period) throw malformed_input("residue out of range");
    s.rule_[static_cast<std::size_t>(r)] = true;
  }
  s.prefix_ = std::move(prefix);
  s.canonicalize();
  return s;
}

void periodic_set::canonicalize() {
  // minimal period by divisor scan: gcd-closure of the period set makes the
  // minimal one divide the given one
  for (std::int64_t d = 1; d <= period_; ++d) {
    if (period_ % d != 0) continue;
    bool ok = true;
    for (std::int64_t r = 0; r < period_ && ok; ++r)
      ok = rule_[static_cast<std::size_t>(r)] == rule_[static_cast<std::size_t>(r % d)];
    if (ok) {
      rule_.resize(static_cast<std::size_t>(d));
      period_ = d;
      break;
    }
  }
  while (threshold_ > 0 &&
         prefix_.back() == rule_[static_cast<std::size_t>((threshold_ - 1) % period_)]) {
    prefix_.pop_back();
    --threshold_;
  }
}

periodic_set periodic_set::empty_set() { return periodic_set(); }

periodic_set periodic_set::full_set() { return from_parts(0, 1, {0}, {}); }

periodic_set periodic_set::residue_class(std::int64_t m, std::int64_t r) {
  return from_parts(0, m, {r}, {});
}

periodic_set periodic_set::singleton(std::int64_t n) {
  std::vector<bool> prefix(static_cast<std::size_t>(n + 1), false);
  prefix[static_cast<std::size_t>(n)] = true;
  return from_parts(n + 1, 1, {}, std::move(prefix));
}

bool periodic_set::contains(std::int64_t n) const {
  if (n < 0) return false;
  if (n < threshold_) return prefix_[static_cast<std::size_t>(n)];
  return rule_[static_cast<std::size_t>(n % period_)];
}

bool periodic_set::eventual_bit(std::int64_t r) const {
  return rule_[static_cast<std::size_t>(((r % period_) + period_) % period_)];
}

std::vector<std::int64_t> periodic_set::residues() const {
  std::vector<std::int64_t> out;
  for (std::int64_t r = 0; r < period_; ++r)
    if (rule_[static_cast<std::size_t>(r)]) out.push_back(r);
  return out;
}

set_kind periodic_set::classify() const {
  bool any = false, all = true;
  for (bool b : rule_) {
    any |= b;
    all &= b;
  }
  if (!any) return set_kind::finite;
  if (all) return set_kind::cofinite;
  return set_kind::bilateral;
}

bool periodic_set::is_empty() const {
  if (classify() != set_kind::finite) return false;
  return std::none_of(prefix_.begin(), prefix_.end(), [](bool b) { return b; });
}

bool periodic_set::is_full() const {
  if (classify() != set_kind::cofinite) return false;
  return std::all_of(prefix_.begin(), prefix_.end(), [](bool b) { return b; });
}

periodic_set complement(const periodic_set& a) {
  std::vector<std::int64_t> res;
  for (std::int64_t r = 0; r < a.period(); ++r)
    if (!a.eventual_bit(r)) res.push_back(r);
  std::vector<bool> prefix(a.prefix());
  prefix.flip();
  return periodic_set::from_parts(a.threshold(), a.period(), std::move(res), std::move(prefix));
}

periodic_set combine(set_op op, const periodic_set& a, const periodic_set& b,
                     std::int64_t period_cap) {
  std::int64_t p = lcm_capped(a.period(), b.period(), period_cap);
  std::int64_t n = std::max(a.threshold(), b.threshold());
  auto apply = [op](bool x, bool y) {
    switch (op) {
      case set_op::set_union: return x || y;
      case set_op::set_intersection: return x && y;
      case set_op::set_difference: return x && !y;
    }
    return false;
  };
  std::vector<std::int64_t> res;
  for (std::int64_t r = 0; r < p; ++r)
    if (apply(a.eventual_bit(r), b.eventual_bit(r))) res.push_back(r);
  std::vector<bool> prefix(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    prefix[static_cast<std::size_t>(i)] = apply(a.contains(i), b.contains(i));
  return periodic_set::from_parts(n, p, std::move(res), std::move(prefix));
}

periodic_set set_union(const periodic_set& a, const periodic_set& b, std::int64_t period_cap) {
  return combine(set_op::set_union, a, b, period_cap);
}
periodic_set set_intersection(const periodic_set& a, const periodic_set& b,
                              std::int64_t period_cap) {
  return combine(set_op::set_intersection, a, b, period_cap);
}
periodic_set set_difference(const periodic_set& a, const periodic_set& b,
                            std::int64_t period_cap) {
  return combine(set_op::set_difference, a, b, period_cap);
}

namespace {

std::int64_t parse_int_field(std::string_view s, std::size_t& i) {
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
    throw syntax_error(i, "expected a number");
  std::int64_t v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + (s[i] - '0');
    ++i;
  }
  return v;
}

void expect(std::string_view s, std::size_t& i, char c) {
  if (i >= s.size() || s[i] != c)
    throw syntax_error(i, std::string("expected '") + c + "' in set literal");
  ++i;
}

}  // namespace

periodic_set periodic_set::parse(std::string_view text) {
  std::size_t i = 0;
  std::int64_t threshold = parse_int_field(text, i);
  expect(text, i, ':');
  std::int64_t period = parse_int_field(text, i);
  expect(text, i, ':');
  expect(text, i, '{');
  std::vector<std::int64_t> residues;
  if (i < text.size() && text[i] != '}') {
    residues.push_back(parse_int_field(text, i));
    while (i < text.size() && text[i] == ',') {
      ++i;
      residues.push_back(parse_int_field(text, i));
    }
  }
  expect(text, i, '}');
  expect(text, i, ':');
  std::vector<bool> prefix;
  while (i < text.size()) {
    if (text[i] == '0')
      prefix.push_back(false);
    else if (text[i] == '1')
      prefix.push_back(true);
    else
      throw syntax_error(i, "prefix bits must be 0 or 1");
    ++i;
  }
  return from_parts(threshold, period, std::move(residues), std::move(prefix));
}

std::string periodic_set::to_string() const {
  std::string out = std::to_string(threshold_) + ":" + std::to_string(period_) + ":{";
  bool first = true;
  for (std::int64_t r : residues()) {
    if (!first) out += ",";
    out += std::to_string(r);
    first = false;
  }
  out += "}:";
  for (bool b : prefix_) out += b ? '1' : '0';
  return out;
}

nlohmann::json periodic_set::to_json() const {
  std::string bits;
  for (bool b : prefix_) bits += b ? '1' : '0';
  return nlohmann::json{{"threshold", threshold_},
                        {"period", period_},
                        {"residues", residues()},
                        {"prefix", bits}};
}

periodic_set periodic_set::from_json(const nlohmann::json& j) {
  std::vector<bool> prefix;
  for (char c : j.at("prefix").get<std::string>()) {
    if (c != '0' && c != '1') throw malformed_input("prefix bits must be 0 or 1");
    prefix.push_back(c == '1');
  }
  return from_parts(j.at("threshold").get<std::int64_t>(), j.at("period").get<std::int64_t>(),
                    j.at("residues").get<std::vector<std::int64_t>>(), std::move(prefix));
}

}  // namespace skewlim
