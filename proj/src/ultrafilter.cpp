#include "skewlim/ultrafilter.hpp"

#include <algorithm>
#include <cctype>

#include "skewlim/errors.hpp"
#include "skewlim/rng.hpp"

namespace skewlim {

namespace {

std::int64_t nonneg_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

std::vector<std::pair<std::int64_t, std::int64_t>> prime_powers(std::int64_t m) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;  // (prime, prime^k)
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    std::int64_t q = 1;
    while (m % p == 0) {
      m /= p;
      q *= p;
    }
    out.push_back({p, q});
  }
  if (m > 1) out.push_back({m, m});
  return out;
}

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1, y1;
  std::int64_t g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// x ≡ c_i (mod q_i) for pairwise coprime q_i
std::int64_t crt(const std::vector<std::pair<std::int64_t, std::int64_t>>& parts) {
  std::int64_t x = 0, big = 1;
  for (auto [q, c] : parts) {
    std::int64_t s, t;
    egcd(big % q, q, s, t);
    std::int64_t diff = nonneg_mod(c - x, q);
    std::int64_t add = static_cast<std::int64_t>(
        static_cast<__int128>(diff) * nonneg_mod(s, q) % q);
    x += big * add;
    big *= q;
    x %= big;
  }
  return x;
}

std::int64_t valuation(std::int64_t m, std::int64_t p) {
  std::int64_t v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

}  // namespace

profinite_point profinite_point::from_integer(std::int64_t x) {
  if (x < 0) throw malformed_input("profinite base integer must be a natural");
  profinite_point pt;
  pt.base_ = x;
  return pt;
}

profinite_point profinite_point::from_table(
    std::vector<std::pair<std::int64_t, std::int64_t>> entries) {
  for (auto [m, r] : entries) {
    if (m < 1) throw malformed_input("modulus must be >= 1");
    if (r < 0 || r >= m) throw malformed_input("residue out of range for its modulus");
  }
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].first == entries[i - 1].first)
      throw malformed_input("duplicate modulus in digit table");
  profinite_point pt;
  pt.from_integer_ = false;
  pt.table_ = std::move(entries);
  return pt;
}

std::int64_t profinite_point::residue(std::int64_t m) const {
  if (m < 1) throw malformed_input("modulus must be >= 1");
  if (from_integer_) return base_ % m;
  std::vector<std::pair<std::int64_t, std::int64_t>> parts;
  for (auto [p, q] : prime_powers(m)) {
    // component at p: digits of the listed modulus with the highest power of
    // p (ties fall to the smallest modulus since the table is sorted)
    std::int64_t best_val = 0, comp = 0;
    for (auto [lm, lr] : table_) {
      std::int64_t v = valuation(lm, p);
      if (v > best_val) {
        best_val = v;
        std::int64_t pe = 1;
        for (std::int64_t i = 0; i < v; ++i) pe *= p;
        comp = lr % pe;
      }
    }
    parts.push_back({q, comp % q});
  }
  return crt(parts);
}

bool profinite_point::listed_coherent() const {
  if (from_integer_) return true;
  for (auto [k, rk] : table_)
    for (auto [m, rm] : table_)
      if (k != m && m % k == 0 && rm % k != rk) return false;
  return true;
}

profinite_point profinite_point::parse(std::string_view text) {
  if (text.empty()) throw syntax_error(0, "empty point literal");
  if (text[0] != '{') {
    std::int64_t x = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw syntax_error(i, "expected a digit in point literal");
      x = x * 10 + (text[i] - '0');
    }
    return from_integer(x);
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  std::size_t i = 1;
  auto num = [&]() {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      throw syntax_error(i, "expected a number in digit table");
    std::int64_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      v = v * 10 + (text[i++] - '0');
    return v;
  };
  while (i < text.size() && text[i] != '}') {
    std::int64_t m = num();
    if (i + 1 >= text.size() || text[i] != '-' || text[i + 1] != '>')
      throw syntax_error(i, "expected '->' in digit table");
    i += 2;
    std::int64_t r = num();
    entries.push_back({m, r});
    if (i < text.size() && text[i] == ',') ++i;
  }
  if (i >= text.size() || text[i] != '}') throw syntax_error(i, "unterminated digit table");
  if (i + 1 != text.size()) throw syntax_error(i + 1, "trailing characters after digit table");
  return from_table(std::move(entries));
}

std::string profinite_point::to_string() const {
  if (from_integer_) return std::to_string(base_);
  std::string out = "{";
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(table_[i].first) + "->" + std::to_string(table_[i].second);
  }
  return out + "}";
}

nlohmann::json profinite_point::to_json() const {
  if (from_integer_) return nlohmann::json{{"integer", base_}};
  nlohmann::json t = nlohmann::json::array();
  for (auto [m, r] : table_) t.push_back({m, r});
  return nlohmann::json{{"table", t}};
}

profinite_point profinite_point::from_json(const nlohmann::json& j) {
  if (j.contains("integer")) return from_integer(j.at("integer").get<std::int64_t>());
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  for (const auto& row : j.at("table"))
    entries.push_back({row.at(0).get<std::int64_t>(), row.at(1).get<std::int64_t>()});
  return from_table(std::move(entries));
}

rep_ultrafilter rep_ultrafilter::principal(std::int64_t n) {
  if (n < 0) throw malformed_input("principal point must be a natural");
  rep_ultrafilter u;
  u.kind_ = uf_kind::principal;
  u.principal_ = n;
  return u;
}

rep_ultrafilter rep_ultrafilter::profinite(profinite_point pt) {
  rep_ultrafilter u;
  u.kind_ = uf_kind::profinite;
  u.point_ = std::move(pt);
  return u;
}

rep_ultrafilter rep_ultrafilter::mapped(profinite_point pt, ep_function f) {
  if (f.is_identity()) return profinite(std::move(pt));
  std::int64_t rho = pt.residue(f.period());
  const affine_branch& br = f.branches()[static_cast<std::size_t>(rho)];
  // slope 0 along the point's class pins the image to one value
  if (br.step == 0) return principal(br.offset);
  rep_ultrafilter u;
  u.kind_ = uf_kind::mapped;
  u.point_ = std::move(pt);
  u.map_ = std::move(f);
  return u;
}

bool uf_member(const rep_ultrafilter& u, const periodic_set& a, std::int64_t period_cap) {
  switch (u.kind()) {
    case uf_kind::principal:
      return a.contains(u.principal_point());
    case uf_kind::profinite:
      return a.eventual_bit(u.point().residue(a.period()));
    case uf_kind::mapped:
      return uf_member(rep_ultrafilter::profinite(u.point()),
                       preimage(u.map(), a, period_cap), period_cap);
  }
  return false;
}

rep_ultrafilter uf_pushforward(const ep_function& f, const rep_ultrafilter& u,
                               std::int64_t period_cap) {
  switch (u.kind()) {
    case uf_kind::principal:
      return rep_ultrafilter::principal(f(u.principal_point()));
    case uf_kind::profinite:
      return rep_ultrafilter::mapped(u.point(), f);
    case uf_kind::mapped:
      return rep_ultrafilter::mapped(u.point(), compose(f, u.map(), period_cap));
  }
  return u;
}

std::int64_t effective_residue(const rep_ultrafilter& u, std::int64_t m) {
  switch (u.kind()) {
    case uf_kind::principal:
      return u.principal_point() % m;
    case uf_kind::profinite:
      return u.point().residue(m);
    case uf_kind::mapped: {
      const ep_function& f = u.map();
      std::int64_t p = f.period();
      std::int64_t rho = u.point().residue(p);
      const affine_branch& br = f.branches()[static_cast<std::size_t>(rho)];
      std::int64_t big = u.point().residue(p * m);
      std::int64_t idx = ((big - rho) / p) % m;
      return nonneg_mod((br.step % m) * idx + br.offset % m, m);
    }
  }
  return 0;
}

uf_compare_result uf_equal_bounded(const rep_ultrafilter& u, const rep_ultrafilter& v,
                                   std::int64_t bound) {
  if (bound < 1) throw malformed_input("equality bound must be >= 1");
  uf_compare_result res;
  res.bound = bound;
  // residue-class generators carry no prefix, so membership is a pure class
  // test for all three variants
  for (std::int64_t m = 1; m <= bound; ++m) {
    std::int64_t ru = effective_residue(u, m), rv = effective_residue(v, m);
    if (ru != rv) {
      res.equal = false;
      res.witness = periodic_set::residue_class(m, std::min(ru, rv));
      return res;
    }
  }
  for (std::int64_t j = 0; j < bound; ++j) {
    auto in = [j](const rep_ultrafilter& w) {
      return w.kind() != uf_kind::principal || w.principal_point() != j;
    };
    if (in(u) != in(v)) {
      res.equal = false;
      res.witness = complement(periodic_set::singleton(j));
      return res;
    }
  }
  rng gen(0x5eed0000 + static_cast<std::uint64_t>(bound));
  for (int k = 0; k < 64; ++k) {
    std::int64_t p = 1 + static_cast<std::int64_t>(gen.below(std::min<std::uint64_t>(bound, 60)));
    std::int64_t t = static_cast<std::int64_t>(gen.below(9));
    std::vector<std::int64_t> residues;
    for (std::int64_t r = 0; r < p; ++r)
      if (gen.coin()) residues.push_back(r);
    std::vector<bool> prefix;
    for (std::int64_t n = 0; n < t; ++n) prefix.push_back(gen.coin());
    periodic_set a = periodic_set::from_parts(t, p, std::move(residues), std::move(prefix));
    if (uf_member(u, a) != uf_member(v, a)) {
      res.equal = false;
      res.witness = a;
      return res;
    }
  }
  return res;
}

bool uf_coherence_check(const profinite_point& pt) { return pt.listed_coherent(); }

audit_report uf_check_axioms(const rep_ultrafilter& u, const std::vector<periodic_set>& sample) {
  audit_report rep;
  std::vector<bool> in(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) in[i] = uf_member(u, sample[i]);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    bool comp = uf_member(u, complement(sample[i]));
    rep.add("dichotomy", in[i] != comp,
            "member: " + (in[i] ? sample[i] : complement(sample[i])).to_string());
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      if (in[i] && in[j])
        rep.add("intersection", uf_member(u, set_intersection(sample[i], sample[j])),
                sample[i].to_string() + " & " + sample[j].to_string());
    }
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (i == j || !in[i]) continue;
      if (set_difference(sample[i], sample[j]).is_empty())
        rep.add("monotone", in[j], sample[i].to_string() + " <= " + sample[j].to_string());
    }
  }
  if (u.kind() != uf_kind::principal) {
    for (std::size_t i = 0; i < sample.size(); ++i)
      if (sample[i].classify() == set_kind::cofinite)
        rep.add("cofinite", in[i], sample[i].to_string());
  }
  return rep;
}

rep_ultrafilter rep_ultrafilter::parse(std::string_view text) {
  auto strip = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = strip(text);
  if (text.starts_with("principal:")) {
    std::string_view rest = text.substr(10);
    std::int64_t n = 0;
    if (rest.empty()) throw syntax_error(10, "expected a point after 'principal:'");
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(rest[i])))
        throw syntax_error(10 + i, "expected a digit");
      n = n * 10 + (rest[i] - '0');
    }
    return principal(n);
  }
  if (text.starts_with("profinite:"))
    return profinite(profinite_point::parse(text.substr(10)));
  if (text.starts_with("mapped:(")) {
    if (!text.ends_with(")")) throw syntax_error(text.size(), "expected ')'");
    std::string_view inner = text.substr(8, text.size() - 9);
    std::size_t semi = inner.find(';');
    if (semi == std::string_view::npos)
      throw syntax_error(8, "expected ';' between point and map");
    rep_ultrafilter base = parse(strip(inner.substr(0, semi)));
    if (base.kind() != uf_kind::profinite)
      throw malformed_input("mapped base must be a profinite ultrafilter");
    ep_function f = ep_function::parse(strip(inner.substr(semi + 1)));
    return mapped(base.point(), std::move(f));
  }
  throw syntax_error(0, "expected 'principal:', 'profinite:' or 'mapped:('");
}

std::string rep_ultrafilter::to_string() const {
  switch (kind_) {
    case uf_kind::principal:
      return "principal:" + std::to_string(principal_);
    case uf_kind::profinite:
      return "profinite:" + point_.to_string();
    case uf_kind::mapped:
      return "mapped:(profinite:" + point_.to_string() + "; " + map_.to_string() + ")";
  }
  return "";
}

nlohmann::json rep_ultrafilter::to_json() const {
  switch (kind_) {
    case uf_kind::principal:
      return nlohmann::json{{"kind", "principal"}, {"point", principal_}};
    case uf_kind::profinite:
      return nlohmann::json{{"kind", "profinite"}, {"point", point_.to_json()}};
    case uf_kind::mapped:
      return nlohmann::json{
          {"kind", "mapped"}, {"point", point_.to_json()}, {"map", map_.to_json()}};
  }
  return {};
}

rep_ultrafilter rep_ultrafilter::from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "principal") return principal(j.at("point").get<std::int64_t>());
  if (kind == "profinite") return profinite(profinite_point::from_json(j.at("point")));
  if (kind == "mapped")
    return mapped(profinite_point::from_json(j.at("point")),
                  ep_function::from_json(j.at("map")));
  throw malformed_input("unknown ultrafilter kind '" + kind + "'");
}

}  // namespace skewlim
