#include "skewlim/skewlimit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "skewlim/errors.hpp"
#include "skewlim/rng.hpp"

namespace skewlim {

namespace {

std::int64_t inner_total(const sym_element& x) {
  return std::accumulate(x.inner.begin(), x.inner.end(), std::int64_t{0});
}

std::int64_t capacity(const sym_element& x) { return inner_total(x) + x.stage.finite_part; }

term_ptr shift_term(const term_ptr& t, std::int64_t by) {
  term_ptr out = t;
  for (std::int64_t i = 0; i < by; ++i) out = term_apply({.shift = 1, .level_map = {}}, out);
  return out;
}

bool is_zero_stage(small_ordinal s) { return s.omega_coeff == 0 && s.finite_part == 0; }

// strictly monotone renaming that widens each inner zone of x to the frame
// sizes and keeps within-zone positions (the diagonal-mode alignment)
term_ptr widen_zones(const sym_element& x, const std::vector<std::int64_t>& frame) {
  std::vector<std::pair<int, int>> map;
  std::int64_t src_base = 0, dst_base = 0;
  for (std::size_t z = 0; z < x.inner.size(); ++z) {
    for (std::int64_t p = 1; p <= x.inner[z]; ++p)
      map.push_back({static_cast<int>(src_base + p), static_cast<int>(dst_base + p)});
    src_base += x.inner[z];
    dst_base += frame[z];
  }
  for (std::int64_t p = 1; p <= x.stage.finite_part; ++p)
    map.push_back({static_cast<int>(src_base + p), static_cast<int>(dst_base + p)});
  return term_apply({.shift = 0, .level_map = std::move(map)}, x.payload);
}

}  // namespace

omega_system::omega_system(rep_ultrafilter u, small_ordinal alpha, embed_mode mode,
                           small_ordinal cap)
    : u_(std::move(u)), alpha_(alpha), mode_(mode), cap_(cap) {
  if (u_.kind() != uf_kind::profinite)
    throw malformed_input("the symbolic carrier needs a profinite ultrafilter");
  if (ord_compare(alpha_, cap_) > 0)
    throw stage_cap_exceeded("rank " + to_string(alpha_) + " is beyond the cap " +
                             to_string(cap_));
}

sym_element omega_system::element(small_ordinal stage, const term_ptr& t) const {
  if (ord_compare(stage, alpha_) > 0)
    throw stage_cap_exceeded("stage " + to_string(stage) + " is beyond the system rank");
  std::int64_t r = term_rank(t);
  if (is_zero_stage(stage)) {
    if (r > 0) throw rank_too_high("stage 0 carries rank-0 payloads only");
    return {stage, {}, t};
  }
  if (ord_is_limit(stage)) {
    sym_element rep{ord_finite(r), {}, t};
    return normalize_thread(rep, stage);
  }
  std::int64_t o = stage.finite_part;
  if (stage.omega_coeff == 0) {
    if (r > o) throw rank_too_high("rank " + std::to_string(r) + " payload at finite stage " +
                                   std::to_string(o));
    return {stage, {}, t};
  }
  std::vector<std::int64_t> inner(static_cast<std::size_t>(stage.omega_coeff), 0);
  inner[0] = std::max<std::int64_t>(0, r - o);
  return {stage, std::move(inner), t};
}

term_ptr omega_system::descend_term(term_ptr t) const {
  if (term_uses_level(t, 1)) t = term_normalize(term_resolve_typical(t, u_));
  if (term_uses_level(t, 1))
    throw std::logic_error("descent attempted on a level-1-essential payload");
  if (term_rank(t) == 0) return t;
  return term_apply({.shift = -1, .level_map = {}}, t);
}

sym_element omega_system::normalize_thread(const sym_element& x, small_ordinal lambda) const {
  if (!ord_is_limit(lambda)) throw not_a_limit(to_string(lambda) + " is not a limit stage");
  if (ord_compare(x.stage, lambda) >= 0)
    throw malformed_input("thread representative must sit below the limit");
  term_ptr t = term_normalize(x.payload);
  small_ordinal st = x.stage;
  std::vector<std::int64_t> inner = x.inner;

  if (mode_ == embed_mode::skew) {
    // any representative above a lower limit trades for a finite one with the
    // same payload; then strip the bottom level while it is inessential mod u
    if (st.omega_coeff > 0) {
      st = ord_finite(std::accumulate(inner.begin(), inner.end(), std::int64_t{0}) +
                      st.finite_part);
      inner.clear();
    }
    while (st.finite_part > 0) {
      int r = term_rank(t);
      if (r == 0) {
        st = ord_finite(0);
        break;
      }
      if (term_typical_form(t, u_, r)[1] != 0) break;
      t = descend_term(t);
      st = ord_finite(st.finite_part - 1);
    }
    return {st, {}, t};
  }

  // diagonal mode: embeddings are the identity, so a thread descends exactly
  // when its top coordinate is inessential
  while (!is_zero_stage(st)) {
    std::int64_t top = std::accumulate(inner.begin(), inner.end(), std::int64_t{0}) +
                       st.finite_part;
    int r = term_rank(t);
    bool used = top <= r && term_typical_form(t, u_, r)[static_cast<std::size_t>(top)] != 0;
    if (used) break;
    if (term_uses_level(t, static_cast<int>(top)))
      t = term_normalize(term_resolve_typical(t, u_));
    st = {st.omega_coeff, st.finite_part - 1};
    while (ord_is_limit(st)) {
      st = {st.omega_coeff - 1, inner.back()};
      inner.pop_back();
    }
  }
  return {st, std::move(inner), t};
}

sym_element omega_system::successor_step(const sym_element& x) const {
  small_ordinal next = ord_succ(x.stage);
  if (is_zero_stage(x.stage)) return {next, {}, x.payload};  // e_01 is the diagonal
  if (mode_ == embed_mode::diagonal) return {next, x.inner, x.payload};
  // skew: promote the top level of the highest nonempty inner zone, or shift
  std::vector<std::int64_t> inner = x.inner;
  for (std::size_t z = inner.size(); z-- > 0;) {
    if (inner[z] > 0) {
      inner[z] -= 1;
      return {next, std::move(inner), x.payload};
    }
  }
  return {next, std::move(inner), shift_term(x.payload, 1)};
}

sym_element omega_system::leave_limit_with(const sym_element& rep, small_ordinal lambda) const {
  if (!ord_is_limit(lambda)) throw not_a_limit(to_string(lambda) + " is not a limit stage");
  if (ord_compare(rep.stage, lambda) >= 0 || ord_is_limit(rep.stage))
    throw invalid_representative("representative must live at a successor stage below " +
                                 to_string(lambda));
  sym_element h = rep;
  if (is_zero_stage(h.stage)) h = successor_step(h);
  std::vector<std::int64_t> inner = h.inner;
  std::int64_t o = h.stage.finite_part;
  inner.push_back(mode_ == embed_mode::skew ? o - 1 : o);
  inner.resize(static_cast<std::size_t>(lambda.omega_coeff), 0);
  return {ord_succ(lambda), std::move(inner), h.payload};
}

sym_element omega_system::leave_limit(const sym_element& x, small_ordinal lambda) const {
  return leave_limit_with(normalize_thread(x, lambda), lambda);
}

sym_element omega_system::embed(small_ordinal beta, small_ordinal gamma,
                                const sym_element& x) const {
  if (ord_compare(gamma, alpha_) > 0)
    throw stage_cap_exceeded("stage " + to_string(gamma) + " is beyond the system rank " +
                             to_string(alpha_));
  if (ord_compare(beta, gamma) > 0) throw malformed_input("embeddings run upward");
  if (ord_is_limit(beta) ? ord_compare(x.stage, beta) >= 0 : x.stage != beta)
    throw malformed_input("payload does not live at stage " + to_string(beta));
  if (term_rank(x.payload) > capacity(x))
    throw rank_too_high("payload rank exceeds the stage frame");

  sym_element cur = x;
  small_ordinal s = beta;
  while (ord_compare(s, gamma) < 0) {
    if (ord_is_limit(s)) {
      cur = leave_limit(cur, s);
      s = ord_succ(s);
      continue;
    }
    small_ordinal lam{s.omega_coeff + 1, 0};
    if (ord_compare(lam, gamma) <= 0) {
      s = lam;  // injection into the limit: the representative is unchanged
      continue;
    }
    while (s.finite_part < gamma.finite_part) {
      cur = successor_step(cur);
      s = ord_succ(s);
    }
  }
  cur.payload = term_normalize(cur.payload);
  if (ord_is_limit(gamma)) cur = normalize_thread(cur, gamma);
  return cur;
}

order_verdict omega_system::compare(small_ordinal stage, const sym_element& x,
                                    const sym_element& y) const {
  if (ord_is_limit(stage)) {
    sym_element a = normalize_thread(x, stage);
    sym_element b = normalize_thread(y, stage);
    small_ordinal common = std::max(a.stage, b.stage);
    if (is_zero_stage(common))
      return term_compare(a.payload, b.payload, u_, 0);
    a = embed(a.stage, common, a);
    b = embed(b.stage, common, b);
    return compare(common, a, b);
  }
  if (x.stage != stage || y.stage != stage)
    throw malformed_input("comparison needs elements of the stage");
  if (mode_ == embed_mode::skew) {
    std::int64_t jx = inner_total(x), jy = inner_total(y), j = std::max(jx, jy);
    term_ptr tx = shift_term(x.payload, j - jx);
    term_ptr ty = shift_term(y.payload, j - jy);
    return term_compare(tx, ty, u_, static_cast<int>(j + stage.finite_part));
  }
  std::vector<std::int64_t> frame(x.inner.size(), 0);
  for (std::size_t z = 0; z < frame.size(); ++z) frame[z] = std::max(x.inner[z], y.inner[z]);
  std::int64_t rank = std::accumulate(frame.begin(), frame.end(), std::int64_t{0}) +
                      stage.finite_part;
  return term_compare(widen_zones(x, frame), widen_zones(y, frame), u_,
                      static_cast<int>(rank));
}

bool omega_system::equal(small_ordinal stage, const sym_element& x,
                         const sym_element& y) const {
  return compare(stage, x, y) == order_verdict::equal;
}

std::string omega_system::describe(const sym_element& x) const {
  std::string out = "stage " + to_string(x.stage);
  if (!x.inner.empty()) {
    out += " inner [";
    for (std::size_t z = 0; z < x.inner.size(); ++z)
      out += (z ? "," : "") + std::to_string(x.inner[z]);
    out += "]";
  }
  return out + " payload " + term_to_string(x.payload);
}

omega_system build_skew_system(const omega_carrier& c, small_ordinal alpha, embed_mode mode,
                               small_ordinal cap) {
  return omega_system(c.u, alpha, mode, cap);
}

finite_system build_skew_system(const finite_carrier& c, small_ordinal alpha, embed_mode mode,
                                small_ordinal cap) {
  return finite_system(c.model, c.index_size, c.point, alpha, mode, 8, cap);
}

// ---------------------------------------------------------------------------
// finite carrier

namespace {

std::vector<std::int64_t> diagonal_map(const finite_structure& a, std::int64_t index_size,
                                       std::int64_t point) {
  ultrapower up = finite_ultrapower(a, index_size, point);
  std::vector<std::int64_t> d(static_cast<std::size_t>(a.size()));
  for (std::int64_t m = 0; m < a.size(); ++m)
    d[static_cast<std::size_t>(m)] =
        up.class_of(std::vector<std::int64_t>(static_cast<std::size_t>(index_size), m));
  return d;
}

std::vector<std::int64_t> invert_map(const std::vector<std::int64_t>& f, std::int64_t size,
                                     const std::string& what) {
  std::vector<std::int64_t> inv(static_cast<std::size_t>(size), -1);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] < 0 || f[x] >= size || inv[static_cast<std::size_t>(f[x])] != -1)
      throw std::logic_error(what + " is not a bijection");
    inv[static_cast<std::size_t>(f[x])] = static_cast<std::int64_t>(x);
  }
  for (std::int64_t v : inv)
    if (v == -1) throw std::logic_error(what + " is not a bijection");
  return inv;
}

}  // namespace

finite_system::finite_system(finite_structure model, std::int64_t index_size,
                             std::int64_t point, small_ordinal alpha, embed_mode mode,
                             std::int64_t finite_depth, small_ordinal cap)
    : index_size_(index_size), point_(point), alpha_(alpha), mode_(mode) {
  if (index_size_ < 1 || point_ < 0 || point_ >= index_size_)
    throw malformed_input("the principal point must lie in the index set");
  if (ord_compare(alpha_, cap) > 0)
    throw stage_cap_exceeded("rank " + to_string(alpha_) + " is beyond the cap");
  if (alpha_.omega_coeff >= 2)
    throw stage_cap_exceeded("the finite carrier materializes stages up to w+8 only");
  model.validate();
  std::int64_t fd = std::max(finite_depth, alpha_.is_finite() ? alpha_.finite_part : 0);
  stages_.push_back(std::move(model));
  for (std::int64_t k = 0; k < fd; ++k) {
    ultrapower up = finite_ultrapower(stages_.back(), index_size_, point_);
    if (k == 0 || mode_ == embed_mode::diagonal)
      succ_.push_back(diagonal_map(stages_[static_cast<std::size_t>(k)], index_size_, point_));
    else
      succ_.push_back(lift_map(succ_.back(), index_size_, point_,
                               stages_[static_cast<std::size_t>(k) - 1],
                               stages_[static_cast<std::size_t>(k)]));
    stages_.push_back(up.quotient);
  }
  if (alpha_.omega_coeff >= 1) {
    std::int64_t hd = alpha_.finite_part;
    hi_stages_.push_back(stages_[0]);  // threads normalize onto the base
    for (std::int64_t k = 0; k < hd; ++k) {
      ultrapower up = finite_ultrapower(hi_stages_.back(), index_size_, point_);
      if (k == 0 || mode_ == embed_mode::diagonal)
        hi_succ_.push_back(
            diagonal_map(hi_stages_[static_cast<std::size_t>(k)], index_size_, point_));
      else
        hi_succ_.push_back(lift_map(hi_succ_.back(), index_size_, point_,
                                    hi_stages_[static_cast<std::size_t>(k) - 1],
                                    hi_stages_[static_cast<std::size_t>(k)]));
      hi_stages_.push_back(up.quotient);
    }
  }
}

const finite_structure& finite_system::stage_model(small_ordinal stage) const {
  if (stage.omega_coeff == 0) {
    if (stage.finite_part >= static_cast<std::int64_t>(stages_.size()))
      throw stage_cap_exceeded("stage " + to_string(stage) + " is not materialized");
    return stages_[static_cast<std::size_t>(stage.finite_part)];
  }
  if (stage.omega_coeff == 1 &&
      stage.finite_part < static_cast<std::int64_t>(hi_stages_.size()))
    return hi_stages_[static_cast<std::size_t>(stage.finite_part)];
  throw stage_cap_exceeded("stage " + to_string(stage) + " is not materialized");
}

const std::vector<std::int64_t>& finite_system::succ_map(small_ordinal stage) const {
  if (stage.omega_coeff == 0) {
    if (stage.finite_part >= static_cast<std::int64_t>(succ_.size()))
      throw stage_cap_exceeded("no successor map at stage " + to_string(stage));
    return succ_[static_cast<std::size_t>(stage.finite_part)];
  }
  if (stage.omega_coeff == 1 && stage.finite_part < static_cast<std::int64_t>(hi_succ_.size()))
    return hi_succ_[static_cast<std::size_t>(stage.finite_part)];
  throw stage_cap_exceeded("no successor map at stage " + to_string(stage));
}

std::int64_t finite_system::embed(small_ordinal beta, small_ordinal gamma,
                                  std::int64_t x) const {
  if (ord_compare(beta, gamma) > 0) throw malformed_input("embeddings run upward");
  if (ord_compare(gamma, alpha_) > 0)
    throw stage_cap_exceeded("stage " + to_string(gamma) + " is beyond the system rank");
  if (x < 0 || x >= stage_model(beta).size())
    throw malformed_input("element out of range at stage " + to_string(beta));
  std::int64_t cur = x;
  small_ordinal s = beta;
  while (ord_compare(s, gamma) < 0) {
    if (s.omega_coeff == 0 && gamma.omega_coeff >= 1) {
      // into the limit: the thread of a stage element normalizes to the base
      for (std::int64_t k = s.finite_part; k-- > 0;) {
        std::vector<std::int64_t> inv =
            invert_map(succ_[static_cast<std::size_t>(k)],
                       stages_[static_cast<std::size_t>(k)].size(), "successor embedding");
        cur = inv[static_cast<std::size_t>(cur)];
      }
      s = ord_omega();
      continue;
    }
    cur = succ_map(s)[static_cast<std::size_t>(cur)];
    s = ord_succ(s);
  }
  return cur;
}

std::vector<std::int64_t> finite_system::collapse_iso(small_ordinal stage) const {
  const finite_structure& m = stage_model(stage);
  std::vector<std::int64_t> e0s(static_cast<std::size_t>(base().size()));
  for (std::int64_t v = 0; v < base().size(); ++v)
    e0s[static_cast<std::size_t>(v)] = embed(ord_finite(0), stage, v);
  return invert_map(e0s, m.size(), "e_{0," + to_string(stage) + "}");
}

bool finite_system::successor_is_diagonal(std::int64_t finite_stage) const {
  const std::vector<std::int64_t>& lifted = succ_map(ord_finite(finite_stage));
  return lifted == diagonal_map(stages_[static_cast<std::size_t>(finite_stage)], index_size_,
                                point_);
}

// ---------------------------------------------------------------------------
// audits

audit_report check_coherence(const omega_system& sys, const std::vector<term_ptr>& payloads,
                             const std::vector<std::array<small_ordinal, 3>>& triples) {
  audit_report rep;
  for (const auto& tr : triples) {
    for (const term_ptr& t : payloads) {
      std::int64_t r = term_rank(t);
      if (tr[0].omega_coeff == 0 && r > tr[0].finite_part) continue;
      sym_element x = sys.element(tr[0], t);
      sym_element two = sys.embed(tr[1], tr[2], sys.embed(tr[0], tr[1], x));
      sym_element one = sys.embed(tr[0], tr[2], x);
      bool ok = sys.equal(tr[2], two, one);
      rep.add("coherence (" + to_string(tr[0]) + "," + to_string(tr[1]) + "," +
                  to_string(tr[2]) + ") on " + term_to_string(t),
              ok, ok ? "" : sys.describe(two) + " vs " + sys.describe(one));
    }
  }
  return rep;
}

audit_report check_coherence(const finite_system& sys,
                             const std::vector<std::array<small_ordinal, 3>>& triples) {
  audit_report rep;
  for (const auto& tr : triples) {
    for (std::int64_t x = 0; x < sys.stage_model(tr[0]).size(); ++x) {
      std::int64_t two = sys.embed(tr[1], tr[2], sys.embed(tr[0], tr[1], x));
      std::int64_t one = sys.embed(tr[0], tr[2], x);
      rep.add("coherence (" + to_string(tr[0]) + "," + to_string(tr[1]) + "," +
                  to_string(tr[2]) + ") on element " + std::to_string(x),
              two == one,
              two == one ? "" : std::to_string(two) + " vs " + std::to_string(one));
    }
  }
  return rep;
}

audit_report check_welldef_limit(const omega_system& sys, const sym_element& thread,
                                 small_ordinal gamma, const std::vector<sym_element>& choices) {
  if (!ord_is_limit(gamma)) throw not_a_limit(to_string(gamma) + " is not a limit stage");
  audit_report rep;
  std::vector<sym_element> images;
  for (const sym_element& h : choices) {
    if (ord_is_limit(h.stage) || ord_compare(h.stage, gamma) >= 0)
      throw invalid_representative("representative " + sys.describe(h) +
                                   " is not at a successor stage below " + to_string(gamma));
    if (!sys.equal(gamma, thread, h))
      throw invalid_representative("representative " + sys.describe(h) +
                                   " does not lie on the thread");
    images.push_back(sys.leave_limit_with(h, gamma));
  }
  sym_element canonical = sys.embed(gamma, ord_succ(gamma), thread);
  for (std::size_t i = 0; i < images.size(); ++i) {
    bool ok = sys.equal(ord_succ(gamma), images[i], canonical);
    rep.add("welldef at " + to_string(gamma) + ": choice " + std::to_string(i) +
                " matches the canonical selection",
            ok, ok ? "" : sys.describe(images[i]));
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      bool agree = sys.equal(ord_succ(gamma), images[i], images[j]);
      rep.add("welldef at " + to_string(gamma) + ": images of choices " + std::to_string(i) +
                  " and " + std::to_string(j) + " agree",
              agree,
              agree ? "" : sys.describe(images[i]) + " vs " + sys.describe(images[j]));
    }
  }
  return rep;
}

std::vector<sym_element> default_rep_choices(const omega_system& sys,
                                             const sym_element& thread, small_ordinal gamma,
                                             int count) {
  sym_element base = sys.normalize_thread(thread, gamma);
  if (is_zero_stage(base.stage)) base = sys.embed(base.stage, ord_finite(1), base);
  std::vector<sym_element> out;
  std::int64_t b0 = base.stage.finite_part;
  for (int k = 0; k < count; ++k) {
    if (gamma.omega_coeff >= 2 && k % 2 == 1) {
      // a representative taken past the lower limit
      out.push_back({{1, k}, {b0}, shift_term(base.payload, k)});
    } else {
      out.push_back({ord_finite(b0 + k), {}, shift_term(base.payload, k)});
    }
  }
  return out;
}

limit_view::limit_view(const omega_system& sys, small_ordinal lambda)
    : sys_(&sys), lambda_(lambda) {
  if (!ord_is_limit(lambda_)) throw not_a_limit(to_string(lambda_) + " is not a limit stage");
  if (ord_compare(lambda_, sys.alpha()) > 0)
    throw stage_cap_exceeded("limit " + to_string(lambda_) + " is beyond the system rank");
}

sym_element limit_view::inject(small_ordinal stage, const term_ptr& payload) const {
  if (ord_compare(stage, lambda_) >= 0)
    throw malformed_input("threads come from stages below the limit");
  return sys_->normalize_thread(sys_->element(stage, payload), lambda_);
}

bool limit_view::equal(const sym_element& x, const sym_element& y) const {
  return sys_->equal(lambda_, x, y);
}

order_verdict limit_view::compare(const sym_element& x, const sym_element& y) const {
  return sys_->compare(lambda_, x, y);
}

limit_view direct_limit(const omega_system& sys, small_ordinal lambda) {
  return limit_view(sys, lambda);
}

// ---------------------------------------------------------------------------
// chain recognition

namespace {

// first atomic-formula disagreement between f-images, or the failure of f to
// be a bijection; empty when f is an isomorphism
std::string iso_defect(const std::vector<std::int64_t>& f, const finite_structure& a,
                       const finite_structure& b) {
  if (a.size() != b.size()) return "universe sizes differ";
  std::vector<bool> hit(static_cast<std::size_t>(b.size()), false);
  for (std::int64_t x = 0; x < a.size(); ++x) {
    std::int64_t y = f[static_cast<std::size_t>(x)];
    if (y < 0 || y >= b.size() || hit[static_cast<std::size_t>(y)])
      return "element " + std::to_string(x) + " breaks bijectivity";
    hit[static_cast<std::size_t>(y)] = true;
  }
  for (const auto& [name, arity] : a.sig().relations) {
    std::vector<std::int64_t> tup(static_cast<std::size_t>(arity), 0);
    while (true) {
      std::vector<std::int64_t> img(tup.size());
      for (std::size_t i = 0; i < tup.size(); ++i) img[i] = f[static_cast<std::size_t>(tup[i])];
      if (a.rel_holds(name, tup) != b.rel_holds(name, img)) {
        std::string w = name + "(";
        for (std::size_t i = 0; i < tup.size(); ++i)
          w += (i ? "," : "") + std::to_string(tup[i]);
        return w + ")";
      }
      std::size_t i = 0;
      for (; i < tup.size(); ++i) {
        if (++tup[i] < a.size()) break;
        tup[i] = 0;
      }
      if (i == tup.size()) break;
    }
  }
  for (const auto& [name, arity] : a.sig().functions) {
    std::vector<std::int64_t> tup(static_cast<std::size_t>(arity), 0);
    while (true) {
      std::vector<std::int64_t> img(tup.size());
      for (std::size_t i = 0; i < tup.size(); ++i) img[i] = f[static_cast<std::size_t>(tup[i])];
      if (f[static_cast<std::size_t>(a.fun_value(name, tup))] != b.fun_value(name, img))
        return name + " at a sampled tuple";
      std::size_t i = 0;
      for (; i < tup.size(); ++i) {
        if (++tup[i] < a.size()) break;
        tup[i] = 0;
      }
      if (i == tup.size()) break;
    }
  }
  for (const std::string& name : a.sig().constants)
    if (f[static_cast<std::size_t>(a.constant(name))] != b.constant(name))
      return "constant " + name;
  return "";
}

}  // namespace

finite_chain collapse_chain(const finite_structure& m, std::int64_t index_size,
                            std::int64_t point, int length) {
  finite_chain chain;
  chain.index_size = index_size;
  chain.point = point;
  chain.models.assign(static_cast<std::size_t>(length) + 1, m);
  ultrapower up = finite_ultrapower(m, index_size, point);
  chain.iotas.assign(static_cast<std::size_t>(length), up.collapse);
  return chain;
}

nlohmann::json chain_to_json(const finite_chain& chain) {
  nlohmann::json j;
  j["index_size"] = chain.index_size;
  j["point"] = chain.point;
  j["models"] = nlohmann::json::array();
  for (const finite_structure& m : chain.models) j["models"].push_back(m.to_json());
  j["iotas"] = chain.iotas;
  return j;
}

finite_chain chain_from_json(const nlohmann::json& j) {
  finite_chain chain;
  chain.index_size = j.at("index_size").get<std::int64_t>();
  chain.point = j.at("point").get<std::int64_t>();
  for (const nlohmann::json& mj : j.at("models"))
    chain.models.push_back(finite_structure::from_json(mj));
  chain.iotas = j.at("iotas").get<std::vector<std::vector<std::int64_t>>>();
  return chain;
}

chain_result verify_chain(const finite_chain& chain) {
  if (chain.models.empty() || chain.models.size() != chain.iotas.size() + 1)
    throw malformed_input("a chain needs models M_0..M_k and one iota per step");
  std::int64_t k = static_cast<std::int64_t>(chain.iotas.size());
  audit_report rep;

  for (std::int64_t b = 0; b < k; ++b) {
    const finite_structure& a = chain.models[static_cast<std::size_t>(b)];
    const finite_structure& bb = chain.models[static_cast<std::size_t>(b) + 1];
    if (a.size() > bb.size())
      throw diagram_violation("inclusion " + std::to_string(b), "universe shrinks");
    std::vector<std::int64_t> incl(static_cast<std::size_t>(a.size()));
    for (std::int64_t x = 0; x < a.size(); ++x) incl[static_cast<std::size_t>(x)] = x;
    if (!is_homomorphism(incl, a, bb))
      throw diagram_violation("inclusion " + std::to_string(b), "atomic formulas disagree");
    rep.add("inclusion M_" + std::to_string(b) + " into M_" + std::to_string(b + 1), true);
  }

  std::vector<ultrapower> ups;
  for (std::int64_t b = 0; b < k; ++b)
    ups.push_back(finite_ultrapower(chain.models[static_cast<std::size_t>(b)],
                                    chain.index_size, chain.point));

  for (std::int64_t b = 0; b < k; ++b) {
    const auto& iota = chain.iotas[static_cast<std::size_t>(b)];
    const finite_structure& target = chain.models[static_cast<std::size_t>(b) + 1];
    if (static_cast<std::int64_t>(iota.size()) != ups[static_cast<std::size_t>(b)].quotient.size())
      throw diagram_violation("iota " + std::to_string(b), "domain size mismatch");
    std::string defect =
        iso_defect(iota, ups[static_cast<std::size_t>(b)].quotient, target);
    if (!defect.empty()) throw diagram_violation("iota " + std::to_string(b), defect);
    rep.add("iota_" + std::to_string(b) + " is an isomorphism", true);
  }

  const finite_structure& m0 = chain.models[0];
  for (std::int64_t m = 0; m < m0.size(); ++m) {
    std::int64_t d = ups[0].class_of(
        std::vector<std::int64_t>(static_cast<std::size_t>(chain.index_size), m));
    if (chain.iotas[0][static_cast<std::size_t>(d)] != m)
      throw diagram_violation("triangle", "element " + std::to_string(m));
  }
  rep.add("triangle iota_0 . d = inclusion", true);

  for (std::int64_t b = 0; b + 1 < k; ++b) {
    const finite_structure& a = chain.models[static_cast<std::size_t>(b)];
    std::vector<std::int64_t> incl(static_cast<std::size_t>(a.size()));
    for (std::int64_t x = 0; x < a.size(); ++x) incl[static_cast<std::size_t>(x)] = x;
    std::vector<std::int64_t> lifted =
        lift_map(incl, chain.index_size, chain.point, a,
                 chain.models[static_cast<std::size_t>(b) + 1]);
    for (std::int64_t x = 0; x < ups[static_cast<std::size_t>(b)].quotient.size(); ++x) {
      std::int64_t lhs = chain.iotas[static_cast<std::size_t>(b) + 1]
                                    [static_cast<std::size_t>(lifted[static_cast<std::size_t>(x)])];
      std::int64_t rhs = chain.iotas[static_cast<std::size_t>(b)][static_cast<std::size_t>(x)];
      if (lhs != rhs)
        throw diagram_violation("square " + std::to_string(b), "class " + std::to_string(x));
    }
    rep.add("square " + std::to_string(b) + " commutes", true);
  }

  finite_system fs(m0, chain.index_size, chain.point, ord_finite(k), embed_mode::skew, k);
  chain_result out;
  std::vector<std::int64_t> phi(static_cast<std::size_t>(m0.size()));
  for (std::int64_t x = 0; x < m0.size(); ++x) phi[static_cast<std::size_t>(x)] = x;
  out.isos.push_back(phi);
  for (std::int64_t b = 0; b < k; ++b) {
    std::vector<std::int64_t> lifted =
        lift_map(phi, chain.index_size, chain.point, fs.stage_model(ord_finite(b)),
                 chain.models[static_cast<std::size_t>(b)]);
    std::vector<std::int64_t> next(lifted.size());
    for (std::size_t x = 0; x < lifted.size(); ++x)
      next[x] = chain.iotas[static_cast<std::size_t>(b)][static_cast<std::size_t>(lifted[x])];
    std::string defect = iso_defect(next, fs.stage_model(ord_finite(b + 1)),
                                    chain.models[static_cast<std::size_t>(b) + 1]);
    if (!defect.empty())
      throw diagram_violation("constructed iso phi_" + std::to_string(b + 1), defect);
    rep.add("phi_" + std::to_string(b + 1) + " is an isomorphism", true);
    phi = next;
    out.isos.push_back(phi);
  }
  out.checks = std::move(rep);
  return out;
}

chain_result verify_chain(const omega_system& sys, int depth,
                          const std::vector<term_ptr>& sample, int perturb_stage,
                          const term_ptr& perturb_at) {
  if (depth < 2) throw malformed_input("the self-chain needs depth at least 2");
  if (ord_compare(ord_finite(depth), sys.alpha()) > 0)
    throw stage_cap_exceeded("chain depth exceeds the system rank");
  std::vector<term_ptr> pool = sample;
  if (pool.empty()) {
    for (std::int64_t m = 0; m < 10; ++m) pool.push_back(t_const(m));
    pool.push_back(t_var(1));
    pool.push_back(t_var(2));
    pool.push_back(t_sum(t_var(1), t_const(1)));
    pool.push_back(t_scale(2, t_var(1)));
    pool.push_back(t_sum(t_var(2), t_var(1)));
    pool.push_back(t_sum(t_scale(3, t_var(2)), t_const(2)));
    rng gen(2026);
    for (int i = 0; i < 50; ++i) pool.push_back(random_term(gen, 2, 2, 8));
  }
  audit_report rep;

  auto iota = [&](int b, const sym_element& x) -> sym_element {
    if (b == perturb_stage && perturb_at &&
        term_rank(perturb_at) <= b + 1 &&
        sys.equal(ord_finite(b + 1), x, sys.element(ord_finite(b + 1), perturb_at)))
      return sys.element(ord_finite(b + 1), t_sum(x.payload, t_const(1)));
    return x;
  };

  for (std::int64_t m = 0; m < 10; ++m) {
    sym_element d = sys.embed(ord_finite(0), ord_finite(1),
                              sys.element(ord_finite(0), t_const(m)));
    if (!sys.equal(ord_finite(1), iota(0, d), sys.element(ord_finite(1), t_const(m))))
      throw diagram_violation("triangle", "constant " + std::to_string(m));
  }
  rep.add("triangle iota_0 . d = inclusion", true);

  for (int b = 0; b + 2 <= depth; ++b) {
    for (const term_ptr& t : pool) {
      if (term_rank(t) > b + 1) continue;
      sym_element x = sys.element(ord_finite(b + 1), t);
      sym_element lifted = sys.embed(ord_finite(b + 1), ord_finite(b + 2), x);
      // the successor embedding really is the lift of the inclusion: slicewise
      for (std::int64_t n = 0; n < 4; ++n) {
        sym_element left =
            sys.element(ord_finite(b + 1), term_slice(lifted.payload, b + 2, n));
        sym_element right = sys.embed(
            ord_finite(b), ord_finite(b + 1),
            sys.element(ord_finite(b), term_slice(t, b + 1, n)));
        if (!sys.equal(ord_finite(b + 1), left, right))
          throw diagram_violation("square " + std::to_string(b) + " lift law",
                                  term_to_string(t) + " sliced at " + std::to_string(n));
      }
      sym_element lhs = iota(b + 1, lifted);
      sym_element rhs = sys.embed(ord_finite(b + 1), ord_finite(b + 2), iota(b, x));
      if (!sys.equal(ord_finite(b + 2), lhs, rhs))
        throw diagram_violation("square " + std::to_string(b), term_to_string(t));
    }
    rep.add("square " + std::to_string(b) + " commutes on the sample", true);
  }

  for (int b = 0; b + 1 <= depth; ++b) {
    for (const term_ptr& t : pool) {
      if (term_rank(t) > b + 1) continue;
      sym_element x = sys.element(ord_finite(b + 1), t);
      sym_element y = sys.element(ord_finite(b + 1), t_sum(t, t_const(1)));
      if (sys.compare(ord_finite(b + 1), iota(b, x), iota(b, y)) != order_verdict::less)
        throw diagram_violation("iota " + std::to_string(b) + " order",
                                term_to_string(t));
      if (!sys.equal(ord_finite(b + 1), iota(b, x), x))
        throw diagram_violation("constructed iso phi_" + std::to_string(b + 1),
                                term_to_string(t));
    }
    rep.add("iota_" + std::to_string(b) + " preserves the order and phi_" +
                std::to_string(b + 1) + " matches the stage",
            true);
  }
  return {std::move(rep), {}};
}

// ---------------------------------------------------------------------------
// separation witness and finite collapse

remark1_report remark1_witness(const rep_ultrafilter& u) {
  if (u.kind() != uf_kind::profinite)
    throw malformed_input("the separation witness needs a profinite ultrafilter");
  remark1_report out;
  out.witness_term = t_var(1);
  omega_system skew(u, ord_finite(2), embed_mode::skew);
  omega_system diag(u, ord_finite(2), embed_mode::diagonal);
  out.skew_image =
      skew.embed(ord_finite(1), ord_finite(2), skew.element(ord_finite(1), out.witness_term))
          .payload;
  out.diagonal_image =
      diag.embed(ord_finite(1), ord_finite(2), diag.element(ord_finite(1), out.witness_term))
          .payload;
  compare_report cmp = term_compare_report(out.skew_image, out.diagonal_image, u, 2);
  out.verdict = cmp.verdict;
  out.equality_set = cmp.equal;
  out.checks.add("skew successor image is v2", term_equal(out.skew_image, t_var(2)),
                 term_to_string(out.skew_image));
  out.checks.add("diagonal image is v1", term_equal(out.diagonal_image, t_var(1)),
                 term_to_string(out.diagonal_image));
  out.checks.add("images differ mod u", cmp.verdict != order_verdict::equal,
                 to_string(cmp.verdict));
  out.checks.add("equality set is empty", cmp.equal.is_empty(), cmp.equal.to_string());
  out.separated = out.checks.all_pass();
  return out;
}

remark1_report remark1_witness(const finite_carrier& c) {
  finite_system skew(c.model, c.index_size, c.point, ord_finite(2), embed_mode::skew, 2);
  finite_system diag(c.model, c.index_size, c.point, ord_finite(2), embed_mode::diagonal, 2);
  remark1_report out;
  out.equality_set = periodic_set::full_set();
  bool all_agree = true;
  for (std::int64_t x = 0; x < skew.stage_model(ord_finite(1)).size(); ++x) {
    std::int64_t a = skew.embed(ord_finite(1), ord_finite(2), x);
    std::int64_t b = diag.embed(ord_finite(1), ord_finite(2), x);
    bool agree = a == b;
    all_agree = all_agree && agree;
    out.checks.add("lifted and diagonal images of element " + std::to_string(x) + " agree",
                   agree, std::to_string(a) + " vs " + std::to_string(b));
  }
  out.separated = !all_agree;
  return out;
}

audit_report check_finite_collapse(const finite_system& sys) {
  audit_report rep;
  std::vector<small_ordinal> stages;
  for (std::int64_t k = 0; k <= sys.finite_depth(); ++k) stages.push_back(ord_finite(k));
  for (std::int64_t k = 0; k <= sys.high_depth(); ++k) stages.push_back({1, k});
  for (small_ordinal s : stages) {
    std::vector<std::int64_t> phi = sys.collapse_iso(s);
    std::string defect = iso_defect(phi, sys.stage_model(s), sys.base());
    rep.add("stage " + to_string(s) + " collapses onto the base", defect.empty(), defect);
  }
  return rep;
}

}  // namespace skewlim
