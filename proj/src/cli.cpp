#include "skewlim/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "skewlim/epfunc.hpp"
#include "skewlim/errors.hpp"
#include "skewlim/logic.hpp"
#include "skewlim/ordinal.hpp"
#include "skewlim/periodic.hpp"
#include "skewlim/report.hpp"
#include "skewlim/rkorder.hpp"
#include "skewlim/rng.hpp"
#include "skewlim/skewlimit.hpp"
#include "skewlim/term.hpp"
#include "skewlim/ultrafilter.hpp"

namespace skewlim {

namespace {

struct run_config {
  std::string set_text;
  std::string u_text = "profinite:0";
  bool u_given = false;
  std::int64_t point = 0;
  std::string carrier = "omega";
  std::string rank_text;
  int k = 1;
  std::int64_t samples = -1;
  std::int64_t choices = 3;
  std::uint64_t seed = 2026;
  std::int64_t bound = default_rk_bound;
  std::int64_t period_cap = default_period_cap;
  std::string format = "json";
  bool format_given = false;
  std::string out_path;
  std::vector<std::string> rest;
};

void emit(const run_config& cfg, std::ostream& out, const std::string& doc) {
  if (cfg.out_path.empty()) {
    out << doc;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw malformed_input("cannot open output file " + cfg.out_path);
  file << doc;
}

int finish(const run_config& cfg, std::ostream& out, const audit_report& rep) {
  emit(cfg, out, rep.to_json().dump(2) + "\n");
  return rep.all_pass() ? 0 : 1;
}

// the finite carrier used by canned commands: three points, a cyclic
// relation, a successor-like function, one named point
finite_structure canned_model() {
  signature sig{{{"R", 2}}, {{"f", 1}}, {"c"}};
  finite_structure m(3, sig);
  m.set_relation("R", {{0, 1}, {1, 2}, {0, 2}});
  m.set_function("f", {{{0}, 1}, {{1}, 2}, {{2}, 0}});
  m.set_constant("c", 1);
  return m;
}

small_ordinal rank_or(const run_config& cfg, const std::string& fallback) {
  return ord_parse(cfg.rank_text.empty() ? fallback : cfg.rank_text);
}

ep_function parse_map(const std::string& text) {
  try {
    return ep_function::parse(text);
  } catch (const error&) {
    return term_to_map(term_parse(text));
  }
}

// ---- canon ----------------------------------------------------------------

int cmd_canon(const run_config& cfg, std::ostream& out) {
  emit(cfg, out, periodic_set::parse(cfg.set_text).to_string() + "\n");
  return 0;
}

rep_ultrafilter resolve_u(const run_config& cfg) {
  if (cfg.u_given) return rep_ultrafilter::parse(cfg.u_text);
  return rep_ultrafilter::profinite(profinite_point::from_integer(cfg.point));
}

// ---- member ---------------------------------------------------------------

int cmd_member(const run_config& cfg, std::ostream& out) {
  rep_ultrafilter u = resolve_u(cfg);
  periodic_set a = periodic_set::parse(cfg.set_text);
  bool in = uf_member(u, a, cfg.period_cap);
  emit(cfg, out, std::string(in ? "true" : "false") + "\n");
  return in ? 0 : 1;
}

// ---- los-check ------------------------------------------------------------

int cmd_los_check(const run_config& cfg, std::ostream& out) {
  std::vector<finite_structure> pool = all_binary_structures(3);
  if (cfg.samples > 0 && cfg.samples < static_cast<std::int64_t>(pool.size())) {
    rng pick(cfg.seed);
    std::vector<finite_structure> sub;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      std::size_t j = i + pick.below(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      sub.push_back(pool[static_cast<std::size_t>(i)]);
    }
    pool = std::move(sub);
  }
  rng gen(cfg.seed + 1);
  audit_report rep;
  std::int64_t total = 0;
  bool all = true;
  std::string witness;
  for (std::size_t si = 0; si < pool.size(); ++si) {
    const finite_structure& m = pool[si];
    for (std::int64_t isz = 1; isz <= 3; ++isz) {
      for (std::int64_t pt = 0; pt < isz; ++pt) {
        for (int rep_i = 0; rep_i < 2; ++rep_i) {
          formula_ptr phi = random_formula(gen, 2, 3, 2);
          std::vector<std::vector<std::int64_t>> gs(2);
          for (auto& g : gs)
            for (std::int64_t i = 0; i < isz; ++i)
              g.push_back(static_cast<std::int64_t>(gen.below(m.size())));
          ++total;
          if (!los_check(m, isz, pt, phi, gs) && all) {
            all = false;
            witness = "structure " + std::to_string(si) + ", |I|=" + std::to_string(isz) +
                      ", point " + std::to_string(pt) + ", " + formula_to_string(phi);
          }
        }
      }
    }
  }
  rep.add("quotient satisfaction matches coordinatewise truth sets on " +
              std::to_string(pool.size()) + " structures, " + std::to_string(total) +
              " checks",
          all, witness);
  return finish(cfg, out, rep);
}

// ---- lift-laws ------------------------------------------------------------

finite_structure pullback(const finite_structure& target, const std::vector<std::int64_t>& e,
                          std::int64_t size) {
  finite_structure m(size, target.sig());
  std::set<std::vector<std::int64_t>> tuples;
  for (std::int64_t x = 0; x < size; ++x)
    for (std::int64_t y = 0; y < size; ++y)
      if (target.rel_holds("R", {e[static_cast<std::size_t>(x)],
                                 e[static_cast<std::size_t>(y)]}))
        tuples.insert({x, y});
  m.set_relation("R", std::move(tuples));
  return m;
}

int cmd_lift_laws(const run_config& cfg, std::ostream& out) {
  std::int64_t rounds = cfg.samples > 0 ? cfg.samples : 1000;
  rng gen(cfg.seed);
  std::int64_t inj_seen = 0, surj_seen = 0;
  bool ok_id = true, ok_comp = true, ok_hom = true, ok_inj = true, ok_surj = true;
  std::string w_id, w_comp, w_hom, w_inj, w_surj;
  for (std::int64_t round = 0; round < rounds; ++round) {
    std::int64_t na = 1 + static_cast<std::int64_t>(gen.below(4));
    std::int64_t nb = 1 + static_cast<std::int64_t>(gen.below(4));
    std::int64_t nc = 1 + static_cast<std::int64_t>(gen.below(4));
    std::int64_t isz = 1 + static_cast<std::int64_t>(gen.below(3));
    std::int64_t pt = static_cast<std::int64_t>(gen.below(isz));
    finite_structure c = binary_rel_structure(nc, gen.next());
    std::vector<std::int64_t> e1, e0;
    for (std::int64_t i = 0; i < nb; ++i)
      e1.push_back(static_cast<std::int64_t>(gen.below(nc)));
    for (std::int64_t i = 0; i < na; ++i)
      e0.push_back(static_cast<std::int64_t>(gen.below(nb)));
    finite_structure b = pullback(c, e1, nb);
    finite_structure a = pullback(b, e0, na);
    ultrapower up_a = finite_ultrapower(a, isz, pt);
    ultrapower up_b = finite_ultrapower(b, isz, pt);

    std::string tag = "round " + std::to_string(round);
    std::vector<std::int64_t> ident(static_cast<std::size_t>(na));
    for (std::int64_t x = 0; x < na; ++x) ident[static_cast<std::size_t>(x)] = x;
    std::vector<std::int64_t> lifted_id = lift_map(ident, isz, pt, a, a);
    for (std::int64_t x = 0; x < up_a.quotient.size(); ++x)
      if (lifted_id[static_cast<std::size_t>(x)] != x && ok_id) {
        ok_id = false;
        w_id = tag;
      }

    std::vector<std::int64_t> e10(static_cast<std::size_t>(na));
    for (std::int64_t x = 0; x < na; ++x)
      e10[static_cast<std::size_t>(x)] =
          e1[static_cast<std::size_t>(e0[static_cast<std::size_t>(x)])];
    std::vector<std::int64_t> l0 = lift_map(e0, isz, pt, a, b);
    std::vector<std::int64_t> l1 = lift_map(e1, isz, pt, b, c);
    std::vector<std::int64_t> l10 = lift_map(e10, isz, pt, a, c);
    for (std::int64_t x = 0; x < up_a.quotient.size(); ++x)
      if (l10[static_cast<std::size_t>(x)] !=
              l1[static_cast<std::size_t>(l0[static_cast<std::size_t>(x)])] &&
          ok_comp) {
        ok_comp = false;
        w_comp = tag;
      }

    if (!is_homomorphism(l0, up_a.quotient, up_b.quotient) && ok_hom) {
      ok_hom = false;
      w_hom = tag;
    }

    auto injective = [](const std::vector<std::int64_t>& f) {
      std::set<std::int64_t> seen(f.begin(), f.end());
      return seen.size() == f.size();
    };
    auto surjective = [](const std::vector<std::int64_t>& f, std::int64_t n) {
      std::set<std::int64_t> seen(f.begin(), f.end());
      return static_cast<std::int64_t>(seen.size()) == n;
    };
    if (injective(e0)) {
      ++inj_seen;
      if (!injective(l0) && ok_inj) {
        ok_inj = false;
        w_inj = tag;
      }
    }
    if (surjective(e0, nb)) {
      ++surj_seen;
      if (!surjective(l0, up_b.quotient.size()) && ok_surj) {
        ok_surj = false;
        w_surj = tag;
      }
    }
  }
  audit_report rep;
  rep.add("lift of the identity is the identity (" + std::to_string(rounds) + " rounds)",
          ok_id, w_id);
  rep.add("lift of a composite is the composite of the lifts", ok_comp, w_comp);
  rep.add("lift of a homomorphism is a homomorphism", ok_hom, w_hom);
  rep.add("lift preserves injectivity (" + std::to_string(inj_seen) + " injective rounds)",
          ok_inj && inj_seen > 0, w_inj);
  rep.add("lift preserves surjectivity (" + std::to_string(surj_seen) + " surjective rounds)",
          ok_surj && surj_seen > 0, w_surj);
  return finish(cfg, out, rep);
}

// ---- build ----------------------------------------------------------------

int cmd_build(const run_config& cfg, std::ostream& out) {
  nlohmann::json doc;
  doc["carrier"] = cfg.carrier;
  doc["mode"] = "skew";
  if (cfg.carrier == "omega") {
    rep_ultrafilter u = resolve_u(cfg);
    small_ordinal alpha = rank_or(cfg, "w*2+1");
    omega_system sys = build_skew_system(omega_carrier{u}, alpha);
    doc["u"] = u.to_string();
    doc["rank"] = to_string(alpha);
    nlohmann::json ex = nlohmann::json::array();
    struct probe {
      small_ordinal from, to;
      const char* payload;
    };
    std::vector<probe> probes = {{ord_finite(0), ord_finite(3), "5"},
                                 {ord_finite(1), ord_finite(3), "v1"},
                                 {ord_finite(1), ord_omega(), "v1"},
                                 {ord_finite(2), small_ordinal{1, 1}, "v1 + v2"}};
    for (const probe& p : probes) {
      if (ord_compare(p.to, alpha) > 0) continue;
      sym_element img = sys.embed(p.from, p.to, sys.element(p.from, term_parse(p.payload)));
      ex.push_back({{"from", to_string(p.from)},
                    {"to", to_string(p.to)},
                    {"payload", p.payload},
                    {"image", sys.describe(img)}});
    }
    doc["embeddings"] = std::move(ex);
    if (ord_compare(ord_omega(), alpha) <= 0) {
      limit_view lim = direct_limit(sys, ord_omega());
      doc["limit"] = {
          {"at", "w"},
          {"thread(1,v1) = thread(2,v2)",
           lim.equal(lim.inject(ord_finite(1), t_var(1)), lim.inject(ord_finite(2), t_var(2)))},
          {"thread(1,v1) = thread(2,v1)",
           lim.equal(lim.inject(ord_finite(1), t_var(1)), lim.inject(ord_finite(2), t_var(1)))}};
    }
  } else {
    finite_structure m = canned_model();
    small_ordinal alpha = rank_or(cfg, "w+3");
    finite_system sys = build_skew_system(finite_carrier{m, 2, cfg.point}, alpha);
    doc["rank"] = to_string(alpha);
    doc["index_size"] = 2;
    doc["point"] = cfg.point;
    nlohmann::json stages = nlohmann::json::array();
    for (std::int64_t s = 0; s <= sys.finite_depth(); ++s)
      stages.push_back({{"stage", to_string(ord_finite(s))},
                        {"size", sys.stage_model(ord_finite(s)).size()}});
    for (std::int64_t s = 0; s <= sys.high_depth(); ++s)
      stages.push_back({{"stage", to_string(small_ordinal{1, s})},
                        {"size", sys.stage_model(small_ordinal{1, s}).size()}});
    doc["stages"] = std::move(stages);
    nlohmann::json diag = nlohmann::json::array();
    for (std::int64_t s = 1; s < sys.finite_depth(); ++s)
      diag.push_back(sys.successor_is_diagonal(s));
    doc["lifted successors act diagonally"] = std::move(diag);
  }
  emit(cfg, out, doc.dump(2) + "\n");
  return 0;
}

// ---- verify-def1 ----------------------------------------------------------

std::vector<term_ptr> payload_sample(std::int64_t count, std::uint64_t seed) {
  std::vector<term_ptr> pool;
  for (std::int64_t m = 0; m < 10; ++m) pool.push_back(t_const(m));
  for (const char* s : {"v1", "v1 + 1", "2 * v1", "v2", "v1 + v2", "v3",
                        "case(2; v1 | v1 + 1 @ v1)", "3 * v2 + 2"})
    pool.push_back(term_parse(s));
  rng gen(seed);
  while (static_cast<std::int64_t>(pool.size()) < count)
    pool.push_back(random_term(gen, 3, 2, 9));
  return pool;
}

std::vector<std::array<small_ordinal, 3>> triple_sample(small_ordinal alpha) {
  small_ordinal w = ord_omega();
  small_ordinal w1{1, 1}, w2{1, 2}, ww{2, 0}, ww1{2, 1};
  std::vector<std::array<small_ordinal, 3>> all = {
      {ord_finite(0), ord_finite(0), ord_finite(0)},
      {ord_finite(0), ord_finite(0), ord_finite(1)},
      {ord_finite(0), ord_finite(1), ord_finite(2)},
      {ord_finite(1), ord_finite(1), ord_finite(2)},
      {ord_finite(1), ord_finite(2), ord_finite(3)},
      {ord_finite(0), ord_finite(2), ord_finite(3)},
      {ord_finite(2), ord_finite(3), ord_finite(3)},
      {ord_finite(0), ord_finite(1), w},
      {ord_finite(0), ord_finite(3), w},
      {ord_finite(1), ord_finite(2), w},
      {ord_finite(2), w, w},
      {ord_finite(0), w, w1},
      {ord_finite(1), w, w1},
      {ord_finite(2), w, w2},
      {ord_finite(0), ord_finite(2), w1},
      {ord_finite(1), w1, w2},
      {ord_finite(3), w1, w2},
      {w, w, w1},
      {w, w1, w2},
      {ord_finite(0), w1, w2},
      {ord_finite(1), ord_finite(3), w2},
      {ord_finite(2), w2, ww},
      {ord_finite(1), w1, ww},
      {w, w2, ww1},
      {ord_finite(0), ww, ww1},
      {w1, ww, ww1},
  };
  std::vector<std::array<small_ordinal, 3>> fit;
  for (const auto& tr : all)
    if (ord_compare(tr[2], alpha) <= 0) fit.push_back(tr);
  return fit;
}

void append_aggregated(audit_report& rep, const std::string& label, const audit_report& fine) {
  std::int64_t fails = 0;
  std::string witness;
  for (const audit_entry& e : fine.entries)
    if (!e.pass) {
      if (fails == 0) witness = e.check + (e.witness.empty() ? "" : ": " + e.witness);
      ++fails;
    }
  rep.add(label + " (" + std::to_string(fine.entries.size()) + " checks)", fails == 0,
          witness);
}

int cmd_verify_def1(const run_config& cfg, std::ostream& out) {
  audit_report rep;
  if (cfg.carrier == "finite") {
    finite_structure m = canned_model();
    small_ordinal alpha = rank_or(cfg, "w+3");
    for (embed_mode mode : {embed_mode::skew, embed_mode::diagonal}) {
      finite_system sys(m, 2, cfg.point, alpha, mode);
      std::string tag = mode == embed_mode::skew ? "skew" : "diagonal";
      append_aggregated(rep, tag + ": coherence across materialized stages",
                        check_coherence(sys, triple_sample(alpha)));
      append_aggregated(rep, tag + ": every stage collapses onto the base",
                        check_finite_collapse(sys));
    }
    return finish(cfg, out, rep);
  }

  rep_ultrafilter u = resolve_u(cfg);
  std::int64_t samples = cfg.samples > 0 ? cfg.samples : 100;
  std::vector<term_ptr> payloads = payload_sample(samples, cfg.seed);
  std::vector<small_ordinal> alphas = {ord_finite(2), ord_finite(3), ord_omega(),
                                       small_ordinal{1, 1}, small_ordinal{1, 2}};
  if (!cfg.rank_text.empty()) alphas = {ord_parse(cfg.rank_text)};
  for (small_ordinal alpha : alphas) {
    omega_system sys = build_skew_system(omega_carrier{u}, alpha);
    append_aggregated(rep, "coherence at rank " + to_string(alpha),
                      check_coherence(sys, payloads, triple_sample(alpha)));
    omega_system diag(u, alpha, embed_mode::diagonal);
    append_aggregated(rep, "diagonal-mode coherence at rank " + to_string(alpha),
                      check_coherence(diag, payloads, triple_sample(alpha)));
  }

  // representative independence at the limits the default cap allows
  std::vector<std::pair<small_ordinal, small_ordinal>> limit_runs = {
      {ord_omega(), small_ordinal{1, 1}}, {small_ordinal{2, 0}, small_ordinal{2, 1}}};
  for (const auto& [lam, alpha] : limit_runs) {
    omega_system sys = build_skew_system(omega_carrier{u}, alpha);
    for (const char* s : {"4", "v1", "v1 + 1", "2 * v1 + 3", "v2"}) {
      sym_element th = sys.element(lam, term_parse(s));
      append_aggregated(
          rep,
          "well-definedness at " + to_string(lam) + " for thread of " + s + " with " +
              std::to_string(cfg.choices) + " choices",
          check_welldef_limit(sys, th, lam,
                              default_rep_choices(sys, th, lam, static_cast<int>(cfg.choices))));
    }
  }

  // the two modes agree on constants and split exactly at the witness
  {
    omega_system skew = build_skew_system(omega_carrier{u}, ord_finite(2));
    omega_system diag(u, ord_finite(2), embed_mode::diagonal);
    bool consts_agree = true;
    for (std::int64_t m = 0; m < 10 && consts_agree; ++m) {
      sym_element a = skew.embed(ord_finite(0), ord_finite(2),
                                 skew.element(ord_finite(0), t_const(m)));
      sym_element b = diag.embed(ord_finite(0), ord_finite(2),
                                 diag.element(ord_finite(0), t_const(m)));
      consts_agree = skew.equal(ord_finite(2), a, b);
    }
    rep.add("skew and diagonal successor agree on constants", consts_agree);
    remark1_report r1 = remark1_witness(u);
    rep.add("skew and diagonal successor separate at v1", r1.separated,
            "equality set " + r1.equality_set.to_string());
  }
  return finish(cfg, out, rep);
}

// ---- verify-chain ---------------------------------------------------------

int cmd_verify_chain(const run_config& cfg, std::ostream& out) {
  audit_report rep;
  if (!cfg.rest.empty()) {
    std::ifstream in(cfg.rest[0]);
    if (!in) throw malformed_input("cannot read chain file " + cfg.rest[0]);
    finite_chain loaded;
    try {
      nlohmann::json j = nlohmann::json::parse(in, nullptr, true);
      loaded = chain_from_json(j);
    } catch (const nlohmann::json::exception& ex) {
      throw malformed_input(std::string("bad chain file: ") + ex.what());
    }
    chain_result res = verify_chain(loaded);
    for (const audit_entry& e : res.checks.entries) rep.entries.push_back(e);
    return finish(cfg, out, rep);
  }
  finite_chain canned = collapse_chain(canned_model(), 2, cfg.point, 3);
  if (!cfg.out_path.empty()) {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw malformed_input("cannot open output file " + cfg.out_path);
    file << chain_to_json(canned).dump(2) << "\n";
  }
  chain_result fin = verify_chain(canned);
  append_aggregated(rep, "canned collapse chain over the finite carrier", fin.checks);

  rep_ultrafilter u = resolve_u(cfg);
  small_ordinal alpha = rank_or(cfg, "6");
  if (!alpha.is_finite() || alpha.finite_part < 2)
    throw malformed_input("the self-chain depth must be a finite rank of at least 2");
  omega_system sys = build_skew_system(omega_carrier{u}, alpha);
  chain_result sym = verify_chain(sys, static_cast<int>(alpha.finite_part), {});
  for (const audit_entry& e : sym.checks.entries) rep.entries.push_back(e);
  nlohmann::json doc = rep.to_json();
  if (cfg.out_path.empty()) out << doc.dump(2) << "\n";
  return rep.all_pass() ? 0 : 1;
}

// ---- witness-remark1 ------------------------------------------------------

int cmd_witness_remark1(const run_config& cfg, std::ostream& out) {
  nlohmann::json doc;
  remark1_report r;
  if (cfg.carrier == "finite") {
    r = remark1_witness(finite_carrier{canned_model(), 2, cfg.point});
    doc["status"] = r.separated ? "separated" : "not-separated";
  } else {
    rep_ultrafilter u = resolve_u(cfg);
    r = remark1_witness(u);
    doc["status"] = r.separated ? "separated" : "not-separated";
    doc["witness"] = term_to_string(r.witness_term);
    doc["skew_image"] = term_to_string(r.skew_image);
    doc["diagonal_image"] = term_to_string(r.diagonal_image);
    doc["verdict"] = to_string(r.verdict);
    doc["equality_set"] = r.equality_set.to_string();
  }
  doc["checks"] = r.checks.to_json();
  emit(cfg, out, doc.dump(2) + "\n");
  return r.checks.all_pass() ? 0 : 1;
}

// ---- compare / order-export -----------------------------------------------

int cmd_compare(const run_config& cfg, std::ostream& out) {
  if (cfg.rest.size() != 2) throw malformed_input("compare takes exactly two terms");
  rep_ultrafilter u = resolve_u(cfg);
  term_ptr lhs = term_parse(cfg.rest[0]);
  term_ptr rhs = term_parse(cfg.rest[1]);
  if (cfg.format_given && cfg.format == "json") {
    compare_report r = term_compare_report(lhs, rhs, u, cfg.k, cfg.period_cap);
    nlohmann::json doc{{"verdict", to_string(r.verdict)},
                       {"less", r.less.to_string()},
                       {"equal", r.equal.to_string()},
                       {"greater", r.greater.to_string()}};
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    emit(cfg, out, to_string(term_compare(lhs, rhs, u, cfg.k, cfg.period_cap)) + "\n");
  }
  return 0;
}

int cmd_order_export(const run_config& cfg, std::ostream& out) {
  if (cfg.rest.empty()) throw malformed_input("order-export needs at least one term");
  rep_ultrafilter u = resolve_u(cfg);
  std::vector<term_ptr> terms;
  for (const std::string& s : cfg.rest) terms.push_back(term_parse(s));
  export_format fmt = cfg.format == "dot" ? export_format::dot : export_format::json;
  emit(cfg, out, order_export(terms, u, cfg.k, fmt));
  return 0;
}

// ---- uf-axioms ------------------------------------------------------------

void axiom_suite(audit_report& rep, const std::string& tag, const rep_ultrafilter& u,
                 std::int64_t random_count, std::uint64_t seed) {
  bool dich = true;
  std::string witness;
  std::int64_t total = 0;
  for (std::int64_t p = 1; p <= 12; ++p) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
      std::vector<std::int64_t> residues;
      for (std::int64_t r = 0; r < p; ++r)
        if (mask & (std::uint64_t{1} << r)) residues.push_back(r);
      periodic_set a = periodic_set::from_parts(0, p, residues, {});
      ++total;
      if (uf_member(u, a) == uf_member(u, complement(a)) && dich) {
        dich = false;
        witness = a.to_string();
      }
    }
  }
  rep.add(tag + ": dichotomy on all rules with period <= 12 (" + std::to_string(total) +
              " sets)",
          dich, witness);

  rng gen(seed);
  bool pdich = true;
  std::string pwitness;
  for (std::int64_t i = 0; i < random_count; ++i) {
    std::int64_t p = 1 + static_cast<std::int64_t>(gen.below(12));
    std::int64_t th = 1 + static_cast<std::int64_t>(gen.below(8));
    std::vector<std::int64_t> residues;
    for (std::int64_t r = 0; r < p; ++r)
      if (gen.coin()) residues.push_back(r);
    std::vector<bool> prefix;
    for (std::int64_t n = 0; n < th; ++n) prefix.push_back(gen.coin());
    periodic_set a = periodic_set::from_parts(th, p, residues, prefix);
    if (uf_member(u, a) == uf_member(u, complement(a)) && pdich) {
      pdich = false;
      pwitness = a.to_string();
    }
  }
  rep.add(tag + ": dichotomy on " + std::to_string(random_count) + " prefixed sets", pdich,
          pwitness);

  std::vector<periodic_set> sample;
  rng sgen(seed + 17);
  for (int i = 0; i < 50; ++i) {
    std::int64_t p = 1 + static_cast<std::int64_t>(sgen.below(10));
    std::vector<std::int64_t> residues;
    for (std::int64_t r = 0; r < p; ++r)
      if (sgen.coin()) residues.push_back(r);
    std::int64_t th = static_cast<std::int64_t>(sgen.below(4));
    std::vector<bool> prefix;
    for (std::int64_t n = 0; n < th; ++n) prefix.push_back(sgen.coin());
    sample.push_back(periodic_set::from_parts(th, p, residues, prefix));
  }
  append_aggregated(rep, tag + ": axiom audit on a 50-set sample", uf_check_axioms(u, sample));
}

int cmd_uf_axioms(const run_config& cfg, std::ostream& out) {
  rep_ultrafilter u = resolve_u(cfg);
  std::int64_t random_count = cfg.samples > 0 ? cfg.samples : 200;
  audit_report rep;
  axiom_suite(rep, "base", u, random_count, cfg.seed);
  axiom_suite(rep, "pushforward along the identity", uf_pushforward(ep_function::identity(), u),
              random_count, cfg.seed + 1);
  axiom_suite(rep, "pushforward along doubling", uf_pushforward(ep_function::affine(2, 0), u),
              random_count, cfg.seed + 2);
  axiom_suite(rep, "pushforward along the successor",
              uf_pushforward(ep_function::affine(1, 1), u), random_count, cfg.seed + 3);
  return finish(cfg, out, rep);
}

// ---- rk-le / rk-equiv -----------------------------------------------------

int cmd_rk_le(const run_config& cfg, std::ostream& out) {
  if (cfg.rest.size() != 2)
    throw malformed_input("rk-le takes a source ultrafilter and a map");
  rep_ultrafilter u = resolve_u(cfg);
  rep_ultrafilter v = rep_ultrafilter::parse(cfg.rest[0]);
  ep_function f = parse_map(cfg.rest[1]);
  bool le = rk_le_check(u, v, f, cfg.bound);
  emit(cfg, out, std::string(le ? "true" : "false") + "\n");
  return le ? 0 : 1;
}

int cmd_rk_equiv(const run_config& cfg, std::ostream& out) {
  if (cfg.rest.size() != 1) throw malformed_input("rk-equiv takes one injective map");
  rep_ultrafilter u = resolve_u(cfg);
  rk_witness w = rk_equiv_injective(parse_map(cfg.rest[0]), u, cfg.bound);
  emit(cfg, out, w.to_json().dump(2) + "\n");
  return w.verdict == rk_verdict::equivalent ? 0 : 1;
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<std::string>>>& cli_dispatch_table() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"canon", {"periodic_set::parse", "periodic_set::to_string", "complement"}},
      {"member", {"uf_member", "rep_ultrafilter::parse"}},
      {"los-check",
       {"all_binary_structures", "random_formula", "finite_ultrapower", "eval_formula",
        "los_check", "formula_to_string"}},
      {"lift-laws", {"lift_map", "is_homomorphism", "binary_rel_structure"}},
      {"build",
       {"build_skew_system", "omega_system::element", "omega_system::embed",
        "omega_system::describe", "direct_limit", "limit_view::inject", "limit_view::equal",
        "finite_system::stage_model", "finite_system::successor_is_diagonal", "ord_parse"}},
      {"verify-def1",
       {"check_coherence", "check_welldef_limit", "default_rep_choices",
        "omega_system::normalize_thread", "omega_system::compare", "check_finite_collapse",
        "finite_system::collapse_iso", "finite_system::embed", "remark1_witness"}},
      {"verify-chain",
       {"collapse_chain", "chain_to_json", "chain_from_json", "verify_chain",
        "omega_system::leave_limit_with"}},
      {"witness-remark1", {"remark1_witness", "term_compare_report"}},
      {"compare", {"term_parse", "term_compare", "term_compare_report", "term_normalize"}},
      {"order-export", {"order_export", "term_to_string"}},
      {"uf-axioms",
       {"uf_check_axioms", "uf_pushforward", "uf_member", "periodic_set::from_parts",
        "effective_residue"}},
      {"rk-le", {"rk_le_check", "uf_equal_bounded", "term_to_map", "ep_function::parse"}},
      {"rk-equiv", {"rk_equiv_injective", "left_inverse", "is_injective", "compose"}},
  };
  return table;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"skew ultralimit toolkit"};
  app.require_subcommand(1);
  run_config cfg;

  const std::map<std::string, std::pair<std::string, int>> positionals = {
      {"compare", {"terms", 2}},       {"order-export", {"terms", -1}},
      {"verify-chain", {"chain", 1}},  {"rk-le", {"source-and-map", 2}},
      {"rk-equiv", {"map", 1}},
  };

  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--u", cfg.u_text, "ultrafilter DSL, e.g. profinite:0");
    sub->add_option("--point", cfg.point, "principal point / profinite base point");
    sub->add_option("--carrier", cfg.carrier, "finite or omega")
        ->check(CLI::IsMember({"finite", "omega"}));
    sub->add_option("--rank", cfg.rank_text, "ordinal rank, e.g. w+2 or w*2+1");
    sub->add_option("--k", cfg.k, "comparison rank");
    sub->add_option("--samples", cfg.samples, "sample count");
    sub->add_option("--choices", cfg.choices, "representative choices per thread");
    sub->add_option("--seed", cfg.seed, "sampling seed");
    sub->add_option("--bound", cfg.bound, "equality scan bound");
    sub->add_option("--period-cap", cfg.period_cap, "period cap for set arithmetic");
    sub->add_option("--set", cfg.set_text, "periodic set DSL");
    sub->add_option("--out", cfg.out_path, "write the document to this file");
    sub->add_option("--format", cfg.format, "json or dot")
        ->check(CLI::IsMember({"json", "dot"}));
    return sub;
  };

  std::vector<CLI::App*> subs;
  for (const auto& [name, ops] : cli_dispatch_table()) {
    CLI::App* sub = add_common(app.add_subcommand(name, ""));
    auto pos = positionals.find(name);
    if (pos != positionals.end()) {
      CLI::Option* opt = sub->add_option(pos->second.first, cfg.rest, "");
      if (pos->second.second > 0 && pos->second.first != "chain")
        opt->expected(pos->second.second);
      if (pos->second.first == "chain") opt->expected(0, 1);
    }
    subs.push_back(sub);
  }

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* active = nullptr;
  for (CLI::App* sub : subs)
    if (sub->parsed()) active = sub;
  if (active == nullptr) {
    err << "usage error: missing subcommand\n";
    return 2;
  }
  cfg.format_given = active->count("--format") > 0;
  cfg.u_given = active->count("--u") > 0;

  try {
    const std::string name = active->get_name();
    if (name == "canon") return cmd_canon(cfg, out);
    if (name == "member") return cmd_member(cfg, out);
    if (name == "los-check") return cmd_los_check(cfg, out);
    if (name == "lift-laws") return cmd_lift_laws(cfg, out);
    if (name == "build") return cmd_build(cfg, out);
    if (name == "verify-def1") return cmd_verify_def1(cfg, out);
    if (name == "verify-chain") return cmd_verify_chain(cfg, out);
    if (name == "witness-remark1") return cmd_witness_remark1(cfg, out);
    if (name == "compare") return cmd_compare(cfg, out);
    if (name == "order-export") return cmd_order_export(cfg, out);
    if (name == "uf-axioms") return cmd_uf_axioms(cfg, out);
    if (name == "rk-le") return cmd_rk_le(cfg, out);
    if (name == "rk-equiv") return cmd_rk_equiv(cfg, out);
    err << "usage error: unknown subcommand " << name << "\n";
    return 2;
  } catch (const syntax_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const malformed_input& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const diagram_violation& e) {
    audit_report rep;
    rep.add(e.which, false, e.witness);
    out << rep.to_json().dump(2) << "\n";
    return 1;
  } catch (const error& e) {
    err << e.kind() << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace skewlim
