#include "doctest.h"

#include <array>
#include <string>
#include <vector>

#include "skewlim/errors.hpp"
#include "skewlim/logic.hpp"
#include "skewlim/rng.hpp"
#include "skewlim/skewlimit.hpp"
#include "skewlim/term.hpp"

using namespace skewlim;

namespace {
const rep_ultrafilter u0 = rep_ultrafilter::profinite(profinite_point::from_integer(0));
const small_ordinal w = ord_omega();
const small_ordinal w1{1, 1};
const small_ordinal w2{1, 2};
const small_ordinal ww{2, 0};
const small_ordinal ww1{2, 1};

term_ptr dsl(const std::string& s) { return term_parse(s); }

finite_structure rich_model() {
  signature sig{{{"R", 2}}, {{"f", 1}}, {"c"}};
  finite_structure m(3, sig);
  m.set_relation("R", {{0, 1}, {1, 2}, {0, 2}});
  m.set_function("f", {{{0}, 1}, {{1}, 2}, {{2}, 0}});
  m.set_constant("c", 1);
  return m;
}
}  // namespace

TEST_CASE("successor embeddings shift levels, the first one is diagonal") {
  omega_system sys(u0, ww1, embed_mode::skew);
  sym_element m = sys.element(ord_finite(0), t_const(5));
  CHECK(term_equal(sys.embed(ord_finite(0), ord_finite(0), m).payload, t_const(5)));
  sym_element at3 = sys.embed(ord_finite(0), ord_finite(3), m);
  CHECK(at3.stage == ord_finite(3));
  CHECK(term_equal(at3.payload, t_const(5)));

  sym_element v = sys.element(ord_finite(1), t_var(1));
  CHECK(term_equal(sys.embed(ord_finite(1), ord_finite(2), v).payload, t_var(2)));
  CHECK(term_equal(sys.embed(ord_finite(1), ord_finite(3), v).payload, t_var(3)));
}

TEST_CASE("representatives above a limit are compared through the system") {
  omega_system sys(u0, ww1, embed_mode::skew);
  sym_element past = sys.embed(ord_finite(1), w1, sys.element(ord_finite(1), t_var(1)));
  CHECK(past.stage == w1);
  CHECK(past.inner == std::vector<std::int64_t>{0});
  CHECK(term_equal(past.payload, t_var(1)));

  sym_element x{w1, {1}, dsl("v1 + v2")};
  sym_element direct =
      sys.embed(ord_finite(2), w1, sys.element(ord_finite(2), dsl("v1 + v2")));
  CHECK(sys.equal(w1, x, direct));
  // trading one unit of the inner block for a level shift keeps the element
  CHECK(sys.equal(w1, x, sym_element{w1, {2}, dsl("v2 + v3")}));
  CHECK(!sys.equal(w1, x, sym_element{w1, {2}, dsl("v1 + v3")}));
}

TEST_CASE("threads normalize onto least representatives") {
  omega_system sys(u0, ww1, embed_mode::skew);
  limit_view lim = direct_limit(sys, w);
  sym_element a = lim.inject(ord_finite(1), t_var(1));
  sym_element b = lim.inject(ord_finite(2), t_var(2));
  sym_element c = lim.inject(ord_finite(2), t_var(1));
  CHECK(lim.equal(a, b));   // same thread, two presentations
  CHECK(!lim.equal(a, c));  // the skew shift separates these
  CHECK(a.stage == ord_finite(1));

  sym_element k4 = lim.inject(ord_finite(3), t_const(4));
  CHECK(k4.stage == ord_finite(0));  // constants fall to the base
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      CHECK(!lim.equal(lim.inject(ord_finite(0), t_const(i)),
                       lim.inject(ord_finite(1), t_const(j))));
  CHECK(lim.compare(k4, a) == order_verdict::less);

  // case(2; v2 | v1 @ v1) reads v2 on the typical class, so the thread
  // descends to plain v1 one stage lower
  sym_element tricky = lim.inject(ord_finite(2), dsl("case(2; v2 | v1 @ v1)"));
  CHECK(tricky.stage == ord_finite(1));
  CHECK(term_equal(tricky.payload, t_var(1)));
  CHECK(lim.equal(tricky, a));

  // past the second limit every thread again reaches a finite representative
  limit_view lim2 = direct_limit(sys, ww);
  sym_element above = lim2.inject(w1, t_var(1));
  CHECK(above.stage.is_finite());
  CHECK(lim2.equal(above, sym_element{w1, {1}, t_var(2)}));
}

TEST_CASE("coherence holds on handwritten and random stage triples") {
  std::vector<term_ptr> payloads = {t_const(5),  t_const(2),  t_var(1),
                                    dsl("v1 + 1"), dsl("2 * v1"), dsl("v2"),
                                    dsl("case(2; v1 | v1 + 1 @ v1)"), dsl("v1 + v2")};
  std::vector<std::array<small_ordinal, 3>> triples = {
      {ord_finite(0), ord_finite(1), ord_finite(2)},
      {ord_finite(1), ord_finite(2), ord_finite(3)},
      {ord_finite(0), w, w1},
      {ord_finite(2), w, w2},
      {ord_finite(1), w1, ww},
      {ord_finite(0), ww, ww1},
      {ord_finite(2), w2, ww1},
      {w, w1, ww},
      {ord_finite(3), ord_finite(4), w},
      {w, ww, ww1},
  };
  for (embed_mode mode : {embed_mode::skew, embed_mode::diagonal}) {
    omega_system sys(u0, ww1, mode);
    audit_report rep = check_coherence(sys, payloads, triples);
    for (const auto& e : rep.entries) {
      CAPTURE(e.check);
      CAPTURE(e.witness);
      REQUIRE(e.pass);
    }
  }

  rng gen(411);
  std::vector<small_ordinal> pool = {ord_finite(0), ord_finite(1), ord_finite(2),
                                     ord_finite(3), ord_finite(4), w, w1, w2, ww, ww1};
  omega_system sys(u0, ww1, embed_mode::skew);
  omega_system dsys(u0, ww1, embed_mode::diagonal);
  for (int it = 0; it < 40; ++it) {
    small_ordinal a = gen.pick(pool), b = gen.pick(pool), c = gen.pick(pool);
    if (ord_compare(a, b) > 0) std::swap(a, b);
    if (ord_compare(b, c) > 0) std::swap(b, c);
    if (ord_compare(a, b) > 0) std::swap(a, b);
    term_ptr t = random_term(gen, 3, 2, 6);
    CHECK(check_coherence(sys, {t}, {{a, b, c}}).all_pass());
    CHECK(check_coherence(dsys, {t}, {{a, b, c}}).all_pass());
  }
}

TEST_CASE("limit stages do not depend on the representative choice") {
  omega_system sys(u0, ww1, embed_mode::skew);
  for (small_ordinal lam : {w, ww}) {
    for (const char* s : {"4", "v1", "v1 + 1", "2 * v1 + 3"}) {
      sym_element th = sys.element(lam, dsl(s));
      std::vector<sym_element> choices = default_rep_choices(sys, th, lam, 4);
      CHECK(choices.size() == 4);
      audit_report rep = check_welldef_limit(sys, th, lam, choices);
      for (const auto& e : rep.entries) {
        CAPTURE(e.check);
        CAPTURE(e.witness);
        REQUIRE(e.pass);
      }
    }
  }
  // an off-thread representative is rejected outright, not averaged in
  sym_element th = sys.element(w, t_var(1));
  CHECK_THROWS_AS(check_welldef_limit(sys, th, w, {sym_element{ord_finite(2), {}, t_var(1)}}),
                  invalid_representative);
}

TEST_CASE("embeddings preserve the stage order") {
  omega_system sys(u0, ww1, embed_mode::skew);
  omega_system dsys(u0, ww1, embed_mode::diagonal);
  rng gen(77);
  for (int it = 0; it < 120; ++it) {
    int b = 1 + static_cast<int>(gen.below(3));
    term_ptr t = random_term(gen, b, 2, 5);
    term_ptr s = random_term(gen, b, 2, 5);
    small_ordinal from = ord_finite(b);
    small_ordinal tos[] = {ord_finite(b + 2), w1, ww1};
    small_ordinal to = tos[gen.below(3)];
    for (const omega_system* S : {&sys, &dsys}) {
      order_verdict before = S->compare(from, S->element(from, t), S->element(from, s));
      order_verdict after = S->compare(to, S->embed(from, to, S->element(from, t)),
                                       S->embed(from, to, S->element(from, s)));
      REQUIRE(before == after);
    }
  }
}

TEST_CASE("the skew and diagonal systems separate exactly at the variable") {
  for (const char* us : {"profinite:0", "profinite:1"}) {
    remark1_report r = remark1_witness(rep_ultrafilter::parse(us));
    CAPTURE(us);
    CHECK(r.separated);
    CHECK(term_equal(r.skew_image, t_var(2)));
    CHECK(term_equal(r.diagonal_image, t_var(1)));
    CHECK(r.equality_set.is_empty());
    CHECK(r.verdict != order_verdict::equal);
  }

  // on a principal carrier both successor embeddings are the same map
  signature sig{{{"R", 2}}, {}, {}};
  finite_structure m(2, sig);
  m.set_relation("R", {{0, 1}});
  remark1_report fr = remark1_witness(finite_carrier{m, 2, 0});
  CHECK(!fr.separated);
  CHECK(fr.checks.all_pass());

  // in diagonal mode the identifications flip
  omega_system dsys(u0, ww1, embed_mode::diagonal);
  limit_view lim = direct_limit(dsys, w);
  sym_element a = lim.inject(ord_finite(1), t_var(1));
  CHECK(lim.equal(a, lim.inject(ord_finite(2), t_var(1))));
  CHECK(!lim.equal(a, lim.inject(ord_finite(2), t_var(2))));
}

TEST_CASE("every materialized finite-carrier stage collapses onto the base") {
  finite_structure m = rich_model();
  for (embed_mode mode : {embed_mode::skew, embed_mode::diagonal}) {
    finite_system fs(m, 2, 0, w1, mode, 4);
    audit_report rep = check_finite_collapse(fs);
    for (const auto& e : rep.entries) {
      CAPTURE(e.check);
      CAPTURE(e.witness);
      REQUIRE(e.pass);
    }
  }

  finite_system fs(m, 2, 0, w1, embed_mode::skew, 4);
  // over a principal point the lift of a diagonal is again a diagonal
  for (int k = 1; k < 4; ++k) CHECK(fs.successor_is_diagonal(k));

  std::vector<std::array<small_ordinal, 3>> triples = {
      {ord_finite(0), ord_finite(1), ord_finite(3)},
      {ord_finite(1), ord_finite(2), w},
      {ord_finite(0), w, w1},
      {ord_finite(2), ord_finite(4), w1},
  };
  CHECK(check_coherence(fs, triples).all_pass());

  // two limit blocks would need stages past the cap
  CHECK_THROWS_AS(finite_system(m, 2, 0, ww, embed_mode::skew, 4), stage_cap_exceeded);
}

TEST_CASE("collapse chains verify and any single-point edit trips a violation") {
  signature sig{{{"R", 2}}, {}, {}};
  finite_structure m(3, sig);
  m.set_relation("R", {{0, 1}, {1, 2}});
  finite_chain chain = collapse_chain(m, 2, 0, 3);
  chain_result res = verify_chain(chain);
  CHECK(res.checks.all_pass());
  CHECK(res.isos.size() == 4);

  finite_chain back = chain_from_json(chain_to_json(chain));
  CHECK(verify_chain(back).checks.all_pass());

  for (std::size_t b = 0; b < chain.iotas.size(); ++b) {
    for (std::size_t x = 0; x < chain.iotas[b].size(); ++x) {
      finite_chain bad = chain;
      bad.iotas[b][x] = (bad.iotas[b][x] + 1) % m.size();
      CAPTURE(b);
      CAPTURE(x);
      bool caught = false;
      try {
        verify_chain(bad);
      } catch (const diagram_violation& v) {
        caught = !v.which.empty() && !v.witness.empty();
      }
      REQUIRE(caught);
    }
    // transpositions keep bijectivity yet still break a diagram
    finite_chain bad = chain;
    std::swap(bad.iotas[b][0], bad.iotas[b][1]);
    CHECK_THROWS_AS(verify_chain(bad), diagram_violation);
  }
}

TEST_CASE("the symbolic self-chain verifies and detects planted perturbations") {
  omega_system sys(u0, ww1, embed_mode::skew);
  std::vector<term_ptr> sample = {t_const(0), t_const(3), t_var(1), dsl("v1 + 1"),
                                  dsl("2 * v1"), dsl("v2"), dsl("v1 + v2"),
                                  dsl("case(2; v1 | v1 + 1 @ v1)"), dsl("v3 + 2")};
  CHECK(verify_chain(sys, 4, sample).checks.all_pass());
  CHECK(verify_chain(sys, 4, {}).checks.all_pass());  // default sample

  for (int b = 0; b < 4; ++b) {
    CAPTURE(b);
    CHECK_THROWS_AS(verify_chain(sys, 4, {}, b, t_const(2)), diagram_violation);
    for (const term_ptr& t : {t_var(1), t_const(3)}) {
      CAPTURE(term_to_string(t));
      CHECK_THROWS_AS(verify_chain(sys, 4, sample, b, t), diagram_violation);
    }
  }
}
