#include "doctest.h"

#include <string>
#include <vector>

#include "json.hpp"
#include "skewlim/errors.hpp"
#include "skewlim/rkorder.hpp"
#include "skewlim/rng.hpp"

using namespace skewlim;

namespace {
const rep_ultrafilter u0 = rep_ultrafilter::parse("profinite:0");
const rep_ultrafilter u1 = rep_ultrafilter::parse("profinite:1");

ep_function random_injective(rng& gen) {
  for (;;) {
    if (gen.coin()) {
      ep_function f = ep_function::affine(1 + gen.below(5), gen.below(12));
      if (is_injective(f)) return f;
      continue;
    }
    // strided interleaving: each class advances by a multiple of the period
    std::int64_t p = 2 + gen.below(2);
    std::vector<affine_branch> branches;
    for (std::int64_t r = 0; r < p; ++r)
      branches.push_back({p * (1 + gen.below(2)), gen.below(6)});
    ep_function f = ep_function::from_parts(0, p, branches, {});
    if (is_injective(f)) return f;
  }
}
}  // namespace

TEST_CASE("rank-1 terms induce index maps pointwise") {
  CHECK(term_to_map(t_var(1)).is_identity());
  CHECK(term_to_map(t_sum(t_scale(2, t_var(1)), t_const(1))) == ep_function::affine(2, 1));

  term_ptr t = term_parse("case(2; 0 | v1 @ v1)");
  ep_function f = term_to_map(t);
  CHECK(f.period() == 2);
  for (std::int64_t n = 0; n < 500; ++n) REQUIRE(f(n) == term_eval(t, {{1, n}}));

  rng gen(5150);
  for (int it = 0; it < 250; ++it) {
    term_ptr r = random_term(gen, 1, 2, 7);
    ep_function g = term_to_map(r);
    for (std::int64_t n = 0; n < 200; ++n) {
      CAPTURE(term_to_string(r));
      REQUIRE(g(n) == term_eval(r, {{1, n}}));
    }
  }
  CHECK_THROWS_AS(term_to_map(t_var(2)), rank_too_high);
}

TEST_CASE("pushforward comparison basics") {
  CHECK(rk_le_check(u0, u0, ep_function::identity(), 100));
  CHECK(rk_le_check(rep_ultrafilter::parse("principal:3"), u0, ep_function::constant(3), 100));
  CHECK(rk_le_check(u1, u0, ep_function::affine(1, 1), 100));
  CHECK(!rk_le_check(u1, u0, ep_function::identity(), 100));
}

TEST_CASE("injective maps certify equivalence with their left inverses") {
  rk_witness w = rk_equiv_injective(ep_function::identity(), u0, 100);
  CHECK(w.verdict == rk_verdict::equivalent);
  CHECK(w.g.is_identity());
  CHECK(rk_equiv_injective(ep_function::affine(2, 0), u0, 100).verdict ==
        rk_verdict::equivalent);
  CHECK(rk_equiv_injective(ep_function::affine(1, 3), u0, 100).verdict ==
        rk_verdict::equivalent);
  CHECK_THROWS_AS(rk_equiv_injective(ep_function::constant(4), u0, 100), not_injective);

  auto j = rk_equiv_injective(ep_function::affine(1, 3), u0, 100).to_json();
  CHECK(j["verdict"] == "Equivalent");
  CHECK(j["bound"] == 100);

  rng gen(92);
  const char* points[] = {"profinite:0", "profinite:1", "profinite:5"};
  for (int it = 0; it < 50; ++it) {
    ep_function f = random_injective(gen);
    rep_ultrafilter u = rep_ultrafilter::parse(points[gen.below(3)]);
    CAPTURE(f.to_string());
    REQUIRE(rk_equiv_injective(f, u, default_rk_bound).verdict == rk_verdict::equivalent);
  }
}

TEST_CASE("certified comparisons are reflexive and compose") {
  rng gen(555);
  const char* points[] = {"profinite:0", "profinite:1", "profinite:2", "principal:5"};
  for (int it = 0; it < 60; ++it) {
    rep_ultrafilter w = rep_ultrafilter::parse(points[gen.below(4)]);
    CHECK(rk_le_check(w, w, ep_function::identity(), default_rk_bound));
    ep_function g = random_injective(gen);
    ep_function f = random_injective(gen);
    rep_ultrafilter v = uf_pushforward(g, w);
    rep_ultrafilter u = uf_pushforward(f, v);
    REQUIRE(rk_le_check(v, w, g, default_rk_bound));
    REQUIRE(rk_le_check(u, v, f, default_rk_bound));
    REQUIRE(rk_le_check(u, w, compose(f, g), default_rk_bound));
  }
}

TEST_CASE("order export groups equal terms and chains the groups") {
  std::vector<term_ptr> terms = {t_var(1), t_sum(t_var(1), t_const(1)), t_scale(2, t_var(1))};
  std::string json = order_export(terms, u0, 1, export_format::json);
  auto j = nlohmann::json::parse(json);
  REQUIRE(j.size() == 3);
  CHECK(j[0][0] == "v1");
  CHECK(j[1][0] == "v1 + 1");
  CHECK(j[2][0] == "2*v1");

  std::string dot = order_export(terms, u0, 1, export_format::dot);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("n0 -> n1") != std::string::npos);
  CHECK(dot.find("n1 -> n2") != std::string::npos);
  CHECK(dot.find("n2 -> n0") == std::string::npos);  // a chain, not a cycle

  // duplicates merge into one group
  auto j2 = nlohmann::json::parse(order_export({t_var(1), t_var(1)}, u0, 1, export_format::json));
  CHECK(j2.size() == 1);
  CHECK(j2[0].size() == 1);

  auto j3 = nlohmann::json::parse(
      order_export({t_const(0), t_const(1), t_var(1)}, u0, 1, export_format::json));
  CHECK(j3[0][0] == "0");
  CHECK(j3[1][0] == "1");
  CHECK(j3[2][0] == "v1");

  // input order cannot leak into the document
  std::vector<term_ptr> shuffled = {t_scale(2, t_var(1)), t_var(1),
                                    t_sum(t_var(1), t_const(1))};
  CHECK(order_export(shuffled, u0, 1, export_format::json) == json);

  // terms equal mod u land in the same group even when spelled differently
  auto j4 = nlohmann::json::parse(order_export({term_parse("case(2; v1 | v1 @ v1)"), t_var(1)},
                                               u0, 1, export_format::json));
  CHECK(j4.size() == 1);
  CHECK(j4[0].size() == 2);
}
