#include "doctest.h"

#include "skewlim/errors.hpp"
#include "skewlim/rng.hpp"
#include "skewlim/ultrafilter.hpp"

using namespace skewlim;

namespace {
const rep_ultrafilter u0 = rep_ultrafilter::profinite(profinite_point::from_integer(0));
const rep_ultrafilter u1 = rep_ultrafilter::profinite(profinite_point::from_integer(1));
}  // namespace

TEST_CASE("profinite membership reads the point's residues") {
  for (int k = 1; k <= 30; ++k) CHECK(uf_member(u0, periodic_set::residue_class(k, 0)));
  for (int k = 2; k <= 30; ++k) CHECK(uf_member(u1, periodic_set::residue_class(k, 1)));
  CHECK(!uf_member(u0, periodic_set::residue_class(2, 1)));
  // never a finite set, always a cofinite one
  CHECK(!uf_member(u0, periodic_set::singleton(5)));
  CHECK(uf_member(u0, complement(periodic_set::singleton(5))));
  CHECK(!uf_member(u0, periodic_set::empty_set()));
  CHECK(uf_member(u0, periodic_set::full_set()));
}

TEST_CASE("principal membership is just containment of the point") {
  auto p4 = rep_ultrafilter::principal(4);
  CHECK(uf_member(p4, periodic_set::residue_class(2, 0)));
  CHECK(uf_member(p4, periodic_set::singleton(4)));
  CHECK(!uf_member(p4, periodic_set::singleton(5)));
}

TEST_CASE("digit tables complete coherently") {
  auto pt = profinite_point::parse("{2->1,6->5}");
  CHECK(uf_coherence_check(pt));
  CHECK(pt.residue(2) == 1);
  CHECK(pt.residue(6) == 5);
  CHECK(pt.residue(3) == 2);
  // an unlisted prime gets component zero, and the completion stays coherent
  CHECK(pt.residue(5) == 0);
  CHECK(pt.residue(10) % 5 == 0);
  CHECK(pt.residue(10) % 2 == 1);

  CHECK(!uf_coherence_check(profinite_point::from_table({{2, 1}, {4, 2}})));
  CHECK(uf_coherence_check(profinite_point::from_table({{2, 1}, {4, 3}})));
  CHECK(uf_coherence_check(profinite_point::from_integer(7)));

  // divisor law across every pair k | m, including a table that disagrees on
  // shared primes and has to pick the higher power
  auto amb = profinite_point::from_table({{12, 1}, {8, 3}});
  for (int m = 1; m <= 200; ++m)
    for (int k = 1; k <= 200; ++k)
      if (m % k == 0) {
        CAPTURE(m);
        CAPTURE(k);
        REQUIRE(amb.residue(m) % k == amb.residue(k) % k);
      }
}

TEST_CASE("pushforwards normalize and answer through preimages") {
  CHECK(uf_pushforward(ep_function::identity(), u0) == u0);
  auto c3 = uf_pushforward(ep_function::constant(3), u0);
  CHECK(c3.kind() == uf_kind::principal);
  CHECK(c3.principal_point() == 3);

  auto du0 = uf_pushforward(ep_function::affine(2, 0), u0);
  CHECK(du0.kind() == uf_kind::mapped);
  CHECK(uf_member(du0, periodic_set::residue_class(4, 0)));
  CHECK(!uf_member(du0, periodic_set::residue_class(4, 2)));

  // membership of every residue class is decided by the effective residue
  for (int m = 1; m <= 40; ++m) {
    std::int64_t e = effective_residue(du0, m);
    for (int r = 0; r < m; ++r)
      CHECK(uf_member(du0, periodic_set::residue_class(m, r)) == (r == e));
  }

  // pushforward is functorial
  auto dbl = ep_function::affine(2, 0);
  auto succ = ep_function::affine(1, 1);
  auto lhs = uf_pushforward(dbl, uf_pushforward(succ, u0));
  auto rhs = uf_pushforward(compose(dbl, succ), u0);
  for (int m = 1; m <= 64; ++m) CHECK(effective_residue(lhs, m) == effective_residue(rhs, m));
}

TEST_CASE("bounded equality scans generators and reports a witness") {
  CHECK(uf_equal_bounded(u0, u0, 100).equal);
  auto r2 = uf_equal_bounded(u0, u1, 2);
  CHECK(!r2.equal);
  CHECK(r2.witness == periodic_set::residue_class(2, 0));
  auto r3 = uf_equal_bounded(u0, rep_ultrafilter::principal(0), 2);
  CHECK(!r3.equal);
  CHECK(r3.witness == complement(periodic_set::singleton(0)));
}

TEST_CASE("DSL and JSON round trips, with normalization on parse") {
  for (const char* s : {"principal:7", "profinite:0", "profinite:{2->1,6->5}",
                        "mapped:(profinite:0; 0:1:[(2,0)]:)"}) {
    auto u = rep_ultrafilter::parse(s);
    CHECK(rep_ultrafilter::parse(u.to_string()) == u);
    CHECK(rep_ultrafilter::from_json(u.to_json()) == u);
  }
  // identity maps collapse to the plain profinite form
  CHECK(rep_ultrafilter::parse("mapped:(profinite:0; 0:1:[(1,0)]:)") == u0);
  // slope zero at the point's class collapses to a principal ultrafilter
  CHECK(rep_ultrafilter::parse("mapped:(profinite:0; 0:1:[(0,3)]:)") ==
        rep_ultrafilter::principal(3));
  CHECK_THROWS_AS(rep_ultrafilter::parse("profinite"), syntax_error);
}

TEST_CASE("axiom audit passes on a closed sample") {
  auto evens = periodic_set::residue_class(2, 0);
  auto rep = uf_check_axioms(
      u0, {evens, complement(evens), periodic_set::full_set(), periodic_set::empty_set()});
  CHECK(rep.all_pass());
}
