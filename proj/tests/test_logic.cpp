#include "doctest.h"

#include <vector>

#include "skewlim/errors.hpp"
#include "skewlim/logic.hpp"

using namespace skewlim;

namespace {

finite_structure linear_order(std::int64_t n) {
  signature sig;
  sig.relations.push_back({"<=", 2});
  finite_structure m(n, sig);
  std::set<std::vector<std::int64_t>> t;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i; j < n; ++j) t.insert({i, j});
  m.set_relation("<=", std::move(t));
  return m;
}

// every tuple over {0..n-1} of the given width
std::vector<std::vector<std::int64_t>> all_tuples(std::int64_t n, std::int64_t width) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> g(width, 0);
  for (;;) {
    out.push_back(g);
    std::int64_t i = width - 1;
    while (i >= 0 && g[i] == n - 1) g[i--] = 0;
    if (i < 0) return out;
    ++g[i];
  }
}

}  // namespace

TEST_CASE("formula parser examples and failure position") {
  CHECK(parse_formula("forall x0. exists x1. R(x0,x1)")->kind == formula::node::forall);
  CHECK(parse_formula("x0 = x0")->kind == formula::node::eq);
  CHECK_THROWS_AS(parse_formula("forall x0. ("), syntax_error);
  CHECK_THROWS_AS(parse_formula("R(x0"), syntax_error);
}

TEST_CASE("printing and reparsing is the identity on generated formulas") {
  rng g(11);
  for (int i = 0; i < 400; ++i) {
    auto f = random_formula(g, 2, 3, 2);
    CAPTURE(formula_to_string(f));
    REQUIRE(formula_equal(f, parse_formula(formula_to_string(f))));
  }
}

TEST_CASE("evaluation on small orders") {
  auto two = linear_order(2);
  CHECK(eval_formula(two, parse_formula("forall x0. exists x1. x0 <= x1"), {}));
  CHECK(!eval_formula(two, parse_formula("forall x0. exists x1. !(x0 <= x1)"), {}));
  auto empty_r = binary_rel_structure(2, 0);
  CHECK(!eval_formula(empty_r, parse_formula("exists x0. R(x0,x0)"), {}));
  CHECK(eval_formula(empty_r, parse_formula("x0 = x0"), {{0, 0}}));
  CHECK_THROWS_AS(eval_formula(empty_r, parse_formula("x0 = x1"), {{0, 0}}), unbound_variable);
}

TEST_CASE("principal ultrapowers collapse onto the base") {
  auto m1 = binary_rel_structure(2, 0b0110);
  auto up1 = finite_ultrapower(m1, 1, 0);
  CHECK(up1.quotient == m1);
  CHECK(up1.collapse == std::vector<std::int64_t>{0, 1});
  auto up2 = finite_ultrapower(m1, 2, 1);
  CHECK(up2.quotient.size() == 2);
  for (auto& r : up2.reps) CHECK(r[0] == 0);  // representatives are lex-min
  CHECK(finite_ultrapower(binary_rel_structure(3, 0b101010101), 3, 0).quotient.size() == 3);
}

TEST_CASE("satisfaction in the quotient matches coordinatewise truth sets") {
  // exhaustive at |M| <= 2: every structure, index size, point, assignment
  int checked = 0;
  for (std::int64_t n = 1; n <= 2; ++n) {
    for (std::uint64_t bits = 0; bits < (1ull << (n * n)); ++bits) {
      auto m = binary_rel_structure(n, bits);
      for (std::int64_t isz = 1; isz <= 2; ++isz) {
        auto gs = all_tuples(n, isz);
        rng gg(bits * 31 + static_cast<std::uint64_t>(n));
        for (int fi = 0; fi < 4; ++fi) {
          auto phi = random_formula(gg, 2, 3, 2);
          for (std::int64_t pt = 0; pt < isz; ++pt)
            for (auto& g0 : gs)
              for (auto& g1 : gs) {
                CAPTURE(formula_to_string(phi));
                REQUIRE(los_check(m, isz, pt, phi, {g0, g1}));
                ++checked;
              }
        }
      }
    }
  }
  CHECK(checked > 2000);
}

TEST_CASE("lifted maps act on classes the way the map acts on reps") {
  auto a2 = binary_rel_structure(2, 0b0110);
  auto b3 = binary_rel_structure(3, 0);
  CHECK(lift_map({0, 1}, 2, 0, a2, a2) == std::vector<std::int64_t>{0, 1});
  auto l = lift_map({2, 0}, 2, 1, a2, b3);
  CHECK(l.size() == 2);
  CHECK(l[0] != l[1]);  // injective maps lift injectively
}

TEST_CASE("homomorphism recognition and structure JSON") {
  auto two = linear_order(2);
  auto three = linear_order(3);
  CHECK(is_homomorphism({0, 1}, two, three));
  CHECK(is_homomorphism({0, 2}, two, three));
  CHECK(!is_homomorphism({2, 0}, two, three));

  auto m1 = binary_rel_structure(2, 0b0110);
  CHECK(finite_structure::from_json(m1.to_json()) == m1);
  CHECK(finite_structure::from_json(three.to_json()) == three);
}

TEST_CASE("validation rejects partial tables") {
  signature sig;
  sig.functions.push_back({"f", 1});
  finite_structure m(2, sig);
  CHECK_THROWS_AS(m.validate(), malformed_input);
  m.set_function("f", {{{0}, 1}, {{1}, 0}});
  CHECK_NOTHROW(m.validate());
}
