#include "doctest.h"

#include "skewlim/errors.hpp"
#include "skewlim/ordinal.hpp"

using namespace skewlim;

TEST_CASE("parse accepts every shorthand and round trips") {
  const char* texts[] = {"0", "5", "w", "w+2", "w*2", "w*2+1", "w*3+4"};
  for (const char* s : texts) {
    small_ordinal a = ord_parse(s);
    CHECK(to_string(a) == s);
    CHECK(ord_parse(to_string(a)) == a);
  }
  CHECK(ord_parse("w") == ord_omega());
  CHECK(ord_parse("7") == ord_finite(7));
  CHECK(ord_parse("w*1+3") == small_ordinal{1, 3});  // non-shorthand spelling
  CHECK_THROWS_AS(ord_parse("w+"), syntax_error);
  CHECK_THROWS_AS(ord_parse("omega"), syntax_error);
  CHECK_THROWS_AS(ord_parse(""), syntax_error);
}

TEST_CASE("order is lexicographic on (omega coefficient, finite part)") {
  small_ordinal pool[] = {ord_finite(0), ord_finite(1), ord_finite(9), ord_omega(),
                          {1, 1},        {1, 7},        {2, 0},        {2, 3}};
  // the pool above is listed in strictly increasing order
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      auto c = ord_compare(pool[i], pool[j]);
      CHECK((c < 0) == (i < j));
      CHECK((c == 0) == (i == j));
      CHECK((pool[i] < pool[j]) == (i < j));  // <=> agrees with ord_compare
    }
}

TEST_CASE("successor adds one to the finite part") {
  CHECK(ord_succ(ord_finite(0)) == ord_finite(1));
  CHECK(ord_succ(ord_omega()) == small_ordinal{1, 1});
  CHECK(ord_succ(small_ordinal{2, 4}) == small_ordinal{2, 5});
}

TEST_CASE("limits are exactly the nonzero multiples of w") {
  CHECK(ord_is_limit(ord_omega()));
  CHECK(ord_is_limit(small_ordinal{2, 0}));
  CHECK(!ord_is_limit(ord_finite(0)));
  CHECK(!ord_is_limit(ord_finite(3)));
  CHECK(!ord_is_limit(small_ordinal{1, 1}));
}

TEST_CASE("fundamental sequence climbs from the previous block") {
  // fund(w*c, n) = w*(c-1) + n, so the sequence is cofinal in the limit
  for (int n = 0; n < 20; ++n) {
    CHECK(ord_fund_seq(ord_omega(), n) == ord_finite(n));
    CHECK(ord_fund_seq(small_ordinal{2, 0}, n) == small_ordinal{1, n});
    CHECK(ord_fund_seq(small_ordinal{2, 0}, n) < small_ordinal{2, 0});
  }
  CHECK_THROWS_AS(ord_fund_seq(ord_finite(4), 0), not_a_limit);
  CHECK_THROWS_AS(ord_fund_seq(small_ordinal{1, 2}, 0), not_a_limit);
}
