#include <doctest.h>

#include "lcqft/rational.hpp"

using namespace lcqft;

TEST_CASE("rational construction and normalization") {
  CHECK(rat(2, 4) == rat(1, 2));
  CHECK(rat(-2, -4) == rat(1, 2));
  CHECK(rat(2, -4) == rat(-1, 2));
  CHECK(to_string(rat(7)) == "7");
  CHECK(to_string(rat(-3, 9)) == "-1/3");
}

TEST_CASE("rational parsing") {
  CHECK(*parse_rational("5") == rat(5));
  CHECK(*parse_rational("-7/21") == rat(-1, 3));
  CHECK(!parse_rational("1.5").has_value());
  CHECK(!parse_rational("a/b").has_value());
  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("").has_value());
}

TEST_CASE("complex rational arithmetic") {
  RC i = RC::i_times(rat(1));
  CHECK((i * i) == RC(rat(-1)));
  RC z(rat(1, 2), rat(-3));
  CHECK((z * z.conj()) == RC(rat(1, 4) + rat(9)));
  CHECK((z - z).is_zero());
  CHECK(to_string(RC(rat(2), rat(1))) == "2+1*i");
}

TEST_CASE("large exact arithmetic stays exact") {
  Rational r = rat(1, 3);
  for (int i = 0; i < 200; ++i) r *= rat(7, 5);
  Rational s = r;
  for (int i = 0; i < 200; ++i) s *= rat(5, 7);
  CHECK(s == rat(1, 3));
}
