#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>

#include "affl1/errors.hpp"
#include "affl1/rational.hpp"

using affl1::Rational;

TEST_CASE("normalization") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("arithmetic") {
  const Rational half(1, 2), third(1, 3);
  CHECK(half + third == Rational(5, 6));
  CHECK(half - third == Rational(1, 6));
  CHECK(half * third == Rational(1, 6));
  CHECK(half / third == Rational(3, 2));
  CHECK(-half == Rational(-1, 2));
  CHECK(affl1::abs(Rational(-7, 3)) == Rational(7, 3));
  CHECK_THROWS(half / Rational(0));
}

TEST_CASE("ordering and printing") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(7) > Rational(13, 2));
  CHECK(Rational(5, 6).to_string() == "5/6");
  CHECK(Rational(-4).to_string() == "-4");
  CHECK(Rational(6, 4).to_double() == doctest::Approx(1.5));
}

TEST_CASE("overflow is detected") {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
  CHECK_THROWS(big + big);
  CHECK_THROWS(big * Rational(3));
}
