#include <doctest.h>

#include <random>

#include "grothlin/error.hpp"
#include "grothlin/rational.hpp"

using namespace grothlin;

TEST_SUITE_BEGIN("rational");

TEST_CASE("canonical form") {
  Rational half(2, 4);
  CHECK(half.num() == 1);
  CHECK(half.den() == 2);

  Rational neg(3, -6);
  CHECK(neg.num() == -1);
  CHECK(neg.den() == 2);

  Rational zero(0, 7);
  CHECK(zero.num() == 0);
  CHECK(zero.den() == 1);
  CHECK(zero.is_zero());

  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("parse and render") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("3/6") == Rational(1, 2));
  CHECK(Rational::parse("-1/2") == Rational(-1, 2));
  CHECK(Rational::parse("+4/8") == Rational(1, 2));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("a"), Error);
  CHECK_THROWS_AS(Rational::parse("1.5"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);

  CHECK(Rational(7, 2).str() == "7/2");
  CHECK(Rational(-4, 2).str() == "-2");
  CHECK(Rational(0).str() == "0");
}

TEST_CASE("arbitrary precision") {
  Rational big = Rational::parse("123456789012345678901234567890/7");
  Rational sum = big + big;
  CHECK(sum == Rational::parse("246913578024691357802469135780/7"));
  Rational prod = big * Rational(7);
  CHECK(prod == Rational::parse("123456789012345678901234567890"));
  CHECK(prod.is_integer());
}

TEST_CASE("exact arithmetic") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  CHECK(Rational(-5, 3).abs() == Rational(5, 3));
  CHECK(Rational(3, 7).reciprocal() == Rational(7, 3));
}

TEST_CASE("field laws on random values") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 24);
  for (int i = 0; i < 300; ++i) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    if (a < b) CHECK(!(b < a));
    if (!b.is_zero()) CHECK(a / b * b == a);
    CHECK(Rational::parse(a.str()) == a);
  }
}

TEST_SUITE_END();
