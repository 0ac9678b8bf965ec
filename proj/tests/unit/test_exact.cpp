#include <gtest/gtest.h>

#include <limits>
#include <numbers>

#include "gnlab/error.hpp"
#include "gnlab/exact.hpp"

using namespace gnlab;

TEST(Rational, NormalizesSignAndGcd) {
  Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(r.to_string(), "-3/4");
}

TEST(Rational, ZeroDenominatorIsParameterError) {
  try {
    Rational(1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParameter);
  }
}

TEST(Rational, OverflowReturnsNullopt) {
  Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
  EXPECT_FALSE(Rational::add(big, big).has_value());
  EXPECT_FALSE(Rational::mul(big, Rational(3)).has_value());
  EXPECT_EQ(*Rational::add(Rational(1, 3), Rational(1, 6)), Rational(1, 2));
}

TEST(Rational, FromDouble) {
  EXPECT_EQ(*Rational::from_double(0.25), Rational(1, 4));
  EXPECT_EQ(*Rational::from_double(1.0 / 3.0), Rational(1, 3));
  EXPECT_FALSE(Rational::from_double(std::numbers::pi).has_value());
}

TEST(Scalar, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(*Scalar::parse("-1/3").exact(), Rational(-1, 3));
  EXPECT_EQ(*Scalar::parse("0.5").exact(), Rational(1, 2));
  EXPECT_EQ(*Scalar::parse("1e-3").exact(), Rational(1, 1000));
  EXPECT_EQ(*Scalar::parse("12").exact(), Rational(12));
}

TEST(Scalar, MalformedIsParameterError) {
  for (const char* bad : {"", "1/", "abc", "1/0", "2x"}) {
    try {
      Scalar::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kParameter) << bad;
    }
  }
}

TEST(Scalar, ExactArithmeticStaysExact) {
  Scalar a = Scalar::parse("1/12");
  Scalar b = Scalar(1) / Scalar(2) * (Scalar(1) / Scalar(6));
  EXPECT_TRUE((a - b).is_exact());
  EXPECT_TRUE(Scalar::equal(a, b, 0.0));
}

TEST(Scalar, InexactFallsBackToTolerance) {
  Scalar x(std::numbers::sqrt2);
  EXPECT_FALSE(x.is_exact());
  EXPECT_TRUE(Scalar::equal(x * x, Scalar(2), 1e-12));
  EXPECT_FALSE(Scalar::equal(x, Scalar(1), 1e-3));
}

TEST(Exponent, InfinityHasZeroReciprocal) {
  Exponent inf = Exponent::parse("inf");
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_TRUE(inf.reciprocal().is_exact());
  EXPECT_EQ(inf.reciprocal().value(), 0.0);
  EXPECT_EQ(inf.to_string(), "inf");
  EXPECT_EQ(Exponent::parse("infinity"), inf);
}

TEST(Exponent, FiniteReciprocalIsExact) {
  Exponent p = Exponent::parse("12");
  EXPECT_EQ(*p.reciprocal().exact(), Rational(1, 12));
  EXPECT_FALSE(p == Exponent::infinity());
}
