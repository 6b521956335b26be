#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "hgrl/rational.hpp"

using hgrl::Rational;

TEST(Rational, NormalizesSignAndGcd) {
    Rational r(6, -8);
    EXPECT_EQ(r.numerator(), -3);
    EXPECT_EQ(r.denominator(), 4);
    EXPECT_EQ(Rational(0, -5), Rational(0));
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ParsesIntegerFractionAndDecimalForms) {
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_EQ(Rational::parse("-1/20"), Rational(-1, 20));
    EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
    EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
    EXPECT_EQ(Rational::parse("-0.05"), Rational(-1, 20));
    EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("1/"), std::invalid_argument);
    EXPECT_THROW(Rational::parse(""), std::invalid_argument);
}

TEST(Rational, ArithmeticIsExact) {
    const Rational a(1, 3), b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_EQ(-a, Rational(-1, 3));
    EXPECT_THROW(a / Rational(0), std::domain_error);
    // the default grid transform sends −1/20 to 0 and 1 to 1
    const Rational scale(20, 21), offset(1, 21);
    EXPECT_EQ(scale * Rational(-1, 20) + offset, Rational(0));
    EXPECT_EQ(scale * Rational(1) + offset, Rational(1));
}

TEST(Rational, OrdersByValue) {
    EXPECT_LT(Rational(-1, 20), Rational(0));
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(7, 5), Rational(4, 3));
}

TEST(Rational, OverflowAfterReductionThrows) {
    const Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
    EXPECT_THROW(big * big, std::overflow_error);
    EXPECT_THROW(big + big, std::overflow_error);
    // large intermediate products that reduce back into range are fine
    const Rational x(std::int64_t{1} << 40, 3), y(3, std::int64_t{1} << 40);
    EXPECT_EQ(x * y, Rational(1));
}

TEST(Rational, ApproximateRecoversSimpleFractions) {
    EXPECT_EQ(Rational::approximate(0.5), Rational(1, 2));
    EXPECT_EQ(Rational::approximate(0.9), Rational(9, 10));
    EXPECT_EQ(Rational::approximate(1.0 / 3.0), Rational(1, 3));
    EXPECT_EQ(Rational::approximate(-0.05), Rational(-1, 20));
    EXPECT_NEAR(Rational::approximate(3.14159265358979, 1000).to_double(), 3.14159265358979, 1e-5);
}

TEST(Rational, PrintsCanonicalText) {
    EXPECT_EQ(Rational(-1, 20).to_string(), "-1/20");
    EXPECT_EQ(Rational(4, 2).to_string(), "2");
    std::ostringstream os;
    os << Rational(3, 7);
    EXPECT_EQ(os.str(), "3/7");
}
