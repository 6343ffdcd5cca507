#include <doctest.h>

#include <random>
#include <sstream>

#include "polyd/rational.hpp"

using polyd::RatMatrix;
using polyd::Rational;

TEST_CASE("parsing integers, fractions and decimals") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational::parse("4/6") == Rational(2, 3));
    CHECK(Rational::parse("-4/6") == Rational(-2, 3));
    CHECK(Rational::parse("2.3") == Rational(23, 10));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::parse("23/10") == Rational(23, 10));
    CHECK(Rational::parse(" 11/10 ") == Rational(11, 10));
    CHECK(Rational::parse("0.0") == Rational(0));
    CHECK(Rational::parse("10.") == Rational(10));

    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("a"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1e3"), std::invalid_argument);
}

TEST_CASE("canonical form and printing") {
    CHECK(Rational(4, 6).str() == "2/3");
    CHECK(Rational(4, -6).str() == "-2/3");
    CHECK(Rational(-4, -6).str() == "2/3");
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational(6, 3).str() == "2");
    CHECK(Rational(6, 3).is_integer());
    CHECK(Rational(23, 10).denominator() == 10);
    std::ostringstream os;
    os << Rational(-3, 2);
    CHECK(os.str() == "-3/2");
}

TEST_CASE("parse-print-parse round trip on random rationals") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        long num = static_cast<long>(rng() % 20001) - 10000;
        long den = static_cast<long>(rng() % 999) + 1;
        Rational r(num, den);
        CHECK(Rational::parse(r.str()) == r);
    }
}

TEST_CASE("exact arithmetic") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 7) / Rational(2, 7) == Rational(1, 2));
    CHECK(-Rational(5, 2) == Rational(-5, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(abs(Rational(-5, 2)) == Rational(5, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);

    // no overflow: (2^40)^2 needs arbitrary precision
    Rational big(1099511627776L, 1);
    CHECK((big * big).str() == "1208925819614629174706176");
}

TEST_CASE("rationals work as an Eigen scalar") {
    RatMatrix A(2, 2);
    A << Rational(1, 2), Rational(1, 3), Rational(0), Rational(2);
    RatMatrix B = A * A;
    CHECK(B(0, 0) == Rational(1, 4));
    CHECK(B(0, 1) == Rational(1, 6) + Rational(2, 3));
    CHECK(B(1, 1) == Rational(4));
}
