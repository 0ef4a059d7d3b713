#include "doctest.h"
#include "netshield/rational.hpp"

using namespace netshield;

TEST_CASE("fractions parse and canonicalize") {
    CHECK(*parse_fraction("3/6") == Rational(1, 2));
    CHECK(*parse_fraction("7/3") == Rational(7, 3));
    CHECK(*parse_fraction("5") == Rational(5));
    CHECK(*parse_fraction("-2/4") == Rational(-1, 2));
    CHECK(*parse_fraction("0/9") == Rational(0));
    CHECK(format_fraction(*parse_fraction("14/6")) == "7/3");
    CHECK(format_fraction(Rational(4)) == "4/1");
}

TEST_CASE("malformed fractions are rejected") {
    CHECK(!parse_fraction("3/0"));
    CHECK(!parse_fraction(""));
    CHECK(!parse_fraction("/3"));
    CHECK(!parse_fraction("a/b"));
    CHECK(!parse_fraction("1.5"));
    CHECK(!parse_fraction("1/2/3"));
}

TEST_CASE("arithmetic stays exact") {
    Rational third(1, 3);
    Rational sum = third + third + third;
    CHECK(sum == 1);
    CHECK(make_rational(19, 4) - make_rational(1, 4) == make_rational(9, 2));
}
