// Expression grammar: precedence, associativity, functions, failure modes.

#include "geonet/expression.hpp"

#include <cmath>

#include "doctest.h"
#include "geonet/errors.hpp"

using geonet::Expression;
using geonet::GeonetError;

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(Expression::parse("1+2*3").eval(0, 0) == doctest::Approx(7.0));
  CHECK(Expression::parse("(1+2)*3").eval(0, 0) == doctest::Approx(9.0));
  CHECK(Expression::parse("2^3^2").eval(0, 0) == doctest::Approx(512.0));  // right-assoc
  CHECK(Expression::parse("8/4/2").eval(0, 0) == doctest::Approx(1.0));
  CHECK(Expression::parse("-u^2").eval(3, 0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2 - -3").eval(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("variables, pi, functions") {
  CHECK(Expression::parse("u*v").eval(2.5, -4.0) == doctest::Approx(-10.0));
  CHECK(Expression::parse("sin(pi/2)").eval(0, 0) == doctest::Approx(1.0));
  CHECK(Expression::parse("cos(0)").eval(0, 0) == doctest::Approx(1.0));
  CHECK(Expression::parse("sinh(1)-(exp(1)-exp(-1))/2").eval(0, 0) == doctest::Approx(0.0));
  CHECK(Expression::parse("cosh(u)^2-sinh(u)^2").eval(0.7, 0) == doctest::Approx(1.0));
  CHECK(Expression::parse("4/(1-u^2-v^2)^2").eval(0.1, 0.2) ==
        doctest::Approx(4.0 / std::pow(0.95, 2)));
}

TEST_CASE("parse failures carry a position") {
  CHECK_THROWS_AS(Expression::parse("1+"), GeonetError);
  CHECK_THROWS_AS(Expression::parse("sin u"), GeonetError);
  CHECK_THROWS_AS(Expression::parse("bogus(1)"), GeonetError);
  CHECK_THROWS_AS(Expression::parse("(1+2"), GeonetError);
  CHECK_THROWS_AS(Expression::parse("1 2"), GeonetError);
  CHECK_THROWS_AS(Expression::parse(""), GeonetError);
  try {
    Expression::parse("1+@");
    FAIL("expected a throw");
  } catch (const GeonetError& e) {
    CHECK(e.code() == geonet::ErrorCode::invalid_input);
    CHECK(std::string(e.what()).find("offset 2") != std::string::npos);
  }
}

TEST_CASE("round-trip text is preserved") {
  auto e = Expression::parse(" u ^ 2 + 1 ");
  CHECK(e.text() == " u ^ 2 + 1 ");
  Expression copy = e;  // shared tree, value copy
  CHECK(copy.eval(3, 0) == doctest::Approx(10.0));
}
