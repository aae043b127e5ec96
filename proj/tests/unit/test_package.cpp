#include <doctest.h>

#include <cmath>

#include "saftea/package.hpp"

using namespace saftea;

TEST_SUITE("package") {
  TEST_CASE("named scenarios") {
    CHECK(named_package("base") == kBasePackage);
    CHECK(named_package("S1") == IncentivePackage{0.5, 200.0, 0.25, 0.25, 0.0});
    CHECK(named_package("s2") == IncentivePackage{1.0, 400.0, 0.5, 0.5, 0.0});
    CHECK_THROWS_WITH_AS(named_package("nosuch"), doctest::Contains("unknown scenario"), ValidationError);
    CHECK(package_name(kScenario1) == std::optional<std::string>("s1"));
    CHECK_FALSE(package_name(kBasePackage.with(Lever::carbon_price, 1.0)).has_value());
  }

  TEST_CASE("lever access") {
    for (Lever lever : kAllLevers) {
      CHECK(parse_lever(to_string(lever)) == lever);
      CHECK(kBasePackage.with(lever, 0.75).get(lever) == 0.75);
    }
    CHECK_THROWS_AS(parse_lever("subsidy"), ValidationError);
  }

  TEST_CASE("bounds name the offending field") {
    try {
      IncentivePackage{1.5, 0, 0, 0, 0}.validate();
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "tax_discount");
      CHECK(e.kind() == ValidationError::Kind::bounds);
    }
    CHECK_THROWS_AS((IncentivePackage{0, -1.0, 0, 0, 0}.validate()), ValidationError);
    CHECK_THROWS_AS((IncentivePackage{0, 0, 0, 0, -1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((IncentivePackage{0, 0, std::nan(""), 0, 0}.validate()), ValidationError);
    CHECK_NOTHROW(IncentivePackage{1.0, 1e6, 3.0, 3.0, 1e9}.validate());
  }
}
