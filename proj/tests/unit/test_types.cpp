#include <doctest.h>

#include <limits>

#include "saftea/types.hpp"

using namespace saftea;

TEST_SUITE("types") {
  TEST_CASE("fx conversion") {
    const FxRate fx;
    CHECK(to_usd(5.20, fx) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(to_usd(0.0, fx) == 0.0);
    CHECK(to_usd(5.62, fx) == doctest::Approx(1.0808).epsilon(1e-4));
    CHECK(to_brl(to_usd(3.7, fx), fx) == doctest::Approx(3.7).epsilon(1e-15));
    CHECK(convert(2.0, Currency::usd, Currency::usd, fx) == 2.0);
    CHECK(convert(1.0, Currency::usd, Currency::brl, fx) == doctest::Approx(5.2));
  }

  TEST_CASE("fx rate must be positive and finite") {
    CHECK_THROWS_AS(FxRate{0.0}.validate(), ValidationError);
    CHECK_THROWS_AS(FxRate{-1.0}.validate(), ValidationError);
    CHECK_THROWS_AS(FxRate{std::numeric_limits<double>::infinity()}.validate(), ValidationError);
  }

  TEST_CASE("money arithmetic is currency-checked") {
    const Money a{1.0, Currency::usd};
    const Money b{5.2, Currency::brl};
    CHECK_THROWS_AS(a + b, CurrencyMismatch);
    CHECK_THROWS_AS(a - b, CurrencyMismatch);
    CHECK((a + b.converted(Currency::usd, FxRate{})).amount == doctest::Approx(2.0));
    CHECK((a * 3.0).amount == 3.0);
  }

  TEST_CASE("commodity identifiers") {
    for (Commodity c : kAllCommodities) {
      CHECK(parse_commodity(to_string(c)) == c);
      CHECK((base_unit(c) == BaseUnit::kwh) == (c == Commodity::electricity));
    }
    CHECK_FALSE(parse_commodity("diesel").has_value());
    CHECK(to_string(BaseUnit::kwh) == "kWh");
  }

  TEST_CASE("route parsing") {
    CHECK(parse_route("HEFA") == Route::hefa);
    CHECK(parse_route("atj") == Route::atj);
    CHECK(parse_route("etj") == Route::atj);
    CHECK_THROWS_AS(parse_route("ft"), ValidationError);
  }

  TEST_CASE("currency parsing") {
    CHECK(parse_currency("usd") == Currency::usd);
    CHECK(parse_currency("BRL") == Currency::brl);
    CHECK_THROWS_AS(parse_currency("eur"), ValidationError);
  }

  TEST_CASE("year range") {
    const YearRange r{2021, 2024};
    CHECK(r.count() == 4);
    CHECK(r.contains(2021));
    CHECK_FALSE(r.contains(2025));
  }
}
