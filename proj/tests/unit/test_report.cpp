#include <doctest.h>

#include <algorithm>
#include <limits>

#include "saftea/report.hpp"

using namespace saftea;
using namespace saftea::report;

namespace {

const Row& find(const std::vector<Row>& rows, const std::string& id) {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& r) { return r.id == id; });
  REQUIRE(it != rows.end());
  return *it;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("reproduction rows") {
    const auto rows = reproduce(default_bundle());
    CHECK(find(rows, "check_test.hefa").status == Status::match);
    CHECK(find(rows, "check_test.atj").status == Status::match);
    for (const auto& r : rows) {
      if (r.section == "demand_additivity" || r.section == "tax_lines") CHECK(r.status == Status::match);
      if (r.section == "max_capex") {
        CHECK(r.status == Status::deviation);
        CHECK_FALSE(r.note.empty());
      }
    }
    CHECK(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.section == "demand_additivity"; }) == 8);
    CHECK(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.section == "max_capex"; }) == 6);
    const Row& low = find(rows, "byproducts.low");
    CHECK(*low.computed == doctest::Approx(1529.136).epsilon(1e-9));
    CHECK(*low.relative_error() == doctest::Approx(0.0194).epsilon(0.01));
    CHECK(find(rows, "max_capex_order.hefa").status == Status::match);
    CHECK(find(rows, "assumption.hydrogen_tax").status == Status::assumption);
  }

  TEST_CASE("relative error edge cases") {
    Row r;
    r.computed = 1.0;
    r.published = 0.0;
    CHECK(*r.relative_error() == std::numeric_limits<double>::infinity());
    r.computed = 0.0;
    CHECK(*r.relative_error() == 0.0);
    r.published.reset();
    CHECK_FALSE(r.relative_error().has_value());
  }

  TEST_CASE("historical comparison") {
    const auto rows = historical_comparison(default_bundle(), Route::hefa);
    REQUIRE(rows.size() == 11);
    CHECK(rows.front().year == 2014);
    CHECK(rows.back().year == 2024);
    for (const auto& r : rows) {
      CHECK(r.total_variable == doctest::Approx(r.pre_tax_cost + r.taxes).epsilon(1e-14));
      CHECK(r.net_cost > r.jet_fuel_price);
    }
    const auto untaxed = historical_comparison(default_bundle(), Route::atj, false);
    for (const auto& r : untaxed) CHECK(r.taxes == 0.0);
  }
}
