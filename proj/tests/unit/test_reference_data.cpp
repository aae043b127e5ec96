#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "saftea/reference_data.hpp"

using namespace saftea;

namespace {

BundleFiles files_with(const std::string& name, const std::string& content) {
  BundleFiles files = embedded_bundle_files();
  files[name] = content;
  return files;
}

std::string replace_line(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string bundle_error_message(const BundleFiles& files) {
  try {
    load_bundle(files);
  } catch (const BundleError& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("saftea-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_SUITE("reference_data") {
  TEST_CASE("embedded bundle has the full 7x11 historical grid") {
    const auto& b = default_bundle();
    const PriceBook& t7 = b.book(PriceSource::table7);
    CHECK(t7.records().size() == 77);
    CHECK(t7.currency() == Currency::brl);
    REQUIRE(t7.years());
    CHECK(t7.years()->first == 2014);
    CHECK(t7.years()->last == 2024);
    CHECK(b.book(PriceSource::table9).records().size() == 28);
  }

  TEST_CASE("windowed means") {
    const auto& b = default_bundle();
    const auto& t9 = b.book(PriceSource::table9);
    CHECK(average_price(t9, Commodity::jet_fuel, {2021, 2024}).amount ==
          doctest::Approx((4.17 + 7.20 + 6.16 + 5.75) / 4).epsilon(1e-12));
    CHECK(average_price(t9, Commodity::jet_fuel, {2021, 2024}).amount == doctest::Approx(5.82).epsilon(1e-3));
    CHECK(average_price(t9, Commodity::naphtha, {2021, 2021}).amount == 5.17);
    CHECK(average_price(b.book(PriceSource::table7), Commodity::ethanol, {2021, 2024}).amount ==
          doctest::Approx(3.335).epsilon(1e-12));
    const Money soy = average_price(t9, Commodity::soy_oil, {2021, 2024});
    CHECK(soy.amount == doctest::Approx((6.59 + 7.82 + 5.38 + 5.05) / 4).epsilon(1e-12));
    CHECK(soy.converted(Currency::usd, FxRate{}).amount == doctest::Approx(6.21 / 5.20).epsilon(1e-12));
  }

  TEST_CASE("window outside the book names the missing year") {
    const auto& t9 = default_bundle().book(PriceSource::table9);
    CHECK_THROWS_WITH_AS(average_price(t9, Commodity::ethanol, {2019, 2022}), doctest::Contains("2019"),
                         ValidationError);
    CHECK_THROWS_AS(average_price(t9, Commodity::ethanol, {2023, 2022}), ValidationError);
  }

  TEST_CASE("effective tax rates") {
    const auto& taxes = default_bundle().taxes;
    CHECK(effective_tax_rate(taxes, Commodity::soy_oil) == doctest::Approx(0.12 + 0.0165 + 0.076).epsilon(1e-15));
    CHECK(effective_tax_rate(taxes, Commodity::soy_oil) == doctest::Approx(0.2125));
    CHECK(effective_tax_rate(taxes, Commodity::ethanol) == doctest::Approx(0.2846));
    TaxSchedule zero;
    zero.rates[Commodity::naphtha] = TaxRates{};
    CHECK(effective_tax_rate(zero, Commodity::naphtha) == 0.0);
    CHECK_THROWS_AS(effective_tax_rate(zero, Commodity::ethanol), ValidationError);
  }

  TEST_CASE("negative price is rejected naming year and commodity") {
    const auto prices = embedded_bundle_files().at("prices.csv");
    const auto bad = replace_line(prices, "2019,ethanol,2.19", "2019,ethanol,-2.19");
    const std::string message = bundle_error_message(files_with("prices.csv", bad));
    CHECK(message.find("2019") != std::string::npos);
    CHECK(message.find("ethanol") != std::string::npos);
    CHECK_THROWS_AS(load_bundle(files_with("prices.csv", bad)), BundleError);
  }

  TEST_CASE("demand totals must add up and not decrease") {
    const auto demand = embedded_bundle_files().at("demand.csv");
    const auto unbalanced = replace_line(demand, "2029,total,lower,1062.4", "2029,total,lower,1062.5");
    CHECK(bundle_error_message(files_with("demand.csv", unbalanced)).find("corsia + probioqav") != std::string::npos);
    auto falling = replace_line(demand, "2029,corsia,lower,949.6", "2029,corsia,lower,649.6");
    falling = replace_line(falling, "2029,total,lower,1062.4", "2029,total,lower,762.4");
    CHECK(bundle_error_message(files_with("demand.csv", falling)).find("decreases") != std::string::npos);
  }

  TEST_CASE("missing row makes the table incomplete") {
    const auto prices = embedded_bundle_files().at("prices.csv");
    const auto bad = replace_line(prices, "2019,ethanol,2.19,BRL,table7\n", "");
    const std::string message = bundle_error_message(files_with("prices.csv", bad));
    CHECK(message.find("table7 incomplete") != std::string::npos);
    CHECK(message.find("ethanol 2019") != std::string::npos);
  }

  TEST_CASE("closed commodity set") {
    const auto prices = embedded_bundle_files().at("prices.csv") + "2020,diesel,3.0,BRL,user\n";
    try {
      load_bundle(files_with("prices.csv", prices));
      FAIL("expected rejection");
    } catch (const BundleError& e) {
      CHECK(e.kind() == BundleError::Kind::schema);
      CHECK(std::string(e.what()).find("diesel") != std::string::npos);
    }
    const auto saf = embedded_bundle_files().at("prices.csv") + "2020,saf,3.0,BRL,user\n";
    CHECK_THROWS_AS(load_bundle(files_with("prices.csv", saf)), BundleError);
  }

  TEST_CASE("missing file and bad headers are reported by table") {
    BundleFiles files = embedded_bundle_files();
    files.erase("taxes.csv");
    try {
      load_bundle(files);
      FAIL("expected rejection");
    } catch (const BundleError& e) {
      CHECK(e.kind() == BundleError::Kind::missing_file);
      CHECK(e.table() == "taxes.csv");
    }
    CHECK_THROWS_AS(load_bundle(files_with("demand.csv", "year,volume\n")), BundleError);
    CHECK_THROWS_AS(load_bundle(files_with("carbon.json", "{not json")), BundleError);
    CHECK_THROWS_AS(load_bundle(std::filesystem::path("/nonexistent/saftea")), BundleError);
  }

  TEST_CASE("user price book") {
    const auto prices = embedded_bundle_files().at("prices.csv") + "2030,jet_fuel,9.5,BRL,user\n";
    const auto b = load_bundle(files_with("prices.csv", prices));
    CHECK(average_price(b.book(PriceSource::user), Commodity::jet_fuel, {2030, 2030}).amount == 9.5);
  }

  TEST_CASE("source directory and embedded copy agree") {
    CHECK(load_bundle(std::filesystem::path(SAFTEA_SOURCE_BUNDLE)) == default_bundle());
  }

  TEST_CASE("serialize round trip through a directory") {
    const DatasetBundle& b = default_bundle();
    TempDir dir;
    write_bundle(b, dir.path);
    const DatasetBundle back = load_bundle(dir.path);
    CHECK(back == b);
    CHECK(bundle_digest(back) == bundle_digest(b));
    CHECK(serialize_bundle(back) == serialize_bundle(b));
  }

  TEST_CASE("digest is stable and content-sensitive") {
    const auto& b = default_bundle();
    CHECK(bundle_digest(b) == bundle_digest(b));
    CHECK(bundle_digest(b).size() == 16);
    DatasetBundle changed = b;
    changed.carbon.fossil_jet.g_per_mj = 90.0;
    CHECK(bundle_digest(changed) != bundle_digest(b));
  }

  TEST_CASE("price basis parsing") {
    CHECK(PriceBasis::parse("reference") == PriceBasis::reference());
    CHECK(PriceBasis::parse("table9") == PriceBasis::window(PriceSource::table9, {2021, 2024}));
    CHECK(PriceBasis::parse("table7:2014-2024") == PriceBasis::window(PriceSource::table7, {2014, 2024}));
    CHECK(PriceBasis::parse("table7:2014-2024").label() == "table7:2014-2024");
    CHECK_THROWS_AS(PriceBasis::parse("table12"), ValidationError);
    CHECK_THROWS_AS(PriceBasis::parse("table7:2024-2014"), ValidationError);
  }

  TEST_CASE("resolved unit prices") {
    const auto& b = default_bundle();
    const UnitPrices ref = resolve_unit_prices(b, PriceBasis::reference(), Currency::usd);
    CHECK(ref.at(Commodity::soy_oil) == doctest::Approx(1.08));
    CHECK(ref.at(Commodity::saf) == ref.at(Commodity::jet_fuel));
    CHECK(ref.at(Commodity::jet_fuel) == doctest::Approx(5.82 / 5.20).epsilon(1e-3));
    const UnitPrices brl = resolve_unit_prices(b, PriceBasis::window(PriceSource::table9, {2021, 2024}), Currency::brl);
    CHECK(brl.at(Commodity::soy_oil) == doctest::Approx(6.21).epsilon(1e-12));
  }
}
