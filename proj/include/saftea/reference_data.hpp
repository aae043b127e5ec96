#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "saftea/carbon.hpp"
#include "saftea/demand.hpp"
#include "saftea/finance.hpp"
#include "saftea/types.hpp"

namespace saftea {

inline constexpr int kBundleVersion = 1;

/// Raised while loading a dataset bundle. The message names the offending file and row.
class BundleError : public std::runtime_error {
 public:
  enum class Kind { missing_file, schema, invariant };

  BundleError(Kind kind, std::string table, const std::string& message)
      : std::runtime_error(table + ": " + message), kind_(kind), table_(std::move(table)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& table() const noexcept { return table_; }

 private:
  Kind kind_;
  std::string table_;
};

enum class PriceSource { table7, table9, table11, user };

std::string_view to_string(PriceSource s);
std::optional<PriceSource> parse_price_source(std::string_view text);

struct PriceRecord {
  int year = 0;
  Commodity commodity = Commodity::jet_fuel;
  double value = 0.0;  // per base unit of the commodity
  Currency currency = Currency::brl;
  PriceSource source = PriceSource::user;

  bool operator==(const PriceRecord&) const = default;
};

/// Yearly prices from one source keyed by (year, commodity). All records share a currency.
class PriceBook {
 public:
  PriceBook() = default;
  PriceBook(PriceSource source, Currency currency, std::vector<PriceRecord> records);

  PriceSource source() const { return source_; }
  Currency currency() const { return currency_; }
  const std::vector<PriceRecord>& records() const { return records_; }
  std::optional<double> find(int year, Commodity c) const;
  bool has(Commodity c) const;
  std::optional<YearRange> years() const;

  bool operator==(const PriceBook&) const = default;

 private:
  PriceSource source_ = PriceSource::user;
  Currency currency_ = Currency::brl;
  std::vector<PriceRecord> records_;  // sorted by (year, commodity)
};

/// Mean of the yearly values over `years`. Throws ValidationError naming the first missing year.
Money average_price(const PriceBook& book, Commodity c, YearRange years);

/// A published multi-year average unit price (unit_prices.csv).
struct WindowPrice {
  Commodity commodity = Commodity::jet_fuel;
  double value = 0.0;
  Currency currency = Currency::usd;
  YearRange years;
  PriceSource source = PriceSource::table11;

  bool operator==(const WindowPrice&) const = default;
};

struct TaxRates {
  double icms = 0.0;
  double pis = 0.0;
  double cofins = 0.0;
  double cide_per_liter = 0.0;  // carried, never applied per kg

  double effective() const { return icms + pis + cofins; }
  bool operator==(const TaxRates&) const = default;
};

struct TaxSchedule {
  std::map<Commodity, TaxRates> rates;

  bool operator==(const TaxSchedule&) const = default;
};

double effective_tax_rate(const TaxSchedule& schedule, Commodity c);

/// Specific consumptions per kg SAF and the naphtha-equivalent by-product yield.
struct YieldSpec {
  Route route = Route::hefa;
  std::map<Commodity, double> consumption;
  double byproduct_yield = 0.0;
  double other_variable_cost = 0.0;
  double other_variable_tax = 0.0;
  Currency other_currency = Currency::usd;

  bool operator==(const YieldSpec&) const = default;
};

/// Published comparison values (targets.json) used for deviation reporting only.
struct PublishedTargets {
  std::map<Route, double> check_test_usd_per_kg;
  // keys: soy_oil|ethanol, electricity, hydrogen, natural_gas, other
  std::map<Route, std::map<std::string, double>> tax_lines_usd_per_kg;
  // keys: base, s1, s2
  std::map<Route, std::map<std::string, double>> max_capex_usd;
  double byproduct_low_kt = 0.0;
  double byproduct_high_kt = 0.0;
  double demand_low_kt = 0.0;
  double demand_high_kt = 0.0;

  bool operator==(const PublishedTargets&) const = default;
};

struct DatasetBundle {
  int bundle_version = kBundleVersion;
  std::map<PriceSource, PriceBook> price_books;
  std::vector<WindowPrice> reference_unit_prices;
  TaxSchedule taxes;
  std::map<Route, YieldSpec> yields;
  carbon::CarbonSet carbon;
  finance::FinanceData finance;
  demand::DemandTable demand;
  demand::InvestmentData investment;
  PublishedTargets targets;
  std::map<std::string, std::string> provenance;

  const PriceBook& book(PriceSource s) const;
  const YieldSpec& yield(Route r) const;

  bool operator==(const DatasetBundle&) const = default;
};

/// File name -> file contents for every file of a bundle directory.
using BundleFiles = std::map<std::string, std::string>;

DatasetBundle load_bundle(const std::filesystem::path& dir);
DatasetBundle load_bundle(const BundleFiles& files);

/// The dataset compiled into the library.
const DatasetBundle& default_bundle();
const BundleFiles& embedded_bundle_files();

BundleFiles serialize_bundle(const DatasetBundle& bundle);
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// Stable 64-bit FNV-1a digest over the serialized bundle, as 16 hex digits.
std::string bundle_digest(const DatasetBundle& bundle);

/// Which prices feed an evaluation.
///   reference: published DCF unit prices for inputs, table9 2021-2024 means for products
///   window:    per-commodity mean of one yearly book over a year window
struct PriceBasis {
  enum class Kind { reference, window };

  Kind kind = Kind::reference;
  PriceSource source = PriceSource::table9;
  YearRange years{2021, 2024};

  static PriceBasis reference() { return {}; }
  static PriceBasis window(PriceSource source, YearRange years) { return {Kind::window, source, years}; }

  /// "reference", "table9", "table7", "table7:2014-2024", "user:2021-2021", ...
  static PriceBasis parse(std::string_view text);
  std::string label() const;

  bool operator==(const PriceBasis&) const = default;
};

/// Resolved unit prices in one currency. saf is priced as jet_fuel.
struct UnitPrices {
  Currency currency = Currency::usd;
  std::map<Commodity, double> price;

  double at(Commodity c) const;
  bool has(Commodity c) const { return price.count(c) != 0; }
};

UnitPrices resolve_unit_prices(const DatasetBundle& bundle, const PriceBasis& basis, Currency currency);

}  // namespace saftea
