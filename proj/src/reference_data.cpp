#include "saftea/reference_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "saftea/detail/text.hpp"

namespace saftea {

using nlohmann::json;

namespace {

constexpr int kBundledFirstYear = 2014;
constexpr int kBundledLastYear = 2024;

const char* const kPricesFile = "prices.csv";
const char* const kUnitPricesFile = "unit_prices.csv";
const char* const kTaxesFile = "taxes.csv";
const char* const kYieldsFile = "yields.json";
const char* const kCarbonFile = "carbon.json";
const char* const kFinanceFile = "finance.json";
const char* const kDemandFile = "demand.csv";
const char* const kInvestmentFile = "investment.json";
const char* const kTargetsFile = "targets.json";
const char* const kManifestFile = "manifest.json";

const std::vector<std::string>& bundle_file_names() {
  static const std::vector<std::string> names = {kManifestFile, kPricesFile,  kUnitPricesFile,
                                                 kTaxesFile,    kYieldsFile,  kCarbonFile,
                                                 kFinanceFile,  kDemandFile,  kInvestmentFile,
                                                 kTargetsFile};
  return names;
}

[[noreturn]] void schema_error(const std::string& table, const std::string& message) {
  throw BundleError(BundleError::Kind::schema, table, message);
}

[[noreturn]] void invariant_error(const std::string& table, const std::string& message) {
  throw BundleError(BundleError::Kind::invariant, table, message);
}

const std::string& file_content(const BundleFiles& files, const std::string& name) {
  auto it = files.find(name);
  if (it == files.end()) {
    throw BundleError(BundleError::Kind::missing_file, name, "file is missing from the bundle");
  }
  return it->second;
}

struct CsvTable {
  std::string name;
  std::vector<std::vector<std::string>> rows;  // data rows only
  std::vector<int> line_numbers;

  std::string where(std::size_t i) const { return "row " + std::to_string(line_numbers[i]); }
};

CsvTable read_csv(const BundleFiles& files, const std::string& name, std::string_view expected_header) {
  CsvTable table{name, {}, {}};
  std::istringstream in(file_content(files, name));
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split(line, ',');
    for (auto& f : fields) f = std::string(detail::trim(f));
    if (!header_seen) {
      if (detail::join(fields, ",") != expected_header) {
        schema_error(name, "expected header '" + std::string(expected_header) + "', found '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto expected = detail::split(std::string(expected_header), ',').size();
    if (fields.size() != expected) {
      schema_error(name, "row " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                             " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!header_seen) schema_error(name, "file is empty");
  return table;
}

double csv_number(const CsvTable& table, std::size_t row, const std::string& text, const char* column) {
  auto value = detail::parse_double(text);
  if (!value) schema_error(table.name, table.where(row) + ": column '" + column + "' is not a number: '" + text + "'");
  return *value;
}

int csv_int(const CsvTable& table, std::size_t row, const std::string& text, const char* column) {
  auto value = detail::parse_int(text);
  if (!value) schema_error(table.name, table.where(row) + ": column '" + column + "' is not an integer: '" + text + "'");
  return *value;
}

Commodity csv_commodity(const CsvTable& table, std::size_t row, const std::string& text) {
  auto c = parse_commodity(text);
  if (!c) schema_error(table.name, table.where(row) + ": unknown commodity '" + text + "'");
  return *c;
}

Currency csv_currency(const CsvTable& table, std::size_t row, const std::string& text) {
  if (text == "BRL") return Currency::brl;
  if (text == "USD") return Currency::usd;
  schema_error(table.name, table.where(row) + ": unknown currency '" + text + "' (expected BRL or USD)");
}

json parse_json(const BundleFiles& files, const std::string& name) {
  try {
    json doc = json::parse(file_content(files, name));
    if (!doc.is_object()) schema_error(name, "top-level value must be an object");
    if (doc.contains("bundle_version") && doc["bundle_version"] != kBundleVersion) {
      schema_error(name, "unsupported bundle_version " + doc["bundle_version"].dump());
    }
    return doc;
  } catch (const json::parse_error& e) {
    schema_error(name, std::string("invalid JSON: ") + e.what());
  }
}

const json& member(const json& obj, const std::string& key, const std::string& table, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) schema_error(table, "missing field '" + path + key + "'");
  return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& table, const std::string& path = "") {
  const json& v = member(obj, key, table, path);
  if (!v.is_number()) schema_error(table, "field '" + path + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(table, "field '" + path + key + "' must be finite");
  return d;
}

std::string text(const json& obj, const std::string& key, const std::string& table, const std::string& path = "") {
  const json& v = member(obj, key, table, path);
  if (!v.is_string()) schema_error(table, "field '" + path + key + "' must be a string");
  return v.get<std::string>();
}

std::pair<double, double> number_pair(const json& obj, const std::string& key, const std::string& table,
                                      const std::string& path) {
  const json& v = member(obj, key, table, path);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    schema_error(table, "field '" + path + key + "' must be a [low, high] pair of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Route json_route(const std::string& key, const std::string& table) {
  try {
    return parse_route(key);
  } catch (const ValidationError&) {
    schema_error(table, "unknown route '" + key + "'");
  }
}

std::string key_of(int year, Commodity c) { return "(" + std::to_string(year) + ", " + std::string(to_string(c)) + ")"; }

// ---- loaders -----------------------------------------------------------------

std::map<PriceSource, PriceBook> load_prices(const BundleFiles& files) {
  const CsvTable table = read_csv(files, kPricesFile, "year,commodity,value,currency,source");
  std::map<PriceSource, std::vector<PriceRecord>> by_source;
  std::set<std::tuple<int, Commodity, PriceSource>> seen;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    PriceRecord r;
    r.year = csv_int(table, i, f[0], "year");
    r.commodity = csv_commodity(table, i, f[1]);
    r.value = csv_number(table, i, f[2], "value");
    r.currency = csv_currency(table, i, f[3]);
    auto source = parse_price_source(f[4]);
    if (!source || *source == PriceSource::table11) {
      schema_error(table.name, table.where(i) + ": unknown source '" + f[4] + "' (expected table7, table9 or user)");
    }
    r.source = *source;
    const std::string where = table.where(i) + " " + key_of(r.year, r.commodity);
    if (r.commodity == Commodity::saf) invariant_error(table.name, where + ": saf is priced as jet_fuel");
    if (!std::isfinite(r.value) || r.value <= 0.0) invariant_error(table.name, where + ": value must be > 0");
    if (r.source != PriceSource::user && (r.year < kBundledFirstYear || r.year > kBundledLastYear)) {
      invariant_error(table.name, where + ": year outside 2014-2024 for source " + std::string(to_string(r.source)));
    }
    if (!seen.insert({r.year, r.commodity, r.source}).second) {
      invariant_error(table.name, where + ": duplicate entry for source " + std::string(to_string(r.source)));
    }
    by_source[r.source].push_back(r);
  }

  std::map<PriceSource, PriceBook> books;
  for (auto& [source, records] : by_source) {
    const Currency currency = records.front().currency;
    for (const auto& r : records) {
      if (r.currency != currency) {
        invariant_error(table.name, std::string(to_string(source)) + " mixes BRL and USD records " +
                                        key_of(r.year, r.commodity));
      }
    }
    books.emplace(source, PriceBook(source, currency, std::move(records)));
  }

  auto require_complete = [&](PriceSource source, YearRange years) {
    auto it = books.find(source);
    if (it == books.end()) invariant_error(table.name, std::string(to_string(source)) + " incomplete: no records");
    for (int year = years.first; year <= years.last; ++year) {
      for (Commodity c : kPricedCommodities) {
        if (!it->second.find(year, c)) {
          invariant_error(table.name, std::string(to_string(source)) + " incomplete: missing " +
                                          std::string(to_string(c)) + " " + std::to_string(year));
        }
      }
    }
  };
  require_complete(PriceSource::table7, {2014, 2024});
  require_complete(PriceSource::table9, {2021, 2024});
  return books;
}

std::vector<WindowPrice> load_unit_prices(const BundleFiles& files) {
  const CsvTable table = read_csv(files, kUnitPricesFile, "commodity,value,currency,first_year,last_year,source");
  std::vector<WindowPrice> out;
  std::set<std::pair<Commodity, PriceSource>> seen;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    WindowPrice w;
    w.commodity = csv_commodity(table, i, f[0]);
    w.value = csv_number(table, i, f[1], "value");
    w.currency = csv_currency(table, i, f[2]);
    w.years = {csv_int(table, i, f[3], "first_year"), csv_int(table, i, f[4], "last_year")};
    auto source = parse_price_source(f[5]);
    if (!source) schema_error(table.name, table.where(i) + ": unknown source '" + f[5] + "'");
    w.source = *source;
    const std::string where = table.where(i) + " (" + f[0] + ")";
    if (!std::isfinite(w.value) || w.value <= 0.0) invariant_error(table.name, where + ": value must be > 0");
    if (w.years.first > w.years.last) invariant_error(table.name, where + ": first_year after last_year");
    if (w.commodity == Commodity::saf) invariant_error(table.name, where + ": saf is priced as jet_fuel");
    if (!seen.insert({w.commodity, w.source}).second) invariant_error(table.name, where + ": duplicate entry");
    out.push_back(w);
  }
  return out;
}

TaxSchedule load_taxes(const BundleFiles& files) {
  const CsvTable table = read_csv(files, kTaxesFile, "commodity,icms,pis,cofins,cide_per_liter");
  TaxSchedule schedule;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    const Commodity c = csv_commodity(table, i, f[0]);
    TaxRates rates{csv_number(table, i, f[1], "icms"), csv_number(table, i, f[2], "pis"),
                   csv_number(table, i, f[3], "cofins"), csv_number(table, i, f[4], "cide_per_liter")};
    const std::string where = table.where(i) + " (" + f[0] + ")";
    for (double rate : {rates.icms, rates.pis, rates.cofins}) {
      if (!(rate >= 0.0 && rate < 0.5)) invariant_error(table.name, where + ": each rate must be in [0, 0.5)");
    }
    if (!(rates.cide_per_liter >= 0.0)) invariant_error(table.name, where + ": cide_per_liter must be >= 0");
    if (!schedule.rates.emplace(c, rates).second) invariant_error(table.name, where + ": duplicate commodity");
  }
  return schedule;
}

std::map<Route, YieldSpec> load_yields(const BundleFiles& files) {
  const json doc = parse_json(files, kYieldsFile);
  const json& routes = member(doc, "routes", kYieldsFile, "");
  if (!routes.is_object()) schema_error(kYieldsFile, "'routes' must be an object");
  std::map<Route, YieldSpec> out;
  for (const auto& [key, spec] : routes.items()) {
    const std::string path = "routes." + key + ".";
    YieldSpec y;
    y.route = json_route(key, kYieldsFile);
    const json& consumption = member(spec, "consumption", kYieldsFile, path);
    if (!consumption.is_object()) schema_error(kYieldsFile, "'" + path + "consumption' must be an object");
    for (const auto& [name, qty] : consumption.items()) {
      auto c = parse_commodity(name);
      if (!c) schema_error(kYieldsFile, "unknown commodity '" + name + "' in " + path + "consumption");
      if (!qty.is_number() || !std::isfinite(qty.get<double>()) || qty.get<double>() < 0.0) {
        invariant_error(kYieldsFile, path + "consumption." + name + " must be a number >= 0");
      }
      y.consumption[*c] = qty.get<double>();
    }
    y.byproduct_yield = number(spec, "byproduct_yield", kYieldsFile, path);
    y.other_variable_cost = number(spec, "other_variable_cost", kYieldsFile, path);
    y.other_variable_tax = number(spec, "other_variable_tax", kYieldsFile, path);
    const std::string cur = text(spec, "other_currency", kYieldsFile, path);
    if (cur != "USD" && cur != "BRL") schema_error(kYieldsFile, path + "other_currency must be USD or BRL");
    y.other_currency = cur == "USD" ? Currency::usd : Currency::brl;
    for (double v : {y.byproduct_yield, y.other_variable_cost, y.other_variable_tax}) {
      if (v < 0.0) invariant_error(kYieldsFile, path + " quantities must be >= 0");
    }
    auto consumes = [&](Commodity c) {
      auto it = y.consumption.find(c);
      return it != y.consumption.end() && it->second > 0.0;
    };
    if (y.route == Route::hefa && (!consumes(Commodity::soy_oil) || consumes(Commodity::ethanol))) {
      invariant_error(kYieldsFile, "hefa must consume soy_oil and not ethanol");
    }
    if (y.route == Route::atj && (!consumes(Commodity::ethanol) || consumes(Commodity::soy_oil))) {
      invariant_error(kYieldsFile, "atj must consume ethanol and not soy_oil");
    }
    if (y.consumption.count(Commodity::saf) || y.consumption.count(Commodity::jet_fuel) ||
        y.consumption.count(Commodity::naphtha)) {
      invariant_error(kYieldsFile, path + "consumption may not include products");
    }
    out[y.route] = y;
  }
  for (Route r : kAllRoutes) {
    if (!out.count(r)) schema_error(kYieldsFile, "missing route '" + std::string(to_string(r)) + "'");
  }
  return out;
}

carbon::CarbonSet load_carbon(const BundleFiles& files) {
  const json doc = parse_json(files, kCarbonFile);
  carbon::CarbonSet set;
  set.fossil_jet.g_per_mj = number(doc, "fossil_jet", kCarbonFile);
  set.hefa.g_per_mj = number(doc, "hefa", kCarbonFile);
  set.atj.g_per_mj = number(doc, "atj", kCarbonFile);
  set.lhv.mj_per_kg = number(doc, "lhv_mj_per_kg", kCarbonFile);
  if (doc.contains("lhv_overrides")) {
    const json& overrides = doc["lhv_overrides"];
    if (!overrides.is_object()) schema_error(kCarbonFile, "'lhv_overrides' must be an object");
    for (const auto& [key, value] : overrides.items()) {
      set.lhv_overrides[json_route(key, kCarbonFile)].mj_per_kg = number(overrides, key, kCarbonFile, "lhv_overrides.");
    }
  }
  try {
    set.validate();
  } catch (const ValidationError& e) {
    invariant_error(kCarbonFile, e.what());
  }
  return set;
}

finance::FinanceData load_finance(const BundleFiles& files) {
  const json doc = parse_json(files, kFinanceFile);
  finance::FinanceData data;
  auto& d = data.defaults;
  d.wacc = number(doc, "wacc", kFinanceFile);
  const double life = number(doc, "life_years", kFinanceFile);
  if (life != std::floor(life)) invariant_error(kFinanceFile, "life_years must be an integer");
  d.life_years = static_cast<int>(life);
  d.capacity_kt_per_year = number(doc, "capacity_kt_per_year", kFinanceFile);
  d.fx.brl_per_usd = number(doc, "brl_per_usd", kFinanceFile);
  d.revenue_tax = number(doc, "revenue_tax", kFinanceFile);
  d.capital_grant = {number(doc, "capital_grant_usd", kFinanceFile), Currency::usd};
  try {
    d.validate();
  } catch (const ValidationError& e) {
    invariant_error(kFinanceFile, e.what());
  }

  const json& fixed = member(doc, "fixed_cost_usd_per_kg", kFinanceFile, "");
  const json& capex = member(doc, "reference_capex_usd", kFinanceFile, "");
  for (Route r : kAllRoutes) {
    const std::string key(to_string(r));
    const json& f = member(fixed, key, kFinanceFile, "fixed_cost_usd_per_kg.");
    const std::string fp = "fixed_cost_usd_per_kg." + key + ".";
    finance::FixedCost cost{number(f, "manpower", kFinanceFile, fp), number(f, "maintenance", kFinanceFile, fp),
                            number(f, "other", kFinanceFile, fp), number(f, "total", kFinanceFile, fp),
                            Currency::usd};
    if (cost.total < 0.0) invariant_error(kFinanceFile, fp + "total must be >= 0");
    data.fixed_cost[r] = cost;
    const json& c = member(capex, key, kFinanceFile, "reference_capex_usd.");
    const std::string cp = "reference_capex_usd." + key + ".";
    data.reference_capex[r] = {{number(c, "ref27", kFinanceFile, cp), Currency::usd},
                               {number(c, "ref34", kFinanceFile, cp), Currency::usd}};
  }
  return data;
}

demand::DemandTable load_demand(const BundleFiles& files) {
  const CsvTable table = read_csv(files, kDemandFile, "year,policy,ci_bound,volume_kt_per_year");
  std::vector<demand::DemandRecord> records;
  std::set<std::tuple<int, demand::Policy, demand::CiBound>> seen;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    demand::DemandRecord r;
    r.year = csv_int(table, i, f[0], "year");
    try {
      r.policy = demand::parse_policy(f[1]);
      r.ci_bound = demand::parse_bound(f[2]);
    } catch (const ValidationError& e) {
      schema_error(table.name, table.where(i) + ": " + e.what());
    }
    r.volume_kt = csv_number(table, i, f[3], "volume_kt_per_year");
    if (r.volume_kt < 0.0) invariant_error(table.name, table.where(i) + ": volume must be >= 0");
    if (r.year < demand::kFirstDemandYear || r.year > demand::kLastDemandYear) {
      invariant_error(table.name, table.where(i) + ": year outside 2027-2037");
    }
    if (!seen.insert({r.year, r.policy, r.ci_bound}).second) {
      invariant_error(table.name, table.where(i) + ": duplicate (year, policy, ci_bound)");
    }
    records.push_back(r);
  }
  demand::DemandTable out(std::move(records));
  for (int year : out.milestone_years()) {
    for (demand::CiBound b : {demand::CiBound::lower, demand::CiBound::higher}) {
      for (demand::Policy p : {demand::Policy::corsia, demand::Policy::probioqav, demand::Policy::total}) {
        if (!out.find(year, p, b)) {
          invariant_error(kDemandFile, "incomplete: missing " + std::string(demand::to_string(p)) + " " +
                                           std::string(demand::to_string(b)) + " " + std::to_string(year));
        }
      }
      const std::string cell = std::string(demand::to_string(b)) + " " + std::to_string(year);
      if (*out.find(year, demand::Policy::corsia, b) + *out.find(year, demand::Policy::probioqav, b) !=
          *out.find(year, demand::Policy::total, b)) {
        invariant_error(kDemandFile, "total != corsia + probioqav for " + cell);
      }
    }
  }
  const auto years = out.milestone_years();
  for (std::size_t k = 1; k < years.size(); ++k) {
    for (demand::CiBound b : {demand::CiBound::lower, demand::CiBound::higher}) {
      for (demand::Policy p : {demand::Policy::corsia, demand::Policy::probioqav, demand::Policy::total}) {
        if (*out.find(years[k], p, b) < *out.find(years[k - 1], p, b)) {
          invariant_error(kDemandFile, std::string(demand::to_string(p)) + " " + std::string(demand::to_string(b)) +
                                           " demand decreases after " + std::to_string(years[k - 1]));
        }
      }
    }
  }
  return out;
}

demand::InvestmentData load_investment(const BundleFiles& files) {
  const json doc = parse_json(files, kInvestmentFile);
  demand::InvestmentData data;
  const json& env = member(doc, "envelope", kInvestmentFile, "");
  auto& e = data.envelope;
  e.brl_low = number(env, "brl_low", kInvestmentFile, "envelope.");
  e.brl_high = number(env, "brl_high", kInvestmentFile, "envelope.");
  e.usd_low = number(env, "usd_low", kInvestmentFile, "envelope.");
  e.usd_high = number(env, "usd_high", kInvestmentFile, "envelope.");
  const auto horizon = number_pair(env, "horizon", kInvestmentFile, "envelope.");
  e.horizon_first = static_cast<int>(horizon.first);
  e.horizon_last = static_cast<int>(horizon.second);
  if (!(e.brl_low > 0 && e.brl_low <= e.brl_high && e.usd_low > 0 && e.usd_low <= e.usd_high)) {
    invariant_error(kInvestmentFile, "envelope bounds must be positive and ordered");
  }
  const json& scenarios = member(doc, "scenarios", kInvestmentFile, "");
  if (!scenarios.is_array()) schema_error(kInvestmentFile, "'scenarios' must be an array");
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const json& s = scenarios[i];
    const std::string path = "scenarios[" + std::to_string(i) + "].";
    demand::ScenarioCapex sc;
    sc.scenario = text(s, "scenario", kInvestmentFile, path);
    sc.description = text(s, "description", kInvestmentFile, path);
    const auto capex = number_pair(s, "capex_brl", kInvestmentFile, path);
    sc.capex_brl_low = capex.first;
    sc.capex_brl_high = capex.second;
    if (!member(s, "capacity", kInvestmentFile, path).is_null()) {
      const auto cap = number_pair(s, "capacity", kInvestmentFile, path);
      sc.capacity_low = cap.first;
      sc.capacity_high = cap.second;
    }
    sc.capacity_unit = text(s, "capacity_unit", kInvestmentFile, path);
    data.scenarios.push_back(sc);
  }
  return data;
}

PublishedTargets load_targets(const BundleFiles& files) {
  const json doc = parse_json(files, kTargetsFile);
  PublishedTargets t;
  const json& check = member(doc, "check_test_usd_per_kg", kTargetsFile, "");
  const json& taxes = member(doc, "tax_lines_usd_per_kg", kTargetsFile, "");
  const json& capex = member(doc, "max_capex_usd", kTargetsFile, "");
  for (Route r : kAllRoutes) {
    const std::string key(to_string(r));
    t.check_test_usd_per_kg[r] = number(check, key, kTargetsFile, "check_test_usd_per_kg.");
    for (const auto& [line, v] : member(taxes, key, kTargetsFile, "tax_lines_usd_per_kg.").items()) {
      if (!v.is_number()) schema_error(kTargetsFile, "tax line '" + line + "' must be a number");
      t.tax_lines_usd_per_kg[r][line] = v.get<double>();
    }
    for (const auto& [scenario, v] : member(capex, key, kTargetsFile, "max_capex_usd.").items()) {
      if (!v.is_number()) schema_error(kTargetsFile, "max_capex '" + scenario + "' must be a number");
      t.max_capex_usd[r][scenario] = v.get<double>();
    }
  }
  const auto byproduct = number_pair(doc, "byproduct_range_kt_per_year", kTargetsFile, "");
  t.byproduct_low_kt = byproduct.first;
  t.byproduct_high_kt = byproduct.second;
  const auto dem = number_pair(doc, "demand_range_kt_per_year", kTargetsFile, "");
  t.demand_low_kt = dem.first;
  t.demand_high_kt = dem.second;
  return t;
}

void check_cross_references(const DatasetBundle& b) {
  for (const auto& [route, y] : b.yields) {
    for (const auto& [c, qty] : y.consumption) {
      const std::string name(to_string(c));
      if (!b.taxes.rates.count(c)) invariant_error(kTaxesFile, "no tax rates for consumed commodity " + name);
      for (PriceSource s : {PriceSource::table7, PriceSource::table9}) {
        if (!b.book(s).has(c)) invariant_error(kPricesFile, std::string(to_string(s)) + " has no prices for " + name);
      }
      const bool has_reference = std::any_of(b.reference_unit_prices.begin(), b.reference_unit_prices.end(),
                                             [&](const WindowPrice& w) { return w.commodity == c; });
      if (!has_reference) invariant_error(kUnitPricesFile, "no reference unit price for consumed commodity " + name);
    }
  }
}

// ---- writers -----------------------------------------------------------------

std::string csv_join(std::initializer_list<std::string> fields) {
  return detail::join(std::vector<std::string>(fields), ",") + "\n";
}

}  // namespace

// ---- public API -----------------------------------------------------------------

std::string_view to_string(PriceSource s) {
  switch (s) {
    case PriceSource::table7: return "table7";
    case PriceSource::table9: return "table9";
    case PriceSource::table11: return "table11";
    case PriceSource::user: return "user";
  }
  return "?";
}

std::optional<PriceSource> parse_price_source(std::string_view text) {
  for (PriceSource s : {PriceSource::table7, PriceSource::table9, PriceSource::table11, PriceSource::user}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

PriceBook::PriceBook(PriceSource source, Currency currency, std::vector<PriceRecord> records)
    : source_(source), currency_(currency), records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(), [](const PriceRecord& a, const PriceRecord& b) {
    return std::tie(a.year, a.commodity) < std::tie(b.year, b.commodity);
  });
}

std::optional<double> PriceBook::find(int year, Commodity c) const {
  for (const auto& r : records_) {
    if (r.year == year && r.commodity == c) return r.value;
  }
  return std::nullopt;
}

bool PriceBook::has(Commodity c) const {
  return std::any_of(records_.begin(), records_.end(), [c](const PriceRecord& r) { return r.commodity == c; });
}

std::optional<YearRange> PriceBook::years() const {
  if (records_.empty()) return std::nullopt;
  return YearRange{records_.front().year, records_.back().year};
}

Money average_price(const PriceBook& book, Commodity c, YearRange years) {
  if (years.first > years.last) {
    throw ValidationError("years", "year window is empty", ValidationError::Kind::bounds);
  }
  double sum = 0.0;
  for (int year = years.first; year <= years.last; ++year) {
    auto v = book.find(year, c);
    if (!v) {
      throw ValidationError("years", std::string(to_string(book.source())) + " has no " + std::string(to_string(c)) +
                                         " price for year " + std::to_string(year),
                            ValidationError::Kind::bounds);
    }
    sum += *v;
  }
  return {sum / years.count(), book.currency()};
}

double effective_tax_rate(const TaxSchedule& schedule, Commodity c) {
  auto it = schedule.rates.find(c);
  if (it == schedule.rates.end()) {
    throw ValidationError("commodity", "no tax rates for commodity " + std::string(to_string(c)));
  }
  return it->second.effective();
}

const PriceBook& DatasetBundle::book(PriceSource s) const {
  auto it = price_books.find(s);
  if (it == price_books.end()) {
    throw ValidationError("price_basis", "bundle has no " + std::string(to_string(s)) + " price book");
  }
  return it->second;
}

const YieldSpec& DatasetBundle::yield(Route r) const { return yields.at(r); }

DatasetBundle load_bundle(const BundleFiles& files) {
  const json manifest = parse_json(files, kManifestFile);
  if (member(manifest, "bundle_version", kManifestFile, "") != kBundleVersion) {
    schema_error(kManifestFile, "unsupported bundle_version");
  }
  DatasetBundle b;
  b.bundle_version = kBundleVersion;
  const json& provenance = member(manifest, "provenance", kManifestFile, "");
  if (!provenance.is_object()) schema_error(kManifestFile, "'provenance' must be an object");
  for (const auto& [table, citation] : provenance.items()) {
    if (!citation.is_string()) schema_error(kManifestFile, "provenance." + table + " must be a string");
    b.provenance[table] = citation.get<std::string>();
  }
  b.price_books = load_prices(files);
  b.reference_unit_prices = load_unit_prices(files);
  b.taxes = load_taxes(files);
  b.yields = load_yields(files);
  b.carbon = load_carbon(files);
  b.finance = load_finance(files);
  b.demand = load_demand(files);
  b.investment = load_investment(files);
  b.targets = load_targets(files);
  check_cross_references(b);
  for (const char* table : {"table7", "table9", "table11", "taxes", "yields", "carbon", "finance", "demand"}) {
    if (!b.provenance.count(table)) invariant_error(kManifestFile, std::string("missing provenance for ") + table);
  }
  return b;
}

DatasetBundle load_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw BundleError(BundleError::Kind::missing_file, dir.string(), "bundle directory does not exist");
  }
  BundleFiles files;
  for (const auto& name : bundle_file_names()) {
    const auto path = dir / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;  // reported by the loader with the table name
    std::ostringstream content;
    content << in.rdbuf();
    files[name] = content.str();
  }
  return load_bundle(files);
}

const DatasetBundle& default_bundle() {
  static const DatasetBundle bundle = load_bundle(embedded_bundle_files());
  return bundle;
}

BundleFiles serialize_bundle(const DatasetBundle& b) {
  using detail::format_double;
  BundleFiles files;

  json manifest;
  manifest["bundle_version"] = b.bundle_version;
  manifest["files"] = std::vector<std::string>(bundle_file_names().begin() + 1, bundle_file_names().end());
  manifest["provenance"] = b.provenance;
  files[kManifestFile] = manifest.dump(2) + "\n";

  std::string prices = "year,commodity,value,currency,source\n";
  for (const auto& [source, book] : b.price_books) {
    for (const auto& r : book.records()) {
      prices += csv_join({std::to_string(r.year), std::string(to_string(r.commodity)), format_double(r.value),
                          std::string(to_string(r.currency)), std::string(to_string(r.source))});
    }
  }
  files[kPricesFile] = prices;

  std::string units = "commodity,value,currency,first_year,last_year,source\n";
  for (const auto& w : b.reference_unit_prices) {
    units += csv_join({std::string(to_string(w.commodity)), format_double(w.value), std::string(to_string(w.currency)),
                       std::to_string(w.years.first), std::to_string(w.years.last), std::string(to_string(w.source))});
  }
  files[kUnitPricesFile] = units;

  std::string taxes = "commodity,icms,pis,cofins,cide_per_liter\n";
  for (const auto& [c, r] : b.taxes.rates) {
    taxes += csv_join({std::string(to_string(c)), format_double(r.icms), format_double(r.pis),
                       format_double(r.cofins), format_double(r.cide_per_liter)});
  }
  files[kTaxesFile] = taxes;

  json yields;
  yields["bundle_version"] = b.bundle_version;
  for (const auto& [route, y] : b.yields) {
    json spec;
    for (const auto& [c, q] : y.consumption) spec["consumption"][std::string(to_string(c))] = q;
    spec["byproduct_yield"] = y.byproduct_yield;
    spec["other_variable_cost"] = y.other_variable_cost;
    spec["other_variable_tax"] = y.other_variable_tax;
    spec["other_currency"] = std::string(to_string(y.other_currency));
    yields["routes"][std::string(to_string(route))] = spec;
  }
  files[kYieldsFile] = yields.dump(2) + "\n";

  json carbon;
  carbon["bundle_version"] = b.bundle_version;
  carbon["fossil_jet"] = b.carbon.fossil_jet.g_per_mj;
  carbon["hefa"] = b.carbon.hefa.g_per_mj;
  carbon["atj"] = b.carbon.atj.g_per_mj;
  carbon["lhv_mj_per_kg"] = b.carbon.lhv.mj_per_kg;
  for (const auto& [route, d] : b.carbon.lhv_overrides) {
    carbon["lhv_overrides"][std::string(to_string(route))] = d.mj_per_kg;
  }
  files[kCarbonFile] = carbon.dump(2) + "\n";

  const auto& fin = b.finance.defaults;
  json finance;
  finance["bundle_version"] = b.bundle_version;
  finance["wacc"] = fin.wacc;
  finance["life_years"] = fin.life_years;
  finance["capacity_kt_per_year"] = fin.capacity_kt_per_year;
  finance["brl_per_usd"] = fin.fx.brl_per_usd;
  finance["revenue_tax"] = fin.revenue_tax;
  finance["capital_grant_usd"] = fin.capital_grant.converted(Currency::usd, fin.fx).amount;
  for (const auto& [route, f] : b.finance.fixed_cost) {
    finance["fixed_cost_usd_per_kg"][std::string(to_string(route))] = {
        {"manpower", f.manpower}, {"maintenance", f.maintenance}, {"other", f.other}, {"total", f.total}};
  }
  for (const auto& [route, c] : b.finance.reference_capex) {
    finance["reference_capex_usd"][std::string(to_string(route))] = {{"ref27", c.ref27.amount},
                                                                     {"ref34", c.ref34.amount}};
  }
  files[kFinanceFile] = finance.dump(2) + "\n";

  std::string dem = "year,policy,ci_bound,volume_kt_per_year\n";
  for (const auto& r : b.demand.records()) {
    dem += csv_join({std::to_string(r.year), std::string(demand::to_string(r.policy)),
                     std::string(demand::to_string(r.ci_bound)), format_double(r.volume_kt)});
  }
  files[kDemandFile] = dem;

  const auto& env = b.investment.envelope;
  json inv;
  inv["bundle_version"] = b.bundle_version;
  inv["envelope"] = {{"brl_low", env.brl_low},   {"brl_high", env.brl_high},
                     {"usd_low", env.usd_low},   {"usd_high", env.usd_high},
                     {"horizon", {env.horizon_first, env.horizon_last}}};
  inv["scenarios"] = json::array();
  for (const auto& s : b.investment.scenarios) {
    json item = {{"scenario", s.scenario},
                 {"description", s.description},
                 {"capex_brl", {s.capex_brl_low, s.capex_brl_high}},
                 {"capacity_unit", s.capacity_unit}};
    item["capacity"] = s.capacity_low ? json{*s.capacity_low, *s.capacity_high} : json(nullptr);
    inv["scenarios"].push_back(item);
  }
  files[kInvestmentFile] = inv.dump(2) + "\n";

  json targets;
  targets["bundle_version"] = b.bundle_version;
  for (Route r : kAllRoutes) {
    const std::string key(to_string(r));
    targets["check_test_usd_per_kg"][key] = b.targets.check_test_usd_per_kg.at(r);
    targets["tax_lines_usd_per_kg"][key] = b.targets.tax_lines_usd_per_kg.at(r);
    targets["max_capex_usd"][key] = b.targets.max_capex_usd.at(r);
  }
  targets["byproduct_range_kt_per_year"] = {b.targets.byproduct_low_kt, b.targets.byproduct_high_kt};
  targets["demand_range_kt_per_year"] = {b.targets.demand_low_kt, b.targets.demand_high_kt};
  files[kTargetsFile] = targets.dump(2) + "\n";
  return files;
}

void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : serialize_bundle(bundle)) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw BundleError(BundleError::Kind::missing_file, name, "cannot write " + (dir / name).string());
    out << content;
  }
}

std::string bundle_digest(const DatasetBundle& bundle) {
  std::uint64_t hash = 14695981039346656037ull;
  auto feed = [&](std::string_view s) {
    for (unsigned char ch : s) {
      hash ^= ch;
      hash *= 1099511628211ull;
    }
  };
  for (const auto& [name, content] : serialize_bundle(bundle)) {
    feed(name);
    feed(std::string_view("\0", 1));
    feed(content);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

PriceBasis PriceBasis::parse(std::string_view text) {
  if (text == "reference") return reference();
  const auto colon = text.find(':');
  const std::string name(text.substr(0, colon));
  auto source = parse_price_source(name);
  if (!source || *source == PriceSource::table11) {
    throw ValidationError("price_basis", "unknown price basis '" + std::string(text) +
                                             "' (expected reference, table7, table9 or user, optionally :FIRST-LAST)");
  }
  YearRange years{2021, 2024};
  if (colon != std::string_view::npos) {
    const std::string range(text.substr(colon + 1));
    const auto dash = range.find('-');
    auto first = detail::parse_int(range.substr(0, dash));
    auto last = dash == std::string::npos ? first : detail::parse_int(range.substr(dash + 1));
    if (!first || !last || *first > *last) {
      throw ValidationError("price_basis", "invalid year window '" + range + "'", ValidationError::Kind::bounds);
    }
    years = {*first, *last};
  }
  return window(*source, years);
}

std::string PriceBasis::label() const {
  if (kind == Kind::reference) return "reference";
  return std::string(to_string(source)) + ":" + std::to_string(years.first) + "-" + std::to_string(years.last);
}

double UnitPrices::at(Commodity c) const {
  auto it = price.find(c);
  if (it == price.end()) {
    throw ValidationError("prices", "no price for " + std::string(to_string(c)));
  }
  return it->second;
}

UnitPrices resolve_unit_prices(const DatasetBundle& bundle, const PriceBasis& basis, Currency currency) {
  const FxRate& fx = bundle.finance.defaults.fx;
  const PriceSource source = basis.kind == PriceBasis::Kind::reference ? PriceSource::table9 : basis.source;
  const YearRange years = basis.kind == PriceBasis::Kind::reference ? YearRange{2021, 2024} : basis.years;
  const PriceBook& book = bundle.book(source);

  UnitPrices out;
  out.currency = currency;
  for (Commodity c : kPricedCommodities) {
    if (!book.has(c)) continue;
    out.price[c] = average_price(book, c, years).converted(currency, fx).amount;
  }
  if (basis.kind == PriceBasis::Kind::reference) {
    for (const auto& w : bundle.reference_unit_prices) {
      out.price[w.commodity] = convert(w.value, w.currency, currency, fx);
    }
  }
  if (out.has(Commodity::jet_fuel)) out.price[Commodity::saf] = out.at(Commodity::jet_fuel);
  return out;
}

}  // namespace saftea
