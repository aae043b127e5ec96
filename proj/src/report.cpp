#include "saftea/report.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "saftea/cost_model.hpp"
#include "saftea/demand.hpp"
#include "saftea/detail/text.hpp"
#include "saftea/scenario.hpp"

namespace saftea::report {

namespace {

Row compare(std::string section, std::string id, std::string description, double computed, double published,
            double tolerance, bool relative, std::string note = {}) {
  Row row{std::move(section), std::move(id), std::move(description), computed, published, tolerance, relative,
          Status::match, std::move(note)};
  const double err = relative ? *row.relative_error() : *row.absolute_error();
  row.status = err <= tolerance ? Status::match : Status::deviation;
  return row;
}

Row assumption(std::string id, std::string description, double value, std::string note) {
  Row row;
  row.section = "assumptions";
  row.id = std::move(id);
  row.description = std::move(description);
  row.computed = value;
  row.status = Status::assumption;
  row.note = std::move(note);
  return row;
}

Commodity feedstock_of(Route r) { return r == Route::hefa ? Commodity::soy_oil : Commodity::ethanol; }

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::match: return "MATCH";
    case Status::deviation: return "DEVIATION";
    case Status::assumption: return "ASSUMPTION";
  }
  return "?";
}

std::optional<double> Row::absolute_error() const {
  if (!computed || !published) return std::nullopt;
  return std::abs(*computed - *published);
}

std::optional<double> Row::relative_error() const {
  auto abs = absolute_error();
  if (!abs) return std::nullopt;
  if (*published == 0.0) return *abs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return *abs / std::abs(*published);
}

std::vector<Row> reproduce(const DatasetBundle& bundle) {
  std::vector<Row> rows;
  const auto& targets = bundle.targets;
  const FxRate& fx = bundle.finance.defaults.fx;

  // Variable cost build-up on the reference basis.
  for (Route r : kAllRoutes) {
    const std::string route(to_string(r));
    const CostInputs inputs = make_cost_inputs(bundle, r, PriceBasis::reference(), Currency::usd);
    const CostBreakdown cost = variable_cost(inputs, 0.0);
    if (auto t = targets.check_test_usd_per_kg.find(r); t != targets.check_test_usd_per_kg.end()) {
      rows.push_back(compare("check_test", "check_test." + route, route + " total variable cost incl. taxes (USD/kg)",
                             cost.total_variable, t->second, 0.02, true));
    }
    if (auto t = targets.tax_lines_usd_per_kg.find(r); t != targets.tax_lines_usd_per_kg.end()) {
      for (const auto& [key, published] : t->second) {
        double computed = 0.0;
        if (key == "other") {
          computed = cost.other_variable_tax;
        } else {
          const Commodity c = key == "feedstock" ? feedstock_of(r) : *parse_commodity(key);
          const CostLine* line = cost.line(c);
          computed = line ? line->tax_cost : 0.0;
        }
        rows.push_back(compare("tax_lines", "tax." + route + "." + key, route + " tax on " + key + " (USD/kg)",
                               computed, published, 0.01, false));
      }
    }
  }

  // Published DCF unit prices against the plain 2021-2024 table9 means.
  const PriceBook& t9 = bundle.book(PriceSource::table9);
  for (const auto& w : bundle.reference_unit_prices) {
    const double mean_usd = average_price(t9, w.commodity, w.years).converted(Currency::usd, fx).amount;
    const double published = convert(w.value, w.currency, Currency::usd, fx);
    rows.push_back(compare("unit_prices", "unit_price." + std::string(to_string(w.commodity)),
                           std::string(to_string(w.commodity)) + " table9 mean vs DCF unit price (USD/unit)", mean_usd,
                           published, 0.01, false,
                           "cost build-up uses the published DCF unit price; the yearly table9 mean differs"));
  }

  // Reverse DCF per named scenario.
  for (Route r : kAllRoutes) {
    const std::string route(to_string(r));
    std::map<std::string, double> capex;
    for (const char* name : {"base", "s1", "s2"}) {
      capex[name] = evaluate(r, named_package(name), bundle).dcf.max_capex;
    }
    const auto published = targets.max_capex_usd.find(r);
    for (const auto& [name, value] : capex) {
      if (published == targets.max_capex_usd.end() || !published->second.count(name)) continue;
      const double target = published->second.at(name);
      rows.push_back(compare("max_capex", "max_capex." + route + "." + name,
                             route + " " + name + " max CAPEX at NPV=0 (USD)", value, target, 0.02, true,
                             "published cells are not re-derivable from the published per-kg cost and price inputs"));
      Row sign;
      sign.section = "max_capex_sign";
      sign.id = "max_capex_sign." + route + "." + name;
      sign.description = route + " " + name + " max CAPEX sign (+1/-1)";
      sign.computed = value >= 0.0 ? 1.0 : -1.0;
      sign.published = target >= 0.0 ? 1.0 : -1.0;
      sign.tolerance = 0.0;
      sign.relative_tolerance = false;
      sign.status = *sign.computed == *sign.published ? Status::match : Status::deviation;
      rows.push_back(sign);
    }
    Row order;
    order.section = "max_capex_order";
    order.id = "max_capex_order." + route;
    order.description = route + " ordering base < s1 < s2";
    order.status = capex["base"] < capex["s1"] && capex["s1"] < capex["s2"] ? Status::match : Status::deviation;
    rows.push_back(order);
  }

  // Demand table additivity.
  for (int year : bundle.demand.milestone_years()) {
    for (demand::CiBound b : {demand::CiBound::lower, demand::CiBound::higher}) {
      const auto corsia = bundle.demand.find(year, demand::Policy::corsia, b);
      const auto pro = bundle.demand.find(year, demand::Policy::probioqav, b);
      const auto total = bundle.demand.find(year, demand::Policy::total, b);
      if (!corsia || !pro || !total) continue;
      rows.push_back(compare("demand_additivity",
                             "demand." + std::to_string(year) + "." + std::string(demand::to_string(b)),
                             std::to_string(year) + " " + std::string(demand::to_string(b)) +
                                 " CI: corsia + probioqav vs total (kt/y)",
                             *corsia + *pro, *total, 0.0, false));
    }
  }

  // By-product volume envelope.
  {
    const double hefa_yield = bundle.yield(Route::hefa).byproduct_yield;
    const double atj_yield = bundle.yield(Route::atj).byproduct_yield;
    const double low = demand::byproduct_volume(targets.demand_low_kt, 1.0, hefa_yield, atj_yield);
    const double high = demand::byproduct_volume(targets.demand_high_kt, 0.0, hefa_yield, atj_yield);
    rows.push_back(compare("byproducts", "byproducts.low", "by-products at the low demand bound, all HEFA (kt/y)", low,
                           targets.byproduct_low_kt, 1e-3, true, "published value is rounded or uses another mix"));
    rows.push_back(compare("byproducts", "byproducts.high", "by-products at the high demand bound, all ATJ (kt/y)",
                           high, targets.byproduct_high_kt, 1e-3, true,
                           "published value implies a blended yield of about 0.89"));
  }

  // Investment envelope FX consistency.
  {
    const auto env = demand::investment_envelope(bundle.investment, fx);
    rows.push_back(compare("investment", "investment.usd_low", "BRL low bound converted at the bundle FX (USD)",
                           env.usd_low_from_fx, env.envelope.usd_low, 0.03, true));
    rows.push_back(compare("investment", "investment.usd_high", "BRL high bound converted at the bundle FX (USD)",
                           env.usd_high_from_fx, env.envelope.usd_high, 0.03, true));
  }

  const TaxRates* h2 = nullptr;
  if (auto it = bundle.taxes.rates.find(Commodity::hydrogen); it != bundle.taxes.rates.end()) h2 = &it->second;
  if (h2) {
    rows.push_back(assumption("assumption.hydrogen_tax", "hydrogen effective tax rate", h2->effective(),
                              "no published hydrogen rate; ethanol/natural-gas pattern applied"));
  }
  rows.push_back(assumption("assumption.lhv", "LHV converting gCO2e/MJ to tCO2e/kg (MJ/kg)",
                            bundle.carbon.lhv.mj_per_kg, "single energy density for SAF and fossil jet"));
  for (Route r : kAllRoutes) {
    const auto& f = bundle.finance.fixed_cost.at(r);
    rows.push_back(assumption("assumption.fixed_cost." + std::string(to_string(r)),
                              std::string(to_string(r)) + " fixed cost used (USD/kg)", f.total,
                              "published rounded total; components sum to " +
                                  detail::format_double(f.manpower + f.maintenance + f.other)));
  }
  rows.push_back(assumption("assumption.revenue_tax", "profit-side tax on free cash flow", bundle.finance.defaults.revenue_tax,
                            "depreciation and income-tax shields are not modelled"));
  return rows;
}

std::vector<HistoryRow> historical_comparison(const DatasetBundle& bundle, Route route, bool include_taxes) {
  std::vector<HistoryRow> out;
  const PriceBook& t7 = bundle.book(PriceSource::table7);
  const auto years = t7.years();
  if (!years) return out;
  CostOptions options;
  options.include_other_variable = false;
  for (int year = years->first; year <= years->last; ++year) {
    const CostInputs inputs =
        make_cost_inputs(bundle, route, PriceBasis::window(PriceSource::table7, {year, year}), Currency::brl, options);
    const CostBreakdown cost = variable_cost(inputs, include_taxes ? 0.0 : 1.0);
    HistoryRow row;
    row.year = year;
    row.pre_tax_cost = cost.pre_tax_total();
    row.taxes = cost.tax_total();
    row.total_variable = cost.total_variable;
    row.byproduct_credit = inputs.prices.at(Commodity::naphtha) * inputs.byproduct_yield;
    row.net_cost = row.total_variable - row.byproduct_credit;
    row.jet_fuel_price = inputs.prices.at(Commodity::jet_fuel);
    out.push_back(row);
  }
  return out;
}

}  // namespace saftea::report
