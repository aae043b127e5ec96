#pragma once

#include <string>
#include <vector>

#include "saftea/carbon.hpp"
#include "saftea/package.hpp"
#include "saftea/reference_data.hpp"

namespace saftea {

struct CostOptions {
  // When false the catalyst/other variable costs (and their taxes) are zeroed, which
  // reproduces the plain feedstock-and-energy comparison.
  bool include_other_variable = true;

  bool operator==(const CostOptions&) const = default;
};

/// Everything the per-kg model needs, already expressed in one currency.
struct CostInputs {
  Route route = Route::hefa;
  Currency currency = Currency::usd;
  UnitPrices prices;
  TaxSchedule taxes;
  std::map<Commodity, double> consumption;  // base unit per kg SAF
  double byproduct_yield = 0.0;             // kg naphtha-equivalent per kg SAF
  double other_variable_cost = 0.0;
  double other_variable_tax = 0.0;
  double fixed_cost = 0.0;
  carbon::CarbonSet carbon;
  FxRate fx;
};

CostInputs make_cost_inputs(const DatasetBundle& bundle, Route route, const PriceBasis& basis, Currency currency,
                            const CostOptions& options = {});

struct CostLine {
  Commodity commodity = Commodity::soy_oil;
  double quantity = 0.0;
  double unit_price = 0.0;
  double tax_rate = 0.0;
  double pre_tax_cost = 0.0;
  double tax_cost = 0.0;
};

struct CostBreakdown {
  Currency currency = Currency::usd;
  std::vector<CostLine> lines;
  double other_variable = 0.0;
  double other_variable_tax = 0.0;
  double total_variable = 0.0;

  double tax_total() const;
  double pre_tax_total() const;
  const CostLine* line(Commodity c) const;
};

struct RevenueStatement {
  double saf = 0.0;
  double byproduct = 0.0;
  double carbon = 0.0;
  double total = 0.0;
};

struct MarginStatement {
  Route route = Route::hefa;
  Currency currency = Currency::usd;
  RevenueStatement revenue;
  CostBreakdown cost;
  double contribution_margin = 0.0;
  double fixed_cost = 0.0;
  double net_margin = 0.0;
  // Carbon abatement used for the credit, tCO2e per kg SAF.
  double abatement_t_per_kg = 0.0;
  bool abatement_clamped = false;
};

CostBreakdown variable_cost(const CostInputs& inputs, double tax_discount);

RevenueStatement revenue(const CostInputs& inputs, double saf_premium, double byproduct_premium,
                         double carbon_revenue);

/// Carbon credit per kg SAF in the inputs' currency.
double carbon_credit(const CostInputs& inputs, double carbon_price_brl_per_t);

MarginStatement margin(const CostInputs& inputs, const IncentivePackage& package);

struct LeverDelta {
  Lever lever = Lever::tax_discount;
  double delta = 0.0;
};

struct MarginWaterfall {
  double baseline = 0.0;  // contribution margin without incentives
  std::vector<LeverDelta> deltas;
  double total = 0.0;     // contribution margin with the package
};

/// Baseline contribution margin and the isolated effect of each margin lever.
MarginWaterfall margin_waterfall(const CostInputs& inputs, const IncentivePackage& package);

}  // namespace saftea
