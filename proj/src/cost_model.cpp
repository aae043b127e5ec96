#include "saftea/cost_model.hpp"

#include <cmath>

namespace saftea {

namespace {

void require_fraction_ge0(double v, const char* field) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(field, std::string(field) + " must be >= 0", ValidationError::Kind::bounds);
  }
}

}  // namespace

CostInputs make_cost_inputs(const DatasetBundle& bundle, Route route, const PriceBasis& basis, Currency currency,
                            const CostOptions& options) {
  const YieldSpec& y = bundle.yield(route);
  const FxRate& fx = bundle.finance.defaults.fx;

  CostInputs in;
  in.route = route;
  in.currency = currency;
  in.prices = resolve_unit_prices(bundle, basis, currency);
  in.taxes = bundle.taxes;
  in.consumption = y.consumption;
  in.byproduct_yield = y.byproduct_yield;
  if (options.include_other_variable) {
    in.other_variable_cost = convert(y.other_variable_cost, y.other_currency, currency, fx);
    in.other_variable_tax = convert(y.other_variable_tax, y.other_currency, currency, fx);
  }
  const auto& fixed = bundle.finance.fixed_cost.at(route);
  in.fixed_cost = convert(fixed.total, fixed.currency, currency, fx);
  in.carbon = bundle.carbon;
  in.fx = fx;
  return in;
}

double CostBreakdown::tax_total() const {
  double sum = other_variable_tax;
  for (const auto& l : lines) sum += l.tax_cost;
  return sum;
}

double CostBreakdown::pre_tax_total() const {
  double sum = other_variable;
  for (const auto& l : lines) sum += l.pre_tax_cost;
  return sum;
}

const CostLine* CostBreakdown::line(Commodity c) const {
  for (const auto& l : lines) {
    if (l.commodity == c) return &l;
  }
  return nullptr;
}

CostBreakdown variable_cost(const CostInputs& inputs, double tax_discount) {
  if (!std::isfinite(tax_discount) || tax_discount < 0.0 || tax_discount > 1.0) {
    throw ValidationError("tax_discount", "tax_discount must be in [0, 1]", ValidationError::Kind::bounds);
  }
  const double keep = 1.0 - tax_discount;
  CostBreakdown out;
  out.currency = inputs.currency;
  double total = 0.0;
  for (const auto& [commodity, qty] : inputs.consumption) {
    CostLine line;
    line.commodity = commodity;
    line.quantity = qty;
    line.unit_price = inputs.prices.at(commodity);
    line.tax_rate = effective_tax_rate(inputs.taxes, commodity);
    line.pre_tax_cost = qty * line.unit_price;
    line.tax_cost = line.pre_tax_cost * line.tax_rate * keep;
    total += line.pre_tax_cost + line.tax_cost;
    out.lines.push_back(line);
  }
  out.other_variable = inputs.other_variable_cost;
  out.other_variable_tax = inputs.other_variable_tax * keep;
  out.total_variable = total + out.other_variable + out.other_variable_tax;
  return out;
}

RevenueStatement revenue(const CostInputs& inputs, double saf_premium, double byproduct_premium,
                         double carbon_revenue) {
  require_fraction_ge0(saf_premium, "saf_premium");
  require_fraction_ge0(byproduct_premium, "byproduct_premium");
  require_fraction_ge0(carbon_revenue, "carbon_revenue");
  RevenueStatement out;
  out.saf = inputs.prices.at(Commodity::jet_fuel) * (1.0 + saf_premium);
  out.byproduct = inputs.prices.at(Commodity::naphtha) * (1.0 + byproduct_premium) * inputs.byproduct_yield;
  out.carbon = carbon_revenue;
  out.total = out.saf + out.byproduct + out.carbon;
  return out;
}

double carbon_credit(const CostInputs& inputs, double carbon_price_brl_per_t) {
  const carbon::Abatement a = carbon::abatement_per_kg(inputs.carbon.route_ci(inputs.route),
                                                       inputs.carbon.fossil_jet,
                                                       inputs.carbon.density(inputs.route));
  const double brl = carbon::credit_revenue(a.t_per_kg, {carbon_price_brl_per_t});
  return convert(brl, Currency::brl, inputs.currency, inputs.fx);
}

MarginStatement margin(const CostInputs& inputs, const IncentivePackage& package) {
  package.validate();
  const carbon::Abatement a = carbon::abatement_per_kg(inputs.carbon.route_ci(inputs.route),
                                                       inputs.carbon.fossil_jet,
                                                       inputs.carbon.density(inputs.route));
  MarginStatement m;
  m.route = inputs.route;
  m.currency = inputs.currency;
  m.abatement_t_per_kg = a.t_per_kg;
  m.abatement_clamped = a.clamped;
  m.cost = variable_cost(inputs, package.tax_discount);
  m.revenue = revenue(inputs, package.saf_premium, package.byproduct_premium,
                      carbon_credit(inputs, package.carbon_price));
  m.contribution_margin = m.revenue.total - m.cost.total_variable;
  m.fixed_cost = inputs.fixed_cost;
  m.net_margin = m.contribution_margin - m.fixed_cost;
  return m;
}

MarginWaterfall margin_waterfall(const CostInputs& inputs, const IncentivePackage& package) {
  package.validate();
  MarginWaterfall out;
  out.baseline = margin(inputs, kBasePackage).contribution_margin;
  for (Lever lever : kMarginLevers) {
    const double single = margin(inputs, kBasePackage.with(lever, package.get(lever))).contribution_margin;
    out.deltas.push_back({lever, single - out.baseline});
  }
  out.total = margin(inputs, package).contribution_margin;
  return out;
}

}  // namespace saftea
