#include "saftea/json_io.hpp"

#include <cmath>

namespace saftea::io {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string cur(Currency c) { return std::string(to_string(c)); }

double lever_number(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(key, key + " must be a number");
  return v.get<double>();
}

}  // namespace

json to_json(const IncentivePackage& p) {
  json out = json::object();
  for (Lever lever : kAllLevers) out[std::string(to_string(lever))] = p.get(lever);
  return out;
}

json to_json(const CostBreakdown& c) {
  json lines = json::array();
  for (const auto& l : c.lines) {
    lines.push_back({{"commodity", std::string(to_string(l.commodity))},
                     {"unit", std::string(to_string(base_unit(l.commodity)))},
                     {"quantity", l.quantity},
                     {"unit_price", l.unit_price},
                     {"tax_rate", l.tax_rate},
                     {"pre_tax_cost", l.pre_tax_cost},
                     {"tax_cost", l.tax_cost}});
  }
  return {{"lines", lines},
          {"other_variable", c.other_variable},
          {"other_variable_tax", c.other_variable_tax},
          {"tax_total", c.tax_total()},
          {"total_variable", c.total_variable}};
}

json to_json(const RevenueStatement& r) {
  return {{"saf", r.saf}, {"byproduct", r.byproduct}, {"carbon", r.carbon}, {"total", r.total}};
}

json to_json(const MarginStatement& m) {
  return {{"route", std::string(to_string(m.route))},
          {"currency", cur(m.currency)},
          {"revenue", to_json(m.revenue)},
          {"cost", to_json(m.cost)},
          {"contribution_margin", m.contribution_margin},
          {"fixed_cost", m.fixed_cost},
          {"net_margin", m.net_margin},
          {"abatement_t_per_kg", m.abatement_t_per_kg},
          {"abatement_clamped", m.abatement_clamped}};
}

json to_json(const MarginWaterfall& w) {
  json deltas = json::array();
  for (const auto& d : w.deltas) deltas.push_back({{"lever", std::string(to_string(d.lever))}, {"delta", d.delta}});
  return {{"baseline", w.baseline}, {"deltas", deltas}, {"total", w.total}};
}

json to_json(const finance::DcfResult& d) {
  return {{"currency", cur(d.currency)},
          {"annual_free_cash_flow", d.annual_free_cash_flow},
          {"npv", d.npv},
          {"irr", optional_number(d.irr)},
          {"max_capex", d.max_capex},
          {"capex_basis", d.capex_basis},
          {"grant", d.grant},
          {"grant_needed", d.grant_needed},
          {"wacc", d.wacc},
          {"life_years", d.life_years},
          {"capacity_kt_per_year", d.capacity_kt_per_year}};
}

json to_json(const EvaluationResult& r) {
  json deviations = json::array();
  for (const auto& d : r.deviations) {
    deviations.push_back({{"target_id", d.target_id},
                          {"target", d.target},
                          {"computed", d.computed},
                          {"relative_error", d.relative_error()}});
  }
  return {{"route", std::string(to_string(r.route))},
          {"package", to_json(r.package)},
          {"package_name", r.package_name ? json(*r.package_name) : json(nullptr)},
          {"price_basis", r.price_basis},
          {"currency", cur(r.margin.currency)},
          {"margin", to_json(r.margin)},
          {"waterfall", to_json(r.waterfall)},
          {"dcf", to_json(r.dcf)},
          {"deviations", deviations}};
}

json to_json(const std::vector<SweepRow>& rows, Currency currency) {
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back({{"lever_value", row.lever_value},
                   {"contribution_margin", row.contribution_margin},
                   {"net_margin", row.net_margin},
                   {"max_capex", row.max_capex},
                   {"currency", cur(currency)}});
  }
  return out;
}

json to_json(const demand::DemandValue& v) {
  return {{"year", v.year},
          {"policy", std::string(demand::to_string(v.policy))},
          {"ci_bound", std::string(demand::to_string(v.ci_bound))},
          {"volume_kt_per_year", v.volume_kt},
          {"source", v.interpolated ? "interpolated" : "published"}};
}

json to_json(const std::vector<report::Row>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"section", r.section},
                   {"id", r.id},
                   {"description", r.description},
                   {"computed", optional_number(r.computed)},
                   {"published", optional_number(r.published)},
                   {"absolute_error", optional_number(r.absolute_error())},
                   {"relative_error", optional_number(r.relative_error())},
                   {"tolerance", optional_number(r.tolerance)},
                   {"tolerance_kind", r.relative_tolerance ? "relative" : "absolute"},
                   {"status", std::string(report::to_string(r.status))},
                   {"note", r.note}});
  }
  return out;
}

json to_json(const std::vector<report::HistoryRow>& rows, Route route) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"route", std::string(to_string(route))},
                   {"year", r.year},
                   {"currency", "BRL"},
                   {"pre_tax_cost", r.pre_tax_cost},
                   {"taxes", r.taxes},
                   {"total_variable", r.total_variable},
                   {"byproduct_credit", r.byproduct_credit},
                   {"net_cost", r.net_cost},
                   {"jet_fuel_price", r.jet_fuel_price}});
  }
  return out;
}

json bundle_summary(const DatasetBundle& b) {
  json out;
  out["bundle_version"] = b.bundle_version;
  out["digest"] = bundle_digest(b);

  json commodities = json::array();
  for (Commodity c : kAllCommodities) {
    commodities.push_back({{"id", std::string(to_string(c))}, {"base_unit", std::string(to_string(base_unit(c)))}});
  }
  out["commodities"] = commodities;

  json routes = json::array();
  for (const auto& [route, y] : b.yields) {
    json consumption = json::object();
    for (const auto& [c, q] : y.consumption) consumption[std::string(to_string(c))] = q;
    routes.push_back({{"route", std::string(to_string(route))},
                      {"consumption", consumption},
                      {"byproduct_yield", y.byproduct_yield},
                      {"other_variable_cost", y.other_variable_cost},
                      {"other_variable_tax", y.other_variable_tax},
                      {"carbon_intensity", b.carbon.route_ci(route).g_per_mj},
                      {"fixed_cost_usd_per_kg", b.finance.fixed_cost.at(route).total},
                      {"reference_capex_usd",
                       {{"ref27", b.finance.reference_capex.at(route).ref27.amount},
                        {"ref34", b.finance.reference_capex.at(route).ref34.amount}}}});
  }
  out["routes"] = routes;

  json books = json::array();
  for (const auto& [source, book] : b.price_books) {
    const auto years = book.years();
    books.push_back({{"source", std::string(to_string(source))},
                     {"currency", cur(book.currency())},
                     {"first_year", years ? years->first : 0},
                     {"last_year", years ? years->last : 0},
                     {"records", book.records().size()}});
  }
  out["price_books"] = books;

  json units = json::array();
  for (const auto& w : b.reference_unit_prices) {
    units.push_back({{"commodity", std::string(to_string(w.commodity))},
                     {"value", w.value},
                     {"currency", cur(w.currency)},
                     {"first_year", w.years.first},
                     {"last_year", w.years.last},
                     {"source", std::string(to_string(w.source))}});
  }
  out["reference_unit_prices"] = units;

  out["fossil_jet_ci"] = b.carbon.fossil_jet.g_per_mj;
  out["carbon"] = {{"fossil_jet", b.carbon.fossil_jet.g_per_mj},
                   {"hefa", b.carbon.hefa.g_per_mj},
                   {"atj", b.carbon.atj.g_per_mj},
                   {"lhv_mj_per_kg", b.carbon.lhv.mj_per_kg}};

  const auto& fin = b.finance.defaults;
  out["finance"] = {{"wacc", fin.wacc},
                    {"life_years", fin.life_years},
                    {"capacity_kt_per_year", fin.capacity_kt_per_year},
                    {"brl_per_usd", fin.fx.brl_per_usd},
                    {"revenue_tax", fin.revenue_tax}};

  json bounds = json::object();
  for (Lever lever : kAllLevers) {
    const LeverBounds lb = lever_bounds(lever);
    bounds[std::string(to_string(lever))] = {{"min", lb.min}, {"max", optional_number(lb.max)}};
  }
  out["lever_bounds"] = bounds;
  // Suggested interactive ranges; the engine accepts anything inside lever_bounds.
  out["ui_ranges"] = {{"tax_discount", {{"min", 0.0}, {"max", 1.0}, {"step", 0.05}}},
                      {"carbon_price", {{"min", 0.0}, {"max", 500.0}, {"step", 10.0}}},
                      {"saf_premium", {{"min", 0.0}, {"max", 1.0}, {"step", 0.05}}},
                      {"byproduct_premium", {{"min", 0.0}, {"max", 1.0}, {"step", 0.05}}},
                      {"capital_grant", {{"min", 0.0}, {"max", nullptr}, {"step", nullptr}}}};
  out["scenarios"] = {{"base", to_json(kBasePackage)}, {"s1", to_json(kScenario1)}, {"s2", to_json(kScenario2)}};

  json years = json::array();
  for (int y : b.demand.milestone_years()) years.push_back(y);
  out["demand_milestone_years"] = years;
  out["provenance"] = b.provenance;
  return out;
}

IncentivePackage package_from_json(const json& value) {
  if (value.is_string()) return named_package(value.get<std::string>());
  if (!value.is_object()) {
    throw ValidationError("package", "package must be a scenario name or an object");
  }
  IncentivePackage p;
  for (const auto& [key, v] : value.items()) {
    if (key == "name") continue;
    Lever lever;
    try {
      lever = parse_lever(key);
    } catch (const ValidationError&) {
      throw ValidationError(key, "unknown package field '" + key + "'");
    }
    p = p.with(lever, lever_number(value, key));
  }
  p.validate();
  return p;
}

SweepSpec sweep_spec_from_json(const json& value) {
  if (!value.is_object()) throw ValidationError("spec", "spec must be an object");
  for (const auto& [key, v] : value.items()) {
    if (key != "lever" && key != "from" && key != "to" && key != "steps" && key != "fixed") {
      throw ValidationError("spec." + key, "unknown spec field '" + key + "'");
    }
  }
  SweepSpec spec;
  if (!value.contains("lever") || !value["lever"].is_string()) {
    throw ValidationError("spec.lever", "spec.lever must be a lever name");
  }
  try {
    spec.lever = parse_lever(value["lever"].get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError("spec.lever", e.what());
  }
  for (const char* key : {"from", "to", "steps"}) {
    if (!value.contains(key) || !value[key].is_number()) {
      throw ValidationError(std::string("spec.") + key, std::string("spec.") + key + " must be a number");
    }
  }
  spec.from = value["from"].get<double>();
  spec.to = value["to"].get<double>();
  const double steps = value["steps"].get<double>();
  if (steps != std::floor(steps) || std::abs(steps) > 1e6) {
    throw ValidationError("spec.steps", "spec.steps must be an integer");
  }
  spec.steps = static_cast<int>(steps);
  if (value.contains("fixed")) spec.fixed = package_from_json(value["fixed"]);
  spec.validate();
  return spec;
}

}  // namespace saftea::io
