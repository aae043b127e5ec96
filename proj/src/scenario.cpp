#include "saftea/scenario.hpp"

#include <cmath>
#include <limits>

namespace saftea {

double Deviation::relative_error() const {
  if (target == 0.0) return computed == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(computed - target) / std::abs(target);
}

EvaluationResult evaluate(Route route, const IncentivePackage& package, const DatasetBundle& bundle,
                          const finance::FinancialAssumptions& fin, const EvaluationOptions& options) {
  package.validate();
  fin.validate();
  const Currency cur = options.currency;
  const CostInputs inputs = make_cost_inputs(bundle, route, options.basis, cur, options.cost);

  EvaluationResult out;
  out.route = route;
  out.package = package;
  out.package_name = package_name(package);
  out.price_basis = options.basis.label();
  out.margin = margin(inputs, package);
  out.waterfall = margin_waterfall(inputs, package);

  finance::FinancialAssumptions effective = fin;
  effective.capital_grant = fin.capital_grant.converted(cur, fin.fx) +
                            Money{package.capital_grant, Currency::usd}.converted(cur, fin.fx);
  const Money reference = bundle.finance.reference_capex.at(route).ref27.converted(cur, fin.fx);
  out.dcf = finance::discounted_cash_flow(out.margin, effective, reference);

  if (out.package_name) {
    const auto& by_route = bundle.targets.max_capex_usd;
    if (auto r = by_route.find(route); r != by_route.end()) {
      if (auto t = r->second.find(*out.package_name); t != r->second.end()) {
        out.deviations.push_back({"max_capex." + std::string(to_string(route)) + "." + *out.package_name,
                                  convert(t->second, Currency::usd, cur, fin.fx), out.dcf.max_capex});
      }
    }
  }
  return out;
}

EvaluationResult evaluate(Route route, const IncentivePackage& package, const DatasetBundle& bundle,
                          const EvaluationOptions& options) {
  return evaluate(route, package, bundle, bundle.finance.defaults, options);
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out.push_back(i == steps - 1 ? to : from + (to - from) * static_cast<double>(i) / (steps - 1));
  }
  return out;
}

void SweepSpec::validate() const {
  if (!std::isfinite(from) || !std::isfinite(to)) {
    throw ValidationError("spec.from", "grid endpoints must be finite numbers");
  }
  if (steps < 2 || from == to) throw ValidationError("spec.steps", "degenerate grid");
  if (from > to) throw ValidationError("spec.from", "grid requires from <= to");
  const LeverBounds b = lever_bounds(lever);
  const std::string name(to_string(lever));
  if (from < b.min || (b.max && to > *b.max)) {
    std::string range = b.max ? "in [0, 1]" : ">= 0";
    throw ValidationError("spec." + name, name + " must be " + range, ValidationError::Kind::bounds);
  }
  fixed.validate();
}

std::vector<SweepRow> sweep(Route route, const SweepSpec& spec, const DatasetBundle& bundle,
                            const finance::FinancialAssumptions& fin, const EvaluationOptions& options) {
  std::vector<SweepRow> rows;
  for (double value : spec.grid()) {
    const EvaluationResult r = evaluate(route, spec.fixed.with(spec.lever, value), bundle, fin, options);
    rows.push_back({value, r.margin.contribution_margin, r.margin.net_margin, r.dcf.max_capex});
  }
  return rows;
}

std::vector<LeverDelta> decompose(Route route, const IncentivePackage& package, const DatasetBundle& bundle,
                                  const EvaluationOptions& options) {
  const CostInputs inputs = make_cost_inputs(bundle, route, options.basis, options.currency, options.cost);
  return margin_waterfall(inputs, package).deltas;
}

}  // namespace saftea
