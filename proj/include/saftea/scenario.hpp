#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saftea/cost_model.hpp"
#include "saftea/finance.hpp"
#include "saftea/package.hpp"
#include "saftea/reference_data.hpp"

namespace saftea {

struct EvaluationOptions {
  Currency currency = Currency::usd;
  PriceBasis basis = PriceBasis::reference();
  CostOptions cost{};
};

struct Deviation {
  std::string target_id;
  double target = 0.0;
  double computed = 0.0;

  double relative_error() const;
};

struct EvaluationResult {
  Route route = Route::hefa;
  IncentivePackage package;
  std::optional<std::string> package_name;
  std::string price_basis;
  MarginStatement margin;
  MarginWaterfall waterfall;
  finance::DcfResult dcf;
  std::vector<Deviation> deviations;
};

/// Full pipeline for one (route, package): margin, waterfall, reverse DCF, and
/// deviations against the published max-CAPEX values for base/s1/s2.
EvaluationResult evaluate(Route route, const IncentivePackage& package, const DatasetBundle& bundle,
                          const finance::FinancialAssumptions& fin, const EvaluationOptions& options = {});

/// Convenience overload using the bundle's financial defaults.
EvaluationResult evaluate(Route route, const IncentivePackage& package, const DatasetBundle& bundle,
                          const EvaluationOptions& options = {});

struct SweepSpec {
  Lever lever = Lever::carbon_price;
  double from = 0.0;
  double to = 0.0;
  int steps = 2;
  IncentivePackage fixed;

  std::vector<double> grid() const;
  void validate() const;
};

struct SweepRow {
  double lever_value = 0.0;
  double contribution_margin = 0.0;
  double net_margin = 0.0;
  double max_capex = 0.0;
};

std::vector<SweepRow> sweep(Route route, const SweepSpec& spec, const DatasetBundle& bundle,
                            const finance::FinancialAssumptions& fin, const EvaluationOptions& options = {});

/// Isolated margin effect of each of the four margin levers versus the base package.
std::vector<LeverDelta> decompose(Route route, const IncentivePackage& package, const DatasetBundle& bundle,
                                  const EvaluationOptions& options = {});

}  // namespace saftea
