#pragma once

#include <map>
#include <optional>
#include <vector>

#include "saftea/types.hpp"

namespace saftea {

struct MarginStatement;

namespace finance {

struct FinancialAssumptions {
  double wacc = 0.12;
  int life_years = 20;
  double capacity_kt_per_year = 300.0;
  FxRate fx{};
  // Single profit-side tax hook applied to annual free cash flow.
  double revenue_tax = 0.0;
  Money capital_grant{0.0, Currency::usd};

  void validate() const;
  bool operator==(const FinancialAssumptions&) const = default;
};

/// Published per-kg fixed costs. `total` is used as published (rounded), the
/// components are informational.
struct FixedCost {
  double manpower = 0.0;
  double maintenance = 0.0;
  double other = 0.0;
  double total = 0.0;
  Currency currency = Currency::usd;

  bool operator==(const FixedCost&) const = default;
};

struct ReferenceCapex {
  Money ref27;
  Money ref34;

  bool operator==(const ReferenceCapex&) const = default;
};

/// Contents of finance.json.
struct FinanceData {
  FinancialAssumptions defaults;
  std::map<Route, FixedCost> fixed_cost;
  std::map<Route, ReferenceCapex> reference_capex;

  bool operator==(const FinanceData&) const = default;
};

/// Annual flows for years 1..life. Year 0 (capex net of grant) is passed separately.
struct CashFlowSeries {
  Currency currency = Currency::usd;
  std::vector<double> flows;

  static CashFlowSeries flat(double annual, int years, Currency currency);
};

struct DcfResult {
  Currency currency = Currency::usd;
  double annual_free_cash_flow = 0.0;
  double npv = 0.0;             // at `capex_basis` and the stated wacc
  std::optional<double> irr;    // absent when the cash flows have no root on the bracket
  double max_capex = 0.0;       // capex that zeroes NPV, grant included
  double capex_basis = 0.0;
  double grant = 0.0;
  double grant_needed = 0.0;    // against capex_basis, grant excluded
  double wacc = 0.0;
  int life_years = 0;
  double capacity_kt_per_year = 0.0;
};

/// Present value of 1 per year for n years: (1 - (1+r)^-n)/r, or n at r = 0.
double annuity_factor(double rate, int years);

Money npv(Money capex, Money grant, const CashFlowSeries& flows, double rate);

/// Rate on [-0.99, 10] at which npv(capex, 0, flows, rate) vanishes; |npv| <= 1e-6 * capex.
std::optional<double> irr(Money capex, const CashFlowSeries& flows);

Money annual_free_cash_flow(const MarginStatement& margin, const FinancialAssumptions& fin);

/// Reverse DCF: FCF * annuity(wacc, life) + grant. Negative means a grant is required.
Money max_capex(const MarginStatement& margin, const FinancialAssumptions& fin);

Money grant_needed(const MarginStatement& margin, const FinancialAssumptions& fin, Money reference_capex);

DcfResult discounted_cash_flow(const MarginStatement& margin, const FinancialAssumptions& fin,
                               Money reference_capex);

}  // namespace finance
}  // namespace saftea
