#include "saftea/finance.hpp"

#include <algorithm>
#include <cmath>

#include "saftea/cost_model.hpp"

namespace saftea::finance {

namespace {

constexpr double kIrrLow = -0.99;
constexpr double kIrrHigh = 10.0;
constexpr double kIrrCeiling = 1e6;

double present_value(const CashFlowSeries& series, double rate) {
  double sum = 0.0;
  const double base = 1.0 + rate;
  for (std::size_t t = 0; t < series.flows.size(); ++t) {
    sum += series.flows[t] * std::pow(base, -static_cast<double>(t + 1));
  }
  return sum;
}

}  // namespace

void FinancialAssumptions::validate() const {
  if (!std::isfinite(wacc) || wacc < 0.0) {
    throw ValidationError("finance.wacc", "wacc must be >= 0", ValidationError::Kind::bounds);
  }
  if (life_years < 1) {
    throw ValidationError("finance.life_years", "life must be at least one year", ValidationError::Kind::bounds);
  }
  if (!std::isfinite(capacity_kt_per_year) || capacity_kt_per_year < 0.0) {
    throw ValidationError("finance.capacity_kt_per_year", "capacity must be >= 0", ValidationError::Kind::bounds);
  }
  if (!std::isfinite(revenue_tax) || revenue_tax < 0.0 || revenue_tax >= 1.0) {
    throw ValidationError("finance.revenue_tax", "revenue_tax must be in [0, 1)", ValidationError::Kind::bounds);
  }
  if (!std::isfinite(capital_grant.amount) || capital_grant.amount < 0.0) {
    throw ValidationError("finance.capital_grant", "capital_grant must be >= 0", ValidationError::Kind::bounds);
  }
  fx.validate();
}

CashFlowSeries CashFlowSeries::flat(double annual, int years, Currency currency) {
  return {currency, std::vector<double>(static_cast<std::size_t>(std::max(years, 0)), annual)};
}

double annuity_factor(double rate, int years) {
  if (years < 1) throw ValidationError("years", "annuity needs n >= 1", ValidationError::Kind::bounds);
  if (!std::isfinite(rate) || rate < 0.0) {
    throw ValidationError("rate", "annuity needs rate >= 0", ValidationError::Kind::bounds);
  }
  if (rate == 0.0) return static_cast<double>(years);
  // expm1/log1p keep the small-rate limit accurate.
  return -std::expm1(-years * std::log1p(rate)) / rate;
}

Money npv(Money capex, Money grant, const CashFlowSeries& flows, double rate) {
  require_same_currency(capex, grant);
  if (flows.currency != capex.currency) {
    throw CurrencyMismatch("cash flows and capex are in different currencies");
  }
  return {-(capex.amount - grant.amount) + present_value(flows, rate), capex.currency};
}

std::optional<double> irr(Money capex, const CashFlowSeries& flows) {
  if (flows.currency != capex.currency) {
    throw CurrencyMismatch("cash flows and capex are in different currencies");
  }
  auto f = [&](double r) { return -capex.amount + present_value(flows, r); };

  double a = kIrrLow;
  double b = kIrrHigh;
  double fa = f(a);
  double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) return std::nullopt;
  // Very cheap plants can have returns beyond the initial bracket.
  while ((fa > 0.0) == (fb > 0.0) && fb != 0.0 && b < kIrrCeiling) {
    a = b;
    fa = fb;
    b *= 4.0;
    fb = f(b);
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;

  const double scale = std::max(std::abs(capex.amount), 1e-300);
  const double tol = 1e-6 * scale;
  double x = 0.5 * (a + b);
  for (int iter = 0; iter < 300; ++iter) {
    // Secant step inside the bracket, bisection otherwise.
    double candidate = b - fb * (b - a) / (fb - fa);
    if (!(candidate > a && candidate < b) || iter % 4 == 3) candidate = 0.5 * (a + b);
    x = candidate;
    const double fx = f(x);
    if (std::abs(fx) <= 1e-6 * tol || (b - a) <= 1e-15 * std::max(1.0, std::abs(x))) {
      return std::abs(fx) <= tol ? std::optional<double>(x) : std::nullopt;
    }
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  return std::abs(f(x)) <= tol ? std::optional<double>(x) : std::nullopt;
}

Money annual_free_cash_flow(const MarginStatement& margin, const FinancialAssumptions& fin) {
  fin.validate();
  const double kg_per_year = fin.capacity_kt_per_year * 1e6;
  return {margin.net_margin * kg_per_year * (1.0 - fin.revenue_tax), margin.currency};
}

Money max_capex(const MarginStatement& margin, const FinancialAssumptions& fin) {
  const Money fcf = annual_free_cash_flow(margin, fin);
  require_same_currency(fcf, fin.capital_grant);
  return {fcf.amount * annuity_factor(fin.wacc, fin.life_years) + fin.capital_grant.amount, fcf.currency};
}

Money grant_needed(const MarginStatement& margin, const FinancialAssumptions& fin, Money reference_capex) {
  FinancialAssumptions without_grant = fin;
  without_grant.capital_grant = {0.0, margin.currency};
  const Money capex = max_capex(margin, without_grant);
  require_same_currency(capex, reference_capex);
  return {std::max(0.0, reference_capex.amount - capex.amount), capex.currency};
}

DcfResult discounted_cash_flow(const MarginStatement& margin, const FinancialAssumptions& fin,
                               Money reference_capex) {
  const Money fcf = annual_free_cash_flow(margin, fin);
  const CashFlowSeries series = CashFlowSeries::flat(fcf.amount, fin.life_years, fcf.currency);

  DcfResult out;
  out.currency = fcf.currency;
  out.annual_free_cash_flow = fcf.amount;
  out.npv = npv(reference_capex, fin.capital_grant, series, fin.wacc).amount;
  out.irr = irr(reference_capex - fin.capital_grant, series);
  out.max_capex = max_capex(margin, fin).amount;
  out.capex_basis = reference_capex.amount;
  out.grant = fin.capital_grant.amount;
  out.grant_needed = grant_needed(margin, fin, reference_capex).amount;
  out.wacc = fin.wacc;
  out.life_years = fin.life_years;
  out.capacity_kt_per_year = fin.capacity_kt_per_year;
  return out;
}

}  // namespace saftea::finance
