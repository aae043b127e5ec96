#include "saftea/demand.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "saftea/detail/text.hpp"

namespace saftea::demand {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::corsia: return "corsia";
    case Policy::probioqav: return "probioqav";
    case Policy::total: return "total";
  }
  return "?";
}

std::string_view to_string(CiBound b) { return b == CiBound::lower ? "lower" : "higher"; }

Policy parse_policy(std::string_view text) {
  const std::string key = detail::to_lower(text);
  for (Policy p : {Policy::corsia, Policy::probioqav, Policy::total}) {
    if (to_string(p) == key) return p;
  }
  throw ValidationError("policy", "unknown policy '" + std::string(text) + "' (expected corsia, probioqav or total)");
}

CiBound parse_bound(std::string_view text) {
  const std::string key = detail::to_lower(text);
  if (key == "lower") return CiBound::lower;
  if (key == "higher") return CiBound::higher;
  throw ValidationError("bound", "unknown CI bound '" + std::string(text) + "' (expected lower or higher)");
}

DemandTable::DemandTable(std::vector<DemandRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(), [](const DemandRecord& a, const DemandRecord& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.policy != b.policy) return a.policy < b.policy;
    return a.ci_bound < b.ci_bound;
  });
}

std::vector<int> DemandTable::milestone_years() const {
  std::set<int> years;
  for (const auto& r : records_) years.insert(r.year);
  return {years.begin(), years.end()};
}

std::optional<double> DemandTable::find(int year, Policy policy, CiBound bound) const {
  for (const auto& r : records_) {
    if (r.year == year && r.policy == policy && r.ci_bound == bound) return r.volume_kt;
  }
  return std::nullopt;
}

DemandValue demand_at(const DemandTable& table, int year, Policy policy, CiBound bound, bool allow_interpolation) {
  if (year < kFirstDemandYear || year > kLastDemandYear) {
    throw ValidationError("year", "year outside 2027–2037");
  }
  if (auto exact = table.find(year, policy, bound)) {
    return {year, policy, bound, *exact, false};
  }
  if (!allow_interpolation) {
    throw ValidationError("year", "year " + std::to_string(year) +
                                      " is not a milestone year (2027, 2029, 2034, 2037); enable interpolation");
  }
  const auto years = table.milestone_years();
  auto upper = std::upper_bound(years.begin(), years.end(), year);
  if (upper == years.begin() || upper == years.end()) {
    throw ValidationError("year", "no milestones bracket year " + std::to_string(year));
  }
  const int y1 = *upper;
  const int y0 = *std::prev(upper);
  const auto v0 = table.find(y0, policy, bound);
  const auto v1 = table.find(y1, policy, bound);
  if (!v0 || !v1) {
    throw ValidationError("year", "demand table is missing a milestone row", ValidationError::Kind::bounds);
  }
  const double w = static_cast<double>(year - y0) / static_cast<double>(y1 - y0);
  return {year, policy, bound, *v0 + w * (*v1 - *v0), true};
}

double byproduct_volume(double saf_volume_kt, double hefa_share, double hefa_yield, double atj_yield) {
  if (!std::isfinite(saf_volume_kt) || saf_volume_kt < 0.0) {
    throw ValidationError("saf_volume", "saf volume must be >= 0", ValidationError::Kind::bounds);
  }
  if (!std::isfinite(hefa_share) || hefa_share < 0.0 || hefa_share > 1.0) {
    throw ValidationError("hefa_share", "route mix must be in [0, 1]", ValidationError::Kind::bounds);
  }
  if (hefa_share == 1.0) return saf_volume_kt * hefa_yield;
  if (hefa_share == 0.0) return saf_volume_kt * atj_yield;
  return saf_volume_kt * (hefa_share * hefa_yield + (1.0 - hefa_share) * atj_yield);
}

EnvelopeReport investment_envelope(const InvestmentData& data, const FxRate& fx) {
  EnvelopeReport out;
  out.envelope = data.envelope;
  out.scenarios = data.scenarios;
  out.usd_low_from_fx = to_usd(data.envelope.brl_low, fx);
  out.usd_high_from_fx = to_usd(data.envelope.brl_high, fx);
  out.max_fx_relative_error =
      std::max(std::abs(out.usd_low_from_fx - data.envelope.usd_low) / data.envelope.usd_low,
               std::abs(out.usd_high_from_fx - data.envelope.usd_high) / data.envelope.usd_high);
  return out;
}

}  // namespace saftea::demand
