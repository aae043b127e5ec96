#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saftea/types.hpp"

namespace saftea::demand {

enum class Policy { corsia, probioqav, total };
enum class CiBound { lower, higher };

std::string_view to_string(Policy p);
std::string_view to_string(CiBound b);
Policy parse_policy(std::string_view text);
CiBound parse_bound(std::string_view text);

struct DemandRecord {
  int year = 0;
  Policy policy = Policy::total;
  CiBound ci_bound = CiBound::lower;
  double volume_kt = 0.0;

  bool operator==(const DemandRecord&) const = default;
};

/// Milestone demand rows as published (kt/y).
class DemandTable {
 public:
  DemandTable() = default;
  explicit DemandTable(std::vector<DemandRecord> records);

  const std::vector<DemandRecord>& records() const { return records_; }
  std::vector<int> milestone_years() const;
  std::optional<double> find(int year, Policy policy, CiBound bound) const;

  bool operator==(const DemandTable&) const = default;

 private:
  std::vector<DemandRecord> records_;
};

struct DemandValue {
  int year = 0;
  Policy policy = Policy::total;
  CiBound ci_bound = CiBound::lower;
  double volume_kt = 0.0;
  bool interpolated = false;
};

inline constexpr int kFirstDemandYear = 2027;
inline constexpr int kLastDemandYear = 2037;

/// Exact table value at milestone years; with `allow_interpolation` any year in
/// 2027-2037 is answered by linear interpolation between adjacent milestones.
DemandValue demand_at(const DemandTable& table, int year, Policy policy, CiBound bound,
                      bool allow_interpolation = false);

/// By-product volume (kt/y) for `saf_volume_kt` with `hefa_share` of HEFA and the
/// remainder ATJ, using the per-route naphtha-equivalent yields.
double byproduct_volume(double saf_volume_kt, double hefa_share, double hefa_yield, double atj_yield);

struct ScenarioCapex {
  std::string scenario;  // "I", "II", "III"
  double capex_brl_low = 0.0;
  double capex_brl_high = 0.0;
  std::optional<double> capacity_low;  // thousand m3/y
  std::optional<double> capacity_high;
  std::string capacity_unit;
  std::string description;

  bool operator==(const ScenarioCapex&) const = default;
};

struct InvestmentEnvelope {
  double brl_low = 0.0;
  double brl_high = 0.0;
  double usd_low = 0.0;
  double usd_high = 0.0;
  int horizon_first = 2025;
  int horizon_last = 2037;

  bool operator==(const InvestmentEnvelope&) const = default;
};

/// Contents of investment.json.
struct InvestmentData {
  InvestmentEnvelope envelope;
  std::vector<ScenarioCapex> scenarios;

  bool operator==(const InvestmentData&) const = default;
};

struct EnvelopeReport {
  InvestmentEnvelope envelope;
  std::vector<ScenarioCapex> scenarios;
  double usd_low_from_fx = 0.0;
  double usd_high_from_fx = 0.0;
  double max_fx_relative_error = 0.0;
};

EnvelopeReport investment_envelope(const InvestmentData& data, const FxRate& fx);

}  // namespace saftea::demand
