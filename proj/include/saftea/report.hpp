#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saftea/reference_data.hpp"

namespace saftea::report {

enum class Status { match, deviation, assumption };

std::string_view to_string(Status s);

/// One line of the reproduction report: a computed value next to the published one.
struct Row {
  std::string section;
  std::string id;
  std::string description;
  std::optional<double> computed;
  std::optional<double> published;
  std::optional<double> tolerance;
  bool relative_tolerance = true;
  Status status = Status::match;
  std::string note;

  std::optional<double> absolute_error() const;
  std::optional<double> relative_error() const;
};

std::vector<Row> reproduce(const DatasetBundle& bundle);

/// Year-by-year variable cash cost from the yearly table7 prices, without incentives
/// and without the other variable costs, in BRL per kg SAF.
struct HistoryRow {
  int year = 0;
  double pre_tax_cost = 0.0;
  double taxes = 0.0;
  double total_variable = 0.0;
  double byproduct_credit = 0.0;
  double net_cost = 0.0;  // total_variable - byproduct_credit
  double jet_fuel_price = 0.0;
};

std::vector<HistoryRow> historical_comparison(const DatasetBundle& bundle, Route route, bool include_taxes = true);

}  // namespace saftea::report
