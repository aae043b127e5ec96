#pragma once

#include <json.hpp>

#include "saftea/demand.hpp"
#include "saftea/report.hpp"
#include "saftea/scenario.hpp"

namespace saftea::io {

using nlohmann::json;

json to_json(const IncentivePackage& p);
json to_json(const CostBreakdown& c);
json to_json(const RevenueStatement& r);
json to_json(const MarginStatement& m);
json to_json(const MarginWaterfall& w);
json to_json(const finance::DcfResult& d);
json to_json(const EvaluationResult& r);
json to_json(const std::vector<SweepRow>& rows, Currency currency);
json to_json(const demand::DemandValue& v);
json to_json(const std::vector<report::Row>& rows);
json to_json(const std::vector<report::HistoryRow>& rows, Route route);

/// Summary served by GET /v1/bundle.
json bundle_summary(const DatasetBundle& bundle);

/// A package is either a scenario name ("base", "s1", "s2") or an object with any of
/// the five lever fields (missing ones default to 0). Unknown fields and non-numeric
/// values raise ValidationError(kind = schema); out-of-bounds values kind = bounds.
IncentivePackage package_from_json(const json& value);

/// {"lever": ..., "from": ..., "to": ..., "steps": ..., "fixed": <package>}
SweepSpec sweep_spec_from_json(const json& value);

}  // namespace saftea::io
