#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "saftea/types.hpp"

namespace saftea {

enum class Lever { tax_discount, carbon_price, saf_premium, byproduct_premium, capital_grant };

inline constexpr std::array<Lever, 5> kAllLevers = {Lever::tax_discount, Lever::carbon_price, Lever::saf_premium,
                                                    Lever::byproduct_premium, Lever::capital_grant};
// Levers that act on the per-kg margin; the grant acts on CAPEX only.
inline constexpr std::array<Lever, 4> kMarginLevers = {Lever::tax_discount, Lever::carbon_price,
                                                       Lever::saf_premium, Lever::byproduct_premium};

std::string_view to_string(Lever lever);
Lever parse_lever(std::string_view text);

struct LeverBounds {
  double min = 0.0;
  std::optional<double> max;  // absent = unbounded above
};

LeverBounds lever_bounds(Lever lever);

/// The five policy levers.
struct IncentivePackage {
  double tax_discount = 0.0;       // fraction of input taxes relieved, [0, 1]
  double carbon_price = 0.0;       // BRL per tCO2e
  double saf_premium = 0.0;        // fraction over the jet fuel price
  double byproduct_premium = 0.0;  // fraction over the naphtha price
  double capital_grant = 0.0;      // USD, applied to CAPEX

  double get(Lever lever) const;
  IncentivePackage with(Lever lever, double value) const;

  /// Throws ValidationError(kind = bounds) naming the first field out of bounds.
  void validate() const;

  bool operator==(const IncentivePackage&) const = default;
};

inline constexpr IncentivePackage kBasePackage{};
inline constexpr IncentivePackage kScenario1{0.5, 200.0, 0.25, 0.25, 0.0};
inline constexpr IncentivePackage kScenario2{1.0, 400.0, 0.5, 0.5, 0.0};

/// "base", "s1", "s2" (case-insensitive). Throws ValidationError "unknown scenario".
IncentivePackage named_package(std::string_view name);

/// Name of the named scenario equal to `p`, if any.
std::optional<std::string> package_name(const IncentivePackage& p);

}  // namespace saftea
