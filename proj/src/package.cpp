#include "saftea/package.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "saftea/detail/text.hpp"
#include "saftea/types.hpp"

namespace saftea {

std::string_view to_string(Lever lever) {
  switch (lever) {
    case Lever::tax_discount: return "tax_discount";
    case Lever::carbon_price: return "carbon_price";
    case Lever::saf_premium: return "saf_premium";
    case Lever::byproduct_premium: return "byproduct_premium";
    case Lever::capital_grant: return "capital_grant";
  }
  return "?";
}

Lever parse_lever(std::string_view text) {
  for (Lever lever : kAllLevers) {
    if (to_string(lever) == text) return lever;
  }
  throw ValidationError("lever", "unknown lever '" + std::string(text) + "'");
}

LeverBounds lever_bounds(Lever lever) {
  if (lever == Lever::tax_discount) return {0.0, 1.0};
  return {0.0, std::nullopt};
}

double IncentivePackage::get(Lever lever) const {
  switch (lever) {
    case Lever::tax_discount: return tax_discount;
    case Lever::carbon_price: return carbon_price;
    case Lever::saf_premium: return saf_premium;
    case Lever::byproduct_premium: return byproduct_premium;
    case Lever::capital_grant: return capital_grant;
  }
  return 0.0;
}

IncentivePackage IncentivePackage::with(Lever lever, double value) const {
  IncentivePackage p = *this;
  switch (lever) {
    case Lever::tax_discount: p.tax_discount = value; break;
    case Lever::carbon_price: p.carbon_price = value; break;
    case Lever::saf_premium: p.saf_premium = value; break;
    case Lever::byproduct_premium: p.byproduct_premium = value; break;
    case Lever::capital_grant: p.capital_grant = value; break;
  }
  return p;
}

void IncentivePackage::validate() const {
  for (Lever lever : kAllLevers) {
    const double v = get(lever);
    const LeverBounds b = lever_bounds(lever);
    const std::string name(to_string(lever));
    if (!std::isfinite(v)) {
      throw ValidationError(name, name + " must be a finite number", ValidationError::Kind::bounds);
    }
    if (v < b.min || (b.max && v > *b.max)) {
      std::string range = b.max ? "in [0, 1]" : ">= 0";
      throw ValidationError(name, name + " must be " + range, ValidationError::Kind::bounds);
    }
  }
}

IncentivePackage named_package(std::string_view name) {
  const std::string key = detail::to_lower(name);
  if (key == "base") return kBasePackage;
  if (key == "s1") return kScenario1;
  if (key == "s2") return kScenario2;
  throw ValidationError("scenario", "unknown scenario '" + std::string(name) + "' (expected base, s1 or s2)");
}

std::optional<std::string> package_name(const IncentivePackage& p) {
  if (p == kBasePackage) return "base";
  if (p == kScenario1) return "s1";
  if (p == kScenario2) return "s2";
  return std::nullopt;
}

}  // namespace saftea
