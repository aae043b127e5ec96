#include "saftea/carbon.hpp"

#include <algorithm>
#include <cmath>

namespace saftea::carbon {

namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(std::string("carbon.") + field, std::string(field) + " must be > 0",
                          ValidationError::Kind::bounds);
  }
}

void require_non_negative(double value, const char* field) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(field, std::string(field) + " must be >= 0", ValidationError::Kind::bounds);
  }
}

}  // namespace

EnergyDensity CarbonSet::density(Route r) const {
  auto it = lhv_overrides.find(r);
  return it == lhv_overrides.end() ? lhv : it->second;
}

void CarbonSet::validate() const {
  require_positive(fossil_jet.g_per_mj, "fossil_jet");
  require_positive(hefa.g_per_mj, "hefa");
  require_positive(atj.g_per_mj, "atj");
  require_positive(lhv.mj_per_kg, "lhv_mj_per_kg");
  for (const auto& [route, d] : lhv_overrides) {
    require_positive(d.mj_per_kg, "lhv_overrides");
  }
}

Abatement abatement_per_kg(CarbonIntensity route_ci, CarbonIntensity fossil_ci, EnergyDensity density) {
  require_non_negative(route_ci.g_per_mj, "route_ci");
  require_positive(fossil_ci.g_per_mj, "fossil_ci");
  require_positive(density.mj_per_kg, "lhv_mj_per_kg");
  const double differential = fossil_ci.g_per_mj - route_ci.g_per_mj;
  // g/MJ * MJ/kg = g/kg; 1e-6 t per g.
  return {std::max(0.0, differential) * density.mj_per_kg * 1e-6, differential < 0.0};
}

double credit_revenue(double abatement_t_per_kg, CarbonPrice price) {
  require_non_negative(abatement_t_per_kg, "abatement");
  require_non_negative(price.brl_per_t, "carbon_price");
  return abatement_t_per_kg * price.brl_per_t;
}

double cbio_count(double annual_saf_kt, double abatement_t_per_kg) {
  require_non_negative(annual_saf_kt, "annual_saf");
  require_non_negative(abatement_t_per_kg, "abatement");
  return annual_saf_kt * 1e6 * abatement_t_per_kg;
}

}  // namespace saftea::carbon
