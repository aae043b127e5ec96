#pragma once

#include <map>

#include "saftea/types.hpp"

namespace saftea::carbon {

/// Lifecycle carbon intensity, gCO2e per MJ of fuel.
struct CarbonIntensity {
  double g_per_mj = 0.0;
  bool operator==(const CarbonIntensity&) const = default;
};

/// Lower heating value, MJ per kg of fuel.
struct EnergyDensity {
  double mj_per_kg = 43.8;
  bool operator==(const EnergyDensity&) const = default;
};

/// Carbon credit price, BRL per tCO2e (one CBIO is one tCO2e).
struct CarbonPrice {
  double brl_per_t = 0.0;
  bool operator==(const CarbonPrice&) const = default;
};

/// The carbon.json dataset: fossil reference, per-route intensities and the LHV used
/// to convert g/MJ into t/kg. `lhv_overrides` lets one route use its own density.
struct CarbonSet {
  CarbonIntensity fossil_jet{89.0};
  CarbonIntensity hefa{42.9};
  CarbonIntensity atj{36.0};
  EnergyDensity lhv{43.8};
  std::map<Route, EnergyDensity> lhv_overrides;

  CarbonIntensity route_ci(Route r) const { return r == Route::hefa ? hefa : atj; }
  EnergyDensity density(Route r) const;
  void validate() const;

  bool operator==(const CarbonSet&) const = default;
};

struct Abatement {
  double t_per_kg = 0.0;
  // Set when the route is more carbon-intensive than the fossil reference and the
  // differential was clamped to zero.
  bool clamped = false;
};

Abatement abatement_per_kg(CarbonIntensity route_ci, CarbonIntensity fossil_ci, EnergyDensity density);

/// Credit in BRL per kg SAF. Credits accrue on SAF mass only.
double credit_revenue(double abatement_t_per_kg, CarbonPrice price);

/// CBIOs per year for a plant of `annual_saf_kt` kt/y.
double cbio_count(double annual_saf_kt, double abatement_t_per_kg);

}  // namespace saftea::carbon
