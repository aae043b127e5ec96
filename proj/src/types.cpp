#include "saftea/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace saftea {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

std::string_view to_string(Commodity c) {
  switch (c) {
    case Commodity::soy_oil: return "soy_oil";
    case Commodity::ethanol: return "ethanol";
    case Commodity::hydrogen: return "hydrogen";
    case Commodity::natural_gas: return "natural_gas";
    case Commodity::electricity: return "electricity";
    case Commodity::jet_fuel: return "jet_fuel";
    case Commodity::naphtha: return "naphtha";
    case Commodity::saf: return "saf";
  }
  return "?";
}

std::string_view to_string(BaseUnit u) { return u == BaseUnit::kwh ? "kWh" : "kg"; }

std::optional<Commodity> parse_commodity(std::string_view text) {
  for (Commodity c : kAllCommodities) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Route r) { return r == Route::hefa ? "hefa" : "atj"; }

Route parse_route(std::string_view text) {
  const std::string key = lower(text);
  if (key == "hefa") return Route::hefa;
  if (key == "atj" || key == "etj") return Route::atj;
  throw ValidationError("route", "unknown route '" + std::string(text) + "' (expected hefa or atj)");
}

std::string_view to_string(Currency c) { return c == Currency::usd ? "USD" : "BRL"; }

Currency parse_currency(std::string_view text) {
  const std::string key = lower(text);
  if (key == "usd") return Currency::usd;
  if (key == "brl") return Currency::brl;
  throw ValidationError("currency", "unknown currency '" + std::string(text) + "' (expected brl or usd)");
}

void FxRate::validate() const {
  if (!std::isfinite(brl_per_usd) || brl_per_usd <= 0.0) {
    throw ValidationError("fx.brl_per_usd", "exchange rate must be a positive number", ValidationError::Kind::bounds);
  }
}

double to_usd(double brl, const FxRate& fx) {
  fx.validate();
  return brl / fx.brl_per_usd;
}

double to_brl(double usd, const FxRate& fx) {
  fx.validate();
  return usd * fx.brl_per_usd;
}

double convert(double amount, Currency from, Currency to, const FxRate& fx) {
  if (from == to) return amount;
  return to == Currency::usd ? to_usd(amount, fx) : to_brl(amount, fx);
}

void require_same_currency(const Money& a, const Money& b) {
  if (a.currency != b.currency) {
    throw CurrencyMismatch("cannot combine " + std::string(to_string(a.currency)) + " and " +
                           std::string(to_string(b.currency)) + " amounts");
  }
}

}  // namespace saftea
