#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace saftea {

/// Raised for any user-supplied value that violates a documented bound or schema.
/// `field` is a dotted path to the offending input (e.g. "package.tax_discount").
class ValidationError : public std::invalid_argument {
 public:
  enum class Kind { schema, bounds };

  ValidationError(std::string field, const std::string& message, Kind kind = Kind::schema)
      : std::invalid_argument(message), field_(std::move(field)), kind_(kind) {}

  const std::string& field() const noexcept { return field_; }
  Kind kind() const noexcept { return kind_; }

 private:
  std::string field_;
  Kind kind_;
};

class CurrencyMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Commodity { soy_oil, ethanol, hydrogen, natural_gas, electricity, jet_fuel, naphtha, saf };

inline constexpr std::array<Commodity, 8> kAllCommodities = {
    Commodity::soy_oil,     Commodity::ethanol,  Commodity::hydrogen, Commodity::natural_gas,
    Commodity::electricity, Commodity::jet_fuel, Commodity::naphtha,  Commodity::saf};

// Commodities with a market price series (saf is priced as jet fuel).
inline constexpr std::array<Commodity, 7> kPricedCommodities = {
    Commodity::ethanol,  Commodity::soy_oil,  Commodity::jet_fuel,   Commodity::naphtha,
    Commodity::hydrogen, Commodity::natural_gas, Commodity::electricity};

enum class BaseUnit { kg, kwh };

constexpr BaseUnit base_unit(Commodity c) {
  return c == Commodity::electricity ? BaseUnit::kwh : BaseUnit::kg;
}

std::string_view to_string(Commodity c);
std::string_view to_string(BaseUnit u);
std::optional<Commodity> parse_commodity(std::string_view text);

enum class Route { hefa, atj };

inline constexpr std::array<Route, 2> kAllRoutes = {Route::hefa, Route::atj};

std::string_view to_string(Route r);
/// Accepts "hefa" / "atj" (case-insensitive; "etj" is an alias for atj).
Route parse_route(std::string_view text);

enum class Currency { brl, usd };

std::string_view to_string(Currency c);
Currency parse_currency(std::string_view text);

struct FxRate {
  double brl_per_usd = 5.20;

  void validate() const;
  bool operator==(const FxRate&) const = default;
};

double to_usd(double brl, const FxRate& fx);
double to_brl(double usd, const FxRate& fx);
double convert(double amount, Currency from, Currency to, const FxRate& fx);

/// An amount tagged with its currency. Arithmetic between different currencies throws.
struct Money {
  double amount = 0.0;
  Currency currency = Currency::usd;

  Money converted(Currency to, const FxRate& fx) const { return {convert(amount, currency, to, fx), to}; }

  bool operator==(const Money&) const = default;
};

void require_same_currency(const Money& a, const Money& b);

inline Money operator+(const Money& a, const Money& b) {
  require_same_currency(a, b);
  return {a.amount + b.amount, a.currency};
}
inline Money operator-(const Money& a, const Money& b) {
  require_same_currency(a, b);
  return {a.amount - b.amount, a.currency};
}
inline Money operator*(const Money& a, double k) { return {a.amount * k, a.currency}; }

/// Inclusive calendar-year window.
struct YearRange {
  int first = 0;
  int last = 0;

  int count() const { return last - first + 1; }
  bool contains(int year) const { return year >= first && year <= last; }
  bool operator==(const YearRange&) const = default;
};

}  // namespace saftea
