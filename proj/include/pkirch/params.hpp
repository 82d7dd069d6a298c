#pragma once

#include <string_view>

namespace pkirch {

/// Position of q relative to the two critical exponents p + p^2/3 and
/// p + 2p^2/3.
enum class Regime {
  Subcritical,
  MassCritical,
  Intermediate,
  DoubleCritical,
  Supercritical,
};

std::string_view to_string(Regime regime);

/// Relative tolerance used to decide that q sits on a critical exponent.
inline constexpr double kRegimeBoundaryTol = 1e-12;

double critical_sobolev_exponent(double p);  // p* = 3p / (3 - p)
double mass_critical_exponent(double p);     // p + p^2/3
double double_critical_exponent(double p);   // p + 2p^2/3

Regime classify_regime(double p, double q);

/// Validated problem data (a, b, p, q, c) plus the exponents every other
/// module derives from them.
struct Params {
  double a = 1.0;
  double b = 1.0;
  double p = 2.0;
  double q = 3.0;
  double c = 1.0;

  double pstar = 6.0;  // 3p/(3-p)
  double e1 = 1.5;     // 3(q-p)/p, power of |grad u|_p in the GN bound
  double e2 = 0.75;    // 3(q-p)/p^2, power of t in f_q
  double qbar = 1.5;   // q - 3(q-p)/p, power of the mass in the GN bound
  double kappa = 0.75; // 1 + (p-3)(q-p)/p^2
  double dcoef = 0.75; // 3(q-p)/p^2
  Regime regime = Regime::Subcritical;

  /// Copy with a different mass or nonlocal coefficient (re-validated).
  Params with_c(double c_new) const;
  Params with_b(double b_new) const;
};

/// Throws Error(OutOfRange) naming the violated bound, Error(NonFinite) on
/// NaN/Inf input.
Params make_params(double a, double b, double p, double q, double c);

/// Validates only the exponent pair (used where a, b, c are irrelevant).
void validate_exponents(double p, double q);

}  // namespace pkirch
