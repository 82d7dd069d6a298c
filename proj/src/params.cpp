#include "pkirch/params.hpp"

#include <cmath>
#include <sstream>

#include "pkirch/error.hpp"

namespace pkirch {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical: return "Subcritical";
    case Regime::MassCritical: return "MassCritical";
    case Regime::Intermediate: return "Intermediate";
    case Regime::DoubleCritical: return "DoubleCritical";
    case Regime::Supercritical: return "Supercritical";
  }
  return "Unknown";
}

double critical_sobolev_exponent(double p) { return 3.0 * p / (3.0 - p); }
double mass_critical_exponent(double p) { return p + p * p / 3.0; }
double double_critical_exponent(double p) { return p + 2.0 * p * p / 3.0; }

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

bool on_boundary(double q, double boundary) {
  return std::abs(q - boundary) <= kRegimeBoundaryTol * std::abs(boundary);
}

}  // namespace

void validate_exponents(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q)) {
    throw Error(ErrorKind::NonFinite, "p and q must be finite");
  }
  if (!(p > 1.5 && p < 3.0)) {
    throw Error(ErrorKind::OutOfRange, "p = " + fmt(p) + " violates p in (3/2, 3)");
  }
  const double ps = critical_sobolev_exponent(p);
  if (!(q > p && q < ps)) {
    throw Error(ErrorKind::OutOfRange,
                "q = " + fmt(q) + " violates q in (p, p*) = (" + fmt(p) + ", " + fmt(ps) + ")");
  }
}

Regime classify_regime(double p, double q) {
  validate_exponents(p, q);
  const double mc = mass_critical_exponent(p);
  const double dc = double_critical_exponent(p);
  if (on_boundary(q, mc)) return Regime::MassCritical;
  if (on_boundary(q, dc)) return Regime::DoubleCritical;
  if (q < mc) return Regime::Subcritical;
  if (q < dc) return Regime::Intermediate;
  return Regime::Supercritical;
}

Params make_params(double a, double b, double p, double q, double c) {
  for (double v : {a, b, p, q, c}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "parameters must be finite");
  }
  validate_exponents(p, q);
  if (!(a > 0.0)) throw Error(ErrorKind::OutOfRange, "a = " + fmt(a) + " violates a > 0");
  if (!(b >= 0.0)) throw Error(ErrorKind::OutOfRange, "b = " + fmt(b) + " violates b >= 0");
  if (!(c > 0.0)) throw Error(ErrorKind::OutOfRange, "c = " + fmt(c) + " violates c > 0");

  Params out;
  out.a = a;
  out.b = b;
  out.p = p;
  out.q = q;
  out.c = c;
  out.pstar = critical_sobolev_exponent(p);
  out.e1 = 3.0 * (q - p) / p;
  out.e2 = 3.0 * (q - p) / (p * p);
  out.qbar = q - out.e1;
  out.kappa = 1.0 + (p - 3.0) * (q - p) / (p * p);
  out.dcoef = out.e2;
  out.regime = classify_regime(p, q);
  return out;
}

Params Params::with_c(double c_new) const { return make_params(a, b, p, q, c_new); }
Params Params::with_b(double b_new) const { return make_params(a, b_new, p, q, c); }

}  // namespace pkirch
