#include "pkirch/scalar.hpp"

#include <cmath>
#include <sstream>

#include "pkirch/error.hpp"

namespace pkirch {

namespace {

void require_matching(const Params& prm, const GroundNorms& qn) {
  if (qn.p != prm.p || qn.q != prm.q) {
    std::ostringstream os;
    os << "ground-state norms are for (p, q) = (" << qn.p << ", " << qn.q << "), parameters have (" << prm.p
       << ", " << prm.q << ")";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  if (!(qn.lp > 0.0)) throw Error(ErrorKind::OutOfRange, "ground-state norm |Q|_p must be positive");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

GroundNorms GroundNorms::of(const GroundState& gs) {
  return GroundNorms{gs.p, gs.q, gs.lp(), gs.grad_lp(), gs.lq()};
}

std::string_view to_string(ExtremumKind k) { return k == ExtremumKind::Min ? "Min" : "Max"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::MinimizerForAllMasses: return "MinimizerForAllMasses";
    case Verdict::Minimizer: return "Minimizer";
    case Verdict::NoMinimizer: return "NoMinimizer";
    case Verdict::UnboundedBelow: return "UnboundedBelow";
    case Verdict::PohozaevGroundState: return "PohozaevGroundState";
  }
  return "?";
}

FiberCoefficients fiber_coefficients(const Params& prm, const GroundNorms& qn) {
  require_matching(prm, qn);
  FiberCoefficients f;
  f.A = prm.a / prm.p;
  f.B = prm.b / (2.0 * prm.p);
  f.K = std::pow(prm.c, prm.qbar) / (prm.p * std::pow(qn.lp, prm.q - prm.p));
  f.e2 = prm.e2;
  return f;
}

double eval_f(const Params& prm, const GroundNorms& qn, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::OutOfRange, "f is evaluated at t > 0 only");
  const auto f = fiber_coefficients(prm, qn);
  return f.A * t + f.B * t * t - f.K * std::pow(t, f.e2);
}

double eval_f_derivative(const Params& prm, const GroundNorms& qn, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::OutOfRange, "f is evaluated at t > 0 only");
  const auto f = fiber_coefficients(prm, qn);
  return f.A + 2.0 * f.B * t - f.e2 * f.K * std::pow(t, f.e2 - 1.0);
}

FiberExtremum extremize_f(const Params& prm, const GroundNorms& qn) {
  const auto co = fiber_coefficients(prm, qn);
  const ExtremumKind kind =
      (prm.regime == Regime::Supercritical || prm.regime == Regime::DoubleCritical) ? ExtremumKind::Max
                                                                                       : ExtremumKind::Min;
  const auto df = [&](double t) { return co.A + 2.0 * co.B * t - co.e2 * co.K * std::pow(t, co.e2 - 1.0); };
  const auto f = [&](double t) { return co.A * t + co.B * t * t - co.K * std::pow(t, co.e2); };

  // Sign scan of f' on t = 2^k.
  constexpr int kLow = -40, kHigh = 40;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  double prev = df(std::ldexp(1.0, kLow));
  for (int k = kLow + 1; k <= kHigh && !found; ++k) {
    const double cur = df(std::ldexp(1.0, k));
    const bool change = kind == ExtremumKind::Min ? (prev < 0.0 && cur >= 0.0) : (prev > 0.0 && cur <= 0.0);
    if (change) {
      lo = std::ldexp(1.0, k - 1);
      hi = std::ldexp(1.0, k);
      found = true;
    }
    prev = cur;
  }
  if (!found) {
    throw Error(ErrorKind::NoInteriorExtremum,
                std::string("f has no interior ") + std::string(to_string(kind)) + " in regime " +
                    std::string(to_string(prm.regime)) + " at c = " + fmt(prm.c));
  }

  const double scale = std::max(std::abs(df(lo)), std::abs(df(hi)));
  const auto objective = [&](double t) { return kind == ExtremumKind::Min ? f(t) : -f(t); };
  double t = golden_section_min(objective, lo, hi, 1e-10);
  // Polish on f' inside the golden-section neighbourhood when it still
  // brackets the sign change, otherwise on the scan bracket.
  double a = std::max(lo, t * (1.0 - 1e-8)), b = std::min(hi, t * (1.0 + 1e-8));
  if (!(df(a) * df(b) <= 0.0)) {
    a = lo;
    b = hi;
  }
  t = bisect_root(df, a, b);

  FiberExtremum out;
  out.t = t;
  out.value = f(t);
  out.kind = kind;
  out.bracket_width = std::nextafter(t, hi) - t;
  out.converged = std::abs(df(t)) <= 1e-10 * (1.0 + scale);
  return out;
}

MassCriticalVertex mass_critical_vertex(const Params& prm, const GroundNorms& qn) {
  require_matching(prm, qn);
  if (prm.regime != Regime::MassCritical) {
    throw Error(ErrorKind::WrongRegime, "the quadratic vertex exists at q = p + p^2/3 only");
  }
  if (!(prm.b > 0.0)) throw Error(ErrorKind::NoInteriorExtremum, "f is linear when b = 0");
  const double e = prm.p * prm.p / 3.0;
  const double cq = std::pow(prm.c, e), qq = std::pow(qn.lp, e);
  MassCriticalVertex v;
  v.t_from_f = (cq - prm.a * qq) / (prm.b * qq);
  v.t_alternative = (cq - prm.a * prm.p * qq) / (prm.b * prm.p * qq);
  v.level_from_f = -prm.b / (2.0 * prm.p) * v.t_from_f * v.t_from_f;
  v.level_alternative = -prm.b / (2.0 * prm.p) * v.t_alternative * v.t_alternative;
  return v;
}

double Thresholds::c_star() const {
  if (!c_star_value) {
    throw Error(ErrorKind::WrongRegime, "c_star is defined for p + p^2/3 < q < p + 2p^2/3 only");
  }
  return *c_star_value;
}

double Thresholds::c_star_alternative() const {
  if (!c_star_alternative_value) {
    throw Error(ErrorKind::WrongRegime, "c_star is defined for p + p^2/3 < q < p + 2p^2/3 only");
  }
  return *c_star_alternative_value;
}

double Thresholds::c_dc() const {
  if (!c_dc_value) throw Error(ErrorKind::WrongRegime, "c_dc is defined for q = p + 2p^2/3 only");
  return *c_dc_value;
}

Thresholds thresholds(const Params& prm, const GroundNorms& qn) {
  require_matching(prm, qn);
  const double p = prm.p, q = prm.q, a = prm.a, b = prm.b, c = prm.c, Q = qn.lp;
  Thresholds th;
  th.regime = prm.regime;
  th.c_crit = std::pow(a, 3.0 / (p * p)) * Q;

  switch (prm.regime) {
    case Regime::Subcritical:
      th.verdict = Verdict::MinimizerForAllMasses;
      th.explanation = "i(c) has a minimizer for every c > 0";
      break;
    case Regime::MassCritical:
      th.verdict = c > th.c_crit ? Verdict::Minimizer : Verdict::NoMinimizer;
      th.explanation = c > th.c_crit ? "c > c_crit: i(c) < 0 is attained"
                                     : "c <= c_crit: i(c) = 0 and is not attained";
      break;
    case Regime::Intermediate: {
      // At the threshold a t + b t^2 / 2 touches the GN term; weighted AM-GM
      // with weights (2 - e2, e2 - 1) gives the constant.
      const double th1 = 2.0 * p * p - 3.0 * q + 3.0 * p;  // p^2 (2 - e2)
      const double th2 = 3.0 * q - 3.0 * p - p * p;        // p^2 (e2 - 1)
      const double expo = p / (p * q - 3.0 * q + 3.0 * p);  // 1 / qbar
      const auto build = [&](double b_factor) {
        return std::pow(p * std::pow(Q, q - p) * std::pow(a * p / th1, th1 / (p * p)) *
                            std::pow(b_factor, th2 / (p * p)),
                        expo);
      };
      th.c_star_value = build(b * p / (6.0 * q - 6.0 * p - 2.0 * p * p));
      th.c_star_alternative_value = build(b * p / (6.0 * p * q - 8.0 * p * p));
      if (b == 0.0) {
        th.verdict = Verdict::UnboundedBelow;
        th.explanation = "b = 0: the GN term dominates a t and i(c) = -infinity";
      } else {
        th.verdict = c >= *th.c_star_value ? Verdict::Minimizer : Verdict::NoMinimizer;
        th.explanation = c >= *th.c_star_value ? "c >= c_star: i(c) is attained"
                                               : "c < c_star: i(c) = 0 and is not attained";
      }
      break;
    }
    case Regime::DoubleCritical:
      th.c_dc_value = std::pow(b * std::pow(Q, 2.0 * p * p / 3.0) / 2.0, 3.0 / (2.0 * p * p - 3.0 * p));
      th.verdict = c > *th.c_dc_value ? Verdict::UnboundedBelow : Verdict::NoMinimizer;
      th.explanation = c > *th.c_dc_value ? "c > c_dc: i(c) = -infinity"
                                          : "c <= c_dc: i(c) = 0 and is not attained";
      break;
    case Regime::Supercritical:
      th.verdict = Verdict::PohozaevGroundState;
      th.explanation = "i(c) = -infinity; m(c) on the Pohozaev set is attained by a radial ground state";
      break;
  }
  return th;
}

RadialProfile build_explicit_solution(const Params& prm, const GroundState& gs, double t,
                                      const RadialGrid& target) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "explicit solution needs t > 0");
  const GroundNorms qn = GroundNorms::of(gs);
  require_matching(prm, qn);
  const double mu = std::pow(t, 1.0 / prm.p) / prm.c;
  const double amp = prm.c * std::pow(mu, 3.0 / prm.p) / qn.lp;

  const double support = gs.profile.support_radius(kTailRatio) / mu;
  if (support > target.radius()) {
    throw Error(ErrorKind::GridUnderresolved, "scaled ground state reaches r = " + fmt(support) +
                                                  " beyond the grid radius " + fmt(target.radius()));
  }
  // Half-width of Q in scaled units must span enough target cells.
  const auto qv = gs.profile.values();
  std::size_t i_half = 0;
  while (i_half + 1 < qv.size() && qv[i_half] > 0.5 * qv[0]) ++i_half;
  const double half_width = gs.profile.grid().node(i_half) / mu;
  constexpr double kCellsPerHalfWidth = 64.0;
  if (half_width < kCellsPerHalfWidth * target.spacing()) {
    throw Error(ErrorKind::GridUnderresolved, "scaled ground state half-width " + fmt(half_width) +
                                                  " spans fewer than 64 cells of h = " + fmt(target.spacing()));
  }
  RadialProfile u = resample(gs.profile, target, amp, mu);
  return RadialProfile(u.grid(), std::vector<double>(u.values().begin(), u.values().end()), prm.p, prm.q);
}

RadialGrid explicit_solution_grid(const Params& prm, const GroundState& gs, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "t must be positive");
  const double mu = std::pow(t, 1.0 / prm.p) / prm.c;
  const RadialGrid& g = gs.profile.grid();
  return RadialGrid(g.radius() / mu, g.intervals());
}

double lagrange_multiplier(const Params& prm, const RadialProfile& u) {
  const ProfileNorms nm = u.norms(prm.p, prm.q);
  const double mass = std::pow(nm.mass_pp, 1.0 / prm.p);
  if (!(std::abs(mass - prm.c) <= 1e-6 * prm.c)) {
    throw Error(ErrorKind::MassMismatch, "|u|_p = " + fmt(mass) + " but c = " + fmt(prm.c));
  }
  const double g = nm.grad_pp;
  return (prm.a * g + prm.b * g * g - nm.lq_q) / std::pow(prm.c, prm.p);
}

double closed_form_multiplier(const Params& prm, const GroundNorms& qn, double t) {
  require_matching(prm, qn);
  return -prm.kappa * std::pow(prm.c, (prm.q - prm.p) * (1.0 - 3.0 / prm.p)) * std::pow(t, prm.e2) /
         std::pow(qn.lp, prm.q - prm.p);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > rel_tol * std::abs(hi)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
    if (!(x1 > lo && x2 < hi)) break;
  }
  return 0.5 * (lo + hi);
}

double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo < 0.0) == (ghi < 0.0)) throw Error(ErrorKind::NoRoot, "bisection bracket has no sign change");
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

}  // namespace pkirch
