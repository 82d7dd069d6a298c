#include "pkirch/variational.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "pkirch/error.hpp"
#include "pkirch/functional.hpp"
#include "pkirch/kernels.hpp"

namespace pkirch {

using kernels::signed_power;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

bool maximizing(Regime r) { return r == Regime::Supercritical || r == Regime::DoubleCritical; }

}  // namespace

double energy(const Params& prm, const RadialProfile& u) {
  const ProfileNorms nm = u.norms(prm.p, prm.q);
  return energy_from_norms(prm, nm.grad_pp, nm.lq_q);
}

double pohozaev(const Params& prm, const RadialProfile& u) {
  const ProfileNorms nm = u.norms(prm.p, prm.q);
  return pohozaev_from_norms(prm, nm.grad_pp, nm.lq_q);
}

EnergyReport energy_report(const Params& prm, const RadialProfile& u) {
  const ProfileNorms nm = u.norms(prm.p, prm.q);
  EnergyReport r;
  r.I = energy_from_norms(prm, nm.grad_pp, nm.lq_q);
  r.P = pohozaev_from_norms(prm, nm.grad_pp, nm.lq_q);
  r.mass = std::pow(nm.mass_pp, 1.0 / prm.p);
  r.grad = nm.grad_pp;
  r.lq = nm.lq_q;
  r.lambda = nm.mass_pp > 0.0 ? (prm.a * nm.grad_pp + prm.b * nm.grad_pp * nm.grad_pp - nm.lq_q) / nm.mass_pp : 0.0;
  r.pde_residual = pde_residual(prm, r.lambda, u);
  return r;
}

RadialProfile fiber_scale(const RadialProfile& u, double p, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "fiber scale needs t > 0");
  const RadialGrid& g = u.grid();
  const double reach = u.support_radius(kTailRatio) / t;
  if (reach > g.radius()) {
    throw Error(ErrorKind::GridUnderresolved,
                "u_t reaches r = " + fmt(reach) + " beyond the grid radius " + fmt(g.radius()));
  }
  const double core = u.support_radius(0.5) / t;
  if (u.max_abs() > 0.0 && core < 16.0 * g.spacing()) {
    throw Error(ErrorKind::GridUnderresolved, "u_t core radius " + fmt(core) + " spans fewer than 16 cells");
  }
  return resample(u, g, std::pow(t, 3.0 / p), t);
}

RadialProfile fiber_scale_exact(const RadialProfile& u, double p, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::OutOfRange, "fiber scale needs t > 0");
  const RadialGrid g(u.grid().radius() / t, u.grid().intervals());
  const double amp = std::pow(t, 3.0 / p);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= amp;
  return RadialProfile(g, std::move(v));
}

FiberExtremum fiber_extremum_of_norms(const Params& prm, double grad_pp, double lq_q) {
  if (!(lq_q > 0.0)) throw Error(ErrorKind::NoRoot, "|u|_q = 0: P(u_t) > 0 for every t");
  if (!(grad_pp > 0.0)) throw Error(ErrorKind::NoRoot, "|grad u|_p = 0: the fiber is degenerate");
  const double p = prm.p;
  const double k = 3.0 * (prm.q - p) / (p * prm.q);
  // P(u_t) / t^p; same sign as h'(t).
  const auto phi = [&](double t) {
    return prm.a * grad_pp + prm.b * std::pow(t, p) * grad_pp * grad_pp - k * std::pow(t, prm.e1 - p) * lq_q;
  };
  const bool want_max = maximizing(prm.regime);
  constexpr int kLow = -60, kHigh = 60;
  double prev = phi(std::ldexp(1.0, kLow));
  for (int e = kLow + 1; e <= kHigh; ++e) {
    const double cur = phi(std::ldexp(1.0, e));
    const bool change = want_max ? (prev > 0.0 && cur <= 0.0) : (prev < 0.0 && cur >= 0.0);
    if (change) {
      const double lo = std::ldexp(1.0, e - 1), hi = std::ldexp(1.0, e);
      FiberExtremum out;
      out.t = bisect_root(phi, lo, hi);
      out.value = energy_from_norms(prm, grad_pp, lq_q, out.t);
      out.kind = want_max ? ExtremumKind::Max : ExtremumKind::Min;
      out.converged = true;
      out.bracket_width = std::nextafter(out.t, hi) - out.t;
      return out;
    }
    prev = cur;
  }
  throw Error(ErrorKind::NoRoot, std::string("I(u_t) has no interior ") + (want_max ? "maximum" : "minimum"));
}

FiberExtremum fiber_extremum_of(const Params& prm, const RadialProfile& u) {
  const ProfileNorms nm = u.norms(prm.p, prm.q);
  return fiber_extremum_of_norms(prm, nm.grad_pp, nm.lq_q);
}

double gn_quotient(const GroundNorms& qn, const RadialProfile& u, double p, double q) {
  if (qn.p != p || qn.q != q) throw Error(ErrorKind::OutOfRange, "ground-state norms are for another (p, q)");
  const ProfileNorms nm = u.norms(p, q);
  if (!(nm.mass_pp > 0.0)) throw Error(ErrorKind::ZeroFunction, "GN quotient of the zero function");
  const double theta = 3.0 * (q - p) / (q * p);
  const double bound = std::pow(q / (p * std::pow(qn.lp, q - p)), 1.0 / q) *
                       std::pow(nm.grad_pp, theta / p) * std::pow(nm.mass_pp, (1.0 - theta) / p);
  return std::pow(nm.lq_q, 1.0 / q) / bound;
}

double pde_residual(const Params& prm, double lambda, const RadialProfile& u) {
  require_finite(u.values(), "profile");
  if (!std::isfinite(lambda)) throw Error(ErrorKind::NonFinite, "multiplier is not finite");
  const ProfileNorms nm = u.norms(prm.p, prm.q);
  const double kirchhoff = prm.a + prm.b * nm.grad_pp;
  const std::vector<double> lap = radial_p_laplacian(u, prm.p);
  const auto v = u.values();
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 1; i < lap.size(); ++i) {
    const double defect = -kirchhoff * lap[i] - lambda * signed_power(v[i], prm.p) - signed_power(v[i], prm.q);
    worst = std::max(worst, std::abs(defect));
    scale = std::max(scale, std::abs(lambda) * std::pow(std::abs(v[i]), prm.p - 1.0) +
                                std::pow(std::abs(v[i]), prm.q - 1.0));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double w1p_distance(const RadialProfile& u, const RadialProfile& v, double p) {
  const double h = std::min(u.grid().spacing(), v.grid().spacing());
  const double R = std::max(u.grid().radius(), v.grid().radius());
  auto n = static_cast<std::size_t>(std::ceil(R / h));
  n += n % 2;
  const double hh = R / static_cast<double>(n);
  const auto diff = [&](std::size_t i) {
    const double r = hh * static_cast<double>(i);
    return u.sample(r) - v.sample(r);
  };
  // Streamed Simpson sums over a rolling window d_{i-2}..d_{i+1}; centered
  // differences inside, one-sided at R, zero slope at the origin.
  double acc = 0.0;
  double dmm = 0.0, dm = 0.0, d0 = diff(0), dp = diff(1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = hh * static_cast<double>(i);
    double d = 0.0;
    if (i > 0 && i < n) d = (dp - dm) / (2.0 * hh);
    if (i == n) d = (3.0 * d0 - 4.0 * dm + dmm) / (2.0 * hh);
    const double sw = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += 4.0 * std::numbers::pi * r * r * sw * hh / 3.0 * (std::pow(std::abs(d0), p) + std::pow(std::abs(d), p));
    dmm = dm;
    dm = d0;
    d0 = dp;
    dp = i + 2 <= n ? diff(i + 2) : 0.0;
  }
  return std::pow(acc, 1.0 / p);
}

MonotoneRatio monotone_inequality_check(const Vec3& x, const Vec3& y, double s) {
  if (!(s > 1.0) || !std::isfinite(s)) throw Error(ErrorKind::OutOfRange, "exponent s must exceed 1");
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "x is not finite");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "y is not finite");
  }
  if (x == y) throw Error(ErrorKind::DegeneratePair, "x = y: both sides vanish");

  const auto norm2 = [](const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; };
  const double nx = std::sqrt(norm2(x)), ny = std::sqrt(norm2(y));
  const double fx = nx > 0.0 ? std::pow(nx, s - 2.0) : 0.0;
  const double fy = ny > 0.0 ? std::pow(ny, s - 2.0) : 0.0;
  double inner = 0.0, dd = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = x[k] - y[k];
    inner += (fx * x[k] - fy * y[k]) * d;
    dd += d * d;
  }
  MonotoneRatio r;
  // pow(dd, s/2) rather than pow(|x-y|, s) keeps the s = 2 ratio exact.
  if (s >= 2.0) {
    r.ratio = inner / std::pow(dd, 0.5 * s);
  } else {
    r.ratio = std::pow(nx + ny, 2.0 - s) * inner / dd;
  }
  r.nonnegative = r.ratio >= 0.0;
  return r;
}

MonotoneSample sample_monotone_inequality(double s, std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> decade(-3.0, 3.0);
  MonotoneSample out;
  out.s = s;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.all_positive = true;
  out.all_one = true;
  while (out.pairs < pairs) {
    Vec3 x, y;
    const double sx = std::pow(10.0, decade(rng)), sy = std::pow(10.0, decade(rng));
    for (int k = 0; k < 3; ++k) x[k] = sx * normal(rng);
    for (int k = 0; k < 3; ++k) y[k] = sy * normal(rng);
    if (x == y) continue;
    const MonotoneRatio r = monotone_inequality_check(x, y, s);
    ++out.pairs;
    out.min_ratio = std::min(out.min_ratio, r.ratio);
    out.all_positive = out.all_positive && r.ratio > 0.0;
    out.all_one = out.all_one && r.ratio == 1.0;
  }
  return out;
}

}  // namespace pkirch
