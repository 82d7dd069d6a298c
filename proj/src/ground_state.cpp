#include "pkirch/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <limits>
#include <string>

#include "pkirch/error.hpp"
#include "pkirch/kernels.hpp"
#include "pkirch/params.hpp"

namespace pkirch {

using kernels::signed_power;

std::string_view to_string(ShotTag tag) {
  switch (tag) {
    case ShotTag::Crossing: return "Crossing";
    case ShotTag::Rebound: return "Rebound";
    case ShotTag::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

GroundStateCoefficients ground_state_coefficients(double p, double q) {
  GroundStateCoefficients c{};
  c.kappa = 1.0 + (p - 3.0) * (q - p) / (p * p);
  c.dcoef = 3.0 * (q - p) / (p * p);
  c.equilibrium = std::pow(c.kappa, 1.0 / (q - p));
  c.decay_rate = std::pow(c.kappa / ((p - 1.0) * c.dcoef), 1.0 / p);
  c.decay_power = 2.0 / (p * (p - 1.0));
  return c;
}

namespace {

struct OdeSystem {
  double p, q, kappa, dcoef, eps;

  double reaction(double u) const { return kappa * signed_power(u, p) - signed_power(u, q); }

  // u' recovered from the flux w = r^2 |u'|^{p-2} u'.
  double slope(double r, double w) const {
    const double x = std::abs(w) / (r * r);
    const double e = 1.0 / (p - 1.0);
    double mag = eps > 0.0 ? std::pow(x + eps, e) - std::pow(eps, e) : std::pow(x, e);
    return w < 0.0 ? -mag : mag;
  }

  void rhs(double r, double u, double w, double& du, double& dw) const {
    du = slope(r, w);
    dw = r * r / dcoef * reaction(u);
  }

  void rk4(double r, double h, double& u, double& w) const {
    double k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w;
    rhs(r, u, w, k1u, k1w);
    rhs(r + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w, k2u, k2w);
    rhs(r + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w, k3u, k3w);
    rhs(r + h, u + h * k3u, w + h * k3w, k4u, k4w);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }
};

// The series starts at h / 2^kStartOctaves; each octave [r, 2r] below h gets
// kOctaveSubsteps RK4 steps.
constexpr int kStartOctaves = 20;
constexpr int kOctaveSubsteps = 32;

// RK4 substeps for the interval [r_i, r_{i+1}]. With the r^-2 coefficient
// the local error behaves like h^2 / (m^5 i^3).
int substeps(std::size_t i) {
  return std::max(1, static_cast<int>(std::ceil(64.0 * std::pow(static_cast<double>(i), -0.75))));
}

}  // namespace

ShotOutcome shoot(double p, double q, double s0, const RadialGrid& grid, double eps_reg) {
  validate_exponents(p, q);
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw Error(ErrorKind::OutOfRange, "shooting value must be positive");
  if (!(eps_reg >= 0.0)) throw Error(ErrorKind::OutOfRange, "eps_reg must be >= 0");

  const auto gc = ground_state_coefficients(p, q);
  const OdeSystem sys{p, q, gc.kappa, gc.dcoef, eps_reg};
  const double h = grid.spacing();
  const std::size_t n = grid.intervals();

  ShotOutcome out;
  out.u.reserve(n + 1);
  out.w.reserve(n + 1);
  out.u.push_back(s0);
  out.w.push_back(0.0);

  const double g0 = sys.reaction(s0);
  const double g_scale = gc.kappa * std::pow(s0, p - 1.0) + std::pow(s0, q - 1.0);
  if (std::abs(g0) <= 64.0 * std::numeric_limits<double>::epsilon() * g_scale) {
    // Constant equilibrium: the right-hand side vanishes identically.
    out.u.assign(n + 1, s0);
    out.w.assign(n + 1, 0.0);
    out.tag = ShotTag::Undetermined;
    out.r_event = grid.radius();
    return out;
  }

  // Leading-order series on [0, r_s], then RK4 on octaves up to r = h. The
  // r^-2 coefficient costs RK4 its order whenever the step is comparable to
  // r, so the steps stay a fixed fraction of r near the origin.
  const double r_s = std::ldexp(h, -kStartOctaves);
  double u = s0 + std::copysign(std::pow(std::abs(g0) / (3.0 * gc.dcoef), 1.0 / (p - 1.0)) * (p - 1.0) / p *
                                    std::pow(r_s, p / (p - 1.0)),
                                g0);
  double w = r_s * r_s * r_s * g0 / (3.0 * gc.dcoef);
  if (w > 0.0) {
    // Below the equilibrium the profile turns upward immediately.
    out.tag = ShotTag::Rebound;
    out.r_event = 0.0;
    return out;
  }
  for (int oct = 0; oct < kStartOctaves; ++oct) {
    const double r0 = std::ldexp(r_s, oct);
    const double dr = r0 / kOctaveSubsteps;
    for (int k = 0; k < kOctaveSubsteps; ++k) sys.rk4(r0 + dr * k, dr, u, w);
  }
  out.u.push_back(u);
  out.w.push_back(w);

  const double bound = 10.0 * s0;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = grid.node(i);
    const double u_prev = u, w_prev = w;
    const int m = substeps(i);
    const double dr = h / m;
    for (int k = 0; k < m; ++k) sys.rk4(r + dr * k, dr, u, w);
    if (!std::isfinite(u) || !std::isfinite(w)) {
      throw Error(ErrorKind::NonFinite, "shot overflowed at r = " + std::to_string(r + h));
    }
    if (std::abs(u) > bound) {
      throw Error(ErrorKind::StepFailure, "shot left [-10 s0, 10 s0] at r = " + std::to_string(r + h));
    }
    const bool crossed = u <= 0.0;
    const bool rebounded = w > 0.0 && u > 0.0;
    if (crossed || rebounded) {
      double r_cross = crossed ? r + h * u_prev / (u_prev - u) : std::numeric_limits<double>::infinity();
      double r_reb = w > 0.0 ? r + h * (-w_prev) / (w - w_prev) : std::numeric_limits<double>::infinity();
      if (r_cross <= r_reb) {
        out.tag = ShotTag::Crossing;
        out.r_event = r_cross;
      } else {
        out.tag = ShotTag::Rebound;
        out.r_event = r_reb;
      }
      return out;
    }
    out.u.push_back(u);
    out.w.push_back(w);
  }
  out.tag = ShotTag::Undetermined;
  out.r_event = grid.radius();
  return out;
}

RadialGrid default_ground_state_grid(double p, double q) {
  validate_exponents(p, q);
  const auto gc = ground_state_coefficients(p, q);
  constexpr double h = 0.01;
  const double radius = std::max(kDefaultRadius, std::ceil(8.0 + 21.0 / gc.decay_rate));
  auto n = static_cast<std::size_t>(std::llround(radius / h));
  if (n % 2 != 0) ++n;
  return RadialGrid(static_cast<double>(n) * h, n);
}

GroundState compute_ground_state(double p, double q, double tol) {
  return compute_ground_state(p, q, tol, default_ground_state_grid(p, q));
}

namespace {

// Relative disagreement between the bracketing shots beyond which the
// shots are no longer trusted.
constexpr double kShotAgreement = 1e-4;

}  // namespace

GroundState compute_ground_state(double p, double q, double tol, const RadialGrid& grid) {
  validate_exponents(p, q);
  if (!(tol > 0.0)) throw Error(ErrorKind::OutOfRange, "tol must be positive");
  const auto gc = ground_state_coefficients(p, q);

  // Bracket: a Rebound just above the equilibrium and the first Crossing of
  // the geometric scan.
  double lo = gc.equilibrium * (1.0 + 1e-6);
  ShotOutcome shot_lo = shoot(p, q, lo, grid);
  if (shot_lo.tag == ShotTag::Crossing) {
    throw Error(ErrorKind::BracketNotFound, "shot just above the equilibrium already crosses zero");
  }
  double hi = 0.0;
  ShotOutcome shot_hi;
  for (int k = 1; k <= 20; ++k) {
    const double s = gc.equilibrium * std::ldexp(1.0, k);
    if (s > 1e6) break;
    ShotOutcome shot;
    try {
      shot = shoot(p, q, s, grid);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StepFailure) throw;
      continue;
    }
    if (shot.tag == ShotTag::Crossing) {
      hi = s;
      shot_hi = std::move(shot);
      break;
    }
    if (shot.tag == ShotTag::Rebound) {
      lo = s;
      shot_lo = std::move(shot);
    }
  }
  if (hi == 0.0) throw Error(ErrorKind::BracketNotFound, "no Crossing shot in s0 <= 1e6");

  bool exact = false;  // a shot reached R positive and decreasing
  // Bisect down to the floating-point limit: tol is the accuracy the caller
  // requires, and every extra digit of s0 pushes the trusted part of the
  // shots further into the tail.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ShotOutcome shot = shoot(p, q, mid, grid);
    if (shot.tag == ShotTag::Crossing) {
      hi = mid;
      shot_hi = std::move(shot);
    } else if (shot.tag == ShotTag::Rebound) {
      lo = mid;
      shot_lo = std::move(shot);
    } else {
      lo = hi = mid;
      shot_lo = shot;
      shot_hi = std::move(shot);
      exact = true;
      break;
    }
  }

  // Trusted part: where both bracketing shots agree.
  const std::size_t common = std::min(shot_lo.u.size(), shot_hi.u.size());
  std::size_t cut = 0;
  while (cut + 1 < common) {
    const std::size_t j = cut + 1;
    const double avg = 0.5 * (shot_lo.u[j] + shot_hi.u[j]);
    const double gap = std::abs(shot_lo.u[j] - shot_hi.u[j]);
    if (!exact && gap > kShotAgreement * avg) break;
    if (shot_lo.w[j] >= 0.0 || shot_hi.w[j] >= 0.0) break;
    cut = j;
  }
  if (hi - lo > tol * hi) throw Error(ErrorKind::BracketNotFound, "bracket did not shrink to tol");
  if (cut < 16) throw Error(ErrorKind::BracketNotFound, "bracketing shots disagree near the origin");

  const std::size_t size = grid.size();
  std::vector<double> values(size);
  for (std::size_t i = 0; i <= cut; ++i) values[i] = 0.5 * (shot_lo.u[i] + shot_hi.u[i]);
  const double r_cut = grid.node(cut);
  const double u_cut = values[cut];
  for (std::size_t i = cut + 1; i < size; ++i) {
    const double r = grid.node(i);
    values[i] = u_cut * std::pow(r_cut / r, gc.decay_power) * std::exp(-gc.decay_rate * (r - r_cut));
  }

  RadialProfile profile(grid, std::move(values), p, q);
  if (!profile.tail_decayed()) {
    throw Error(ErrorKind::TailTooFat, "ground state has |Q(R)| > 1e-8 max|Q| on R = " +
                                           std::to_string(grid.radius()));
  }

  GroundState gs{p, q, tol, profile, 0.5 * (lo + hi), lo, hi, r_cut, *profile.cached_norms(), gc, {}};
  gs.residuals = verify_ground_identities(gs);
  return gs;
}

namespace {

// Derivative at t of the polynomial interpolating (x_j, y_j).
double lagrange_derivative(std::span<const double> x, std::span<const double> y, double t) {
  const std::size_t m = x.size();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double dl = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      double prod = 1.0 / (x[j] - x[k]);
      for (std::size_t l = 0; l < m; ++l) {
        if (l != j && l != k) prod *= (t - x[l]) / (x[j] - x[l]);
      }
      dl += prod;
    }
    s += y[j] * dl;
  }
  return s;
}

// Nodes i <= kOriginNodes use stencils in rho = r^{p/(p-1)}: near the origin
// u - u(0) and psi / r are power series in rho, while in r they are not
// smooth unless p = 2.
constexpr std::size_t kOriginNodes = 4;
constexpr std::size_t kOriginStencil = 7;

}  // namespace

std::vector<double> radial_p_laplacian(const RadialProfile& u, double p) {
  const auto vals = u.values();
  const std::size_t n = u.grid().intervals();
  const double h = u.grid().spacing();
  const double sigma = p / (p - 1.0);
  const auto rho = [&](std::size_t k) { return std::pow(h * static_cast<double>(k), sigma); };

  // psi = |u'|^{p-2} u'; Delta_p u = psi' + 2 psi / r.
  const std::size_t last = n / 2;
  std::vector<double> psi(last + 3, 0.0);
  std::array<double, kOriginStencil> xs{}, ys{};
  for (std::size_t j = 0; j < kOriginStencil; ++j) {
    xs[j] = rho(j);
    ys[j] = vals[j];
  }
  for (std::size_t k = 1; k < psi.size(); ++k) {
    double du;
    if (k <= kOriginNodes) {
      const double r = h * static_cast<double>(k);
      du = lagrange_derivative(xs, ys, rho(k)) * sigma * std::pow(r, sigma - 1.0);
    } else {
      du = (-vals[k + 2] + 8.0 * vals[k + 1] - 8.0 * vals[k - 1] + vals[k - 2]) / (12.0 * h);
    }
    psi[k] = signed_power(du, p);
  }
  std::array<double, kOriginStencil> xf{}, fs{};
  for (std::size_t j = 0; j < kOriginStencil; ++j) {
    const double r = h * static_cast<double>(j + 1);
    xf[j] = rho(j + 1);
    fs[j] = psi[j + 1] / r;
  }

  std::vector<double> lap(last + 1, 0.0);
  for (std::size_t i = 1; i <= last; ++i) {
    const double r = u.grid().node(i);
    if (i <= kOriginNodes) {
      // psi = r F(rho)  =>  psi' + 2 psi / r = 3 F + sigma rho F'(rho).
      lap[i] = 3.0 * psi[i] / r + sigma * rho(i) * lagrange_derivative(xf, fs, rho(i));
    } else {
      const double dpsi = (-psi[i + 2] + 8.0 * psi[i + 1] - 8.0 * psi[i - 1] + psi[i - 2]) / (12.0 * h);
      lap[i] = dpsi + 2.0 * psi[i] / r;
    }
  }
  return lap;
}

double ground_state_ode_residual(const RadialProfile& u, double p, double q) {
  const auto gc = ground_state_coefficients(p, q);
  const auto vals = u.values();
  double reaction_scale = 0.0;
  for (double v : vals) {
    reaction_scale = std::max(reaction_scale, gc.kappa * std::pow(std::abs(v), p - 1.0) + std::pow(std::abs(v), q - 1.0));
  }
  if (reaction_scale == 0.0) return 0.0;

  const std::vector<double> lap = radial_p_laplacian(u, p);
  double worst = 0.0;
  for (std::size_t i = 1; i < lap.size(); ++i) {
    const double defect = -gc.dcoef * lap[i] + gc.kappa * signed_power(vals[i], p) - signed_power(vals[i], q);
    worst = std::max(worst, std::abs(defect));
  }
  return worst / reaction_scale;
}

GroundStateResiduals verify_ground_identities(const RadialProfile& u, double p, double q) {
  const ProfileNorms nm = u.norms(p, q);
  GroundStateResiduals r;
  if (nm.mass_pp == 0.0) return r;
  r.grad_vs_mass = std::abs(nm.grad_pp - nm.mass_pp) / nm.mass_pp;
  r.mass_vs_lq = std::abs(nm.mass_pp - p / q * nm.lq_q) / nm.mass_pp;
  r.ode = ground_state_ode_residual(u, p, q);
  return r;
}

GroundStateResiduals verify_ground_identities(const GroundState& gs) {
  return verify_ground_identities(gs.profile, gs.p, gs.q);
}

}  // namespace pkirch
