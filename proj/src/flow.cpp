#include "pkirch/flow.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>

#include "pkirch/error.hpp"
#include "pkirch/functional.hpp"
#include "pkirch/samples.hpp"
#include "pkirch/scalar.hpp"

namespace pkirch {

void FlowConfig::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::OutOfRange, what);
  };
  need(max_iters > 0, "max_iters must be positive");
  need(step0 > 0.0 && std::isfinite(step0), "step0 must be positive");
  need(backtrack > 0.0 && backtrack < 1.0, "backtrack must lie in (0, 1)");
  need(energy_tol > 0.0, "energy_tol must be positive");
  need(pohozaev_tol > 0.0, "pohozaev_tol must be positive");
  need(eps_reg > 0.0, "eps_reg must be positive");
  need(stall_window > 0, "stall_window must be positive");
  need(vanish_window > 0, "vanish_window must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::Vanishing: return "Vanishing";
    case Termination::MaxIters: return "MaxIters";
  }
  return "Unknown";
}

namespace {

enum class Mode { Sphere, Pohozaev };

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr double kMaxStep = 1e8;
// Shape re-centering bounds for the Pohozaev mode (ratio of core radii).
constexpr double kRecenter = 1.5;

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_slope(std::span<const double> u, double h) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) m = std::max(m, std::abs(u[i + 1] - u[i]) / h);
  return m;
}

// Sum of the magnitudes of the three energy terms; the scale against which
// energy changes and Pohozaev defects are judged.
double energy_scale(const Params& prm, double G, double L, double tau) {
  const double g = std::pow(tau, prm.p) * G;
  const double l = std::pow(tau, prm.e1) * L;
  return prm.a / prm.p * g + prm.b / (2.0 * prm.p) * g * g + l / prm.q;
}

double pohozaev_ratio(const Params& prm, double G, double L, double tau) {
  const double g = std::pow(tau, prm.p) * G;
  const double denom = prm.a * g + prm.b * g * g;
  return denom > 0.0 ? std::abs(pohozaev_from_norms(prm, G, L, tau)) / denom : 0.0;
}

class Engine {
 public:
  Engine(const Params& prm, const FlowConfig& cfg, Mode mode, const RadialProfile& u0)
      : prm_(prm), cfg_(cfg), mode_(mode), F_(prm, u0.grid(), cfg.exec),
        u_(u0.values().begin(), u0.values().end()) {
    require_finite(u_, "initial profile");
    // Either quadrature may be the one u0 was normalized with (a warm start
    // comes from a previous flow); they differ at O(h^2).
    const double m = lp_norm(u0, prm.p);
    const double m_flow = std::pow(F_.norms(u_).mass_pp, 1.0 / prm.p);
    if (!(m > 0.0)) throw Error(ErrorKind::ZeroFunction, "initial profile is zero");
    if (std::abs(m - prm.c) > 1e-6 * prm.c && std::abs(m_flow - prm.c) > 1e-6 * prm.c) {
      throw Error(ErrorKind::MassMismatch, "initial profile does not have mass c");
    }
    renormalize(u_);
    core0_ = u0.support_radius(0.5);
  }

  FlowResult run() {
    ProfileNorms nm = F_.norms(u_);
    tau_ = initial_tau(nm);
    double I = level(nm);
    const double G0 = std::pow(tau_, prm_.p) * nm.grad_pp;
    const double scale0 = energy_scale(prm_, nm.grad_pp, nm.lq_q, tau_);

    FlowResult res;
    res.energy_history.push_back(I);
    res.grad_history.push_back(G0);

    const std::size_t n = u_.size();
    std::vector<double> gI(n), gM(n), gG(n), z1(n), z2(n), z3(n), d(n), sigma(n), trial(n);
    double step = cfg_.step0;
    std::size_t stall = 0, vanish = 0, it = 0;
    res.termination = Termination::MaxIters;

    for (; it < cfg_.max_iters; ++it) {
      const double h = F_.grid().spacing();
      const double eps = cfg_.eps_reg * std::max(max_slope(u_, h), 1e-300);
      F_.energy_gradient(u_, nm, tau_, eps, gI);
      F_.mass_gradient(u_, gM);

      const double lam = multiplier_from_norms(prm_, nm.grad_pp, nm.lq_q, tau_);
      const double umax = max_abs(u_);
      const double floor2 = std::pow(0.05 * umax, 2);
      const double react = std::max(std::abs(lam), 1e-300) * (prm_.p - 1.0);
      for (std::size_t i = 0; i < n; ++i) sigma[i] = react * std::pow(u_[i] * u_[i] + floor2, 0.5 * (prm_.p - 2.0));
      const double tp = std::pow(tau_, prm_.p);
      const double kir = tp * prm_.a + tp * tp * prm_.b * nm.grad_pp;
      F_.grad_norm_gradient(u_, eps, gG);
      F_.precondition(u_, sigma, kir, gI, z1);
      F_.precondition(u_, sigma, kir, gM, z2);
      F_.precondition(u_, sigma, kir, gG, z3);
      // d = z1 - x z2 - y z3 with <gM, d> = <gG, d> = 0: the mass and the
      // shape's gradient norm stay fixed to first order, so all dilation is
      // carried by tau.
      const double m11 = dot(gM, z2), m12 = dot(gM, z3), m22 = dot(gG, z3);
      const double r1 = dot(gM, z1), r2 = dot(gG, z1);
      const double det = m11 * m22 - m12 * m12;
      double x = r1 / m11, y = 0.0;
      if (std::abs(det) > 1e-12 * std::abs(m11 * m22)) {
        x = (r1 * m22 - r2 * m12) / det;
        y = (m11 * r2 - m12 * r1) / det;
      }
      for (std::size_t i = 0; i < n; ++i) d[i] = z1[i] - x * z2[i] - y * z3[i];
      const double slope = dot(gI, d);
      if (!std::isfinite(slope)) throw Error(ErrorKind::NonFinite, "descent direction is not finite");

      // Armijo on the renormalized trial point.
      bool accepted = false;
      double I_new = I;
      if (slope > 0.0) {
        double s = step;
        for (int k = 0; k < kMaxBacktracks; ++k, s *= cfg_.backtrack) {
          for (std::size_t i = 0; i < n; ++i) trial[i] = u_[i] - s * d[i];
          if (!renormalize(trial)) continue;
          const double E = level(F_.norms(trial));
          if (std::isfinite(E) && E <= I - kArmijo * s * slope) {
            accepted = true;
            I_new = E;
            step = std::min(2.0 * s, kMaxStep);
            break;
          }
        }
      }
      const double I_prev = I;
      if (accepted) {
        u_.swap(trial);
        nm = F_.norms(u_);
        I = I_new;
      }
      if (mode_ == Mode::Sphere) {
        I = tau_step(nm, I);
      } else {
        tau_ = pohozaev_tau(nm);
        I = level(nm);
        if (recenter()) {
          nm = F_.norms(u_);
          tau_ = pohozaev_tau(nm);
          I = level(nm);
        }
      }
      const double G = std::pow(tau_, prm_.p) * nm.grad_pp;
      res.energy_history.push_back(I);
      res.grad_history.push_back(G);

      const double scale = energy_scale(prm_, nm.grad_pp, nm.lq_q, tau_);
      const bool pohozaev_ok = pohozaev_ratio(prm_, nm.grad_pp, nm.lq_q, tau_) <= cfg_.pohozaev_tol;

      if (mode_ == Mode::Sphere && G < 1e-4 * G0 && std::abs(I) < 1e-6 * scale0) {
        if (++vanish >= cfg_.vanish_window) {
          res.termination = Termination::Vanishing;
          ++it;
          break;
        }
      } else {
        vanish = 0;
      }
      if (!accepted && I >= I_prev) {
        res.termination = pohozaev_ok ? Termination::Converged : Termination::MaxIters;
        ++it;
        break;
      }
      const double rel = (I_prev - I) / std::max(scale, 1e-300);
      stall = rel < cfg_.energy_tol ? stall + 1 : 0;
      if (stall >= cfg_.stall_window && pohozaev_ok) {
        res.termination = Termination::Converged;
        ++it;
        break;
      }
    }

    res.iterations = it;
    res.tau = tau_;
    res.level = I;
    res.shape = RadialProfile(F_.grid(), u_, prm_.p, prm_.q);
    res.minimizer = fiber_scale_exact(res.shape, prm_.p, tau_);
    res.report = report(F_.norms(u_), res.minimizer);
    return res;
  }

 private:
  // I of the represented function: I_tau on the sphere, g = max_t I_t on the
  // Pohozaev set.
  double level(const ProfileNorms& nm) const {
    if (mode_ == Mode::Sphere) return energy_from_norms(prm_, nm.grad_pp, nm.lq_q, tau_);
    try {
      return fiber_extremum_of_norms(prm_, nm.grad_pp, nm.lq_q).value;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  // Reported from the flow's own quadrature so that I, P and the
  // termination test agree; only the PDE residual looks at the profile.
  EnergyReport report(const ProfileNorms& nm, const RadialProfile& minimizer) const {
    EnergyReport r;
    r.grad = std::pow(tau_, prm_.p) * nm.grad_pp;
    r.lq = std::pow(tau_, prm_.e1) * nm.lq_q;
    r.mass = std::pow(nm.mass_pp, 1.0 / prm_.p);
    r.I = energy_from_norms(prm_, r.grad, r.lq);
    r.P = pohozaev_from_norms(prm_, r.grad, r.lq);
    r.lambda = (prm_.a * r.grad + prm_.b * r.grad * r.grad - r.lq) / nm.mass_pp;
    r.pde_residual = pde_residual(prm_, r.lambda, minimizer);
    return r;
  }

  bool renormalize(std::vector<double>& v) const {
    const double m = std::pow(F_.norms(v).mass_pp, 1.0 / prm_.p);
    if (!(m > 0.0) || !std::isfinite(m)) return false;
    const double k = prm_.c / m;
    for (double& x : v) x *= k;
    return true;
  }

  double initial_tau(const ProfileNorms& nm) const {
    if (mode_ == Mode::Pohozaev) return pohozaev_tau(nm);
    try {
      const FiberExtremum fe = fiber_extremum_of_norms(prm_, nm.grad_pp, nm.lq_q);
      if (fe.value <= 0.0) return fe.t;
    } catch (const Error&) {
    }
    return 1.0;
  }

  double pohozaev_tau(const ProfileNorms& nm) const {
    return fiber_extremum_of_norms(prm_, nm.grad_pp, nm.lq_q).t;
  }

  // One descent step on the fiber scale: the fiber minimizer clamped to
  // [tau/2, 2 tau], or tau/2 (which is how vanishing shows up).
  double tau_step(const ProfileNorms& nm, double I) {
    std::vector<double> cand{0.5 * tau_};
    try {
      const FiberExtremum fe = fiber_extremum_of_norms(prm_, nm.grad_pp, nm.lq_q);
      cand.push_back(std::clamp(fe.t, 0.5 * tau_, 2.0 * tau_));
    } catch (const Error&) {
    }
    double best = I, best_tau = tau_;
    for (double t : cand) {
      const double E = energy_from_norms(prm_, nm.grad_pp, nm.lq_q, t);
      if (E < best) {
        best = E;
        best_tau = t;
      }
    }
    tau_ = best_tau;
    return best;
  }

  // g is invariant under dilating the shape, so the shape can drift along
  // that direction; resample it back when its core radius moved too far.
  bool recenter() {
    const RadialProfile cur(F_.grid(), u_);
    const double core = cur.support_radius(0.5);
    if (!(core > 0.0) || (core < kRecenter * core0_ && core > core0_ / kRecenter)) return false;
    const RadialProfile moved = resample(cur, F_.grid(), std::pow(core / core0_, 3.0 / prm_.p), core / core0_);
    std::vector<double> v(moved.values().begin(), moved.values().end());
    if (!renormalize(v)) return false;
    u_.swap(v);
    return true;
  }

  Params prm_;
  FlowConfig cfg_;
  Mode mode_;
  DiscreteFunctional F_;
  std::vector<double> u_;
  double tau_ = 1.0;
  double core0_ = 0.0;
};

bool sphere_regime(Regime r) {
  return r == Regime::Subcritical || r == Regime::MassCritical || r == Regime::Intermediate;
}

FlowResult best_of(const Params& prm, const std::vector<std::pair<std::string, RadialProfile>>& seeds,
                   const FlowConfig& cfg, Mode mode) {
  std::vector<std::optional<FlowResult>> runs(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      runs[i] = Engine(prm, cfg, mode, seeds[i].second).run();
      runs[i]->seed = seeds[i].first;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  std::optional<std::size_t> best;
  std::vector<std::pair<std::string, double>> levels;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i]) continue;
    levels.emplace_back(seeds[i].first, runs[i]->level);
    if (!best || runs[i]->level < runs[*best]->level) best = i;
  }
  if (!best) std::rethrow_exception(errors.front());
  FlowResult out = std::move(*runs[*best]);
  out.seed_levels = std::move(levels);
  return out;
}

}  // namespace

FlowResult minimize_on_sphere(const Params& prm, const RadialProfile& u0, const FlowConfig& cfg) {
  cfg.validate();
  if (!sphere_regime(prm.regime)) {
    throw Error(ErrorKind::RegimeError, std::string("I is unbounded below on S(c) in the ") +
                                            std::string(to_string(prm.regime)) + " regime");
  }
  return Engine(prm, cfg, Mode::Sphere, u0).run();
}

std::vector<std::pair<std::string, RadialProfile>> standard_seeds(const Params& prm, const GroundState& gs) {
  if (gs.p != prm.p || gs.q != prm.q) throw Error(ErrorKind::OutOfRange, "ground state is for another (p, q)");
  const RadialGrid& grid = gs.profile.grid();
  const double half = gs.profile.support_radius(0.5);
  // Widths that put the half-maximum at Q's: exp(-x^2) = 1/2 at x = sqrt(ln 2),
  // (1 + x) e^{-x} = 1/2 at x = 1.67835.
  const double wg = half / std::sqrt(std::log(2.0));
  const double we = half / 1.678346990016661;
  std::vector<std::pair<std::string, RadialProfile>> out;
  out.emplace_back("gaussian", normalized_to_mass(RadialProfile::from_function(grid, [&](double r) {
                                                    return std::exp(-(r / wg) * (r / wg));
                                                  }),
                                                  prm.p, prm.c));
  out.emplace_back("exponential", normalized_to_mass(RadialProfile::from_function(grid, [&](double r) {
                                                       return (1.0 + r / we) * std::exp(-r / we);
                                                     }),
                                                     prm.p, prm.c));
  out.emplace_back("ground_state", normalized_to_mass(gs.profile, prm.p, prm.c));
  return out;
}

FlowResult estimate_i(const Params& prm, const GroundState& gs, const FlowConfig& cfg) {
  cfg.validate();
  if (!sphere_regime(prm.regime)) {
    throw Error(ErrorKind::RegimeError, std::string("I is unbounded below on S(c) in the ") +
                                            std::string(to_string(prm.regime)) + " regime");
  }
  return best_of(prm, standard_seeds(prm, gs), cfg, Mode::Sphere);
}

FlowResult ground_level_supercritical(const Params& prm, const RadialProfile& u0, const FlowConfig& cfg) {
  cfg.validate();
  if (prm.regime != Regime::Supercritical) {
    throw Error(ErrorKind::RegimeError, std::string("the Pohozaev descent needs the Supercritical regime, not ") +
                                            std::string(to_string(prm.regime)));
  }
  return Engine(prm, cfg, Mode::Pohozaev, u0).run();
}

FlowResult ground_level_supercritical(const Params& prm, const GroundState& gs, const FlowConfig& cfg) {
  cfg.validate();
  if (prm.regime != Regime::Supercritical) {
    throw Error(ErrorKind::RegimeError, std::string("the Pohozaev descent needs the Supercritical regime, not ") +
                                            std::string(to_string(prm.regime)));
  }
  return best_of(prm, standard_seeds(prm, gs), cfg, Mode::Pohozaev);
}

SweepResult sweep_b(const Params& prm, const GroundState& gs, const std::vector<double>& b_list,
                    const FlowConfig& cfg) {
  cfg.validate();
  for (std::size_t i = 0; i < b_list.size(); ++i) {
    if (!(b_list[i] > 0.0)) throw Error(ErrorKind::OutOfRange, "b_list entries must be positive");
    if (i > 0 && !(b_list[i] < b_list[i - 1])) throw Error(ErrorKind::OutOfRange, "b_list must be decreasing");
  }
  SweepResult out;
  std::vector<FlowResult> chain(b_list.size());
  out.rows.resize(b_list.size());
  std::exception_ptr b0_error;

#pragma omp parallel sections
  {
#pragma omp section
    {
      try {
        out.b0 = ground_level_supercritical(prm.with_b(0.0), gs, cfg);
      } catch (...) {
        b0_error = std::current_exception();
      }
    }
#pragma omp section
    {
      std::optional<RadialProfile> warm;
      for (std::size_t i = 0; i < b_list.size(); ++i) {
        SweepRow& row = out.rows[i];
        row.b = b_list[i];
        try {
          const Params pb = prm.with_b(b_list[i]);
          chain[i] = warm ? ground_level_supercritical(pb, *warm, cfg) : ground_level_supercritical(pb, gs, cfg);
          warm = chain[i].shape;
          row.level = chain[i].level;
          row.lambda = chain[i].report.lambda;
          row.termination = chain[i].termination;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      }
    }
  }
  if (b0_error) std::rethrow_exception(b0_error);

  for (std::size_t i = 0; i < b_list.size(); ++i) {
    if (out.rows[i].error.empty()) {
      out.rows[i].dist_to_b0 = w1p_distance(chain[i].minimizer, out.b0.minimizer, prm.p);
    }
  }
  SweepRow zero;
  zero.b = 0.0;
  zero.level = out.b0.level;
  zero.lambda = out.b0.report.lambda;
  zero.termination = out.b0.termination;
  out.rows.push_back(zero);
  return out;
}

}  // namespace pkirch
