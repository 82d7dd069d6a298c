#pragma once

#include <functional>
#include <optional>
#include <string>

#include "pkirch/ground_state.hpp"
#include "pkirch/params.hpp"
#include "pkirch/radial.hpp"

namespace pkirch {

/// The norm triple of a ground state, detached from its profile.
struct GroundNorms {
  double p = 0.0;
  double q = 0.0;
  double lp = 0.0;       // |Q|_p
  double grad_lp = 0.0;  // |grad Q|_p
  double lq = 0.0;       // |Q|_q

  static GroundNorms of(const GroundState& gs);
};

enum class ExtremumKind { Min, Max };
std::string_view to_string(ExtremumKind k);

struct FiberExtremum {
  double t = 0.0;
  double value = 0.0;
  ExtremumKind kind = ExtremumKind::Min;
  bool converged = false;
  double bracket_width = 0.0;
};

/// f(t) = A t + B t^2 - K t^{e2} with A = a/p, B = b/(2p),
/// K = c^{qbar} / (p |Q|_p^{q-p}).
struct FiberCoefficients {
  double A, B, K, e2;
};
FiberCoefficients fiber_coefficients(const Params& prm, const GroundNorms& qn);

double eval_f(const Params& prm, const GroundNorms& qn, double t);
double eval_f_derivative(const Params& prm, const GroundNorms& qn, double t);

/// Interior minimum (Subcritical, MassCritical, Intermediate) or maximum
/// (Supercritical, DoubleCritical with c > c_dc) of f over t > 0. Throws
/// NoInteriorExtremum when f has no stationary point of that kind.
FiberExtremum extremize_f(const Params& prm, const GroundNorms& qn);

/// The vertex of f at q = p + p^2/3, by differentiating f, and the value the
/// alternative closed form with the extra factor p would give. Throws
/// WrongRegime outside MassCritical.
struct MassCriticalVertex {
  double t_from_f = 0.0;
  double t_alternative = 0.0;
  double level_from_f = 0.0;      // f(t_from_f)
  double level_alternative = 0.0; // -(b/2p) t_alternative^2
};
MassCriticalVertex mass_critical_vertex(const Params& prm, const GroundNorms& qn);

enum class Verdict {
  MinimizerForAllMasses,  // q below the mass-critical exponent
  Minimizer,
  NoMinimizer,
  UnboundedBelow,          // i(c) = -infinity
  PohozaevGroundState,     // i(c) = -infinity but m(c) is attained
};
std::string_view to_string(Verdict v);

class Thresholds {
 public:
  Regime regime = Regime::Subcritical;
  Verdict verdict = Verdict::Minimizer;
  std::string explanation;

  /// a^{3/p^2} |Q|_p; defined for every (p, q) but only decisive at the
  /// mass-critical exponent.
  double c_crit = 0.0;

  /// Intermediate regime only (WrongRegime otherwise).
  double c_star() const;
  /// The constant obtained with (bp / (6pq - 8p^2)) in place of
  /// (bp / (6q - 6p - 2p^2)); kept for reports only.
  double c_star_alternative() const;
  /// DoubleCritical only (WrongRegime otherwise).
  double c_dc() const;

  std::optional<double> c_star_value;
  std::optional<double> c_star_alternative_value;
  std::optional<double> c_dc_value;
};

Thresholds thresholds(const Params& prm, const GroundNorms& qn);

/// u(r) = (c mu^{3/p} / |Q|_p) Q(mu r), mu = t^{1/p} / c, sampled on
/// `target`. Throws GridUnderresolved when the scaled profile does not decay
/// inside target or its core spans too few cells.
RadialProfile build_explicit_solution(const Params& prm, const GroundState& gs, double t,
                                      const RadialGrid& target);

/// Q's grid dilated by 1/mu, on which build_explicit_solution reproduces
/// the node values of Q up to the amplitude factor (no interpolation).
RadialGrid explicit_solution_grid(const Params& prm, const GroundState& gs, double t);

/// lambda = (a G + b G^2 - L) / c^p. Throws MassMismatch unless |u|_p = c
/// within 1e-6 relative.
double lagrange_multiplier(const Params& prm, const RadialProfile& u);

/// -kappa c^{(q-p)(1-3/p)} t^{e2} / |Q|_p^{q-p}: the multiplier of the
/// explicit solution at a stationary point t of f.
double closed_form_multiplier(const Params& prm, const GroundNorms& qn, double t);

// One-dimensional search helpers shared with the variational module.

/// Minimizer of a unimodal f on [lo, hi] by golden-section search, stopped
/// when hi - lo <= rel_tol * hi.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi, double rel_tol);

/// Root of g on [lo, hi] (g(lo), g(hi) of opposite sign) by bisection down to
/// the floating-point limit.
double bisect_root(const std::function<double(double)>& g, double lo, double hi);

}  // namespace pkirch
