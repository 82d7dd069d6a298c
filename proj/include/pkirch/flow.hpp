#pragma once

// Constrained descent on S(c) = {|u|_p = c}.
//
// Iterates live on a fixed "shape" grid together with a fiber scale tau; the
// represented function is tau^{3/p} u(tau r), which fiber_scale_exact turns
// into a profile on the grid dilated by 1/tau without interpolation. The
// energy of the pair follows from the scaling laws, so flows whose
// minimizing sequences spread out (vanishing) or concentrate stay resolved.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pkirch/ground_state.hpp"
#include "pkirch/kernels.hpp"
#include "pkirch/params.hpp"
#include "pkirch/radial.hpp"
#include "pkirch/variational.hpp"

namespace pkirch {

struct FlowConfig {
  std::size_t max_iters = 5000;
  double step0 = 1.0;
  double backtrack = 0.5;      // beta in (0, 1)
  double energy_tol = 1e-9;    // relative energy decrease per iteration
  double pohozaev_tol = 1e-6;  // |P| / (a G + b G^2)
  double eps_reg = 1e-8;       // flux regularization, relative to max |u'|
  std::size_t stall_window = 10;
  std::size_t vanish_window = 50;
  kernels::Exec exec = kernels::Exec::Auto;

  /// Throws OutOfRange naming the offending field.
  void validate() const;
};

enum class Termination { Converged, Vanishing, MaxIters };
std::string_view to_string(Termination t);

struct FlowResult {
  RadialProfile minimizer;  // the represented function, on the dilated grid
  RadialProfile shape;      // the iterate on the shape grid
  double tau = 1.0;
  double level = 0.0;
  std::size_t iterations = 0;
  Termination termination = Termination::MaxIters;
  // I, P, lambda and the norms in the flow's quadrature (see functional.hpp);
  // `minimizer.norms()` uses the Simpson one and differs at O(h^2).
  EnergyReport report;
  std::string seed;
  std::vector<double> energy_history;  // initial level, then one per iteration
  std::vector<double> grad_history;    // |grad u|_p^p of the represented function
  std::vector<std::pair<std::string, double>> seed_levels;  // multi-seed runs only
};

/// Projected preconditioned descent for i(c) from u0 (|u0|_p = c within 1e-6).
/// Each step: direction from the exact discrete gradient, projected onto
/// the tangent of the mass constraint, Armijo backtracking on I after
/// renormalization; then a descent step on the fiber scale.
/// Throws RegimeError for Supercritical and DoubleCritical.
FlowResult minimize_on_sphere(const Params& prm, const RadialProfile& u0, const FlowConfig& cfg);

/// Gaussian, exponential and ground-state seeds on Q's grid, each of mass c;
/// sizes follow Q's half-width.
std::vector<std::pair<std::string, RadialProfile>> standard_seeds(const Params& prm, const GroundState& gs);

/// minimize_on_sphere from every standard seed (concurrently); the lowest
/// level wins and all seed levels are recorded.
FlowResult estimate_i(const Params& prm, const GroundState& gs, const FlowConfig& cfg);

/// Descent on g(u) = max_t I(u_t) over S(c), whose minimum is m(c) on the
/// Pohozaev set. The gradient is that of I at the maximizing scale t0(u)
/// (envelope theorem). The result is reported at u_{t0}, where P = 0.
/// Throws RegimeError unless the regime is Supercritical.
FlowResult ground_level_supercritical(const Params& prm, const RadialProfile& u0, const FlowConfig& cfg);
FlowResult ground_level_supercritical(const Params& prm, const GroundState& gs, const FlowConfig& cfg);

struct SweepRow {
  double b = 0.0;
  double level = 0.0;
  double lambda = 0.0;
  double dist_to_b0 = 0.0;  // W^{1,p} distance to the b = 0 minimizer
  Termination termination = Termination::MaxIters;
  std::string error;        // non-empty when this row's solve failed
};

struct SweepResult {
  std::vector<SweepRow> rows;  // b_list order, then the b = 0 row
  FlowResult b0;
};

/// ground_level_supercritical along a decreasing b_list, each row warm-started
/// from the previous shape, plus an independent b = 0 solve (run
/// concurrently with the chain). A failing row is recorded and skipped.
SweepResult sweep_b(const Params& prm, const GroundState& gs, const std::vector<double>& b_list,
                    const FlowConfig& cfg);

}  // namespace pkirch
