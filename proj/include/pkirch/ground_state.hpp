#pragma once

#include <cmath>
#include <vector>

#include "pkirch/radial.hpp"

namespace pkirch {

enum class ShotTag { Crossing, Rebound, Undetermined };

std::string_view to_string(ShotTag tag);

/// Result of one initial-value integration of the radial ground-state ODE.
/// `u` and `w` hold the valid prefix (nodes 0..k before the event), where
/// w = r^2 |u'|^{p-2} u' is the integrated flux.
struct ShotOutcome {
  ShotTag tag = ShotTag::Undetermined;
  std::vector<double> u;
  std::vector<double> w;
  double r_event = 0.0;
};

/// Coefficients of -dcoef Delta_p Q + kappa |Q|^{p-2} Q = |Q|^{q-2} Q.
struct GroundStateCoefficients {
  double kappa;
  double dcoef;
  double equilibrium;  // kappa^{1/(q-p)}
  double decay_rate;   // k = (kappa / ((p-1) dcoef))^{1/p}
  double decay_power;  // beta = 2 / (p (p-1)); Q ~ r^{-beta} e^{-k r}
};

GroundStateCoefficients ground_state_coefficients(double p, double q);

struct GroundStateResiduals {
  double grad_vs_mass = 0.0;  // | |grad Q|_p^p - |Q|_p^p | / |Q|_p^p
  double mass_vs_lq = 0.0;    // | |Q|_p^p - (p/q)|Q|_q^q | / |Q|_p^p
  double ode = 0.0;           // max defect on [h, R/2] / max reaction magnitude

  double max() const { return std::fmax(grad_vs_mass, std::fmax(mass_vs_lq, ode)); }
};

struct GroundState {
  double p = 0.0;
  double q = 0.0;
  double tol = 0.0;
  RadialProfile profile;
  double s0 = 0.0;           // Q(0)
  double s0_rebound = 0.0;   // final bracket
  double s0_crossing = 0.0;
  double cut_radius = 0.0;   // beyond this the asymptotic tail is used
  ProfileNorms norms;
  GroundStateCoefficients coef{};
  GroundStateResiduals residuals;

  double lp() const { return std::pow(norms.mass_pp, 1.0 / p); }      // |Q|_p
  double grad_lp() const { return std::pow(norms.grad_pp, 1.0 / p); } // |grad Q|_p
  double lq() const { return std::pow(norms.lq_q, 1.0 / q); }         // |Q|_q
};

/// Integrates u(0) = s0, w(0) = 0 with RK4 (series start near r = 0, substeps
/// refined towards the origin) and classifies the first event. Throws StepFailure when u leaves
/// [-10 s0, 10 s0], NonFinite on overflow.
ShotOutcome shoot(double p, double q, double s0, const RadialGrid& grid, double eps_reg = 0.0);

/// Grid whose radius leaves room for the exponential tail of Q (R >= 40, h = 0.01).
RadialGrid default_ground_state_grid(double p, double q);

GroundState compute_ground_state(double p, double q, double tol);
GroundState compute_ground_state(double p, double q, double tol, const RadialGrid& grid);

/// Residuals of the Nehari/Pohozaev identities and the pointwise ODE for
/// an arbitrary profile (so callers can also test rescaled copies of Q).
GroundStateResiduals verify_ground_identities(const RadialProfile& u, double p, double q);
GroundStateResiduals verify_ground_identities(const GroundState& gs);

/// Delta_p u = r^{-2} (r^2 |u'|^{p-2} u')' at nodes 0..n/2 (entry 0 unset).
/// Fourth-order stencils, taken in r^{p/(p-1)} on the first few nodes where
/// u is a power series in that variable rather than in r.
std::vector<double> radial_p_laplacian(const RadialProfile& u, double p);

/// Max over r in [h, R/2] of the pointwise defect of the radial ODE,
/// normalized by max(kappa|u|^{p-1} + |u|^{q-1}). Uses
/// radial_p_laplacian.
double ground_state_ode_residual(const RadialProfile& u, double p, double q);

}  // namespace pkirch
