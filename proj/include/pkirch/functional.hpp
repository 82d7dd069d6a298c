#pragma once

// Discrete energy on a fixed radial grid, the one the flows descend. The
// three integrals are
//   M = sum_i W_i |u_i|^p,  L = sum_i W_i |u_i|^q,  G = sum_i V_i |D u|_i^p
// with W_i the volume of the shell |r - r_i| < h/2, D the forward difference
// and V_i the volume of the shell r_i < r < r_{i+1} (a finite-volume
// discretization, second order). Unlike Simpson
// weights with centered differences (used for reported norms) this has no
// odd-even mode for a descent to exploit. Every gradient below is the exact
// gradient of these sums, so finite differences of the energy reproduce it.
//
// A fiber scale tau enters only through the scaling laws of the norms:
// I_tau(u) = tau^p (a/p) G + tau^{2p} (b/2p) G^2 - tau^{e1} L / q is the
// energy of t^{3/p} u(tau r) without resampling.

#include <span>
#include <vector>

#include "pkirch/kernels.hpp"
#include "pkirch/params.hpp"
#include "pkirch/radial.hpp"

namespace pkirch {

/// I from (G, L) at fiber scale tau.
double energy_from_norms(const Params& prm, double grad_pp, double lq_q, double tau = 1.0);
/// P from (G, L) at fiber scale tau; equals tau * d/dtau of energy_from_norms.
double pohozaev_from_norms(const Params& prm, double grad_pp, double lq_q, double tau = 1.0);
/// (a G + b G^2 - L) / c^p at fiber scale tau.
double multiplier_from_norms(const Params& prm, double grad_pp, double lq_q, double tau = 1.0);

class DiscreteFunctional {
 public:
  DiscreteFunctional(const Params& prm, RadialGrid grid, kernels::Exec exec = kernels::Exec::Auto);

  const Params& params() const { return prm_; }
  const RadialGrid& grid() const { return grid_; }
  std::span<const double> node_weights() const { return node_w_; }
  std::span<const double> mid_weights() const { return mid_w_; }

  ProfileNorms norms(std::span<const double> u) const;
  double energy(std::span<const double> u, double tau = 1.0) const;

  /// out = gradient of u -> I_tau(u). `eps` regularizes |Du|^{p-2} Du.
  void energy_gradient(std::span<const double> u, const ProfileNorms& nm, double tau, double eps,
                       std::span<double> out) const;
  /// out = gradient of M.
  void mass_gradient(std::span<const double> u, std::span<double> out) const;
  /// out = gradient of G, flux regularized by eps.
  void grad_norm_gradient(std::span<const double> u, double eps, std::span<double> out) const;

  /// Solves (diag(sigma_i W_i) + kirchhoff K(u)) out = rhs, where K is the
  /// stiffness matrix of G with the linearized p-Laplacian weights
  /// (p-1)(|Du|^2 + eps^2)^{(p-2)/2}. Used as a preconditioner.
  void precondition(std::span<const double> u, std::span<const double> sigma, double kirchhoff,
                    std::span<const double> rhs, std::span<double> out) const;

 private:
  Params prm_;
  RadialGrid grid_;
  kernels::Exec exec_;
  std::vector<double> node_w_;
  std::vector<double> mid_w_;
};

/// Thomas algorithm for a symmetric tridiagonal system; `diag` and `off`
/// (off[i] couples i and i+1) are not modified.
void solve_tridiagonal(std::span<const double> diag, std::span<const double> off, std::span<const double> rhs,
                       std::span<double> out);

}  // namespace pkirch
