#include "pkirch/functional.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

namespace pkirch {

double energy_from_norms(const Params& prm, double grad_pp, double lq_q, double tau) {
  const double g = std::pow(tau, prm.p) * grad_pp;
  const double l = std::pow(tau, prm.e1) * lq_q;
  return prm.a / prm.p * g + prm.b / (2.0 * prm.p) * g * g - l / prm.q;
}

double pohozaev_from_norms(const Params& prm, double grad_pp, double lq_q, double tau) {
  const double g = std::pow(tau, prm.p) * grad_pp;
  const double l = std::pow(tau, prm.e1) * lq_q;
  return prm.a * g + prm.b * g * g - 3.0 * (prm.q - prm.p) / (prm.p * prm.q) * l;
}

double multiplier_from_norms(const Params& prm, double grad_pp, double lq_q, double tau) {
  const double g = std::pow(tau, prm.p) * grad_pp;
  const double l = std::pow(tau, prm.e1) * lq_q;
  return (prm.a * g + prm.b * g * g - l) / std::pow(prm.c, prm.p);
}

DiscreteFunctional::DiscreteFunctional(const Params& prm, RadialGrid grid, kernels::Exec exec)
    : prm_(prm), grid_(std::move(grid)), exec_(exec) {
  const std::size_t n = grid_.size();
  const double h = grid_.spacing();
  // Exact volumes of the shells [r_i - h/2, r_i + h/2] (clipped to [0, R])
  // and [r_i, r_{i+1}].
  const auto shell = [](double lo, double hi) { return 4.0 * std::numbers::pi / 3.0 * (hi * hi * hi - lo * lo * lo); };
  node_w_.resize(n);
  mid_w_.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid_.node(i);
    node_w_[i] = shell(std::max(r - 0.5 * h, 0.0), std::min(r + 0.5 * h, grid_.radius()));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) mid_w_[i] = shell(grid_.node(i), grid_.node(i + 1));
}

ProfileNorms DiscreteFunctional::norms(std::span<const double> u) const {
  assert(u.size() == grid_.size());
  std::vector<double> du(u.size() - 1);
  kernels::forward_diff(u, grid_.spacing(), du, exec_);
  ProfileNorms nm;
  nm.p = prm_.p;
  nm.q = prm_.q;
  nm.mass_pp = kernels::power_sum(node_w_, u, prm_.p, exec_);
  nm.grad_pp = kernels::power_sum(mid_w_, du, prm_.p, exec_);
  nm.lq_q = kernels::power_sum(node_w_, u, prm_.q, exec_);
  return nm;
}

double DiscreteFunctional::energy(std::span<const double> u, double tau) const {
  const ProfileNorms nm = norms(u);
  return energy_from_norms(prm_, nm.grad_pp, nm.lq_q, tau);
}

void DiscreteFunctional::energy_gradient(std::span<const double> u, const ProfileNorms& nm, double tau,
                                         double eps, std::span<double> out) const {
  const std::size_t n = u.size();
  assert(out.size() == n);
  const double h = grid_.spacing();
  const double tp = std::pow(tau, prm_.p);
  // dI/dG and dI/dL at scale tau.
  const double dG = tp * prm_.a / prm_.p + tp * tp * prm_.b / prm_.p * nm.grad_pp;
  const double dL = -std::pow(tau, prm_.e1) / prm_.q;

  std::vector<double> du(n - 1), flux(n - 1, 0.0);
  kernels::forward_diff(u, h, du, exec_);
  kernels::add_power_gradient(mid_w_, du, prm_.p, dG, eps, flux, exec_);
  std::fill(out.begin(), out.end(), 0.0);
  kernels::add_forward_diff_transpose(flux, h, out, exec_);
  kernels::add_power_gradient(node_w_, u, prm_.q, dL, 0.0, out, exec_);
}

void DiscreteFunctional::mass_gradient(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  kernels::add_power_gradient(node_w_, u, prm_.p, 1.0, 0.0, out, exec_);
}

void DiscreteFunctional::grad_norm_gradient(std::span<const double> u, double eps, std::span<double> out) const {
  const std::size_t n = u.size();
  const double h = grid_.spacing();
  std::vector<double> du(n - 1), flux(n - 1, 0.0);
  kernels::forward_diff(u, h, du, exec_);
  kernels::add_power_gradient(mid_w_, du, prm_.p, 1.0, eps, flux, exec_);
  std::fill(out.begin(), out.end(), 0.0);
  kernels::add_forward_diff_transpose(flux, h, out, exec_);
}

void DiscreteFunctional::precondition(std::span<const double> u, std::span<const double> sigma, double kirchhoff,
                                      std::span<const double> rhs, std::span<double> out) const {
  const std::size_t n = u.size();
  const double h = grid_.spacing();
  const double p = prm_.p;

  std::vector<double> slope(n - 1);
  double smax = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    slope[i] = (u[i + 1] - u[i]) / h;
    smax = std::max(smax, std::abs(slope[i]));
  }
  // Floor keeps the weights bounded for p < 2 and positive for p > 2.
  const double eps2 = std::pow(0.05 * std::max(smax, 1e-300), 2);

  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = sigma[i] * node_w_[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double k = kirchhoff * (p - 1.0) * mid_w_[i] * std::pow(slope[i] * slope[i] + eps2, 0.5 * (p - 2.0)) / (h * h);
    diag[i] += k;
    diag[i + 1] += k;
    off[i] = -k;
  }
  solve_tridiagonal(diag, off, rhs, out);
}

void solve_tridiagonal(std::span<const double> diag, std::span<const double> off, std::span<const double> rhs,
                       std::span<double> out) {
  const std::size_t n = diag.size();
  assert(off.size() + 1 == n && rhs.size() == n && out.size() == n);
  std::vector<double> c(n);
  double denom = diag[0];
  c[0] = n > 1 ? off[0] / denom : 0.0;
  out[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - off[i - 1] * c[i - 1];
    c[i] = i + 1 < n ? off[i] / denom : 0.0;
    out[i] = (rhs[i] - off[i - 1] * out[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
}

}  // namespace pkirch
