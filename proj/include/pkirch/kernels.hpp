#pragma once

// Data-parallel loops shared by the norm evaluation and the discrete energy
// gradient. Each kernel has a serial reference (kernels::serial) and an
// OpenMP version (kernels::omp). Reductions in the OpenMP version sum a fixed
// number of chunks in a fixed order, so the result depends on the input
// length only and never on the thread count.

#include <cstddef>
#include <span>

namespace pkirch::kernels {

enum class Exec { Serial, Parallel, Auto };

/// Arrays at least this long are dispatched to the OpenMP kernels by Exec::Auto.
inline constexpr std::size_t kParallelThreshold = 16384;
inline constexpr std::size_t kReductionChunks = 64;

/// |x|^{s-2} x, written so that s in (1, 2) is finite at x = 0.
double signed_power(double x, double s);

/// x (x^2 + eps^2)^{(s-2)/2}; equals signed_power when eps == 0.
double regularized_flux(double x, double s, double eps);

namespace serial {
double power_sum(std::span<const double> weights, std::span<const double> u, double s);
double weighted_sum(std::span<const double> weights, std::span<const double> u);
void centered_diff(std::span<const double> u, double h, std::span<double> du);
void add_power_gradient(std::span<const double> weights, std::span<const double> u, double s,
                        double coef, double eps, std::span<double> out);
void forward_diff(std::span<const double> u, double h, std::span<double> du);
void add_forward_diff_transpose(std::span<const double> v, double h, std::span<double> out);
}  // namespace serial

namespace omp {
double power_sum(std::span<const double> weights, std::span<const double> u, double s);
double weighted_sum(std::span<const double> weights, std::span<const double> u);
void centered_diff(std::span<const double> u, double h, std::span<double> du);
void add_power_gradient(std::span<const double> weights, std::span<const double> u, double s,
                        double coef, double eps, std::span<double> out);
void forward_diff(std::span<const double> u, double h, std::span<double> du);
void add_forward_diff_transpose(std::span<const double> v, double h, std::span<double> out);
}  // namespace omp

// Dispatching front ends.

/// sum_i w_i |u_i|^s
double power_sum(std::span<const double> weights, std::span<const double> u, double s,
                 Exec exec = Exec::Auto);

/// sum_i w_i u_i
double weighted_sum(std::span<const double> weights, std::span<const double> u,
                    Exec exec = Exec::Auto);

/// Centered differences in the interior, du[0] = 0 (radial symmetry) and a
/// second-order one-sided difference at the last node.
void centered_diff(std::span<const double> u, double h, std::span<double> du,
                   Exec exec = Exec::Auto);

/// out_j += coef * s * w_j * regularized_flux(u_j, s, eps): the gradient of
/// coef * sum_i w_i |u_i|^s.
void add_power_gradient(std::span<const double> weights, std::span<const double> u, double s,
                        double coef, double eps, std::span<double> out, Exec exec = Exec::Auto);

/// du[i] = (u[i+1] - u[i]) / h, i = 0..n-2 (values at the half nodes).
void forward_diff(std::span<const double> u, double h, std::span<double> du, Exec exec = Exec::Auto);

/// out += D^T v for the operator D applied by forward_diff (out has one
/// more entry than v).
void add_forward_diff_transpose(std::span<const double> v, double h, std::span<double> out,
                                Exec exec = Exec::Auto);

}  // namespace pkirch::kernels
