#include <cassert>
#include <cmath>

#include "pkirch/kernels.hpp"

namespace pkirch::kernels {

double signed_power(double x, double s) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), s - 1.0), x);
}

double regularized_flux(double x, double s, double eps) {
  if (eps == 0.0) return signed_power(x, s);
  return x * std::pow(x * x + eps * eps, 0.5 * (s - 2.0));
}

namespace serial {

double power_sum(std::span<const double> weights, std::span<const double> u, double s) {
  assert(weights.size() == u.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += weights[i] * std::pow(std::abs(u[i]), s);
  return acc;
}

double weighted_sum(std::span<const double> weights, std::span<const double> u) {
  assert(weights.size() == u.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += weights[i] * u[i];
  return acc;
}

void centered_diff(std::span<const double> u, double h, std::span<double> du) {
  const std::size_t n = u.size();
  assert(du.size() == n && n >= 3);
  const double inv2h = 0.5 / h;
  du[0] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) * inv2h;
  du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2h;
}

void add_power_gradient(std::span<const double> weights, std::span<const double> u, double s,
                        double coef, double eps, std::span<double> out) {
  assert(weights.size() == u.size() && out.size() == u.size());
  const double k = coef * s;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] += k * weights[i] * regularized_flux(u[i], s, eps);
}

void forward_diff(std::span<const double> u, double h, std::span<double> du) {
  assert(du.size() + 1 == u.size());
  const double inv = 1.0 / h;
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = (u[i + 1] - u[i]) * inv;
}

void add_forward_diff_transpose(std::span<const double> v, double h, std::span<double> out) {
  const std::size_t m = v.size();
  assert(out.size() == m + 1);
  const double inv = 1.0 / h;
  out[0] -= v[0] * inv;
  for (std::size_t j = 1; j < m; ++j) out[j] += (v[j - 1] - v[j]) * inv;
  out[m] += v[m - 1] * inv;
}

}  // namespace serial

namespace {
bool use_parallel(Exec exec, std::size_t n) {
  if (exec == Exec::Auto) return n >= kParallelThreshold;
  return exec == Exec::Parallel;
}
}  // namespace

double power_sum(std::span<const double> weights, std::span<const double> u, double s, Exec exec) {
  return use_parallel(exec, u.size()) ? omp::power_sum(weights, u, s) : serial::power_sum(weights, u, s);
}

double weighted_sum(std::span<const double> weights, std::span<const double> u, Exec exec) {
  return use_parallel(exec, u.size()) ? omp::weighted_sum(weights, u) : serial::weighted_sum(weights, u);
}

void centered_diff(std::span<const double> u, double h, std::span<double> du, Exec exec) {
  if (use_parallel(exec, u.size())) {
    omp::centered_diff(u, h, du);
  } else {
    serial::centered_diff(u, h, du);
  }
}

void add_power_gradient(std::span<const double> weights, std::span<const double> u, double s,
                        double coef, double eps, std::span<double> out, Exec exec) {
  if (use_parallel(exec, u.size())) {
    omp::add_power_gradient(weights, u, s, coef, eps, out);
  } else {
    serial::add_power_gradient(weights, u, s, coef, eps, out);
  }
}

void forward_diff(std::span<const double> u, double h, std::span<double> du, Exec exec) {
  if (use_parallel(exec, u.size())) {
    omp::forward_diff(u, h, du);
  } else {
    serial::forward_diff(u, h, du);
  }
}

void add_forward_diff_transpose(std::span<const double> v, double h, std::span<double> out, Exec exec) {
  if (use_parallel(exec, out.size())) {
    omp::add_forward_diff_transpose(v, h, out);
  } else {
    serial::add_forward_diff_transpose(v, h, out);
  }
}

}  // namespace pkirch::kernels
