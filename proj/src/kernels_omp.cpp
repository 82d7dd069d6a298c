#include <omp.h>

#include <array>
#include <cassert>
#include <cmath>

#include "pkirch/kernels.hpp"

namespace pkirch::kernels::omp {

namespace {

// Chunk boundaries depend on n only, so partial sums are combined in the
// same order for every thread count.
template <class Term>
double chunked_sum(std::size_t n, Term term) {
  std::array<double, kReductionChunks> partial{};
  const std::ptrdiff_t chunks = static_cast<std::ptrdiff_t>(kReductionChunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::size_t lo = n * static_cast<std::size_t>(c) / kReductionChunks;
    const std::size_t hi = n * static_cast<std::size_t>(c + 1) / kReductionChunks;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

double power_sum(std::span<const double> weights, std::span<const double> u, double s) {
  assert(weights.size() == u.size());
  return chunked_sum(u.size(), [&](std::size_t i) { return weights[i] * std::pow(std::abs(u[i]), s); });
}

double weighted_sum(std::span<const double> weights, std::span<const double> u) {
  assert(weights.size() == u.size());
  return chunked_sum(u.size(), [&](std::size_t i) { return weights[i] * u[i]; });
}

void centered_diff(std::span<const double> u, double h, std::span<double> du) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  assert(static_cast<std::ptrdiff_t>(du.size()) == n && n >= 3);
  const double inv2h = 0.5 / h;
  du[0] = 0.0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 1; i < n - 1; ++i) du[i] = (u[i + 1] - u[i - 1]) * inv2h;
  du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2h;
}

void add_power_gradient(std::span<const double> weights, std::span<const double> u, double s,
                        double coef, double eps, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
  const double k = coef * s;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] += k * weights[i] * regularized_flux(u[i], s, eps);
}

void forward_diff(std::span<const double> u, double h, std::span<double> du) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(du.size());
  assert(du.size() + 1 == u.size());
  const double inv = 1.0 / h;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) du[i] = (u[i + 1] - u[i]) * inv;
}

void add_forward_diff_transpose(std::span<const double> v, double h, std::span<double> out) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(v.size());
  assert(out.size() == v.size() + 1);
  const double inv = 1.0 / h;
  out[0] -= v[0] * inv;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 1; j < m; ++j) out[j] += (v[j - 1] - v[j]) * inv;
  out[m] += v[m - 1] * inv;
}

}  // namespace pkirch::kernels::omp
