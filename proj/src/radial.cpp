#include "pkirch/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pkirch/error.hpp"
#include "pkirch/kernels.hpp"

namespace pkirch {

namespace {

std::vector<double> simpson_volume_weights(double radius, std::size_t n) {
  const double h = radius / static_cast<double>(n);
  std::vector<double> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double s = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double r = h * static_cast<double>(i);
    w[i] = 4.0 * std::numbers::pi * r * r * s * h / 3.0;
  }
  return w;
}

}  // namespace

RadialGrid::RadialGrid(double radius, std::size_t intervals) : radius_(radius), intervals_(intervals) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::OutOfRange, "grid radius must be positive and finite");
  }
  if (intervals < 16) throw Error(ErrorKind::OutOfRange, "grid needs n >= 16 intervals");
  if (intervals % 2 != 0) throw Error(ErrorKind::OutOfRange, "grid needs an even number of intervals");
  weights_ = std::make_shared<const std::vector<double>>(simpson_volume_weights(radius, intervals));
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN/Inf");
  }
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::OutOfRange, "profile has " + std::to_string(values_.size()) +
                                           " values for a grid of " + std::to_string(grid_.size()) +
                                           " nodes");
  }
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values, double p, double q)
    : RadialProfile(std::move(grid), std::move(values)) {
  cache_ = compute_norms(*this, p, q);
}

RadialProfile RadialProfile::from_function(const RadialGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
  return RadialProfile(grid, std::move(v));
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> RadialProfile::derivative() const {
  std::vector<double> du(values_.size());
  kernels::centered_diff(values_, grid_.spacing(), du);
  return du;
}

ProfileNorms RadialProfile::norms(double p, double q) const {
  if (cache_ && cache_->p == p && cache_->q == q) return *cache_;
  return compute_norms(*this, p, q);
}

double RadialProfile::sample(double r) const {
  const double h = grid_.spacing();
  const std::size_t n = grid_.intervals();
  r = std::abs(r);
  if (r > grid_.radius()) return 0.0;
  const double x = r / h;
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  if (i >= static_cast<std::ptrdiff_t>(n)) return values_[n];
  // Stencil {i-1, i, i+1, i+2}, shifted left at the outer end; negative
  // indices reflect (even extension).
  std::ptrdiff_t base = std::min<std::ptrdiff_t>(i - 1, static_cast<std::ptrdiff_t>(n) - 3);
  const double t = x - static_cast<double>(base);
  auto val = [&](std::ptrdiff_t k) { return values_[static_cast<std::size_t>(std::abs(k))]; };
  const double f0 = val(base), f1 = val(base + 1), f2 = val(base + 2), f3 = val(base + 3);
  // Lagrange basis on nodes 0,1,2,3 at local coordinate t.
  const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3;
}

bool RadialProfile::tail_decayed(double ratio) const {
  return std::abs(values_.back()) <= ratio * max_abs();
}

double RadialProfile::support_radius(double ratio) const {
  const double cut = ratio * max_abs();
  for (std::size_t i = values_.size(); i-- > 0;) {
    if (std::abs(values_[i]) > cut) return grid_.node(i);
  }
  return 0.0;
}

RadialProfile RadialProfile::scaled(double alpha) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= alpha;
  return RadialProfile(grid_, std::move(v));
}

ProfileNorms compute_norms(const RadialProfile& u, double p, double q) {
  require_finite(u.values(), "profile");
  const auto w = u.grid().volume_weights();
  const std::vector<double> du = u.derivative();
  ProfileNorms out;
  out.p = p;
  out.q = q;
  out.mass_pp = kernels::power_sum(w, u.values(), p);
  out.grad_pp = kernels::power_sum(w, du, p);
  out.lq_q = kernels::power_sum(w, u.values(), q);
  return out;
}

double lp_power(const RadialProfile& u, double s) {
  if (!(s >= 1.0)) throw Error(ErrorKind::OutOfRange, "norm exponent must satisfy s >= 1");
  require_finite(u.values(), "profile");
  return kernels::power_sum(u.grid().volume_weights(), u.values(), s);
}

double grad_lp_power(const RadialProfile& u, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::OutOfRange, "norm exponent must satisfy p >= 1");
  require_finite(u.values(), "profile");
  const std::vector<double> du = u.derivative();
  return kernels::power_sum(u.grid().volume_weights(), du, p);
}

double lp_norm(const RadialProfile& u, double s) { return std::pow(lp_power(u, s), 1.0 / s); }

double grad_lp_norm(const RadialProfile& u, double p) { return std::pow(grad_lp_power(u, p), 1.0 / p); }

RadialProfile resample(const RadialProfile& u, const RadialGrid& target, double amplitude, double dilation) {
  std::vector<double> v(target.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = amplitude * u.sample(dilation * target.node(i));
  return RadialProfile(target, std::move(v));
}

}  // namespace pkirch
