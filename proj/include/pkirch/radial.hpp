#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pkirch {

inline constexpr double kDefaultRadius = 40.0;
inline constexpr std::size_t kDefaultIntervals = 4000;
/// A profile is "decayed" when |u(R)| <= kTailRatio * max|u|.
inline constexpr double kTailRatio = 1e-8;

/// Uniform grid r_i = i h, i = 0..n, on [0, R]. n must be even (composite
/// Simpson) and at least 16.
class RadialGrid {
 public:
  RadialGrid() : RadialGrid(kDefaultRadius, kDefaultIntervals) {}
  RadialGrid(double radius, std::size_t intervals);

  double radius() const { return radius_; }
  std::size_t intervals() const { return intervals_; }
  std::size_t size() const { return intervals_ + 1; }
  double spacing() const { return radius_ / static_cast<double>(intervals_); }
  double node(std::size_t i) const { return spacing() * static_cast<double>(i); }

  /// 4 pi r_i^2 times the Simpson weight of node i.
  std::span<const double> volume_weights() const { return *weights_; }

  /// Same spacing-halved grid (2n intervals on the same R).
  RadialGrid refined() const { return RadialGrid(radius_, 2 * intervals_); }

  friend bool operator==(const RadialGrid& x, const RadialGrid& y) {
    return x.radius_ == y.radius_ && x.intervals_ == y.intervals_;
  }

 private:
  double radius_;
  std::size_t intervals_;
  std::shared_ptr<const std::vector<double>> weights_;
};

/// The three integrals the functionals are built from, for one (p, q).
struct ProfileNorms {
  double p = 0.0;
  double q = 0.0;
  double mass_pp = 0.0;  // |u|_p^p
  double grad_pp = 0.0;  // |grad u|_p^p
  double lq_q = 0.0;     // |u|_q^q
};

/// Radial function sampled on a RadialGrid. Values are immutable once
/// constructed; "changing" a profile means building a new one.
class RadialProfile {
 public:
  /// Zero profile on a 16-interval unit grid; a placeholder for aggregates.
  RadialProfile() : RadialProfile(RadialGrid(1.0, 16), std::vector<double>(17, 0.0)) {}
  RadialProfile(RadialGrid grid, std::vector<double> values);
  /// Also caches the norms for exponents (p, q).
  RadialProfile(RadialGrid grid, std::vector<double> values, double p, double q);

  static RadialProfile from_function(const RadialGrid& grid, const std::function<double(double)>& f);

  const RadialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double max_abs() const;
  /// Centered-difference derivative, u'(0) = 0.
  std::vector<double> derivative() const;

  /// Cached when (p, q) matches the cached pair, recomputed otherwise.
  ProfileNorms norms(double p, double q) const;
  const std::optional<ProfileNorms>& cached_norms() const { return cache_; }

  /// Fourth-order interpolation; even extension for r < 0 and zero beyond R.
  double sample(double r) const;

  /// |u(R)| <= kTailRatio * max|u|.
  bool tail_decayed(double ratio = kTailRatio) const;
  /// Largest node radius with |u| > ratio * max|u| (0 for the zero profile).
  double support_radius(double ratio = kTailRatio) const;

  RadialProfile scaled(double alpha) const;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  std::optional<ProfileNorms> cache_;
};

ProfileNorms compute_norms(const RadialProfile& u, double p, double q);

/// (4 pi int r^2 |u|^s dr)^{1/s}. Throws NonFinite on non-finite values,
/// OutOfRange for s < 1.
double lp_norm(const RadialProfile& u, double s);
/// (4 pi int r^2 |u'|^p dr)^{1/p} with u' by centered differences.
double grad_lp_norm(const RadialProfile& u, double p);

/// |u|_s^s and |grad u|_p^p without the root.
double lp_power(const RadialProfile& u, double s);
double grad_lp_power(const RadialProfile& u, double p);

/// v(r) = amplitude * u(dilation * r) sampled on `target`.
RadialProfile resample(const RadialProfile& u, const RadialGrid& target, double amplitude, double dilation);

void require_finite(std::span<const double> values, const char* what);

}  // namespace pkirch
