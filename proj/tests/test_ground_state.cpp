#include <doctest.h>

#include <array>
#include <cmath>

#include "pkirch/error.hpp"
#include "pkirch/ground_state.hpp"
#include "pkirch/params.hpp"

using namespace pkirch;

namespace {

// Plain RK4 for -d (u'' + 2u'/r) + k u = u^{q-1} at p = 2, started from the
// Taylor series at a small radius. Returns +1 when u crosses zero, -1 when u'
// turns positive first.
int oracle_shot(double q, double s0) {
  const GroundStateCoefficients co = ground_state_coefficients(2.0, q);
  const auto rhs = [&](double r, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -2.0 * y[1] / r + (co.kappa * y[0] - std::pow(std::abs(y[0]), q - 2) * y[0]) / co.dcoef};
  };
  const double u2 = (co.kappa * s0 - std::pow(s0, q - 1)) / (3.0 * co.dcoef);
  double r = 1e-4;
  std::array<double, 2> y{s0 + 0.5 * u2 * r * r, u2 * r};
  const double h = 1e-3;
  while (r < 60.0) {
    const auto k1 = rhs(r, y);
    const auto k2 = rhs(r + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const auto k3 = rhs(r + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
    const auto k4 = rhs(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int j = 0; j < 2; ++j) y[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    r += h;
    if (y[0] < 0) return 1;
    if (y[1] > 0) return -1;
  }
  return 0;
}

double oracle_s0(double q) {
  double lo = ground_state_coefficients(2.0, q).equilibrium * 1.0001, hi = 20.0;
  // Small s0 rebounds, large s0 crosses.
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (oracle_shot(q, mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("coefficients") {
  const GroundStateCoefficients co = ground_state_coefficients(2.0, 4.0);
  CHECK(co.kappa == doctest::Approx(1.0 + (2.0 - 3.0) * 2.0 / 4.0));
  CHECK(co.dcoef == doctest::Approx(3.0 * 2.0 / 4.0));
  CHECK(co.equilibrium == doctest::Approx(std::pow(co.kappa, 0.5)));
}

TEST_CASE("Q(0) matches an independent shooting computation at p = 2") {
  for (double q : {3.0, 4.0}) {
    const GroundState gs = compute_ground_state(2.0, q, 1e-10);
    CHECK(gs.s0 == doctest::Approx(oracle_s0(q)).epsilon(1e-6));
  }
}

TEST_CASE("ground state shape and identities") {
  for (auto [p, q] : {std::pair{1.6, 2.6}, {2.0, 3.0}, {2.5, 4.5}}) {
    CAPTURE(p);
    CAPTURE(q);
    const GroundState gs = compute_ground_state(p, q, 1e-10);
    const auto v = gs.profile.values();
    CHECK(v[0] == doctest::Approx(gs.s0));
    bool positive = true, decreasing = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
      positive = positive && v[i] > 0.0;
      decreasing = decreasing && v[i] <= v[i - 1];
    }
    CHECK(positive);
    CHECK(decreasing);
    CHECK(gs.profile.tail_decayed());
    CHECK(gs.s0_crossing - gs.s0_rebound <= 1e-10 * gs.s0 * 1.0000001);
    CHECK(gs.residuals.grad_vs_mass < 1e-4);
    CHECK(gs.residuals.mass_vs_lq < 1e-4);
    CHECK(gs.residuals.ode < 1e-3);
  }
}

TEST_CASE("shoot classifies both sides of the bracket") {
  const GroundState gs = compute_ground_state(2.0, 3.0, 1e-10);
  const RadialGrid& g = gs.profile.grid();
  CHECK(shoot(2.0, 3.0, gs.s0 * 1.01, g).tag == ShotTag::Crossing);
  CHECK(shoot(2.0, 3.0, gs.s0 * 0.99, g).tag == ShotTag::Rebound);
}

TEST_CASE("identities measure a rescaled Q as off") {
  const GroundState gs = compute_ground_state(2.0, 3.0, 1e-10);
  const GroundStateResiduals r = verify_ground_identities(gs.profile.scaled(1.1), 2.0, 3.0);
  CHECK(r.mass_vs_lq > 1e-2);
}

TEST_CASE("radial p-Laplacian of a gaussian") {
  for (double p : {1.6, 2.0, 2.5}) {
    const RadialProfile u =
        RadialProfile::from_function(RadialGrid(10.0, 2000), [](double r) { return std::exp(-r * r); });
    const auto lap = radial_p_laplacian(u, p);
    const double h = u.grid().spacing();
    // r^{-2} d/dr [ -2^{p-1} r^{p+1} e^{-(p-1) r^2} ]
    const auto exact = [p](double r) {
      return -std::pow(2.0, p - 1) * std::exp(-(p - 1) * r * r) *
             ((p + 1) * std::pow(r, p - 2) - 2 * (p - 1) * std::pow(r, p));
    };
    for (std::size_t i : {100u, 300u, 700u}) {
      CHECK(lap[i] == doctest::Approx(exact(i * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("ODE residual decreases under refinement at p = 2") {
  const GroundState coarse = compute_ground_state(2.0, 3.0, 1e-12, RadialGrid(40.0, 2000));
  const GroundState fine = compute_ground_state(2.0, 3.0, 1e-12, RadialGrid(40.0, 4000));
  // Fourth-order stencils on an RK4 solution.
  CHECK(coarse.residuals.ode / fine.residuals.ode > 8.0);
}

TEST_CASE("invalid exponents") {
  CHECK_THROWS_AS(compute_ground_state(2.0, 7.0, 1e-10), Error);
  CHECK_THROWS_AS(compute_ground_state(2.0, 3.0, 0.0), Error);
}
