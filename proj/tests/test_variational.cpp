#include <doctest.h>

#include <cmath>

#include "pkirch/error.hpp"
#include "pkirch/functional.hpp"
#include "pkirch/ground_state.hpp"
#include "pkirch/samples.hpp"
#include "pkirch/scalar.hpp"
#include "pkirch/variational.hpp"

using namespace pkirch;

namespace {

RadialProfile bump(const RadialGrid& g = RadialGrid(20.0, 2000)) {
  return RadialProfile::from_function(g, [](double r) { return (1.0 + 0.5 * r * r) * std::exp(-r * r / 2); });
}

}  // namespace

TEST_CASE("energy and Pohozaev functional from the norms") {
  const Params prm = make_params(1.2, 0.8, 2.2, 3.5, 1.0);
  const RadialProfile u = bump();
  const ProfileNorms n = compute_norms(u, prm.p, prm.q);
  const double G = n.grad_pp, L = n.lq_q;
  CHECK(energy(prm, u) == doctest::Approx(1.2 / 2.2 * G + 0.8 / 4.4 * G * G - L / 3.5));
  CHECK(pohozaev(prm, u) == doctest::Approx(1.2 * G + 0.8 * G * G - 3 * 1.3 / (2.2 * 3.5) * L));
}

TEST_CASE("energy along the fiber obeys the scaling law and P = t dI/dt") {
  const Params prm = make_params(1, 1, 1.8, 3.0, 1.0);
  const RadialProfile u = bump();
  const ProfileNorms n = compute_norms(u, prm.p, prm.q);
  for (double t : {0.6, 1.0, 2.5}) {
    const RadialProfile ut = fiber_scale_exact(u, prm.p, t);
    CHECK(energy(prm, ut) == doctest::Approx(energy_from_norms(prm, n.grad_pp, n.lq_q, t)).epsilon(1e-12));
    const double d = 1e-5 * t;
    const double dI = (energy_from_norms(prm, n.grad_pp, n.lq_q, t + d) - energy_from_norms(prm, n.grad_pp, n.lq_q, t - d)) / (2 * d);
    CHECK(pohozaev(prm, ut) == doctest::Approx(t * dI).epsilon(1e-8));
  }
}

TEST_CASE("resampled fiber scaling agrees with the exact one") {
  const RadialProfile u = bump(RadialGrid(30.0, 3000));
  const double p = 2.0, q = 3.0;
  const ProfileNorms a = compute_norms(fiber_scale(u, p, 1.5), p, q);
  const ProfileNorms b = compute_norms(fiber_scale_exact(u, p, 1.5), p, q);
  // Same function, sampled 1.5x coarser relative to its width: O(h^2) apart.
  CHECK(a.grad_pp == doctest::Approx(b.grad_pp).epsilon(1e-4));
  CHECK(a.lq_q == doctest::Approx(b.lq_q).epsilon(1e-4));
  CHECK_THROWS_AS(fiber_scale(u, p, 0.05), Error);
}

TEST_CASE("fiber extremum lies on the Pohozaev set") {
  const RadialProfile u = bump();
  for (double q : {3.0, 5.0}) {
    const Params prm = make_params(1, 1, 2, q, 1);
    const FiberExtremum fe = fiber_extremum_of(prm, u);
    const ProfileNorms n = compute_norms(u, prm.p, prm.q);
    const double scale = fe.t * fe.t * n.grad_pp;
    CHECK(pohozaev_from_norms(prm, n.grad_pp, n.lq_q, fe.t) == doctest::Approx(0.0).scale(scale));
    CHECK(fe.kind == (q == 5.0 ? ExtremumKind::Max : ExtremumKind::Min));
  }
  const RadialGrid g(10.0, 100);
  CHECK_THROWS_AS(fiber_extremum_of(make_params(1, 1, 2, 3, 1), RadialProfile(g, std::vector<double>(g.size(), 0.0))),
                  Error);
}

TEST_CASE("GN quotient: Q attains the bound and random profiles stay below") {
  for (auto [p, q] : {std::pair{1.6, 2.6}, {2.0, 4.0}, {2.5, 4.0}}) {
    const GroundState gs = compute_ground_state(p, q, 1e-10);
    const GroundNorms qn = GroundNorms::of(gs);
    CHECK(gn_quotient(qn, gs.profile, p, q) == doctest::Approx(1.0).epsilon(1e-4));
    // Invariant under amplitude and dilation.
    CHECK(gn_quotient(qn, fiber_scale_exact(gs.profile.scaled(3.0), p, 2.0), p, q) ==
          doctest::Approx(gn_quotient(qn, gs.profile, p, q)).epsilon(1e-12));
    for (const RadialProfile& u : random_radial_profiles(RadialGrid(), 20, 3)) CHECK(gn_quotient(qn, u, p, q) <= 1.002);
  }
  const GroundNorms qn = GroundNorms::of(compute_ground_state(2.0, 3.0, 1e-10));
  const RadialGrid g(10.0, 100);
  CHECK_THROWS_AS(gn_quotient(qn, RadialProfile(g, std::vector<double>(g.size(), 0.0)), 2.0, 3.0), Error);
}

TEST_CASE("energy report of the explicit solution") {
  const GroundState gs = compute_ground_state(2.0, 3.0, 1e-10);
  const Params prm = make_params(1, 1, 2, 3, 1);
  const FiberExtremum fe = extremize_f(prm, GroundNorms::of(gs));
  const RadialProfile u = build_explicit_solution(prm, gs, fe.t, explicit_solution_grid(prm, gs, fe.t));
  const EnergyReport r = energy_report(prm, u);
  CHECK(r.I == doctest::Approx(fe.value).epsilon(1e-4));
  CHECK(r.mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.lambda == doctest::Approx(lagrange_multiplier(prm, u)));
  CHECK(r.pde_residual < 5e-3);
  CHECK(std::abs(r.P) < 1e-3 * (r.grad + r.grad * r.grad));
}

TEST_CASE("W1p distance") {
  const RadialProfile u = RadialProfile::from_function(RadialGrid(40.0, 8000), [](double r) { return std::exp(-r); });
  const RadialProfile zero(RadialGrid(10.0, 100), std::vector<double>(101, 0.0));
  CHECK(w1p_distance(u, u, 2.0) == 0.0);
  // |e^{-r}|_2^2 = |grad e^{-r}|_2^2 = pi.
  CHECK(w1p_distance(u, zero, 2.0) == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-4));
  const RadialProfile v = u.scaled(1.5);
  CHECK(w1p_distance(u, v, 2.0) == doctest::Approx(0.5 * std::sqrt(2.0 * M_PI)).epsilon(1e-4));
}

TEST_CASE("monotonicity inequality") {
  const Vec3 x{1, 0, 0}, y{-1, 0, 0};
  CHECK(monotone_inequality_check(x, y, 2.5).ratio == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  CHECK(monotone_inequality_check({0.3, -2, 1}, {4, 0.1, 0}, 2.0).ratio == doctest::Approx(1.0).epsilon(1e-14));
  // s < 2, unit x = -y: 2^{2-s} <2x, 2x> / |2x|^2 = 2^{2-s}.
  CHECK(monotone_inequality_check(x, y, 1.5).ratio == doctest::Approx(std::pow(2.0, 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(monotone_inequality_check(x, x, 2.5), Error);

  const MonotoneSample s = sample_monotone_inequality(1.7, 2000, 42);
  CHECK(s.all_positive);
  CHECK_FALSE(s.all_one);
  CHECK(sample_monotone_inequality(2.0, 2000, 42).all_one);
  const MonotoneSample again = sample_monotone_inequality(1.7, 2000, 42);
  CHECK(again.min_ratio == s.min_ratio);
}
