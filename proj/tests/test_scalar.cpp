#include <doctest.h>

#include <cmath>

#include "pkirch/error.hpp"
#include "pkirch/ground_state.hpp"
#include "pkirch/params.hpp"
#include "pkirch/scalar.hpp"
#include "pkirch/variational.hpp"

using namespace pkirch;

namespace {

const GroundState& ground(double p, double q) {
  static std::vector<GroundState> cache;
  for (const GroundState& gs : cache) {
    if (gs.p == p && gs.q == q) return gs;
  }
  cache.push_back(compute_ground_state(p, q, 1e-10));
  return cache.back();
}

// f written out from the ground-state norms, bypassing fiber_coefficients.
double f_direct(double a, double b, double p, double q, double c, double Qp, double t) {
  const double e2 = 3 * (q - p) / (p * p), qbar = q - 3 * (q - p) / p;
  return a / p * t + b / (2 * p) * t * t - std::pow(c, qbar) / (p * std::pow(Qp, q - p)) * std::pow(t, e2);
}

// min over t > 0 of f: scan log t, then refine every local minimum of the
// scan (near c_star the interior minimum is shallower than the scan error).
double f_min_direct(double a, double b, double p, double q, double c, double Qp) {
  const auto g = [&](double lt) { return f_direct(a, b, p, q, c, Qp, std::exp(lt)); };
  const double step = 0.01;
  double best = g(-30.0);
  for (double lt = -30 + step; lt < 30; lt += step) {
    if (g(lt) <= g(lt - step) && g(lt) <= g(lt + step)) {
      best = std::min(best, g(golden_section_min(g, lt - step, lt + step, 1e-15)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("search helpers") {
  CHECK(golden_section_min([](double x) { return (x - 1.3) * (x - 1.3); }, 0.0, 4.0, 1e-12) ==
        doctest::Approx(1.3).epsilon(1e-9));
  CHECK(bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("f and its derivative") {
  const GroundNorms qn = GroundNorms::of(ground(2.0, 3.0));
  const Params prm = make_params(1.3, 0.7, 2.0, 3.0, 2.0);
  for (double t : {0.01, 0.5, 4.0}) {
    CHECK(eval_f(prm, qn, t) == doctest::Approx(f_direct(1.3, 0.7, 2.0, 3.0, 2.0, qn.lp, t)).epsilon(1e-13));
    const double d = 1e-6 * t;
    CHECK(eval_f_derivative(prm, qn, t) ==
          doctest::Approx((eval_f(prm, qn, t + d) - eval_f(prm, qn, t - d)) / (2 * d)).epsilon(1e-6));
  }
}

TEST_CASE("subcritical minimum against a direct scan") {
  for (auto [p, q] : {std::pair{1.6, 2.3}, {2.0, 3.0}, {2.5, 3.5}}) {
    const GroundNorms qn = GroundNorms::of(ground(p, q));
    const Params prm = make_params(1, 1, p, q, 1.5);
    const FiberExtremum fe = extremize_f(prm, qn);
    CHECK(fe.kind == ExtremumKind::Min);
    CHECK(fe.converged);
    CHECK(fe.value == doctest::Approx(f_min_direct(1, 1, p, q, 1.5, qn.lp)).epsilon(1e-9));
    CHECK(fe.value < 0.0);
  }
}

TEST_CASE("mass-critical pinned example has level -1/4 at t = 1") {
  const double q = mass_critical_exponent(2.0);
  const GroundNorms qn = GroundNorms::of(ground(2.0, q));
  // a = b = 1 and c = 2^{3/4} |Q|_2 give f(t) = -t/2 + t^2/4.
  const Params prm = make_params(1, 1, 2.0, q, std::pow(2.0, 0.75) * qn.lp);
  const MassCriticalVertex v = mass_critical_vertex(prm, qn);
  CHECK(v.t_from_f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.level_from_f == doctest::Approx(-0.25).epsilon(1e-12));
  // The extra factor p puts the alternative vertex at the origin here.
  CHECK(std::abs(v.t_alternative) < 1e-12);
  CHECK_THROWS_AS(mass_critical_vertex(make_params(1, 1, 2.0, 3.0, 1), qn), Error);
}

TEST_CASE("c_crit zeroes the linear coefficient of f at the mass-critical exponent") {
  const double q = mass_critical_exponent(2.0);
  const GroundNorms qn = GroundNorms::of(ground(2.0, q));
  const double a = 1.7;
  const Thresholds th = thresholds(make_params(a, 1, 2.0, q, 1), qn);
  const FiberCoefficients fc = fiber_coefficients(make_params(a, 1, 2.0, q, th.c_crit), qn);
  CHECK(fc.A - fc.K == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("c_star is the mass where min f changes sign") {
  for (auto [p, q] : {std::pair{2.0, 4.0}, {1.8, 3.4}, {2.5, 5.0}}) {
    CAPTURE(p);
    const Params base = make_params(1, 1, p, q, 1);
    REQUIRE(base.regime == Regime::Intermediate);
    const GroundNorms qn = GroundNorms::of(ground(p, q));
    double lo = 1e-3, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(lo * hi);
      (f_min_direct(1, 1, p, q, mid, qn.lp) < 0 ? hi : lo) = mid;
    }
    const Thresholds th = thresholds(base, qn);
    CHECK(th.c_star() == doctest::Approx(lo).epsilon(1e-6));
    CHECK(th.c_star_alternative() != doctest::Approx(lo).epsilon(1e-2));
  }
  // At p = 2, q = 4 the threshold reduces to sqrt(2) |Q|_2^2.
  const GroundNorms qn = GroundNorms::of(ground(2.0, 4.0));
  CHECK(thresholds(make_params(1, 1, 2, 4, 1), qn).c_star() == doctest::Approx(std::sqrt(2.0) * qn.lp * qn.lp));
}

TEST_CASE("c_dc is where the t^2 coefficient of f vanishes") {
  const double p = 2.0, q = double_critical_exponent(p), b = 0.6;
  const GroundNorms qn = GroundNorms::of(ground(p, q));
  const double qbar = q - 3 * (q - p) / p;
  const double expected = std::pow(b / 2 * std::pow(qn.lp, q - p), 1.0 / qbar);
  const Thresholds th = thresholds(make_params(1, b, p, q, 1), qn);
  CHECK(th.c_dc() == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(th.c_star(), Error);
}

TEST_CASE("verdicts") {
  const auto verdict = [](double p, double q, double c) {
    return thresholds(make_params(1, 1, p, q, c), GroundNorms::of(ground(p, q))).verdict;
  };
  CHECK(verdict(2.0, 3.0, 1.0) == Verdict::MinimizerForAllMasses);
  const double mc = mass_critical_exponent(2.0);
  const double ccrit = thresholds(make_params(1, 1, 2, mc, 1), GroundNorms::of(ground(2.0, mc))).c_crit;
  CHECK(verdict(2.0, mc, 0.9 * ccrit) == Verdict::NoMinimizer);
  CHECK(verdict(2.0, mc, 1.1 * ccrit) == Verdict::Minimizer);
  const double cs = thresholds(make_params(1, 1, 2, 4, 1), GroundNorms::of(ground(2.0, 4.0))).c_star();
  CHECK(verdict(2.0, 4.0, 0.9 * cs) == Verdict::NoMinimizer);
  CHECK(verdict(2.0, 4.0, 1.1 * cs) == Verdict::Minimizer);
  CHECK(verdict(2.0, 5.0, 1.0) == Verdict::PohozaevGroundState);
}

TEST_CASE("supercritical fiber maximum") {
  const GroundNorms qn = GroundNorms::of(ground(2.0, 5.0));
  const Params prm = make_params(1, 1, 2, 5, 1);
  const FiberExtremum fe = extremize_f(prm, qn);
  CHECK(fe.kind == ExtremumKind::Max);
  CHECK(eval_f_derivative(prm, qn, fe.t) == doctest::Approx(0.0).scale(std::abs(fe.value) / fe.t));
  CHECK(eval_f(prm, qn, fe.t * 1.01) < fe.value);
  CHECK(eval_f(prm, qn, fe.t * 0.99) < fe.value);
}

TEST_CASE("explicit solution: mass, multiplier and residual") {
  for (auto [p, q] : {std::pair{2.0, 3.0}, {1.7, 2.5}, {2.0, 5.0}}) {
    CAPTURE(p);
    CAPTURE(q);
    const GroundState& gs = ground(p, q);
    const GroundNorms qn = GroundNorms::of(gs);
    const Params prm = make_params(1, 1, p, q, 1.3);
    const FiberExtremum fe = extremize_f(prm, qn);
    const RadialProfile u = build_explicit_solution(prm, gs, fe.t, explicit_solution_grid(prm, gs, fe.t));
    CHECK(lp_norm(u, p) == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(grad_lp_power(u, p) == doctest::Approx(fe.t).epsilon(1e-4));
    const double lam = closed_form_multiplier(prm, qn, fe.t);
    CHECK(lam < 0.0);
    CHECK(lagrange_multiplier(prm, u) == doctest::Approx(lam).epsilon(1e-3));
    CHECK(pde_residual(prm, lam, u) < 5e-3);
  }
}

TEST_CASE("lagrange_multiplier rejects the wrong mass") {
  const GroundState& gs = ground(2.0, 3.0);
  CHECK_THROWS_AS(lagrange_multiplier(make_params(1, 1, 2, 3, 5.0), gs.profile), Error);
}

TEST_CASE("c_star increases with b") {
  const GroundNorms qn = GroundNorms::of(ground(2.0, 4.0));
  double prev = 0.0;
  for (double b : {0.5, 1.0, 2.0}) {
    const double cs = thresholds(make_params(1, b, 2, 4, 1), qn).c_star();
    CHECK(cs > prev);
    prev = cs;
  }
}
