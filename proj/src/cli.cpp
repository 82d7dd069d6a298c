#include "pkirch/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>

#include "pkirch/error.hpp"
#include "pkirch/io.hpp"
#include "pkirch/samples.hpp"
#include "pkirch/scalar.hpp"
#include "pkirch/variational.hpp"

namespace pkirch::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

bool is_validation(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfRange:
    case ErrorKind::NonFinite:
    case ErrorKind::WrongRegime:
    case ErrorKind::RegimeError:
    case ErrorKind::ParseError:
    case ErrorKind::MassMismatch:
    case ErrorKind::DegeneratePair:
      return true;
    default:
      return false;
  }
}

std::optional<RadialGrid> requested_grid(const RunConfig& rc) {
  if (rc.R == 0.0 && rc.n == 0) return std::nullopt;
  const double R = rc.R > 0.0 ? rc.R : kDefaultRadius;
  std::size_t n = rc.n > 0 ? rc.n : static_cast<std::size_t>(std::llround(R / 0.01));
  n += n % 2;
  return RadialGrid(R, n);
}

GroundState ground_state(const RunConfig& rc) {
  if (!(rc.tol > 0.0)) throw Error(ErrorKind::OutOfRange, "tol must be positive");
  return io::cached_ground_state(rc.cache_dir, rc.p, rc.q, rc.tol, requested_grid(rc));
}

Params params(const RunConfig& rc) { return make_params(rc.a, rc.b, rc.p, rc.q, rc.c); }

void emit(const RunConfig& rc, const std::string& name, const Json& j) {
  io::write_json(j, rc.output_dir / (name + ".json"));
  std::cout << io::dump(j);
}

Json optional_extremum(const Params& prm, const GroundNorms& qn) {
  try {
    return io::to_json(extremize_f(prm, qn));
  } catch (const Error& e) {
    return Json{{"error", e.what()}};
  }
}

int cmd_ground_state(const RunConfig& rc) {
  validate_exponents(rc.p, rc.q);
  const GroundState gs = ground_state(rc);
  io::save_profile(gs.profile, rc.output_dir / "Q.csv");
  emit(rc, "Q", io::to_json(gs));
  return 0;
}

int cmd_regimes(const RunConfig& rc) {
  const Regime r = classify_regime(rc.p, rc.q);
  emit(rc, "regimes",
       Json{{"p", rc.p},
            {"q", rc.q},
            {"pstar", critical_sobolev_exponent(rc.p)},
            {"mass_critical", mass_critical_exponent(rc.p)},
            {"double_critical", double_critical_exponent(rc.p)},
            {"regime", std::string(to_string(r))}});
  return 0;
}

int cmd_thresholds(const RunConfig& rc) {
  const Params prm = params(rc);
  const GroundState gs = ground_state(rc);
  const GroundNorms qn = GroundNorms::of(gs);
  Json j{{"params", io::to_json(prm)}, {"thresholds", io::to_json(thresholds(prm, qn))}};
  j["extremum"] = optional_extremum(prm, qn);
  if (prm.regime == Regime::MassCritical) {
    try {
      const MassCriticalVertex v = mass_critical_vertex(prm, qn);
      j["mass_critical_vertex"] = Json{{"t_from_f", v.t_from_f},
                                       {"t_alternative", v.t_alternative},
                                       {"level_from_f", v.level_from_f},
                                       {"level_alternative", v.level_alternative}};
    } catch (const Error& e) {
      j["mass_critical_vertex"] = Json{{"error", e.what()}};
    }
  }
  emit(rc, "thresholds", j);
  return 0;
}

int cmd_minimize(const RunConfig& rc) {
  const Params prm = params(rc);
  const GroundState gs = ground_state(rc);
  const FlowResult r = estimate_i(prm, gs, rc.flow);
  io::save_profile(r.minimizer, rc.output_dir / "minimizer.csv");
  Json j{{"params", io::to_json(prm)}, {"flow", io::to_json(r)}};
  j["f_extremum"] = optional_extremum(prm, GroundNorms::of(gs));
  emit(rc, "minimize", j);
  return 0;
}

int cmd_ground_level(const RunConfig& rc) {
  const Params prm = params(rc);
  const GroundState gs = ground_state(rc);
  const FlowResult r = ground_level_supercritical(prm, gs, rc.flow);
  io::save_profile(r.minimizer, rc.output_dir / "ground_level.csv");
  Json j{{"params", io::to_json(prm)}, {"flow", io::to_json(r)}};
  j["f_extremum"] = optional_extremum(prm, GroundNorms::of(gs));
  emit(rc, "ground_level", j);
  return 0;
}

int cmd_sweep_b(const RunConfig& rc, int steps, double ratio) {
  if (steps < 1) throw Error(ErrorKind::OutOfRange, "--b-steps must be at least 1");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::OutOfRange, "--b-ratio must lie in (0, 1)");
  const Params prm = params(rc);
  if (!(prm.b > 0.0)) throw Error(ErrorKind::OutOfRange, "--b must be positive for a sweep");
  const GroundState gs = ground_state(rc);
  std::vector<double> b_list;
  for (int k = 0; k < steps; ++k) b_list.push_back(prm.b * std::pow(ratio, k));
  const SweepResult s = sweep_b(prm, gs, b_list, rc.flow);
  io::write_sweep_csv(s, rc.output_dir / "sweep.csv");
  emit(rc, "sweep", Json{{"params", io::to_json(prm)}, {"sweep", io::to_json(s)}});
  return 0;
}

int cmd_gn_check(const RunConfig& rc, std::size_t count) {
  validate_exponents(rc.p, rc.q);
  const GroundState gs = ground_state(rc);
  const GroundNorms qn = GroundNorms::of(gs);
  const auto samples = random_radial_profiles(RadialGrid(), count, rc.seed);
  double worst = 0.0;
  std::size_t skipped = 0;
  for (const RadialProfile& u : samples) {
    try {
      worst = std::max(worst, gn_quotient(qn, u, rc.p, rc.q));
    } catch (const Error&) {
      ++skipped;
    }
  }
  Json scaled = Json::array();
  for (const auto& [alpha, beta] : {std::pair{1.0, 1.0}, {2.0, 1.5}, {0.5, 0.75}}) {
    const RadialProfile v = resample(gs.profile, RadialGrid(gs.profile.grid().radius() / beta, gs.profile.grid().intervals()),
                                     alpha, beta);
    scaled.push_back(Json{{"alpha", alpha}, {"beta", beta}, {"quotient", gn_quotient(qn, v, rc.p, rc.q)}});
  }
  emit(rc, "gn_check",
       Json{{"p", rc.p},
            {"q", rc.q},
            {"count", count},
            {"seed", rc.seed},
            {"max_quotient", worst},
            {"skipped", skipped},
            {"ground_state_scalings", scaled}});
  return 0;
}

int cmd_verify(const RunConfig& rc) {
  validate_exponents(rc.p, rc.q);
  const GroundState gs = ground_state(rc);
  const GroundNorms qn = GroundNorms::of(gs);
  Json checks = Json::array();
  bool all = true;
  const auto check = [&](const std::string& name, double value, double bound) {
    const bool ok = value <= bound;
    all = all && ok;
    checks.push_back(Json{{"check", name}, {"value", value}, {"bound", bound}, {"pass", ok}});
  };
  check("grad_vs_mass", gs.residuals.grad_vs_mass, 1e-3);
  check("mass_vs_lq", gs.residuals.mass_vs_lq, 1e-3);
  check("ode", gs.residuals.ode, 1e-3);

  // Scaling laws of the resampled fiber map.
  const ProfileNorms nq = gs.profile.norms(rc.p, rc.q);
  for (double t : {0.8, 1.25}) {
    const ProfileNorms nt = fiber_scale(gs.profile, rc.p, t).norms(rc.p, rc.q);
    check("fiber_mass_t" + std::to_string(t).substr(0, 4), std::abs(nt.mass_pp / nq.mass_pp - 1.0), 1e-5);
    check("fiber_grad_t" + std::to_string(t).substr(0, 4),
          std::abs(nt.grad_pp / (std::pow(t, rc.p) * nq.grad_pp) - 1.0), 1e-5);
  }
  const auto samples = random_radial_profiles(RadialGrid(), 20, rc.seed);
  double worst = 0.0;
  for (const RadialProfile& u : samples) worst = std::max(worst, gn_quotient(qn, u, rc.p, rc.q));
  check("gn_random_max", worst, 1.002);
  if (rc.p <= 2.0) check("gn_ground_state", std::abs(gn_quotient(qn, gs.profile, rc.p, rc.q) - 1.0), 5e-3);

  emit(rc, "verify", Json{{"p", rc.p}, {"q", rc.q}, {"checks", checks}, {"all_pass", all}});
  return all ? 0 : 2;
}

int cmd_explicit(const RunConfig& rc) {
  const Params prm = params(rc);
  const GroundState gs = ground_state(rc);
  const GroundNorms qn = GroundNorms::of(gs);
  const FiberExtremum fe = extremize_f(prm, qn);
  const RadialProfile u = build_explicit_solution(prm, gs, fe.t, explicit_solution_grid(prm, gs, fe.t));
  const double lam_closed = closed_form_multiplier(prm, qn, fe.t);
  EnergyReport rep = energy_report(prm, u);
  const double res_closed = pde_residual(prm, lam_closed, u);
  io::save_profile(u, rc.output_dir / "explicit.csv");
  emit(rc, "explicit",
       Json{{"params", io::to_json(prm)},
            {"extremum", io::to_json(fe)},
            {"report", io::to_json(rep)},
            {"lambda_closed_form", lam_closed},
            {"pde_residual_closed_form", res_closed}});
  return 0;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"Mass-constrained p-Kirchhoff problems on R^3: ground states, thresholds, flows"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI file with key = value lines (flags win)");

  RunConfig rc;
  app.add_option("--p", rc.p, "exponent p in (3/2, 3)");
  app.add_option("--q", rc.q, "exponent q in (p, 3p/(3-p))");
  app.add_option("--a", rc.a, "Kirchhoff constant a > 0");
  app.add_option("--b", rc.b, "nonlocal coefficient b >= 0");
  app.add_option("--c", rc.c, "mass c > 0");
  app.add_option("--tol", rc.tol, "ground-state bracket tolerance");
  app.add_option("--R", rc.R, "ground-state grid radius (default: adaptive)");
  app.add_option("--n", rc.n, "ground-state grid intervals (default: R / 0.01)");
  app.add_option("--max-iters", rc.flow.max_iters, "flow iteration cap");
  app.add_option("--seed", rc.seed, "seed for random test profiles");
  app.add_option("--jobs", rc.jobs, "worker threads (default: all processors)");
  app.add_option("--out", rc.output_dir, "output directory");
  app.add_option("--cache", rc.cache_dir, "ground-state cache directory");

  std::function<int()> action;
  app.add_subcommand("ground-state", "compute Q, write Q.csv and Q.json")->callback([&] {
    action = [&] { return cmd_ground_state(rc); };
  });
  app.add_subcommand("regimes", "classify (p, q)")->callback([&] { action = [&] { return cmd_regimes(rc); }; });
  app.add_subcommand("thresholds", "mass thresholds and the verdict")->callback([&] {
    action = [&] { return cmd_thresholds(rc); };
  });
  app.add_subcommand("minimize", "estimate i(c) by the constrained flow")->callback([&] {
    action = [&] { return cmd_minimize(rc); };
  });
  app.add_subcommand("ground-level", "estimate m(c) on the Pohozaev set")->callback([&] {
    action = [&] { return cmd_ground_level(rc); };
  });
  int steps = 9;
  double ratio = 0.5;
  auto* sweep = app.add_subcommand("sweep-b", "b -> 0 sweep from --b down by --b-ratio");
  sweep->add_option("--b-steps", steps, "number of b values");
  sweep->add_option("--b-ratio", ratio, "geometric ratio in (0, 1)");
  sweep->callback([&] { action = [&] { return cmd_sweep_b(rc, steps, ratio); }; });
  std::size_t count = 100;
  auto* gn = app.add_subcommand("gn-check", "GN quotient on random profiles and on scalings of Q");
  gn->add_option("--count", count, "number of random profiles");
  gn->callback([&] { action = [&] { return cmd_gn_check(rc, count); }; });
  app.add_subcommand("verify", "identity suite for one (p, q)")->callback([&] {
    action = [&] { return cmd_verify(rc); };
  });
  app.add_subcommand("explicit", "explicit minimizer or mountain-pass solution")->callback([&] {
    action = [&] { return cmd_explicit(rc); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (rc.jobs > 0) omp_set_num_threads(rc.jobs);
  try {
    fs::create_directories(rc.output_dir);
    return action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation(e.kind()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace pkirch::cli
