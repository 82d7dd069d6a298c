#include "pkirch/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pkirch/error.hpp"

namespace pkirch::io {

namespace fs = std::filesystem;

namespace {

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17e", x);
        out += buf;
      }
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        emit(j[i], out, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "]";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [k, v] : j.items()) {
        out += pad + Json(k).dump() + ": ";
        emit(v, out, depth + 1);
        out += ++i < j.size() ? ",\n" : "\n";
      }
      out += close + "}";
      break;
    }
    default:
      out += j.dump();
  }
}

void open_for_write(std::ofstream& os, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  os.open(path);
  if (!os) throw Error(ErrorKind::ParseError, "cannot open " + path.string() + " for writing");
}

Json residuals_json(const GroundStateResiduals& r) {
  return Json{{"grad_vs_mass", r.grad_vs_mass}, {"mass_vs_lq", r.mass_vs_lq}, {"ode", r.ode}};
}

}  // namespace

void save_profile(const RadialProfile& u, const fs::path& path) {
  std::ofstream os;
  open_for_write(os, path);
  os << "r,u\n";
  const RadialGrid& g = u.grid();
  for (std::size_t i = 0; i < u.size(); ++i) os << num17(g.node(i)) << ',' << num17(u[i]) << '\n';
  if (!os) throw Error(ErrorKind::ParseError, "write to " + path.string() + " failed");
}

RadialProfile load_profile(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ParseError, "line 0: cannot open " + path.string());
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line) || (line != "r,u" && line != "r,u\r")) {
    throw Error(ErrorKind::ParseError, "line 1: expected header 'r,u'");
  }
  std::vector<double> r, u;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected two fields");
    }
    try {
      std::size_t used_r = 0, used_u = 0;
      const std::string sr = line.substr(0, comma), su = line.substr(comma + 1);
      const double vr = std::stod(sr, &used_r);
      const double vu = std::stod(su, &used_u);
      if (used_r != sr.size() || used_u != su.size()) throw std::invalid_argument("trailing characters");
      r.push_back(vr);
      u.push_back(vu);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (r.size() < 17) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": too few nodes");
  const std::size_t n = r.size() - 1;
  const RadialGrid grid(r.back(), n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (std::abs(r[i] - grid.node(i)) > 1e-12 * grid.radius()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(i + 2) + ": radii are not uniform from 0");
    }
  }
  return RadialProfile(grid, std::move(u));
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += '\n';
  return out;
}

void write_json(const Json& j, const fs::path& path) {
  std::ofstream os;
  open_for_write(os, path);
  os << dump(j);
}

Json to_json(const Params& prm) {
  return Json{{"a", prm.a},   {"b", prm.b},   {"p", prm.p},         {"q", prm.q},
              {"c", prm.c},   {"pstar", prm.pstar}, {"e1", prm.e1}, {"e2", prm.e2},
              {"qbar", prm.qbar}, {"regime", std::string(to_string(prm.regime))}};
}

Json to_json(const ProfileNorms& nm) {
  return Json{{"p", nm.p}, {"q", nm.q}, {"mass_pp", nm.mass_pp}, {"grad_pp", nm.grad_pp}, {"lq_q", nm.lq_q}};
}

Json to_json(const GroundState& gs) {
  const RadialGrid& g = gs.profile.grid();
  return Json{{"p", gs.p},
              {"q", gs.q},
              {"tol", gs.tol},
              {"R", g.radius()},
              {"n", g.intervals()},
              {"s0", gs.s0},
              {"s0_rebound", gs.s0_rebound},
              {"s0_crossing", gs.s0_crossing},
              {"cut_radius", gs.cut_radius},
              {"lp", gs.lp()},
              {"grad_lp", gs.grad_lp()},
              {"lq", gs.lq()},
              {"norms", to_json(gs.norms)},
              {"kappa", gs.coef.kappa},
              {"dcoef", gs.coef.dcoef},
              {"residuals", residuals_json(gs.residuals)}};
}

Json to_json(const FiberExtremum& fe) {
  return Json{{"t", fe.t},
              {"value", fe.value},
              {"kind", std::string(to_string(fe.kind))},
              {"converged", fe.converged},
              {"bracket_width", fe.bracket_width}};
}

Json to_json(const Thresholds& th) {
  Json j{{"regime", std::string(to_string(th.regime))},
         {"verdict", std::string(to_string(th.verdict))},
         {"explanation", th.explanation},
         {"c_crit", th.c_crit}};
  j["c_star"] = th.c_star_value ? Json(*th.c_star_value) : Json(nullptr);
  j["c_star_alternative"] = th.c_star_alternative_value ? Json(*th.c_star_alternative_value) : Json(nullptr);
  j["c_dc"] = th.c_dc_value ? Json(*th.c_dc_value) : Json(nullptr);
  return j;
}

Json to_json(const EnergyReport& r) {
  return Json{{"I", r.I},       {"P", r.P},       {"lambda", r.lambda},
              {"mass", r.mass}, {"grad", r.grad}, {"lq", r.lq},
              {"pde_residual", r.pde_residual}};
}

Json to_json(const FlowResult& r) {
  Json levels = Json::array();
  for (const auto& [seed, level] : r.seed_levels) levels.push_back(Json{{"seed", seed}, {"level", level}});
  return Json{{"level", r.level},
              {"termination", std::string(to_string(r.termination))},
              {"iterations", r.iterations},
              {"tau", r.tau},
              {"seed", r.seed},
              {"report", to_json(r.report)},
              {"seed_levels", levels}};
}

Json to_json(const SweepResult& s) {
  Json rows = Json::array();
  for (const SweepRow& row : s.rows) {
    rows.push_back(Json{{"b", row.b},
                        {"level", row.level},
                        {"lambda", row.lambda},
                        {"dist_to_b0", row.dist_to_b0},
                        {"termination", std::string(to_string(row.termination))},
                        {"error", row.error}});
  }
  return Json{{"rows", rows}, {"b0", to_json(s.b0)}};
}

void write_sweep_csv(const SweepResult& s, const fs::path& path) {
  std::ofstream os;
  open_for_write(os, path);
  os << "b,level,lambda,dist_to_b0,termination,error\n";
  for (const SweepRow& row : s.rows) {
    std::string err = row.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << num17(row.b) << ',' << num17(row.level) << ',' << num17(row.lambda) << ',' << num17(row.dist_to_b0)
       << ',' << to_string(row.termination) << ',' << err << '\n';
  }
}

std::string ground_state_key(double p, double q, const RadialGrid& grid, double tol) {
  return "Q_p" + num17(p) + "_q" + num17(q) + "_R" + num17(grid.radius()) + "_n" + std::to_string(grid.intervals()) +
         "_tol" + num17(tol);
}

void store_ground_state(const fs::path& dir, const GroundState& gs) {
  const std::string key = ground_state_key(gs.p, gs.q, gs.profile.grid(), gs.tol);
  save_profile(gs.profile, dir / (key + ".csv"));
  write_json(to_json(gs), dir / (key + ".json"));
}

std::optional<GroundState> load_cached_ground_state(const fs::path& dir, double p, double q, const RadialGrid& grid,
                                                    double tol) {
  const std::string key = ground_state_key(p, q, grid, tol);
  const fs::path csv = dir / (key + ".csv"), side = dir / (key + ".json");
  if (!fs::exists(csv) || !fs::exists(side)) return std::nullopt;
  Json j;
  try {
    std::ifstream is(side);
    j = Json::parse(is);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  // Exact key match; the file name alone could collide after rounding.
  if (j.value("p", 0.0) != p || j.value("q", 0.0) != q || j.value("tol", 0.0) != tol ||
      j.value("R", 0.0) != grid.radius() || j.value("n", std::size_t{0}) != grid.intervals()) {
    return std::nullopt;
  }
  RadialProfile prof = load_profile(csv);
  if (!(prof.grid() == grid)) return std::nullopt;
  const ProfileNorms nm = compute_norms(prof, p, q);
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
  const Json& js = j.at("norms");
  if (!close(nm.mass_pp, js.at("mass_pp").get<double>()) || !close(nm.grad_pp, js.at("grad_pp").get<double>()) ||
      !close(nm.lq_q, js.at("lq_q").get<double>())) {
    return std::nullopt;
  }
  GroundState gs{.p = p,
                 .q = q,
                 .tol = tol,
                 .profile = RadialProfile(grid, std::vector<double>(prof.values().begin(), prof.values().end()), p, q),
                 .s0 = j.at("s0").get<double>(),
                 .s0_rebound = j.at("s0_rebound").get<double>(),
                 .s0_crossing = j.at("s0_crossing").get<double>(),
                 .cut_radius = j.at("cut_radius").get<double>(),
                 .norms = nm,
                 .coef = ground_state_coefficients(p, q),
                 .residuals = {}};
  const Json& jr = j.at("residuals");
  gs.residuals.grad_vs_mass = jr.at("grad_vs_mass").get<double>();
  gs.residuals.mass_vs_lq = jr.at("mass_vs_lq").get<double>();
  gs.residuals.ode = jr.at("ode").get<double>();
  return gs;
}

GroundState cached_ground_state(const fs::path& dir, double p, double q, double tol,
                                const std::optional<RadialGrid>& grid) {
  const RadialGrid g = grid ? *grid : default_ground_state_grid(p, q);
  if (!dir.empty()) {
    if (auto hit = load_cached_ground_state(dir, p, q, g, tol)) return std::move(*hit);
  }
  GroundState gs = compute_ground_state(p, q, tol, g);
  if (!dir.empty()) store_ground_state(dir, gs);
  return gs;
}

}  // namespace pkirch::io
