#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "pkirch/error.hpp"
#include "pkirch/io.hpp"

using namespace pkirch;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pkirch_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

std::string parse_error_of(const fs::path& path) {
  try {
    io::load_profile(path);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("profile round trip is exact") {
  const fs::path dir = scratch_dir("roundtrip");
  const RadialProfile u =
      RadialProfile::from_function(RadialGrid(7.3, 64), [](double r) { return std::sin(3 * r) / (1 + r * r); });
  io::save_profile(u, dir / "u.csv");
  const RadialProfile v = io::load_profile(dir / "u.csv");
  CHECK(v.grid() == u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == u[i]);
}

TEST_CASE("malformed profiles name the line") {
  const fs::path dir = scratch_dir("bad");
  write_text(dir / "header.csv", "x,y\n0,1\n");
  CHECK(parse_error_of(dir / "header.csv").find("line 1:") != std::string::npos);

  std::string body = "r,u\n";
  for (int i = 0; i <= 16; ++i) body += std::to_string(i * 0.5) + "," + (i == 4 ? "abc" : "1.0") + "\n";
  write_text(dir / "number.csv", body);
  CHECK(parse_error_of(dir / "number.csv").find("line 6:") != std::string::npos);

  write_text(dir / "short.csv", "r,u\n0,1\n1,0\n");
  CHECK(parse_error_of(dir / "short.csv").find("too few nodes") != std::string::npos);

  body = "r,u\n";
  for (int i = 0; i <= 16; ++i) body += std::to_string(i == 7 ? 3.7 : i * 0.5) + ",1\n";
  write_text(dir / "uneven.csv", body);
  CHECK(parse_error_of(dir / "uneven.csv").find("line 9:") != std::string::npos);

  CHECK(parse_error_of(dir / "missing.csv").find("line 0:") != std::string::npos);
}

TEST_CASE("json dump prints full-precision doubles and null for non-finite") {
  io::Json j;
  j["x"] = 0.1;
  j["bad"] = std::nan("");
  j["n"] = 3;
  j["list"] = io::Json::array({1.5});
  const std::string s = io::dump(j);
  CHECK(s.find("\"x\": 1.00000000000000006e-01") != std::string::npos);
  CHECK(s.find("\"bad\": null") != std::string::npos);
  CHECK(s.find("\"n\": 3") != std::string::npos);
  CHECK(io::Json::parse(s)["x"].get<double>() == 0.1);
  CHECK(io::dump(j) == s);
}

TEST_CASE("records carry the expected keys") {
  const Params prm = make_params(1, 1, 2, 4, 1);
  const io::Json j = io::to_json(prm);
  CHECK(j["regime"] == "Intermediate");
  CHECK(j["e2"].get<double>() == prm.e2);
}

TEST_CASE("ground-state cache") {
  const fs::path dir = scratch_dir("cache");
  const RadialGrid grid = default_ground_state_grid(2.0, 3.0);
  CHECK_FALSE(io::load_cached_ground_state(dir, 2.0, 3.0, grid, 1e-10).has_value());

  const GroundState gs = io::cached_ground_state(dir, 2.0, 3.0, 1e-10);
  const std::string key = io::ground_state_key(2.0, 3.0, grid, 1e-10);
  REQUIRE(fs::exists(dir / (key + ".csv")));
  REQUIRE(fs::exists(dir / (key + ".json")));

  const auto hit = io::load_cached_ground_state(dir, 2.0, 3.0, grid, 1e-10);
  REQUIRE(hit.has_value());
  CHECK(hit->s0 == gs.s0);
  CHECK(hit->norms.mass_pp == doctest::Approx(gs.norms.mass_pp).epsilon(1e-12));
  for (std::size_t i = 0; i < gs.profile.size(); i += 97) CHECK(hit->profile[i] == gs.profile[i]);

  // A different key misses.
  CHECK_FALSE(io::load_cached_ground_state(dir, 2.0, 3.0, grid, 1e-9).has_value());
  CHECK_FALSE(io::load_cached_ground_state(dir, 2.0, 3.0, grid.refined(), 1e-10).has_value());

  // A tampered profile no longer matches the sidecar norms.
  std::ifstream is(dir / (key + ".csv"));
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  is.close();
  const auto second = text.find('\n', text.find('\n') + 1);
  text.replace(text.find(',', second) + 1, 1, "9");
  write_text(dir / (key + ".csv"), text);
  CHECK_FALSE(io::load_cached_ground_state(dir, 2.0, 3.0, grid, 1e-10).has_value());
}

TEST_CASE("sweep csv header") {
  const fs::path dir = scratch_dir("sweep");
  SweepResult s;
  s.rows.push_back(SweepRow{.b = 0.5, .level = 1.0, .lambda = -2.0, .dist_to_b0 = 0.1,
                            .termination = Termination::Converged, .error = "a,b"});
  io::write_sweep_csv(s, dir / "s.csv");
  std::ifstream is(dir / "s.csv");
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header == "b,level,lambda,dist_to_b0,termination,error");
  CHECK(row == "0.5,1,-2,0.10000000000000001,Converged,a;b");
}
