#pragma once

// Profile CSV, JSON records and the on-disk ground-state cache.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "pkirch/flow.hpp"
#include "pkirch/ground_state.hpp"
#include "pkirch/params.hpp"
#include "pkirch/radial.hpp"
#include "pkirch/scalar.hpp"
#include "pkirch/variational.hpp"

namespace pkirch::io {

using Json = nlohmann::ordered_json;

/// `r,u` header, one node per line, 17 significant digits.
void save_profile(const RadialProfile& u, const std::filesystem::path& path);
/// Inverse of save_profile. The grid is rebuilt from the last radius and the
/// node count; non-uniform radii are rejected. Throws ParseError naming the
/// 1-based line.
RadialProfile load_profile(const std::filesystem::path& path);

/// Doubles as %.17e so that equal runs give byte-identical files; keys keep
/// insertion order.
std::string dump(const Json& j);
void write_json(const Json& j, const std::filesystem::path& path);

Json to_json(const Params& prm);
Json to_json(const ProfileNorms& nm);
Json to_json(const GroundState& gs);
Json to_json(const FiberExtremum& fe);
Json to_json(const Thresholds& th);
Json to_json(const EnergyReport& r);
Json to_json(const FlowResult& r);
Json to_json(const SweepResult& s);

/// Columns b, level, lambda, dist_to_b0 (plus termination and error).
void write_sweep_csv(const SweepResult& s, const std::filesystem::path& path);

/// Cache entry names for (p, q, R, n, tol).
std::string ground_state_key(double p, double q, const RadialGrid& grid, double tol);

/// Returns the cached ground state when every key field matches exactly and
/// the recomputed norms agree with the sidecar to 1e-12; nullopt otherwise.
std::optional<GroundState> load_cached_ground_state(const std::filesystem::path& dir, double p, double q,
                                                    const RadialGrid& grid, double tol);
void store_ground_state(const std::filesystem::path& dir, const GroundState& gs);

/// compute_ground_state through the cache (an empty dir disables it).
GroundState cached_ground_state(const std::filesystem::path& dir, double p, double q, double tol,
                                const std::optional<RadialGrid>& grid = std::nullopt);

}  // namespace pkirch::io
