#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pkirch/radial.hpp"

namespace pkirch {

/// sum_k A_k (1 + B_k r^2) exp(-r^2 / w_k^2) with A_k in [-1, 1], B_k in
/// [0, 1], w_k in [0.5, 4]; smooth, radial, with u'(0) = 0.
RadialProfile random_radial_profile(const RadialGrid& grid, std::mt19937_64& rng, int terms = 3);

/// `count` profiles from one mt19937_64 stream seeded with `seed`.
std::vector<RadialProfile> random_radial_profiles(const RadialGrid& grid, std::size_t count, std::uint64_t seed);

/// c u / |u|_p.
RadialProfile normalized_to_mass(const RadialProfile& u, double p, double c);

}  // namespace pkirch
