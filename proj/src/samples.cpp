#include "pkirch/samples.hpp"

#include <cmath>

#include "pkirch/error.hpp"

namespace pkirch {

RadialProfile random_radial_profile(const RadialGrid& grid, std::mt19937_64& rng, int terms) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), bend(0.0, 1.0), width(0.5, 4.0);
  std::vector<double> A(terms), B(terms), W(terms);
  for (int k = 0; k < terms; ++k) {
    A[k] = amp(rng);
    B[k] = bend(rng);
    W[k] = width(rng);
  }
  return RadialProfile::from_function(grid, [&](double r) {
    double s = 0.0;
    for (int k = 0; k < terms; ++k) s += A[k] * (1.0 + B[k] * r * r) * std::exp(-r * r / (W[k] * W[k]));
    return s;
  });
}

std::vector<RadialProfile> random_radial_profiles(const RadialGrid& grid, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RadialProfile> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_radial_profile(grid, rng));
  return out;
}

RadialProfile normalized_to_mass(const RadialProfile& u, double p, double c) {
  const double m = lp_norm(u, p);
  if (!(m > 0.0)) throw Error(ErrorKind::ZeroFunction, "cannot normalize the zero function");
  return u.scaled(c / m);
}

}  // namespace pkirch
