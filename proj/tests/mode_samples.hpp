#pragma once

#include "pdpml/holomorphy.hpp"

#include <numbers>
#include <random>

namespace samples {

using pdpml::complex;

// sigma on l in [-48, 48], about 30% zeros, values up to 4/h
inline std::array<pdpml::StretchedCoordinate, 2> random_coordinates(std::mt19937& rng, double h,
                                                                     double omega) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::array<pdpml::StretchedCoordinate, 2> z;
  for (auto& c : z) {
    c.h = h;
    c.omega = omega;
    c.j0 = -48;
    c.sigma.resize(97);
    for (auto& s : c.sigma) s = U(rng) < 0.3 ? 0.0 : U(rng) * 4.0 / h;
  }
  return z;
}

// omega in +-[0.5, 100], Re kappa in (-pi/h, pi/h), Im kappa in [-5, 0]
inline pdpml::WaveMode random_mode(std::mt19937& rng, double h) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double pi = std::numbers::pi;
  pdpml::WaveMode m;
  m.omega = (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 99.5 * U(rng));
  for (auto& k : m.kappa) k = complex((2.0 * U(rng) - 1.0) * pi / h, -5.0 * U(rng));
  return m;
}

}  // namespace samples
