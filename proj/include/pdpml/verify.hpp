#pragma once

#include "holomorphy.hpp"

#include <random>
#include <vector>

namespace pdpml {

struct VerifySettings {
  int modes = 50;          // sampled modes for the lattice identities
  int theorem_modes = 20;  // dispersion-consistent modes for the full system
  unsigned seed = 1;
  Window window{-8, 16};
  int max_shift = 4;
  bool operator==(const VerifySettings&) const = default;
};

/// omega in +-[0.5, 100], Re kappa in (-pi/h, pi/h), Im kappa in [-5, 0].
WaveMode sample_mode(std::mt19937& rng, double h);

/// Damping on l in [-48, 48]: about 30% zeros, the rest uniform in (0, sigma_max].
std::array<StretchedCoordinate, 2> sample_coordinates(std::mt19937& rng, double h, double omega,
                                                      double sigma_max);

/// Per sampled mode: Cauchy-Riemann residual per axis and the max residual of
/// each shift-identity family over axes and shifts 1..max_shift.
std::vector<VerifyRow> identity_suite(double h, double sigma_max, const VerifySettings& s);

/// Theorem residual of the PML system for propagating and evanescent modes,
/// one row per mode.
std::vector<VerifyRow> theorem_suite(const Stencil& st, const PMLProfile& prof,
                                     const VerifySettings& s);

}  // namespace pdpml
