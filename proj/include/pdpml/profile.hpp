#pragma once

#include "grid.hpp"

#include <array>
#include <vector>

namespace pdpml {

/// Per-axis damping, sigma[a][l] for layer depth l in [0, n_p). Depth l sits
/// at node n + 1 + l on the right and -(n + 2 + l) on the left, so that
/// sigma_i = sigma_{-1-i}: mirror image about the face between nodes -1 and 0,
/// which is what maps the tilde equations onto the bar equations.
struct PMLProfile {
  GridConfig grid;
  std::array<std::vector<double>, 2> sigma;

  /// sigma^a at centred node index i (a = 0 for the first axis).
  double at(int axis, int i) const {
    const int d = (i < 0 ? -i - 1 : i) - grid.n - 1;
    if (d < 0 || d >= static_cast<int>(sigma[axis].size())) return 0.0;
    return sigma[axis][d];
  }
  bool is_zero() const;

  /// Throws std::invalid_argument on negative/non-finite entries or wrong depth.
  void validate() const;

  bool operator==(const PMLProfile&) const = default;
};

PMLProfile build_profile(const GridConfig& grid, double sigma0);
PMLProfile build_profile(const GridConfig& grid, const std::vector<double>& sigma_by_depth);

/// Time-harmonic mode exp(i(kappa . x - omega t)); Im kappa <= 0 admitted.
struct WaveMode {
  double omega = 1.0;
  std::array<complex, 2> kappa{};
};

/// Single-cell damping ratio [2 + i(s/w)(1 - e^{-i k h})] / [2 + i(s/w)(1 - e^{i k h})].
complex eta_factor(double sigma, double omega, complex kappa, double h);

/// prod_{l<j} eta_factor(sigma_l); j = 0 gives 1. Throws std::domain_error
/// on a vanishing denominator.
complex eta(int j, const std::vector<double>& sigma_axis, double omega, complex kappa, double h);

/// eta_factor(sigma0) on the first axis of the mode.
complex decay_rate_mu(const WaveMode& mode, double sigma0, double h);

}  // namespace pdpml
