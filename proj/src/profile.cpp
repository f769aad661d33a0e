#include "pdpml/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace pdpml {

void GridConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (n_p < 0) throw std::invalid_argument("n_p must be nonnegative");
  if (p < 1) throw std::invalid_argument("p must be positive");
}

bool PMLProfile::is_zero() const {
  for (const auto& s : sigma)
    for (double v : s)
      if (v != 0.0) return false;
  return true;
}

void PMLProfile::validate() const {
  for (const auto& s : sigma) {
    if (static_cast<int>(s.size()) != grid.n_p)
      throw std::invalid_argument("profile depth must equal n_p");
    for (double v : s)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("damping coefficients must be finite and nonnegative");
  }
  if (grid.n_p == 0 && !is_zero()) throw std::invalid_argument("damping requires n_p >= 1");
}

PMLProfile build_profile(const GridConfig& grid, double sigma0) {
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
    throw std::invalid_argument("sigma0 must be finite and nonnegative");
  if (grid.n_p == 0 && sigma0 > 0.0) throw std::invalid_argument("damping requires n_p >= 1");
  return build_profile(grid, std::vector<double>(grid.n_p, sigma0));
}

PMLProfile build_profile(const GridConfig& grid, const std::vector<double>& sigma_by_depth) {
  PMLProfile prof;
  prof.grid = grid;
  prof.sigma = {sigma_by_depth, sigma_by_depth};
  prof.validate();
  return prof;
}

complex eta_factor(double sigma, double omega, complex kappa, double h) {
  if (omega == 0.0) throw std::domain_error("eta requires a nonzero frequency");
  const complex I(0.0, 1.0);
  const complex s = I * (sigma / omega);
  const complex num = 2.0 + s * (1.0 - std::exp(-I * kappa * h));
  const complex den = 2.0 + s * (1.0 - std::exp(I * kappa * h));
  if (den == 0.0) throw std::domain_error("eta factor has a vanishing denominator");
  return num / den;
}

complex eta(int j, const std::vector<double>& sigma_axis, double omega, complex kappa, double h) {
  if (j < 0 || j > static_cast<int>(sigma_axis.size()))
    throw std::out_of_range("eta depth outside the profile");
  complex e(1.0, 0.0);
  for (int l = 0; l < j; ++l) e *= eta_factor(sigma_axis[l], omega, kappa, h);
  return e;
}

complex decay_rate_mu(const WaveMode& mode, double sigma0, double h) {
  return eta_factor(sigma0, mode.omega, mode.kappa[0], h);
}

}  // namespace pdpml
