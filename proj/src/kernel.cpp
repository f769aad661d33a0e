#include "pdpml/kernel.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pdpml {

namespace {

constexpr double pi = std::numbers::pi;

double gamma_bar_value(GammaBar g, double r, double delta) {
  switch (g) {
    case GammaBar::Heaviside:
      return 1.0;
    case GammaBar::PiecewiseLinear:
      return 1.0 - r / delta;
    case GammaBar::Gaussian: {
      const double q = 2.0 * r / delta;
      return std::exp(-q * q);
    }
  }
  return 0.0;
}

// int_0^delta gamma_bar(r) r^(1-2s) dr
double radial_moment(const BoundedSingularKernel& k) {
  const double e = 2.0 - 2.0 * k.s;
  switch (k.gamma_bar) {
    case GammaBar::Heaviside:
      return std::pow(k.delta, e) / e;
    case GammaBar::PiecewiseLinear:
      return std::pow(k.delta, e) / (e * (e + 1.0));
    case GammaBar::Gaussian: {
      // u = (2r/delta)^2 turns the integral into a lower incomplete gamma function
      const double half = 0.5 * k.delta;
      return 0.5 * std::pow(half, e) * boost::math::tgamma_lower(1.0 - k.s, 4.0);
    }
  }
  return 0.0;
}

double singular_scale(const BoundedSingularKernel& k) {
  return 2.0 / (pi * radial_moment(k));
}

struct HorizonVisitor {
  double cutoff;
  double operator()(const GaussianKernel& g) const {
    if (!(cutoff < 1.0)) return 0.0;
    return g.epsilon * std::sqrt(-std::log(cutoff));
  }
  double operator()(const BoundedSingularKernel& k) const { return k.delta; }
  double operator()(const HeavisideOverR2Kernel& k) const { return k.delta; }
};

}  // namespace

double gaussian_epsilon_for_horizon(double delta, double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw std::invalid_argument("cutoff must lie in (0, 1)");
  return delta / std::sqrt(-std::log(cutoff));
}

double effective_horizon(const KernelSpec& spec) {
  return std::visit(HorizonVisitor{spec.cutoff}, spec.family);
}

double singularity_order(const KernelSpec& spec) {
  if (const auto* k = std::get_if<BoundedSingularKernel>(&spec.family)) return k->s;
  return 0.0;
}

void validate(const KernelSpec& spec) {
  if (!(spec.cutoff > 0.0)) throw std::invalid_argument("kernel cutoff must be positive");
  if (const auto* g = std::get_if<GaussianKernel>(&spec.family)) {
    if (!(g->epsilon > 0.0) || !std::isfinite(g->epsilon))
      throw std::invalid_argument("gaussian epsilon must be positive");
  } else if (const auto* b = std::get_if<BoundedSingularKernel>(&spec.family)) {
    if (!(b->delta > 0.0) || !std::isfinite(b->delta))
      throw std::invalid_argument("kernel delta must be positive");
    if (!(b->s >= 0.0 && b->s < 0.5))
      throw std::invalid_argument("bounded singular kernel needs 0 <= s < 1/2");
  } else if (const auto* k = std::get_if<HeavisideOverR2Kernel>(&spec.family)) {
    if (!(k->delta > 0.0) || !std::isfinite(k->delta))
      throw std::invalid_argument("kernel delta must be positive");
  }
}

double eval_kernel(const KernelSpec& spec, double r) {
  if (!(r >= 0.0)) throw std::domain_error("kernel radius must be nonnegative");
  if (const auto* g = std::get_if<GaussianKernel>(&spec.family)) {
    const double x = r / g->epsilon;
    const double e = std::exp(-x * x);
    if (e < spec.cutoff) return 0.0;
    const double eps2 = g->epsilon * g->epsilon;
    return 4.0 / (pi * eps2 * eps2) * e;
  }
  if (const auto* b = std::get_if<BoundedSingularKernel>(&spec.family)) {
    if (r > b->delta) return 0.0;
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return singular_scale(*b) * gamma_bar_value(b->gamma_bar, r, b->delta) /
           std::pow(r, 2.0 + 2.0 * b->s);
  }
  const auto& k = std::get<HeavisideOverR2Kernel>(spec.family);
  if (r > k.delta) return 0.0;
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return 4.0 / (pi * k.delta * k.delta * r * r);
}

double weight(double z1, double z2) {
  const double l1 = std::abs(z1) + std::abs(z2);
  if (l1 == 0.0) throw std::domain_error("weight is undefined at z = 0");
  return (z1 * z1 + z2 * z2) / l1;
}

}  // namespace pdpml
