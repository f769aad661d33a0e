#pragma once

#include <variant>

namespace pdpml {

enum class GammaBar { Heaviside, PiecewiseLinear, Gaussian };

struct GaussianKernel {
  double epsilon = 0.0;
  bool operator==(const GaussianKernel&) const = default;
};

/// c * gamma_bar(r) / r^(2+2s) on r <= delta.
struct BoundedSingularKernel {
  double delta = 0.0;
  double s = 0.0;
  GammaBar gamma_bar = GammaBar::Heaviside;
  bool operator==(const BoundedSingularKernel&) const = default;
};

/// 4 / (pi delta^2 r^2) on r <= delta.
struct HeavisideOverR2Kernel {
  double delta = 0.0;
  bool operator==(const HeavisideOverR2Kernel&) const = default;
};

struct KernelSpec {
  std::variant<GaussianKernel, BoundedSingularKernel, HeavisideOverR2Kernel> family;
  double cutoff = 1e-7;  // only used by the Gaussian family

  bool operator==(const KernelSpec&) const = default;
};

// Every family is scaled so that the second moment int gamma z_1^2 dz is 2,
// i.e. the local limit of the operator is the Laplacian.

/// Gaussian epsilon whose cutoff radius equals delta.
double gaussian_epsilon_for_horizon(double delta, double cutoff = 1e-7);

/// Radius beyond which gamma is zero. Zero for an identically vanishing kernel.
double effective_horizon(const KernelSpec& spec);

/// Exponent s of the r^(-2-2s) singularity; 0 for the Gaussian family.
double singularity_order(const KernelSpec& spec);

/// Throws std::invalid_argument on inadmissible parameters (s >= 1/2 etc).
void validate(const KernelSpec& spec);

/// gamma(r). Throws std::domain_error for r < 0. Singular families return +inf at 0.
double eval_kernel(const KernelSpec& spec, double r);

/// W(z) = |z|^2 / |z|_1. Throws std::domain_error at z = 0.
double weight(double z1, double z2);

}  // namespace pdpml
