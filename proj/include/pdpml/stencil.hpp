#pragma once

#include "grid.hpp"
#include "kernel.hpp"

#include <cmath>
#include <iosfwd>
#include <vector>

namespace pdpml {

struct Tap {
  int k1;
  int k2;
  double a;
};

struct Stencil {
  int p = 0;
  double h = 0.0;
  Eigen::ArrayXXd a;  // a(k1 + p, k2 + p)

  double operator()(int k1, int k2) const {
    if (std::abs(k1) > p || std::abs(k2) > p) return 0.0;
    return a(k1 + p, k2 + p);
  }
  double center() const { return a(p, p); }

  /// Nonzero coefficients, lexicographic in (k1, k2).
  std::vector<Tap> taps() const;
};

/// Smallest admissible stencil radius for the kernel at mesh size h (at least 1).
int required_radius(const KernelSpec& spec, double h);

/// Quadrature-based coefficients a_k = (1/W(x_k)) int phi_k W gamma dz.
/// Off-origin cells use tensor Gauss-Legendre of order quad_order, fitted to
/// the disk boundary; the four cells at the origin use polar coordinates with
/// polar_order points per direction and per angular piece.
Stencil compute_stencil(const KernelSpec& spec, const GridConfig& grid,
                        int quad_order = 8, int polar_order = 64);

/// sum_k a_k u_{i+k} at node (i1, i2), summed over taps() in order.
template <typename Scalar>
Scalar apply_operator(const Field<Scalar>& u, const Stencil& st, int i1, int i2) {
  Scalar s(0);
  for (const Tap& t : st.taps()) s += t.a * read(u, i1 + t.k1, i2 + t.k2);
  return s;
}

/// Whole-field version; per-node results are bitwise equal to the single-node one.
template <typename Scalar>
Field<Scalar> apply_operator(const Field<Scalar>& u, const Stencil& st);

/// omega^2(kappa) of the semi-discrete wave equation; accepts complex wave numbers.
template <typename Scalar>
Scalar dispersion_omega2(const Stencil& st, Scalar kappa1, Scalar kappa2) {
  using std::cos;
  const double h = st.h;
  Scalar s = Scalar(st.center());
  for (int k = 1; k <= st.p; ++k)
    s += 2.0 * st(k, 0) * (cos(double(k) * kappa1 * h) + cos(double(k) * kappa2 * h));
  for (int k1 = 1; k1 <= st.p; ++k1)
    for (int k2 = 1; k2 <= st.p; ++k2)
      s += 4.0 * st(k1, k2) * cos(double(k1) * kappa1 * h) * cos(double(k2) * kappa2 * h);
  return -s;
}

/// d omega^2 / d kappa_1 (use swapped arguments for kappa_2).
template <typename Scalar>
Scalar dispersion_omega2_dk1(const Stencil& st, Scalar kappa1, Scalar kappa2) {
  using std::cos;
  using std::sin;
  const double h = st.h;
  Scalar s(0);
  for (int k = 1; k <= st.p; ++k) s += 2.0 * st(k, 0) * double(k) * h * sin(double(k) * kappa1 * h);
  for (int k1 = 1; k1 <= st.p; ++k1)
    for (int k2 = 1; k2 <= st.p; ++k2)
      s += 4.0 * st(k1, k2) * double(k1) * h * sin(double(k1) * kappa1 * h) *
           cos(double(k2) * kappa2 * h);
  return s;
}

/// Largest omega^2 on an m x m sample of [0, pi/h]^2 (corner included).
/// Worker threads for the field sweeps; n <= 0 restores the default (all cores).
/// Results do not depend on the count.
void set_threads(int n);
int threads();

double max_omega2(const Stencil& st, int m = 64);

/// Largest group speed |grad omega| on an m x m sample of (0, pi/h]^2.
double max_group_speed(const Stencil& st, int m = 128);

/// CSV with header k1,k2,a over all (2p+1)^2 offsets.
void write_stencil_csv(std::ostream& os, const Stencil& st);

}  // namespace pdpml
