#pragma once

#include <Eigen/Dense>

#include <complex>

namespace pdpml {

using complex = std::complex<double>;

/// Node-centred field over the truncated grid, stored as f(i1 + M, i2 + M)
/// with M = n + n_p. Values outside the array are zero (Dirichlet).
template <typename Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealField = Field<double>;
using ComplexField = Field<complex>;

struct GridConfig {
  double h = 0.0;
  int n = 0;    // physical nodes satisfy |i_a| <= n
  int n_p = 0;  // layer thickness in cells
  int p = 0;    // stencil radius in cells

  int half_width() const { return n + n_p; }
  int nodes() const { return 2 * half_width() + 1; }
  int offset(int i) const { return i + half_width(); }

  bool on_grid(int i1, int i2) const {
    const int m = half_width();
    return i1 >= -m && i1 <= m && i2 >= -m && i2 <= m;
  }
  bool in_physical(int i1, int i2) const {
    return i1 >= -n && i1 <= n && i2 >= -n && i2 <= n;
  }

  // throws std::invalid_argument
  void validate() const;

  bool operator==(const GridConfig&) const = default;
};

template <typename Scalar>
Field<Scalar> zero_field(const GridConfig& g) {
  return Field<Scalar>::Zero(g.nodes(), g.nodes());
}

/// Read with the Dirichlet convention; (i1, i2) are centred indices.
template <typename Scalar>
inline Scalar read(const Field<Scalar>& f, int i1, int i2) {
  const int m = static_cast<int>(f.rows() - 1) / 2;
  if (i1 < -m || i1 > m || i2 < -m || i2 > m) return Scalar(0);
  return f(i1 + m, i2 + m);
}

}  // namespace pdpml
