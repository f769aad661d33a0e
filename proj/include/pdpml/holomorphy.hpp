#pragma once

#include "pml.hpp"
#include "profile.hpp"
#include "stencil.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace pdpml {

/// z_{i,j} = (i+j) h + i (h/omega) S_j with S_j the signed partial sums of
/// sigma_l (S_0 = 0). sigma is stored for l in [j0, j0 + size) and zero elsewhere.
struct StretchedCoordinate {
  double h = 0.0;
  double omega = 1.0;
  int j0 = 0;
  std::vector<double> sigma;

  double sigma_at(int j) const {
    const int l = j - j0;
    return (l >= 0 && l < static_cast<int>(sigma.size())) ? sigma[l] : 0.0;
  }
  complex z(int i, int j) const;
  /// z_{i+1,j+1} - z_{i,j} = 2h + i (h/omega) sigma_j
  complex diagonal(int j) const { return complex(2.0 * h, h * sigma_at(j) / omega); }
};

/// 1-axis extension f(i, j) = eta(j) e^{i kappa (i + j) h}, tabulated for
/// |i|, |j| <= range. eta(j) for j < 0 is the inverse telescoping product.
class AxisExtension {
 public:
  AxisExtension(const StretchedCoordinate& coord, complex kappa, int range);
  complex operator()(int i, int j) const;
  complex eta(int j) const { return eta_[j + range_]; }
  const StretchedCoordinate& coord() const { return coord_; }
  complex kappa() const { return kappa_; }
  int range() const { return range_; }

 private:
  StretchedCoordinate coord_;
  complex kappa_;
  int range_;
  std::vector<complex> eta_, phase_;
};

/// w_{i,j} = prod_a f_a(i_a, j_a); index order (i1, i2, j1, j2).
struct ExtendedMode {
  double omega = 1.0;
  std::array<AxisExtension, 2> axes;
  complex operator()(int i1, int i2, int j1, int j2) const {
    return axes[0](i1, j1) * axes[1](i2, j2);
  }
};

ExtendedMode make_extended_mode(const WaveMode& mode, const std::array<StretchedCoordinate, 2>& z,
                                int range);

/// Square window of base indices [lo, lo + size).
struct Window {
  int lo = 0;
  int size = 16;
  bool operator==(const Window&) const = default;
};

/// Cross-multiplied discrete Cauchy-Riemann residual of axis `axis` over the
/// (i, j) faces of the window, scaled by max|f| max|dz|.
double cauchy_riemann_residual(const ExtendedMode& mode, int axis, const Window& w);

enum class Identity { TauMinusK, TauPlusK, TauD, TauTau, TildePsi };

/// Sub-selection inside an identity family.
struct IdentityParams {
  int k = 1;        // shift for TauMinusK/TauPlusK/TauD/TildePsi
  int k1 = 1, k2 = 1;  // TauTau shifts
  int axis = 0;     // alpha
  int beta = 1;     // TauD derivative axis
  bool minus = true;  // TauD/TildePsi: tau_{-k} form; TauTau: see tautau_form
  int tautau_form = 0;  // 0: (-,-)  1: (+,+)  2: (-alpha, +beta)
  bool as_printed = true;  // false selects the index-consistent variant
};

struct IdentityResult {
  double residual = 0.0;
  std::string variant;  // which form was evaluated
};

/// Max relative residual of the selected shift identity on the window.
IdentityResult proposition_identity_check(const ExtendedMode& mode, Identity which,
                                          const IdentityParams& params, const Window& w);

/// D_a (tau^b_k f) against tau^b_k (D_a f), max relative difference.
double commutation_residual(const ExtendedMode& mode, int axis, int shift_axis, int k,
                            const Window& w);

/// Node box [lo1, hi1] x [lo2, hi2] where the PML system is checked.
struct NodeWindow {
  int lo1, hi1, lo2, hi2;
};

/// Window on the side where the mode decays (or any side when sigma = 0),
/// kept clear of the opposite layer and of the truncation.
NodeWindow decaying_window(const WaveMode& mode, const PMLProfile& prof, const Stencil& st);

struct TheoremReport {
  double main = 0.0, tilde = 0.0, bar = 0.0, corner = 0.0;
  double max() const;
};

/// Frequency-domain residual of the full PML system for the extended mode.
/// Throws std::invalid_argument when the mode is off the dispersion relation.
TheoremReport theorem_residual(const WaveMode& mode, const PMLProfile& prof, const Stencil& st,
                               const NodeWindow& window);

/// Complex kappa_1 with Im < 0 solving omega^2(kappa_1, kappa_2) = omega^2.
complex solve_evanescent_kappa1(const Stencil& st, double omega, double kappa2);

/// Frequency of a mode on the dispersion relation (kappa real), sign chosen by the caller.
double dispersion_frequency(const Stencil& st, double kappa1, double kappa2);

struct VerifyRow {
  std::string check;
  double omega;
  complex kappa1, kappa2;
  double residual;
};

void write_verify_csv(std::ostream& os, const std::vector<VerifyRow>& rows);

}  // namespace pdpml
