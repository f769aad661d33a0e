#pragma once

#include "layer_field.hpp"
#include "profile.hpp"
#include "stencil.hpp"

#include <array>

namespace pdpml {

/// Corner families; the first letter is the axis-2 family (tilde/bar slab
/// field that drives it), the second the axis-1 shift type.
enum class Corner { TT = 0, TB = 1, BT = 2, BB = 3 };

/// All auxiliary families. Slab families tilde[a][k-1], bar[a][k-1]; corner
/// families corner[c][(k1-1) p + (k2-1)].
template <typename Scalar>
struct AuxFields {
  int p = 0;
  std::array<std::vector<LayerField<Scalar>>, 2> tilde, bar;
  std::array<std::vector<LayerField<Scalar>>, 4> corner;

  LayerField<Scalar>& slab(bool is_tilde, int axis, int k) {
    return (is_tilde ? tilde : bar)[axis][k - 1];
  }
  const LayerField<Scalar>& slab(bool is_tilde, int axis, int k) const {
    return (is_tilde ? tilde : bar)[axis][k - 1];
  }
  LayerField<Scalar>& at(Corner c, int k1, int k2) {
    return corner[static_cast<int>(c)][(k1 - 1) * p + (k2 - 1)];
  }
  const LayerField<Scalar>& at(Corner c, int k1, int k2) const {
    return corner[static_cast<int>(c)][(k1 - 1) * p + (k2 - 1)];
  }

  template <typename F>
  void for_each(F&& f) {
    for (auto& fam : tilde)
      for (auto& x : fam) f(x);
    for (auto& fam : bar)
      for (auto& x : fam) f(x);
    for (auto& fam : corner)
      for (auto& x : fam) f(x);
  }
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& fam : tilde)
      for (const auto& x : fam) f(x);
    for (const auto& fam : bar)
      for (const auto& x : fam) f(x);
    for (const auto& fam : corner)
      for (const auto& x : fam) f(x);
  }
  bool is_zero() const {
    bool z = true;
    for_each([&](const LayerField<Scalar>& x) { z = z && x.is_zero(); });
    return z;
  }
};

/// Zero auxiliaries with slab and corner geometry for the grid.
template <typename Scalar>
AuxFields<Scalar> make_aux(const GridConfig& g);

/// Nodes where a slab (axis) or corner family is allowed to be nonzero.
inline bool slab_active(const PMLProfile& prof, int axis, int i1, int i2) {
  return prof.at(axis, axis == 0 ? i1 : i2) > 0.0;
}
inline bool corner_active(const PMLProfile& prof, int i1, int i2) {
  return prof.at(0, i1) > 0.0 && prof.at(1, i2) > 0.0;
}

/// d^2 u / dt^2: L_h u plus the damping-weighted slab and corner sums.
template <typename Scalar>
Field<Scalar> main_rhs(const Field<Scalar>& u, const AuxFields<Scalar>& aux, const Stencil& st,
                       const PMLProfile& prof);

/// d/dt of tilde psi^{axis,k}; zero off the active slab nodes.
template <typename Scalar>
LayerField<Scalar> aux_rhs_tilde(const Field<Scalar>& u, const AuxFields<Scalar>& aux,
                                 const Stencil& st, const PMLProfile& prof, int axis, int k);

/// d/dt of bar psi^{axis,k}.
template <typename Scalar>
LayerField<Scalar> aux_rhs_bar(const Field<Scalar>& u, const AuxFields<Scalar>& aux,
                               const Stencil& st, const PMLProfile& prof, int axis, int k);

/// d/dt of a corner family at (k1, k2).
template <typename Scalar>
LayerField<Scalar> corner_rhs(const AuxFields<Scalar>& aux, const Stencil& st,
                              const PMLProfile& prof, Corner which, int k1, int k2);

}  // namespace pdpml
