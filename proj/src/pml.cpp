#include "pdpml/pml.hpp"

#include <stdexcept>
#include <string>

namespace pdpml {

std::vector<Box> slab_boxes(const GridConfig& g, int axis) {
  const int m = g.half_width();
  if (g.n_p == 0) return {};
  if (axis == 0) return {{-m, -g.n - 1, -m, m}, {g.n + 1, m, -m, m}};
  return {{-m, m, -m, -g.n - 1}, {-m, m, g.n + 1, m}};
}

std::vector<Box> corner_boxes(const GridConfig& g) {
  const int m = g.half_width();
  if (g.n_p == 0) return {};
  const int lo = -m, lo_end = -g.n - 1, hi_start = g.n + 1, hi = m;
  return {{lo, lo_end, lo, lo_end}, {hi_start, hi, lo, lo_end},
          {lo, lo_end, hi_start, hi}, {hi_start, hi, hi_start, hi}};
}

template <typename Scalar>
AuxFields<Scalar> make_aux(const GridConfig& g) {
  AuxFields<Scalar> aux;
  aux.p = g.p;
  for (int a = 0; a < 2; ++a) {
    const auto boxes = slab_boxes(g, a);
    aux.tilde[a].assign(g.p, LayerField<Scalar>(boxes));
    aux.bar[a].assign(g.p, LayerField<Scalar>(boxes));
  }
  const auto cb = corner_boxes(g);
  for (auto& fam : aux.corner) fam.assign(g.p * g.p, LayerField<Scalar>(cb));
  return aux;
}

namespace {

void check_dims(const GridConfig& g, Eigen::Index rows, Eigen::Index cols, const Stencil& st,
                int aux_p) {
  if (rows != g.nodes() || cols != g.nodes())
    throw std::invalid_argument("field dimensions do not match the grid");
  if (st.p != g.p || aux_p != g.p)
    throw std::invalid_argument("stencil or auxiliary radius does not match the grid");
}

void check_k(int k, int p, const char* what) {
  if (k < 1 || k > p)
    throw std::out_of_range(std::string(what) + " index " + std::to_string(k) +
                            " outside [1, " + std::to_string(p) + "]");
}

// One-axis shifted-difference operator shared by the slab and corner families:
// tilde type  (tau_{k-1} - tau_{k+1}) F / 2h - (tau_1 + tau_0) S^k / 2 - sum (tau_{l+1} - tau_{l-1}) S^{k-l} / 2
// bar type    (tau_{-k} - tau_{-k+2}) F / 2h - (tau_0 + tau_{-1}) S^k / 2 - sum (tau_{-l-1} - tau_{-l+1}) S^{k-l} / 2
// with S^m(j) = sigma^axis(j) X^m(j).
template <typename Scalar, typename Drive, typename Hist>
Scalar shifted_rhs(bool tilde, int k, double h, Drive&& F, Hist&& S) {
  Scalar d;
  if (tilde) {
    d = (F(k - 1) - F(k + 1)) / (2.0 * h) - (S(k, 1) + S(k, 0)) / 2.0;
    for (int l = 1; l < k; ++l) d -= (S(k - l, l + 1) - S(k - l, l - 1)) / 2.0;
  } else {
    d = (F(-k) - F(-k + 2)) / (2.0 * h) - (S(k, 0) + S(k, -1)) / 2.0;
    for (int l = 1; l < k; ++l) d -= (S(k - l, -l - 1) - S(k - l, -l + 1)) / 2.0;
  }
  return d;
}

template <typename Scalar>
LayerField<Scalar> slab_rhs(bool tilde, const Field<Scalar>& u, const AuxFields<Scalar>& aux,
                            const Stencil& st, const PMLProfile& prof, int axis, int k) {
  const GridConfig& g = prof.grid;
  check_dims(g, u.rows(), u.cols(), st, aux.p);
  check_k(k, g.p, tilde ? "tilde family" : "bar family");
  if (axis != 0 && axis != 1) throw std::out_of_range("axis must be 0 or 1");

  LayerField<Scalar> out(slab_boxes(g, axis));
  const auto& fam = tilde ? aux.tilde[axis] : aux.bar[axis];
  const int e1 = axis == 0, e2 = axis == 1;
  for (std::size_t b = 0; b < out.boxes().size(); ++b) {
    const Box& box = out.boxes()[b];
    for (int i2 = box.lo2; i2 <= box.hi2; ++i2)
      for (int i1 = box.lo1; i1 <= box.hi1; ++i1) {
        if (!slab_active(prof, axis, i1, i2)) continue;
        auto F = [&](int d) { return read(u, i1 + d * e1, i2 + d * e2); };
        auto S = [&](int m, int d) {
          const int j1 = i1 + d * e1, j2 = i2 + d * e2;
          const double s = prof.at(axis, axis == 0 ? j1 : j2);
          return s == 0.0 ? Scalar(0) : s * fam[m - 1](j1, j2);
        };
        out.data()[b](i1 - box.lo1, i2 - box.lo2) = shifted_rhs<Scalar>(tilde, k, st.h, F, S);
      }
  }
  return out;
}

}  // namespace

template <typename Scalar>
LayerField<Scalar> aux_rhs_tilde(const Field<Scalar>& u, const AuxFields<Scalar>& aux,
                                 const Stencil& st, const PMLProfile& prof, int axis, int k) {
  return slab_rhs(true, u, aux, st, prof, axis, k);
}

template <typename Scalar>
LayerField<Scalar> aux_rhs_bar(const Field<Scalar>& u, const AuxFields<Scalar>& aux,
                               const Stencil& st, const PMLProfile& prof, int axis, int k) {
  return slab_rhs(false, u, aux, st, prof, axis, k);
}

template <typename Scalar>
LayerField<Scalar> corner_rhs(const AuxFields<Scalar>& aux, const Stencil& st,
                              const PMLProfile& prof, Corner which, int k1, int k2) {
  const GridConfig& g = prof.grid;
  if (st.p != g.p || aux.p != g.p)
    throw std::invalid_argument("stencil or auxiliary radius does not match the grid");
  check_k(k1, g.p, "corner k1");
  check_k(k2, g.p, "corner k2");

  const bool drive_tilde = which == Corner::TT || which == Corner::TB;
  const bool shift_tilde = which == Corner::TT || which == Corner::BT;
  const auto& drive = aux.slab(drive_tilde, 1, k2);

  LayerField<Scalar> out(corner_boxes(g));
  for (std::size_t b = 0; b < out.boxes().size(); ++b) {
    const Box& box = out.boxes()[b];
    for (int i2 = box.lo2; i2 <= box.hi2; ++i2)
      for (int i1 = box.lo1; i1 <= box.hi1; ++i1) {
        if (!corner_active(prof, i1, i2)) continue;
        auto F = [&](int d) { return drive(i1 + d, i2); };
        auto S = [&](int m, int d) {
          const double s = prof.at(0, i1 + d);
          return s == 0.0 ? Scalar(0) : s * aux.at(which, m, k2)(i1 + d, i2);
        };
        out.data()[b](i1 - box.lo1, i2 - box.lo2) =
            shifted_rhs<Scalar>(shift_tilde, k1, st.h, F, S);
      }
  }
  return out;
}

template <typename Scalar>
Field<Scalar> main_rhs(const Field<Scalar>& u, const AuxFields<Scalar>& aux, const Stencil& st,
                       const PMLProfile& prof) {
  const GridConfig& g = prof.grid;
  check_dims(g, u.rows(), u.cols(), st, aux.p);
  const int p = st.p;
  const double h = st.h;

  Field<Scalar> out = apply_operator(u, st);
  if (g.n_p == 0) return out;

  const int M = g.half_width();
  auto deposit = [&](int i1, int i2, Scalar v) {
    if (i1 < -M || i1 > M || i2 < -M || i2 > M) return;
    out(i1 + M, i2 + M) += v;
  };

  // one-axis and cross-axis terms, scattered from each damped slab node
  for (int axis = 0; axis < 2; ++axis) {
    const int e1 = axis == 0, e2 = axis == 1;
    auto coef = [&](int ka, int q) { return axis == 0 ? st(ka, q) : st(q, ka); };
    for (int tilde = 1; tilde >= 0; --tilde) {
      for (int m = 1; m <= p; ++m) {
        const auto& f = aux.slab(tilde, axis, m);
        for (std::size_t b = 0; b < f.boxes().size(); ++b) {
          const Box& box = f.boxes()[b];
          for (int s2 = box.lo2; s2 <= box.hi2; ++s2)
            for (int s1 = box.lo1; s1 <= box.hi1; ++s1) {
              const double sig = prof.at(axis, axis == 0 ? s1 : s2);
              if (sig == 0.0) continue;
              const Scalar v = sig * f.data()[b](s1 - box.lo1, s2 - box.lo2);
              if (v == Scalar(0)) continue;
              for (int l = 0; l <= p - m; ++l)
                for (int q = -p; q <= p; ++q) {
                  const double a = coef(l + m, q);
                  if (a == 0.0) continue;
                  // tilde read at i + l e_a + q e_b, bar read at i - (l+1) e_a + q e_b
                  const int d = tilde ? -l : l + 1;
                  deposit(s1 + d * e1 - q * e2, s2 + d * e2 - q * e1,
                          (tilde ? h : -h) * a * v);
                }
            }
        }
      }
    }
  }

  // corner terms
  const double h2 = h * h;
  for (int c = 0; c < 4; ++c) {
    const Corner which = static_cast<Corner>(c);
    const bool tilde1 = which == Corner::TT || which == Corner::BT;  // axis-1 shift type
    const bool tilde2 = which == Corner::TT || which == Corner::TB;  // axis-2 shift type
    const double sign = (tilde1 == tilde2) ? 1.0 : -1.0;
    for (int ka = 1; ka <= p; ++ka)
      for (int kb = 1; kb <= p; ++kb) {
        const auto& f = aux.at(which, ka, kb);
        for (std::size_t b = 0; b < f.boxes().size(); ++b) {
          const Box& box = f.boxes()[b];
          for (int s2 = box.lo2; s2 <= box.hi2; ++s2)
            for (int s1 = box.lo1; s1 <= box.hi1; ++s1) {
              const double sig = prof.at(0, s1) * prof.at(1, s2);
              if (sig == 0.0) continue;
              const Scalar v = sig * f.data()[b](s1 - box.lo1, s2 - box.lo2);
              if (v == Scalar(0)) continue;
              for (int l = 0; l <= p - ka; ++l)
                for (int m = 0; m <= p - kb; ++m) {
                  const double a = st(l + ka, m + kb);
                  if (a == 0.0) continue;
                  const int d1 = tilde1 ? -l : l + 1;
                  const int d2 = tilde2 ? -m : m + 1;
                  deposit(s1 + d1, s2 + d2, sign * h2 * a * v);
                }
            }
        }
      }
  }
  return out;
}

#define PDPML_INSTANTIATE(S)                                                                   \
  template AuxFields<S> make_aux<S>(const GridConfig&);                                        \
  template Field<S> main_rhs(const Field<S>&, const AuxFields<S>&, const Stencil&,             \
                             const PMLProfile&);                                               \
  template LayerField<S> aux_rhs_tilde(const Field<S>&, const AuxFields<S>&, const Stencil&,   \
                                       const PMLProfile&, int, int);                           \
  template LayerField<S> aux_rhs_bar(const Field<S>&, const AuxFields<S>&, const Stencil&,     \
                                     const PMLProfile&, int, int);                             \
  template LayerField<S> corner_rhs(const AuxFields<S>&, const Stencil&, const PMLProfile&,    \
                                    Corner, int, int);

PDPML_INSTANTIATE(double)
PDPML_INSTANTIATE(complex)

}  // namespace pdpml
