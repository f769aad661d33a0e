#include "pdpml/holomorphy.hpp"

#include "pdpml/format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace pdpml {

namespace {
const complex I(0.0, 1.0);
}

complex StretchedCoordinate::z(int i, int j) const {
  double s = 0.0;
  if (j > 0)
    for (int l = 0; l < j; ++l) s += sigma_at(l);
  else
    for (int l = j; l < 0; ++l) s -= sigma_at(l);
  return complex((i + j) * h, h / omega * s);
}

AxisExtension::AxisExtension(const StretchedCoordinate& coord, complex kappa, int range)
    : coord_(coord), kappa_(kappa), range_(range), eta_(2 * range + 1), phase_(4 * range + 1) {
  eta_[range] = 1.0;
  for (int j = 0; j < range; ++j)
    eta_[j + 1 + range] = eta_[j + range] * eta_factor(coord.sigma_at(j), coord.omega, kappa, coord.h);
  for (int j = -1; j >= -range; --j)
    eta_[j + range] = eta_[j + 1 + range] / eta_factor(coord.sigma_at(j), coord.omega, kappa, coord.h);
  for (int n = -2 * range; n <= 2 * range; ++n)
    phase_[n + 2 * range] = std::exp(I * kappa * (double(n) * coord.h));
}

complex AxisExtension::operator()(int i, int j) const {
  if (std::abs(j) > range_ || std::abs(i + j) > 2 * range_)
    throw std::out_of_range("extension evaluated outside its table");
  return eta_[j + range_] * phase_[i + j + 2 * range_];
}

ExtendedMode make_extended_mode(const WaveMode& mode, const std::array<StretchedCoordinate, 2>& z,
                                int range) {
  return ExtendedMode{mode.omega,
                      {AxisExtension(z[0], mode.kappa[0], range),
                       AxisExtension(z[1], mode.kappa[1], range)}};
}

double cauchy_riemann_residual(const ExtendedMode& mode, int axis, const Window& w) {
  const auto& ax = mode.axes[axis];
  const auto& z = ax.coord();
  double res = 0.0, fmax = 0.0, dzmax = 0.0;
  for (int i = w.lo; i < w.lo + w.size; ++i)
    for (int j = w.lo; j < w.lo + w.size; ++j) {
      const complex f00 = ax(i, j), f11 = ax(i + 1, j + 1), f01 = ax(i, j + 1), f10 = ax(i + 1, j);
      const complex z00 = z.z(i, j), z11 = z.z(i + 1, j + 1), z01 = z.z(i, j + 1), z10 = z.z(i + 1, j);
      res = std::max(res, std::abs((f11 - f00) * (z01 - z10) - (f01 - f10) * (z11 - z00)));
      fmax = std::max({fmax, std::abs(f00), std::abs(f11), std::abs(f01), std::abs(f10)});
      dzmax = std::max({dzmax, std::abs(z11 - z00), std::abs(z01 - z10)});
    }
  const double scale = fmax * dzmax;
  return scale == 0.0 ? res : res / scale;
}

namespace {

using Idx = std::array<int, 4>;  // i1, i2, j1, j2
using Fn = std::function<complex(const Idx&)>;

Idx tau(Idx x, int axis, int k) {
  x[axis] += k;
  return x;
}
Idx rho(Idx x, int axis, int k) {
  x[2 + axis] += k;
  return x;
}

struct Lattice {
  const ExtendedMode& m;
  double h() const { return m.axes[0].coord().h; }
  double sig(int axis, const Idx& x) const { return m.axes[axis].coord().sigma_at(x[2 + axis]); }
  Fn w() const {
    return [this](const Idx& x) { return m(x[0], x[1], x[2], x[3]); };
  }
  // scaled discrete complex derivative along axis
  Fn D(int axis, Fn f) const {
    return [this, axis, f](const Idx& x) {
      const complex dz = m.axes[axis].coord().diagonal(x[2 + axis]);
      return (f(tau(rho(x, axis, 1), axis, 1)) - f(x)) / (I * m.omega * dz);
    };
  }
};

struct Accum {
  double res = 0.0, scale = 0.0;
  void add(complex lhs, const std::vector<complex>& terms) {
    complex s(0.0);
    double mag = std::abs(lhs);
    for (const complex& t : terms) {
      s += t;
      mag = std::max(mag, std::abs(t));
    }
    res = std::max(res, std::abs(lhs - s));
    scale = std::max(scale, mag);
  }
  double value() const { return scale == 0.0 ? res : res / scale; }
};

// tau_{-k} f = rho_{-k} f - h sum rho_{-l}(sigma tau_{-k+l-1} Df)   (minus)
// tau_{k} f  = rho_{k} f  + h sum rho_{l-1}(sigma tau_{k-l} Df)     (plus)
void shift_identity(const Lattice& L, const Fn& f, const Fn& Df, int a, int k, bool minus,
                    const Idx& x, Accum& acc) {
  std::vector<complex> terms;
  const double h = L.h();
  if (minus) {
    terms.push_back(f(rho(x, a, -k)));
    for (int l = 1; l <= k; ++l) {
      const Idx y = rho(x, a, -l);
      terms.push_back(-h * L.sig(a, y) * Df(tau(y, a, -k + l - 1)));
    }
    acc.add(f(tau(x, a, -k)), terms);
  } else {
    terms.push_back(f(rho(x, a, k)));
    for (int l = 1; l <= k; ++l) {
      const Idx y = rho(x, a, l - 1);
      terms.push_back(h * L.sig(a, y) * Df(tau(y, a, k - l)));
    }
    acc.add(f(tau(x, a, k)), terms);
  }
}

}  // namespace

IdentityResult proposition_identity_check(const ExtendedMode& mode, Identity which,
                                          const IdentityParams& pr, const Window& w) {
  const Lattice L{mode};
  const int reach = std::max({pr.k, pr.k1, pr.k2}) + 3;
  const int need = std::max(std::abs(w.lo), std::abs(w.lo + w.size)) + reach;
  if (need > mode.axes[0].range() || need > mode.axes[1].range())
    throw std::invalid_argument("window too small for the requested shifts");
  if (pr.axis < 0 || pr.axis > 1 || pr.beta < 0 || pr.beta > 1)
    throw std::out_of_range("axis must be 0 or 1");

  const int a = pr.axis;
  const int b = 1 - a;
  const Fn W = L.w();
  const double h = L.h();
  Accum acc;
  IdentityResult out;

  auto single_axis_points = [&](auto&& body) {
    for (int i = w.lo; i < w.lo + w.size; ++i)
      for (int j = w.lo; j < w.lo + w.size; ++j) {
        Idx x{};
        x[a] = i;
        x[2 + a] = j;
        x[b] = 1;
        x[2 + b] = 2;
        body(x);
      }
  };

  switch (which) {
    case Identity::TauMinusK:
    case Identity::TauPlusK: {
      const bool minus = which == Identity::TauMinusK;
      const Fn Dw = L.D(a, W);
      single_axis_points([&](const Idx& x) { shift_identity(L, W, Dw, a, pr.k, minus, x, acc); });
      out.variant = minus ? "tau_{-k} w" : "tau_{k} w";
      break;
    }
    case Identity::TauD: {
      if (pr.beta == a) throw std::invalid_argument("derivative axis must differ from the shift axis");
      const Fn Db = L.D(pr.beta, W);
      const Fn Dab = L.D(a, Db);
      single_axis_points(
          [&](const Idx& x) { shift_identity(L, Db, Dab, a, pr.k, pr.minus, x, acc); });
      out.variant = pr.minus ? "tau_{-k} D_b w" : "tau_{k} D_b w";
      break;
    }
    case Identity::TauTau: {
      const Fn D1 = L.D(0, W), D2 = L.D(1, W);
      const Fn D12 = L.D(0, D2);
      const int k1 = pr.k1, k2 = pr.k2;
      for (int j1 = w.lo; j1 < w.lo + w.size; ++j1)
        for (int j2 = w.lo; j2 < w.lo + w.size; ++j2) {
          const Idx x{1, -1, j1, j2};
          std::vector<complex> t;
          complex lhs;
          if (pr.tautau_form == 0 || pr.tautau_form == 1) {
            const int sg = pr.tautau_form == 0 ? -1 : 1;
            lhs = W(tau(tau(x, 0, sg * k1), 1, sg * k2));
            t.push_back(W(rho(rho(x, 0, sg * k1), 1, sg * k2)));
            const int ks[2] = {k1, k2};
            const Fn* Ds[2] = {&D1, &D2};
            for (int al = 0; al < 2; ++al) {
              const int be = 1 - al;
              for (int l = 1; l <= ks[al]; ++l) {
                // minus: rho^a_{-l} rho^b_{-kb} (sigma^a tau^a_{-ka+l-1} D_a w)
                // plus:  rho^a_{l-1} rho^b_{kb} (sigma^a tau^a_{ka-l} D_a w)
                const Idx y = sg < 0 ? rho(rho(x, al, -l), be, -ks[be])
                                     : rho(rho(x, al, l - 1), be, ks[be]);
                const int sh = sg < 0 ? -ks[al] + l - 1 : ks[al] - l;
                t.push_back(sg * h * L.sig(al, y) * (*Ds[al])(tau(y, al, sh)));
              }
            }
            for (int l = 1; l <= k1; ++l)
              for (int m = 1; m <= k2; ++m) {
                Idx y;
                int s1, s2;
                if (pr.as_printed) {
                  // rho^1 paired with l, rho^2 with m
                  y = sg < 0 ? rho(rho(x, 0, -l), 1, -m) : rho(rho(x, 0, l - 1), 1, m - 1);
                  s1 = sg < 0 ? -k1 + l - 1 : k1 - l;
                  s2 = sg < 0 ? -k2 + m - 1 : k2 - m;
                } else {
                  // mixed pairing: rho indices swapped against the tau indices
                  if (l > k2 || m > k1) continue;
                  y = sg < 0 ? rho(rho(x, 0, -m), 1, -l) : rho(rho(x, 0, m - 1), 1, l - 1);
                  s1 = sg < 0 ? -k1 + l - 1 : k1 - l;
                  s2 = sg < 0 ? -k2 + m - 1 : k2 - m;
                }
                t.push_back(h * h * L.sig(0, y) * L.sig(1, y) * D12(tau(tau(y, 0, s1), 1, s2)));
              }
          } else {
            // tau^a_{-ka} tau^b_{kb}
            const int ka = a == 0 ? k1 : k2, kb = a == 0 ? k2 : k1;
            const Fn& Da = a == 0 ? D1 : D2;
            const Fn& Db = a == 0 ? D2 : D1;
            lhs = W(tau(tau(x, a, -ka), b, kb));
            t.push_back(W(rho(rho(x, a, -ka), b, kb)));
            for (int l = 1; l <= ka; ++l) {
              const Idx y = rho(rho(x, a, -l), b, kb);
              t.push_back(-h * L.sig(a, y) * Da(tau(y, a, -ka + l - 1)));
            }
            for (int l = 1; l <= kb; ++l) {
              const Idx y = rho(rho(x, b, l - 1), a, -ka);
              t.push_back(h * L.sig(b, y) * Db(tau(y, b, kb - l)));
            }
            for (int l = 1; l <= ka; ++l)
              for (int m = 1; m <= kb; ++m) {
                const Idx y = rho(rho(x, a, -l), b, m - 1);
                t.push_back(-h * h * L.sig(a, y) * L.sig(b, y) *
                            D12(tau(tau(y, a, -ka + l - 1), b, kb - m)));
              }
          }
          acc.add(lhs, t);
        }
      out.variant = pr.tautau_form == 2 ? "tau_{-ka} tau_{kb}"
                    : pr.as_printed     ? "as printed"
                                        : "mixed rho pairing";
      break;
    }
    case Identity::TildePsi: {
      const Fn Dw = L.D(a, W);
      const int k = pr.k;
      const complex iw = I * mode.omega;
      single_axis_points([&](const Idx& x) {
        std::vector<complex> t;
        if (!pr.minus) {
          const auto g = [&](int s, const Idx& y) { return L.sig(a, y) * Dw(tau(y, a, s)); };
          t.push_back(W(rho(x, a, k + 2)) / (2 * h));
          t.push_back(-W(rho(x, a, k)) / (2 * h));
          t.push_back(g(k, rho(x, a, 1)) / 2.0);
          t.push_back(g(k, x) / 2.0);
          for (int l = 1; l <= k; ++l) {
            t.push_back(g(k - l, rho(x, a, l + 1)) / 2.0);
            t.push_back(-g(k - l, rho(x, a, l - 1)) / 2.0);
          }
          acc.add(iw * Dw(tau(x, a, k)), t);
        } else {
          const auto g = [&](int s, const Idx& y) { return L.sig(a, y) * Dw(tau(y, a, s)); };
          t.push_back(W(rho(x, a, -k + 2)) / (2 * h));
          t.push_back(-W(rho(x, a, -k)) / (2 * h));
          t.push_back(g(-k, rho(x, a, -1)) / 2.0);
          t.push_back(g(-k, x) / 2.0);
          const int top = pr.as_printed ? k : k - 1;
          for (int l = 1; l <= top; ++l) {
            t.push_back(g(-k + l, rho(x, a, -l - 1)) / 2.0);
            t.push_back(-g(-k + l, rho(x, a, -l + 1)) / 2.0);
          }
          acc.add(iw * Dw(tau(x, a, -k)), t);
        }
      });
      out.variant = !pr.minus       ? "tau_{k} D w"
                    : pr.as_printed ? "tau_{-k} D w, history to k (as printed)"
                                    : "tau_{-k} D w, history to k-1";
      break;
    }
  }
  out.residual = acc.value();
  return out;
}

double commutation_residual(const ExtendedMode& mode, int axis, int shift_axis, int k,
                            const Window& w) {
  const Lattice L{mode};
  const Fn W = L.w();
  const Fn shifted = [&](const Idx& x) { return W(tau(x, shift_axis, k)); };
  const Fn lhs = L.D(axis, shifted);
  const Fn Dw = L.D(axis, W);
  Accum acc;
  for (int i = w.lo; i < w.lo + w.size; ++i)
    for (int j = w.lo; j < w.lo + w.size; ++j) {
      Idx x{};
      x[axis] = i;
      x[2 + axis] = j;
      x[1 - axis] = 2;
      x[3 - axis] = 1;
      acc.add(lhs(x), {Dw(tau(x, shift_axis, k))});
    }
  return acc.value();
}

double TheoremReport::max() const { return std::max({main, tilde, bar, corner}); }

NodeWindow decaying_window(const WaveMode& mode, const PMLProfile& prof, const Stencil& st) {
  const GridConfig& g = prof.grid;
  const int M = g.half_width(), margin = st.p + 2;
  int lo[2], hi[2];
  for (int a = 0; a < 2; ++a) {
    const double sig = g.n_p > 0 ? prof.sigma[a][0] : 0.0;
    const complex E = std::exp(I * mode.kappa[a] * g.h);
    const double growth = std::abs(eta_factor(sig, mode.omega, mode.kappa[a], g.h) * E);
    if (sig == 0.0 && std::abs(std::abs(E) - 1.0) < 1e-14) {
      lo[a] = -M + margin;
      hi[a] = M - margin;
    } else if (growth <= 1.0) {
      lo[a] = -g.n + margin;
      hi[a] = M - margin;
    } else {
      lo[a] = -M + margin;
      hi[a] = g.n - margin;
    }
  }
  return {lo[0], hi[0], lo[1], hi[1]};
}

TheoremReport theorem_residual(const WaveMode& mode, const PMLProfile& prof, const Stencil& st,
                               const NodeWindow& win) {
  const GridConfig& g = prof.grid;
  if (st.p != g.p) throw std::invalid_argument("stencil radius does not match the grid");
  const double w = mode.omega;
  if (w == 0.0) throw std::invalid_argument("mode frequency must be nonzero");
  const complex disp = dispersion_omega2(st, mode.kappa[0], mode.kappa[1]);
  if (std::abs(disp - w * w) > 1e-10 * (w * w + std::abs(st.center())))
    throw std::invalid_argument("mode is off the dispersion relation");

  const int M = g.half_width(), p = g.p;
  const double h = g.h;

  // per-axis tables over the grid: u_a(j) = eta(j) E^j and c_a(j)
  std::array<std::vector<complex>, 2> ua, ca;
  std::array<complex, 2> E;
  for (int a = 0; a < 2; ++a) {
    E[a] = std::exp(I * mode.kappa[a] * h);
    std::vector<complex> eta(2 * M + 3);
    eta[M + 1] = 1.0;
    for (int j = 0; j <= M; ++j)
      eta[j + 1 + M + 1] = eta[j + M + 1] * eta_factor(prof.at(a, j), w, mode.kappa[a], h);
    for (int j = -1; j >= -M - 1; --j)
      eta[j + M + 1] = eta[j + 1 + M + 1] / eta_factor(prof.at(a, j), w, mode.kappa[a], h);
    ua[a].resize(2 * M + 1);
    ca[a].resize(2 * M + 1);
    for (int j = -M; j <= M; ++j) {
      ua[a][j + M] = eta[j + M + 1] * std::exp(I * mode.kappa[a] * (double(j) * h));
      const double s = prof.at(a, j);
      const complex r = eta_factor(s, w, mode.kappa[a], h);
      ca[a][j + M] = (r * E[a] * E[a] - 1.0) / (I * w * complex(2.0 * h, h * s / w));
    }
  }

  // populate only nodes that the window equations can read
  const int pad = 2 * p + 3;
  auto inside = [&](int i1, int i2) {
    return i1 >= win.lo1 - pad && i1 <= win.hi1 + pad && i2 >= win.lo2 - pad && i2 <= win.hi2 + pad;
  };
  ComplexField u = zero_field<complex>(g);
  for (int i1 = -M; i1 <= M; ++i1)
    for (int i2 = -M; i2 <= M; ++i2)
      if (inside(i1, i2)) u(i1 + M, i2 + M) = ua[0][i1 + M] * ua[1][i2 + M];

  auto aux = make_aux<complex>(g);
  auto Epow = [](complex e, int n) { return std::pow(e, n); };
  for (int a = 0; a < 2; ++a)
    for (int k = 1; k <= p; ++k) {
      auto& ft = aux.tilde[a][k - 1];
      auto& fb = aux.bar[a][k - 1];
      for (const Box& b : ft.boxes())
        for (int i2 = b.lo2; i2 <= b.hi2; ++i2)
          for (int i1 = b.lo1; i1 <= b.hi1; ++i1) {
            if (!slab_active(prof, a, i1, i2) || !inside(i1, i2)) continue;
            const int ia = a == 0 ? i1 : i2;
            const complex base = u(i1 + M, i2 + M) * ca[a][ia + M];
            ft.ref(i1, i2) = base * Epow(E[a], k - 1);
            fb.ref(i1, i2) = base * Epow(E[a], -k);
          }
    }
  for (int k1 = 1; k1 <= p; ++k1)
    for (int k2 = 1; k2 <= p; ++k2)
      for (int c = 0; c < 4; ++c) {
        const Corner which = static_cast<Corner>(c);
        const bool t1 = which == Corner::TT || which == Corner::BT;
        const bool t2 = which == Corner::TT || which == Corner::TB;
        const complex f = Epow(E[0], t1 ? k1 - 1 : -k1) * Epow(E[1], t2 ? k2 - 1 : -k2);
        auto& fc = aux.at(which, k1, k2);
        for (const Box& b : fc.boxes())
          for (int i2 = b.lo2; i2 <= b.hi2; ++i2)
            for (int i1 = b.lo1; i1 <= b.hi1; ++i1) {
              if (!corner_active(prof, i1, i2) || !inside(i1, i2)) continue;
              fc.ref(i1, i2) = u(i1 + M, i2 + M) * ca[0][i1 + M] * ca[1][i2 + M] * f;
            }
      }

  auto in_window = [&](int i1, int i2) {
    return i1 >= win.lo1 && i1 <= win.hi1 && i2 >= win.lo2 && i2 <= win.hi2;
  };
  auto ratio = [](double res, double scale) { return scale == 0.0 ? res : res / scale; };

  TheoremReport rep;
  {
    const ComplexField rhs = main_rhs(u, aux, st, prof);
    double res = 0.0, scale = 0.0;
    for (int i1 = win.lo1; i1 <= win.hi1; ++i1)
      for (int i2 = win.lo2; i2 <= win.hi2; ++i2) {
        const complex lhs = -w * w * u(i1 + M, i2 + M);
        const complex r = rhs(i1 + M, i2 + M);
        res = std::max(res, std::abs(lhs - r));
        scale = std::max({scale, std::abs(lhs), std::abs(r)});
      }
    rep.main = ratio(res, scale);
  }
  auto layer_check = [&](const LayerField<complex>& psi, const LayerField<complex>& rhs) {
    double res = 0.0, scale = 0.0;
    for (const Box& b : psi.boxes())
      for (int i2 = b.lo2; i2 <= b.hi2; ++i2)
        for (int i1 = b.lo1; i1 <= b.hi1; ++i1) {
          if (!in_window(i1, i2)) continue;
          const complex lhs = -I * w * psi(i1, i2);
          const complex r = rhs(i1, i2);
          res = std::max(res, std::abs(lhs - r));
          scale = std::max({scale, std::abs(lhs), std::abs(r)});
        }
    return ratio(res, scale);
  };
  for (int a = 0; a < 2; ++a)
    for (int k = 1; k <= p; ++k) {
      rep.tilde = std::max(rep.tilde, layer_check(aux.tilde[a][k - 1],
                                                  aux_rhs_tilde(u, aux, st, prof, a, k)));
      rep.bar = std::max(rep.bar, layer_check(aux.bar[a][k - 1], aux_rhs_bar(u, aux, st, prof, a, k)));
    }
  for (int c = 0; c < 4; ++c)
    for (int k1 = 1; k1 <= p; ++k1)
      for (int k2 = 1; k2 <= p; ++k2) {
        const Corner which = static_cast<Corner>(c);
        rep.corner = std::max(rep.corner, layer_check(aux.at(which, k1, k2),
                                                      corner_rhs(aux, st, prof, which, k1, k2)));
      }
  return rep;
}

complex solve_evanescent_kappa1(const Stencil& st, double omega, double kappa2) {
  const double w2 = omega * omega;
  complex k1(0.0, -std::sqrt(std::max(kappa2 * kappa2 - w2, 1e-6)));
  const complex k2(kappa2, 0.0);
  for (int it = 0; it < 200; ++it) {
    const complex f = dispersion_omega2(st, k1, k2) - w2;
    const complex df = dispersion_omega2_dk1(st, k1, k2);
    if (df == 0.0) break;
    const complex step = f / df;
    k1 -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(k1))) break;
  }
  if (std::abs(dispersion_omega2(st, k1, k2) - w2) > 1e-10 * (w2 + std::abs(st.center())))
    throw std::runtime_error("Newton iteration for kappa_1 did not converge");
  if (k1.imag() > 0.0) k1 = -k1;
  return k1;
}

double dispersion_frequency(const Stencil& st, double kappa1, double kappa2) {
  return std::sqrt(std::max(0.0, dispersion_omega2(st, kappa1, kappa2)));
}

void write_verify_csv(std::ostream& os, const std::vector<VerifyRow>& rows) {
  os << "check,omega,kappa1_re,kappa1_im,kappa2_re,kappa2_im,residual\n";
  for (const auto& r : rows)
    os << r.check << ',' << format_double(r.omega) << ',' << format_double(r.kappa1.real()) << ','
       << format_double(r.kappa1.imag()) << ',' << format_double(r.kappa2.real()) << ','
       << format_double(r.kappa2.imag()) << ',' << format_double(r.residual) << '\n';
}

}  // namespace pdpml
