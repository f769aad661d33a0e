#include "pdpml/stencil.hpp"

#include "pdpml/format.hpp"
#include "pdpml/quadrature.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pdpml {

namespace {

constexpr double pi = std::numbers::pi;

// Integrand W(z) gamma(|z|) phi_k(z) for a fixed node x_k = h k.
struct Integrand {
  const KernelSpec* spec;
  double h;
  double xk, yk;

  double operator()(double x, double y) const {
    const double r = std::hypot(x, y);
    const double g = eval_kernel(*spec, r);
    if (g == 0.0) return 0.0;
    const double phi = (1.0 - std::abs(x - xk) / h) * (1.0 - std::abs(y - yk) / h);
    return weight(x, y) * g * phi;
  }
};

// Cell [x0, x0+h] x [y0, y0+h] that touches the origin, in polar coordinates.
// The radial substitution r = R t^beta cancels the r^(-2s) behaviour.
double integrate_origin_cell(const Integrand& f, double x0, double y0, double h, double delta,
                             double s, const QuadratureRule& rule) {
  const double sx = x0 < 0.0 ? -1.0 : 1.0;
  const double sy = y0 < 0.0 ? -1.0 : 1.0;
  const double beta = 1.0 / (1.0 - 2.0 * s);

  std::vector<double> cuts{0.0, pi / 4, pi / 2};
  if (delta > h && delta < std::sqrt(2.0) * h) {
    cuts.push_back(std::acos(h / delta));
    cuts.push_back(std::asin(h / delta));
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    if (b - a <= 0.0) continue;
    const double ha = 0.5 * (b - a), ma = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double th = ma + ha * rule.nodes[i];
      const double ct = std::cos(th), st = std::sin(th);
      const double R = std::min(delta, th < pi / 4 ? h / ct : h / st);
      double radial = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double t = 0.5 * (1.0 + rule.nodes[j]);
        const double r = R * std::pow(t, beta);
        const double drdt = R * beta * std::pow(t, beta - 1.0);
        radial += 0.5 * rule.weights[j] * f(sx * r * ct, sy * r * st) * r * drdt;
      }
      total += ha * rule.weights[i] * radial;
    }
  }
  return total;
}

// Cell [x0, x1] x [y0, y1] intersected with the disk |z| <= delta. The outer
// variable is the coordinate with the smaller centre magnitude so the circle
// is a smooth graph over it; the outer interval is split wherever the
// clipping regime of the inner interval changes.
double integrate_cut_cell(const Integrand& f, double x0, double x1, double y0, double y1,
                          double delta, const QuadratureRule& rule) {
  const bool outer_is_y = std::abs(0.5 * (x0 + x1)) >= std::abs(0.5 * (y0 + y1));
  const double t0 = outer_is_y ? y0 : x0, t1 = outer_is_y ? y1 : x1;
  const double s0 = outer_is_y ? x0 : y0, s1 = outer_is_y ? x1 : y1;

  std::vector<double> cuts{t0, t1};
  auto add = [&](double v) {
    if (v > t0 && v < t1) cuts.push_back(v);
  };
  add(delta);
  add(-delta);
  for (double sv : {s0, s1}) {
    if (std::abs(sv) < delta) {
      const double c = std::sqrt(delta * delta - sv * sv);
      add(c);
      add(-c);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    if (b - a <= 0.0) continue;
    const double ha = 0.5 * (b - a), ma = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = ma + ha * rule.nodes[i];
      const double rem = delta * delta - t * t;
      if (rem <= 0.0) continue;
      const double lim = std::sqrt(rem);
      const double lo = std::max(s0, -lim), hi = std::min(s1, lim);
      if (hi <= lo) continue;
      const double hb = 0.5 * (hi - lo), mb = 0.5 * (hi + lo);
      double inner = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double sv = mb + hb * rule.nodes[j];
        inner += rule.weights[j] * (outer_is_y ? f(sv, t) : f(t, sv));
      }
      total += ha * rule.weights[i] * hb * inner;
    }
  }
  return total;
}

double integrate_full_cell(const Integrand& f, double x0, double y0, double h,
                           const QuadratureRule& rule) {
  const double hh = 0.5 * h;
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = x0 + hh * (1.0 + rule.nodes[i]);
    double inner = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      inner += rule.weights[j] * f(x, y0 + hh * (1.0 + rule.nodes[j]));
    total += rule.weights[i] * inner;
  }
  return hh * hh * total;
}

double cell_integral(const Integrand& f, int c1, int c2, double h, double delta, double s,
                     const QuadratureRule& cart, const QuadratureRule& polar) {
  const double x0 = c1 * h, y0 = c2 * h, x1 = x0 + h, y1 = y0 + h;
  if ((c1 == 0 || c1 == -1) && (c2 == 0 || c2 == -1))
    return integrate_origin_cell(f, x0, y0, h, delta, s, polar);
  const double nx = std::min(std::abs(x0), std::abs(x1)) * (x0 * x1 > 0.0);
  const double ny = std::min(std::abs(y0), std::abs(y1)) * (y0 * y1 > 0.0);
  if (nx * nx + ny * ny >= delta * delta) return 0.0;
  const double fx = std::max(std::abs(x0), std::abs(x1));
  const double fy = std::max(std::abs(y0), std::abs(y1));
  if (fx * fx + fy * fy <= delta * delta) return integrate_full_cell(f, x0, y0, h, cart);
  return integrate_cut_cell(f, x0, x1, y0, y1, delta, cart);
}

}  // namespace

std::vector<Tap> Stencil::taps() const {
  std::vector<Tap> out;
  for (int k1 = -p; k1 <= p; ++k1)
    for (int k2 = -p; k2 <= p; ++k2) {
      const double v = a(k1 + p, k2 + p);
      if (v != 0.0) out.push_back({k1, k2, v});
    }
  return out;
}

int required_radius(const KernelSpec& spec, double h) {
  const double d = effective_horizon(spec);
  return std::max(1, static_cast<int>(std::ceil(d / h - 1e-9)));
}

Stencil compute_stencil(const KernelSpec& spec, const GridConfig& grid, int quad_order,
                        int polar_order) {
  validate(spec);
  if (!(grid.h > 0.0)) throw std::invalid_argument("mesh size h must be positive");
  if (quad_order < 2) throw std::invalid_argument("quad_order must be at least 2");
  if (polar_order < 2) throw std::invalid_argument("polar_order must be at least 2");
  const int need = required_radius(spec, grid.h);
  if (grid.p < need)
    throw std::invalid_argument("stencil radius p = " + std::to_string(grid.p) +
                                " is too small for the kernel horizon; required p = " +
                                std::to_string(need));

  const int p = grid.p;
  const double h = grid.h;
  const double delta = effective_horizon(spec);
  const double s = singularity_order(spec);

  Stencil st;
  st.p = p;
  st.h = h;
  st.a = Eigen::ArrayXXd::Zero(2 * p + 1, 2 * p + 1);
  if (delta == 0.0) return st;

  const auto cart = gauss_legendre(quad_order);
  const auto polar = gauss_legendre(polar_order);

  // wedge 0 <= k2 <= k1, mirrored afterwards so the 8-fold symmetry is exact
  for (int k1 = 1; k1 <= p; ++k1) {
    for (int k2 = 0; k2 <= k1; ++k2) {
      const Integrand f{&spec, h, k1 * h, k2 * h};
      double sum = 0.0;
      for (int c1 = k1 - 1; c1 <= k1; ++c1)
        for (int c2 = k2 - 1; c2 <= k2; ++c2) {
          if (c1 < -p || c1 >= p || c2 < -p || c2 >= p) continue;
          sum += cell_integral(f, c1, c2, h, delta, s, cart, polar);
        }
      const double ak = sum / weight(k1 * h, k2 * h);
      for (int a1 : {k1, -k1})
        for (int a2 : {k2, -k2}) {
          st.a(a1 + p, a2 + p) = ak;
          st.a(a2 + p, a1 + p) = ak;
        }
    }
  }

  double total = 0.0;
  for (int k1 = -p; k1 <= p; ++k1)
    for (int k2 = -p; k2 <= p; ++k2)
      if (k1 != 0 || k2 != 0) total += st.a(k1 + p, k2 + p);
  st.a(p, p) = -total;
  return st;
}

template <typename Scalar>
Field<Scalar> apply_operator(const Field<Scalar>& u, const Stencil& st) {
  const int p = st.p;
  const Eigen::Index N1 = u.rows(), N2 = u.cols();
  Field<Scalar> pad = Field<Scalar>::Zero(N1 + 2 * p, N2 + 2 * p);
  pad.block(p, p, N1, N2) = u;
  const auto taps = st.taps();

  Field<Scalar> out(N1, N2);
  // columns are independent and each keeps its fixed tap order
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < N2; ++j) {
    Scalar* o = &out(0, j);
    std::fill(o, o + N1, Scalar(0));
    for (const Tap& t : taps) {
      const Scalar* src = &pad(p + t.k1, j + p + t.k2);
      const double a = t.a;
      for (Eigen::Index i = 0; i < N1; ++i) o[i] += a * src[i];
    }
  }
  return out;
}

template Field<double> apply_operator(const Field<double>&, const Stencil&);
template Field<complex> apply_operator(const Field<complex>&, const Stencil&);

void set_threads(int n) { omp_set_num_threads(n > 0 ? n : omp_get_num_procs()); }

int threads() { return omp_get_max_threads(); }

double max_omega2(const Stencil& st, int m) {
  double best = 0.0;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b) {
      const double k1 = pi / st.h * a / m, k2 = pi / st.h * b / m;
      best = std::max(best, dispersion_omega2(st, k1, k2));
    }
  return best;
}

double max_group_speed(const Stencil& st, int m) {
  double best = 0.0;
  for (int a = 1; a <= m; ++a)
    for (int b = 0; b <= m; ++b) {
      const double k1 = pi / st.h * a / m, k2 = pi / st.h * b / m;
      const double w2 = dispersion_omega2(st, k1, k2);
      if (!(w2 > 0.0)) continue;
      const double g1 = dispersion_omega2_dk1(st, k1, k2);
      const double g2 = dispersion_omega2_dk1(st, k2, k1);
      best = std::max(best, std::hypot(g1, g2) / (2.0 * std::sqrt(w2)));
    }
  return best;
}

void write_stencil_csv(std::ostream& os, const Stencil& st) {
  os << "k1,k2,a\n";
  for (int k1 = -st.p; k1 <= st.p; ++k1)
    for (int k2 = -st.p; k2 <= st.p; ++k2)
      os << k1 << ',' << k2 << ',' << format_double(st(k1, k2)) << '\n';
}

}  // namespace pdpml
