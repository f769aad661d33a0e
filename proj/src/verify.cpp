#include "pdpml/verify.hpp"

#include <algorithm>
#include <numbers>

namespace pdpml {

WaveMode sample_mode(std::mt19937& rng, double h) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double pi = std::numbers::pi;
  WaveMode m;
  m.omega = (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 99.5 * U(rng));
  for (auto& k : m.kappa) k = complex((2.0 * U(rng) - 1.0) * pi / h, -5.0 * U(rng));
  return m;
}

std::array<StretchedCoordinate, 2> sample_coordinates(std::mt19937& rng, double h, double omega,
                                                      double sigma_max) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::array<StretchedCoordinate, 2> z;
  for (auto& c : z) {
    c.h = h;
    c.omega = omega;
    c.j0 = -48;
    c.sigma.resize(97);
    for (auto& s : c.sigma) s = U(rng) < 0.3 ? 0.0 : (1.0 - U(rng)) * sigma_max;
  }
  return z;
}

std::vector<VerifyRow> identity_suite(double h, double sigma_max, const VerifySettings& s) {
  std::mt19937 rng(s.seed);
  std::vector<VerifyRow> rows;
  for (int t = 0; t < s.modes; ++t) {
    const WaveMode wm = sample_mode(rng, h);
    const ExtendedMode m =
        make_extended_mode(wm, sample_coordinates(rng, h, wm.omega, sigma_max), 48);
    auto row = [&](const char* name, double r) {
      rows.push_back({name, wm.omega, wm.kappa[0], wm.kappa[1], r});
    };
    auto check = [&](Identity id, const IdentityParams& pr) {
      return proposition_identity_check(m, id, pr, s.window).residual;
    };
    row("cauchy_riemann_1", cauchy_riemann_residual(m, 0, s.window));
    row("cauchy_riemann_2", cauchy_riemann_residual(m, 1, s.window));

    double minus_k = 0, plus_k = 0, tau_d = 0, tilde = 0, bar = 0, bar_to_k = 0, comm = 0;
    for (int axis = 0; axis < 2; ++axis)
      for (int k = 1; k <= s.max_shift; ++k) {
        IdentityParams pr;
        pr.axis = axis;
        pr.k = k;
        minus_k = std::max(minus_k, check(Identity::TauMinusK, pr));
        plus_k = std::max(plus_k, check(Identity::TauPlusK, pr));
        pr.beta = 1 - axis;
        for (bool minus : {true, false}) {
          pr.minus = minus;
          tau_d = std::max(tau_d, check(Identity::TauD, pr));
        }
        pr.minus = false;
        tilde = std::max(tilde, check(Identity::TildePsi, pr));
        pr.minus = true;
        pr.as_printed = false;
        bar = std::max(bar, check(Identity::TildePsi, pr));
        pr.as_printed = true;
        bar_to_k = std::max(bar_to_k, check(Identity::TildePsi, pr));
      }
    double tau_tau = 0;
    for (int k1 = 1; k1 < s.max_shift; ++k1)
      for (int k2 = 1; k2 < s.max_shift; ++k2)
        for (int form = 0; form < 3; ++form) {
          IdentityParams pr;
          pr.k1 = k1;
          pr.k2 = k2;
          pr.tautau_form = form;
          pr.axis = (k1 + k2) % 2;
          tau_tau = std::max(tau_tau, check(Identity::TauTau, pr));
        }
    for (int k = -s.max_shift + 1; k < s.max_shift; ++k)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) comm = std::max(comm, commutation_residual(m, a, b, k, s.window));
    row("tau_minus_k", minus_k);
    row("tau_plus_k", plus_k);
    row("tau_d", tau_d);
    row("tau_tau", tau_tau);
    row("tilde_psi", tilde);
    row("bar_psi", bar);
    row("bar_psi_history_to_k", bar_to_k);
    row("commutation", comm);
  }
  return rows;
}

std::vector<VerifyRow> theorem_suite(const Stencil& st, const PMLProfile& prof,
                                     const VerifySettings& s) {
  std::mt19937 rng(s.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h = prof.grid.h, pi = std::numbers::pi;
  std::vector<VerifyRow> rows;
  for (int t = 0; t < s.theorem_modes; ++t) {
    WaveMode m;
    if (t % 4 == 3) {
      // evanescent along axis 1
      m.omega = 2.0 + 7.0 * U(rng);
      const double k2 = m.omega + 3.0 + 8.0 * U(rng);
      m.kappa = {solve_evanescent_kappa1(st, m.omega, k2), complex(k2)};
    } else {
      const double kap = 2.0 + (0.95 * pi / h - 2.0) * U(rng), th = 2.0 * pi * U(rng);
      const double sg = U(rng) < 0.5 ? -1.0 : 1.0;
      const double k1 = kap * std::cos(th), k2 = kap * std::sin(th);
      m.omega = sg * dispersion_frequency(st, k1, k2);
      m.kappa = {complex(sg * k1), complex(sg * k2)};
    }
    const TheoremReport r = theorem_residual(m, prof, st, decaying_window(m, prof, st));
    rows.push_back({"theorem", m.omega, m.kappa[0], m.kappa[1], r.max()});
  }
  return rows;
}

}  // namespace pdpml
