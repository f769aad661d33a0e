// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include "pdpml/diagnostics.hpp"
#include "pdpml/format.hpp"
#include "pdpml/verify.hpp"
#include "stencil_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace pdpml;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double h16 = 1.0 / 16;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

KernelSpec gaussian_quarter() { return {GaussianKernel{gaussian_epsilon_for_horizon(0.25)}, 1e-7}; }
KernelSpec heaviside_quarter() { return {HeavisideOverR2Kernel{0.25}, 1e-7}; }

SimulationConfig example(const KernelSpec& k, double h, double sigma0_h, double t_final) {
  SimulationConfig c;
  c.kernel = k;
  c.grid.h = h;
  c.grid.n = static_cast<int>(std::lround(1.0 / h));
  c.grid.n_p = 4;
  c.grid.p = required_radius(k, h);
  c.profile = build_profile(c.grid, sigma0_h / h);
  c.dt = h / 32;
  c.t_final = t_final;
  return c;
}

Outcome stencil_oracle() {
  const KernelSpec k = heaviside_quarter();
  GridConfig g;
  g.h = h16;
  g.n = 16;
  g.p = required_radius(k, h16);
  const Stencil st = compute_stencil(k, g);
  const int p = g.p;
  const Eigen::ArrayXXd ref = oracle::midpoint_stencil(k, h16, p, 2000);
  double worst = 0.0, sum = 0.0;
  bool symmetric = true;
  for (int k1 = -p; k1 <= p; ++k1)
    for (int k2 = -p; k2 <= p; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double a = st(k1, k2), r = ref(k1 + p, k2 + p);
      sum += a;
      worst = std::max(worst, r == 0.0 ? std::abs(a) : std::abs(a - r) / std::abs(r));
      symmetric = symmetric && a == st(-k1, k2) && a == st(k1, -k2) && a == st(k2, k1);
    }
  const bool row_sum = st.center() == -sum;
  return {worst < 1e-6 && row_sum && symmetric,
          "max rel err " + num(worst) + ", row sum exact " + (row_sum ? "yes" : "no") +
              ", 8-fold symmetric " + (symmetric ? "yes" : "no")};
}

Outcome reduction() {
  const SimulationConfig c = example(gaussian_quarter(), 1.0 / 8, 0.0, 0.0);
  const Stencil st = compute_stencil(c.kernel, c.grid);
  PMLState s = init_state(c, st);
  RealField up = s.u_prev, uc = s.u_curr;
  for (int n = 0; n < 1000; ++n) {
    step(s, st, c.profile, c.dt);
    verlet_step(up, uc, st, c.dt);
  }
  const bool same = (s.u_curr == uc).all() && (s.u_prev == up).all() && s.psi.is_zero();
  return {same, std::string("1000 steps bitwise equal: ") + (same ? "yes" : "no")};
}

Outcome holomorphy() {
  VerifySettings s;
  s.modes = 50;
  const auto rows = identity_suite(h16, 4.0 / h16, s);
  double worst = 0.0, printed = 0.0;
  for (const auto& r : rows) {
    if (r.check == "bar_psi_history_to_k")
      printed = std::max(printed, r.residual);
    else
      worst = std::max(worst, r.residual);
  }
  return {worst < 1e-12, "max residual " + num(worst) + " over " + std::to_string(rows.size()) +
                             " rows; history sum to k (not asserted) " + num(printed)};
}

Outcome theorem() {
  GridConfig g;
  g.h = h16;
  g.n = 8;
  g.n_p = 12;
  g.p = required_radius(gaussian_quarter(), h16);
  const Stencil st = compute_stencil(gaussian_quarter(), g);
  VerifySettings s;
  s.theorem_modes = 20;
  const auto rows = theorem_suite(st, build_profile(g, 32.0), s);
  double worst = 0.0;
  int evanescent = 0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.residual);
    evanescent += r.kappa1.imag() < 0.0;
  }
  return {rows.size() == 20 && worst < 1e-10,
          "max residual " + num(worst) + " over 20 modes (" + std::to_string(evanescent) + " evanescent)"};
}

Outcome damping_bound() {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  bool unit = true;
  for (int t = 0; t < 200000; ++t) {
    const double sg = U(rng) < 0.5 ? -1.0 : 1.0;
    const double w = sg * (0.5 + 99.5 * U(rng));
    const double sigma0 = (1.0 - U(rng)) * 10.0 / h16;
    const double kr = sg * (1.0 - U(rng)) * pi / h16;
    const double ki = U(rng) < 0.3 ? 0.0 : -5.0 * U(rng);
    const WaveMode mode{w, {complex(kr, ki), complex(0.0)}};
    worst = std::max(worst, std::abs(decay_rate_mu(mode, sigma0, h16)));
    unit = unit && std::abs(decay_rate_mu(mode, 0.0, h16)) == 1.0;
  }
  return {worst < 1.0 && unit,
          "max |mu| " + std::to_string(worst) + " over 2e5 samples; sigma0 = 0 gives 1 exactly: " +
              (unit ? "yes" : "no")};
}

// Measured reflection per sigma0 * h, with the hard-truncation run first.
std::vector<SigmaScanRow> reflection_scan(const KernelSpec& k, const std::vector<double>& sigma0_h) {
  SimulationConfig c = example(k, h16, 2.0, 2.0);
  c.output.snapshot_every = 0.0625;
  const Stencil st = compute_stencil(c.kernel, c.grid);
  const ReferenceSolution ref = solve_reference(c, 4);
  std::vector<double> sigma0;
  for (double s : sigma0_h) sigma0.push_back(s / h16);
  return sigma_scan(c, st, sigma0, {{5.0, 10.0}}, &ref);
}

Outcome sigma_selection() {
  const auto rows = reflection_scan(gaussian_quarter(), {0.0, 0.5, 1.0, 2.0, 4.0, 8.0});
  double hard = *rows[0].reflection, at2 = 0.0;
  auto best = rows.begin() + 1;
  for (auto it = rows.begin() + 1; it != rows.end(); ++it) {
    if (*it->reflection < *best->reflection) best = it;
    if (it->sigma0 * h16 == 2.0) at2 = *it->reflection;
  }
  std::string detail;
  for (const auto& r : rows) detail += num(r.sigma0 * h16) + "/h:" + num(*r.reflection) + " ";
  const double b = best->sigma0 * h16;
  const bool pass = b >= 1.0 && b <= 5.0 && at2 < 1e-2 * hard;
  return {pass, detail + "| argmin " + num(b) + "/h, ratio at 2/h " + num(at2 / hard)};
}

Outcome convergence() {
  const SimulationConfig base = example(gaussian_quarter(), h16, 2.0, 1.5);
  const ConvergenceTable t =
      convergence_study(base, 2.0, {1.0 / 8, 1.0 / 16, 1.0 / 32}, 1.0 / 64, 1.5, 3);
  std::string detail = "errors l2/max:";
  for (const auto& r : t.rows) detail += " " + num(r.err_l2) + "/" + num(r.err_max);
  const double l2 = t.slope_l2.value_or(0.0), mx = t.slope_max.value_or(0.0);
  return {l2 >= 1.8 && mx >= 1.8, detail + "; slopes " + num(l2) + " (l2), " + num(mx) + " (max)"};
}

Outcome long_time() {
  const SimulationConfig c = example(gaussian_quarter(), h16, 2.0, 20.0);
  const Stencil st = compute_stencil(c.kernel, c.grid);
  EnergyTracker tracker(st, c.grid.n, c.dt);
  bool finite = true;
  run(c, st, [&](const PMLState& s) {
    tracker(s);
    finite = finite && s.u_curr.allFinite();
  });
  double early = 0.0, all = 0.0;
  for (std::size_t i = 0; i < tracker.values().size(); ++i) {
    const double e = tracker.values()[i];
    finite = finite && std::isfinite(e);
    all = std::max(all, e);
    if (tracker.t()[i] <= 2.0 + 1e-12) early = std::max(early, e);
  }
  return {finite && all <= 1.05 * early,
          "max E on [0, 20] / max E on [0, 2] = " + num(all / early) + ", final E " +
              num(tracker.values().back()) + ", finite " + (finite ? "yes" : "no")};
}

Outcome heaviside_example() {
  const SimulationConfig c = example(heaviside_quarter(), h16, 2.0, 2.0);
  const Stencil st = compute_stencil(c.kernel, c.grid);
  const RunResult r = run(c, st);
  const RealField& u = r.final_state.u_curr;
  const int n = c.grid.n, m = c.grid.half_width();
  double layer = 0.0;
  for (int i2 = -m; i2 <= m; ++i2)
    for (int i1 = -m; i1 <= m; ++i1)
      if (std::max(std::abs(i1), std::abs(i2)) >= n + 2) layer = std::max(layer, std::abs(u(i1 + m, i2 + m)));
  const auto rows = reflection_scan(heaviside_quarter(), {0.0, 2.0});
  const double ratio = *rows[1].reflection / *rows[0].reflection;
  return {layer < 1e-2 && ratio < 1e-2,
          "layer-interior max |u| " + std::to_string(layer) + " (bar 1e-2), reflection ratio " +
              num(ratio) + " (bar 1e-2)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"stencil oracle", stencil_oracle},   {"reduction identity", reduction},
      {"holomorphy suite", holomorphy},     {"theorem residual", theorem},
      {"damping bound", damping_bound},     {"sigma0 selection", sigma_selection},
      {"convergence", convergence},         {"long-time stability", long_time},
      {"heaviside example", heaviside_example},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
