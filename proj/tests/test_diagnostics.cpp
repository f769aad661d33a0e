#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdpml/diagnostics.hpp"
#include "pdpml/holomorphy.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace pdpml;

namespace {

KernelSpec gaussian_quarter() {
  return {GaussianKernel{gaussian_epsilon_for_horizon(0.25)}, 1e-7};
}

SimulationConfig example(double h, double sigma0_h, double t_final) {
  SimulationConfig c;
  c.kernel = gaussian_quarter();
  c.grid.h = h;
  c.grid.n = static_cast<int>(std::lround(1.0 / h));
  c.grid.n_p = 4;
  c.grid.p = required_radius(c.kernel, h);
  c.profile = build_profile(c.grid, sigma0_h / h);
  c.dt = h / 32;
  c.t_final = t_final;
  return c;
}

RealField random_field(int nodes, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  RealField u(nodes, nodes);
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = U(rng);
  return u;
}

// straightforward re-summation of the energy with explicit tap loops
double energy_oracle(const RealField& um, const RealField& u, const RealField& up,
                     const Stencil& st, int n, double dt) {
  const int m = static_cast<int>(u.rows() - 1) / 2;
  int reach = 0;
  for (const Tap& t : st.taps()) reach = std::max({reach, std::abs(t.k1), std::abs(t.k2)});
  long double kin = 0.0L, pot = 0.0L;
  long count_o = 0, count_d = 0;
  for (int i1 = -n; i1 <= n; ++i1)
    for (int i2 = -n; i2 <= n; ++i2) {
      const long double v = (static_cast<long double>(up(i1 + m, i2 + m)) - um(i1 + m, i2 + m)) /
                            (2.0L * dt);
      kin += v * v;
      ++count_o;
      bool inside = true;
      long double lu = 0.0L;
      for (const Tap& t : st.taps()) {
        const int j1 = i1 + t.k1, j2 = i2 + t.k2;
        if (std::abs(j1) > n || std::abs(j2) > n) inside = false;
        lu += static_cast<long double>(t.a) * u(j1 + m, j2 + m);
      }
      if (inside) {
        pot += lu * lu;
        ++count_d;
      }
    }
  CHECK(count_d == (2 * (n - reach) + 1) * (2 * (n - reach) + 1));
  return static_cast<double>(kin / (2.0L * count_o) + pot / (2.0L * count_d));
}

}  // namespace

TEST_CASE("restriction to the physical box") {
  RealField u(9, 9);
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 9; ++i) u(i, j) = 10 * i + j;
  const RealField r = restrict_to_physical(u, 2);
  REQUIRE(r.rows() == 5);
  CHECK(r(0, 0) == 22.0);
  CHECK(r(4, 4) == 66.0);
  CHECK((restrict_to_physical(r, 2) == r).all());
  CHECK_THROWS_AS(restrict_to_physical(r, 3), std::invalid_argument);
}

TEST_CASE("minimal enlargement from the group speed") {
  GridConfig g;
  g.h = 1.0 / 16;
  g.n = 16;
  CHECK(minimal_enlargement(g, 0.5, 1.0) == 2);
  CHECK(minimal_enlargement(g, 1.0, 1.0) == 2);
  CHECK(minimal_enlargement(g, 1.5, 1.0) == 3);
  CHECK(minimal_enlargement(g, 2.0, 1.0) == 3);
  CHECK(minimal_enlargement(g, 2.0, 1.01) == 4);
  CHECK(minimal_enlargement(g, 0.0, 1.0) == 2);
}

TEST_CASE("zero initial data gives a zero reference") {
  SimulationConfig c = example(1.0 / 8, 0.0, 0.5);
  c.initial = CustomField{zero_field<double>(c.grid)};
  c.output.snapshot_every = 0.125;
  const ReferenceSolution ref = solve_reference(c, 2);
  REQUIRE(ref.snapshots.size() == 5);
  for (const auto& s : ref.snapshots) {
    CHECK(s.u.rows() == 2 * c.grid.n + 1);
    CHECK((s.u == 0.0).all());
  }
  CHECK(ref.grid.n == 16);
  CHECK(ref.grid.n_p == 0);
}

TEST_CASE("insufficient enlargement names the minimal factor") {
  const SimulationConfig c = example(1.0 / 8, 0.0, 2.0);
  const Stencil st = compute_stencil(c.kernel, c.grid);
  const int need = minimal_enlargement(c.grid, 2.0, max_group_speed(st));
  CHECK(need == 3);
  try {
    solve_reference(c, 2);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("minimal admissible factor is 3") != std::string::npos);
  }
}

TEST_CASE("doubling an admissible enlargement leaves the reference unchanged") {
  SimulationConfig c = example(1.0 / 8, 0.0, 2.0);
  c.output.snapshot_every = 0.5;
  const ReferenceSolution a = solve_reference(c, 3), b = solve_reference(c, 6);
  CHECK(reflection_error(a.snapshots, b.snapshots, c.grid.n).max() < 1e-10);
  CHECK(a.snapshots.back().u.abs().maxCoeff() > 1e-3);
}

TEST_CASE("undamped layer run matches the reference until the wall is hit") {
  SimulationConfig c = example(1.0 / 8, 0.0, 2.0);
  c.output.snapshot_times = {0.5, 2.0};
  const ReferenceSolution ref = solve_reference(c, 4);
  const RunResult r = run(c);
  const ReflectionTrace tr = reflection_error(r.snapshots, ref.snapshots, c.grid.n);
  REQUIRE(tr.t.size() == 2);
  CHECK(tr.max_abs_diff[0] < 1e-10);
  CHECK(tr.max_abs_diff[1] > 1e-2);
}

TEST_CASE("reflection error") {
  std::mt19937 rng(2);
  std::vector<FieldSnapshot> u;
  for (int k = 0; k < 3; ++k) u.push_back({0.25 * k, k, random_field(13, rng)});
  const ReflectionTrace same = reflection_error(u, u, 4);
  CHECK(same.max() == 0.0);
  CHECK(same.t.size() == 3);

  std::vector<FieldSnapshot> v = u;
  v[1].u(6, 6) += 0.5;
  v[2].u(0, 0) += 7.0;  // outside the box
  const ReflectionTrace d = reflection_error(u, v, 4);
  CHECK(d.max_abs_diff[0] == 0.0);
  CHECK(d.max_abs_diff[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.max_abs_diff[2] == 0.0);
  CHECK(d.max() == d.max_abs_diff[1]);

  std::vector<FieldSnapshot> late = u;
  late[2].t += 1e-3;
  CHECK_THROWS_AS(reflection_error(u, late, 4), std::invalid_argument);
  CHECK_THROWS_AS(reflection_error(u, {u[0]}, 4), std::invalid_argument);
  CHECK_THROWS_AS(reflection_error(u, u, 7), std::invalid_argument);
}

TEST_CASE("energy") {
  const SimulationConfig c = example(1.0 / 16, 0.0, 0.0);
  const Stencil st = compute_stencil(c.kernel, c.grid);
  const int nodes = c.grid.nodes(), n = c.grid.n;
  const RealField z = zero_field<double>(c.grid);
  CHECK(energy(z, z, z, st, n, c.dt) == 0.0);

  const RealField k = RealField::Constant(nodes, nodes, 3.0);
  double abs_sum = 0.0;
  for (const Tap& t : st.taps()) abs_sum += std::abs(t.a);
  // worst-case rounding of a sum of m terms: m eps sum |terms|
  const double rounding =
      st.taps().size() * 3.0 * abs_sum * std::numeric_limits<double>::epsilon();
  CHECK(energy(k, k, k, st, n, c.dt) <= 0.5 * rounding * rounding);

  std::mt19937 rng(9);
  const RealField a = random_field(nodes, rng), b = random_field(nodes, rng),
                  d = random_field(nodes, rng);
  const double e = energy(a, b, d, st, n, c.dt);
  CHECK(e > 0.0);
  CHECK(std::abs(e - energy_oracle(a, b, d, st, n, c.dt)) <= 1e-14 * e);

  const double et = energy(a.transpose(), b.transpose(), d.transpose(), st, n, c.dt);
  CHECK(std::abs(et - e) <= 1e-14 * e);
  const double er = energy(a.colwise().reverse(), b.colwise().reverse(), d.colwise().reverse(),
                           st, n, c.dt);
  CHECK(std::abs(er - e) <= 1e-14 * e);

  CHECK_THROWS_AS(energy(a, b, d, st, 3, c.dt), std::invalid_argument);
  CHECK_NOTHROW(energy(a, b, d, st, 4, c.dt));
}

TEST_CASE("energy tracker follows the run") {
  SimulationConfig c = example(1.0 / 8, 2.0, 0.0);
  c.t_final = 10 * c.dt;
  const Stencil st = compute_stencil(c.kernel, c.grid);
  EnergyTracker tracker(st, c.grid.n, c.dt);
  std::vector<RealField> levels;
  const RunResult r = run(c, st, [&](const PMLState& s) {
    tracker(s);
    if (levels.empty()) levels.push_back(s.u_prev);
    levels.push_back(s.u_curr);
  });
  REQUIRE(tracker.values().size() == 10);
  REQUIRE(levels.size() == 12);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(tracker.t()[k] == doctest::Approx(k * c.dt).epsilon(1e-15));
    CHECK(tracker.values()[k] ==
          energy(levels[k], levels[k + 1], levels[k + 2], st, c.grid.n, c.dt));
  }
}

TEST_CASE("slope fit") {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * x * x);
  CHECK(fitted_slope(h, e) == doctest::Approx(2.0).epsilon(1e-12));
  for (double& x : e) x *= 1.5;
  CHECK(fitted_slope(h, e) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fitted_slope({0.5}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fitted_slope(h, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("remeshing keeps the box and the scaled parameters") {
  const SimulationConfig base = example(1.0 / 16, 2.0, 1.0);
  const SimulationConfig c = remesh(base, 1.0 / 8, 2.0, 1.0 / 32);
  CHECK(c.grid.n == 8);
  CHECK(c.grid.n_p == 4);
  CHECK(c.grid.p == required_radius(c.kernel, 1.0 / 8));
  CHECK(c.profile.sigma[0][0] == 16.0);
  CHECK(c.dt == 1.0 / 256);
  CHECK_THROWS_AS(remesh(base, 3.0 / 32, 2.0, 1.0 / 32), std::invalid_argument);
  SimulationConfig custom = base;
  custom.initial = CustomField{zero_field<double>(base.grid)};
  CHECK_THROWS_AS(remesh(custom, 1.0 / 8, 2.0, 1.0 / 32), std::invalid_argument);
}

TEST_CASE("convergence study bookkeeping") {
  const SimulationConfig base = example(1.0 / 16, 2.0, 0.0);

  const ConvergenceTable two = convergence_study(base, 2.0, {1.0 / 8, 1.0 / 16}, 1.0 / 32, 0.25, 2);
  REQUIRE(two.rows.size() == 2);
  CHECK(!two.slope_l2);
  CHECK(!two.slope_max);
  for (const auto& r : two.rows) {
    CHECK(r.err_l2 >= 0.0);
    CHECK(r.err_max >= 0.0);
  }
  CHECK(two.rows[1].err_max < two.rows[0].err_max);

  const ConvergenceTable three =
      convergence_study(base, 2.0, {1.0 / 4, 1.0 / 8, 1.0 / 16}, 1.0 / 32, 0.25, 2);
  CHECK(three.slope_l2.has_value());
  CHECK(three.slope_max.has_value());

  // the study mesh coinciding with the reference mesh, no damping, no wall contact yet
  const ConvergenceTable self = convergence_study(base, 0.0, {1.0 / 16}, 1.0 / 16, 0.25, 2);
  CHECK(self.rows[0].err_max < 1e-13);

  CHECK_THROWS_AS(convergence_study(base, 2.0, {3.0 / 32}, 1.0 / 32, 0.25, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(base, 2.0, {1.0 / 64}, 1.0 / 32, 0.25, 2),
                  std::invalid_argument);
}

TEST_CASE("sigma scan decay factors") {
  const SimulationConfig c = example(1.0 / 16, 0.0, 0.0);
  const Stencil st = compute_stencil(c.kernel, c.grid);
  const std::vector<std::array<double, 2>> kappa{{3.0, 10.0}, {20.0, 10.0}, {45.0, 40.0}};
  const auto rows = sigma_scan(c, st, {0.0, 16.0, 32.0, 160.0}, kappa);
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    CHECK(!r.reflection);
    if (r.sigma0 == 0.0)
      CHECK(r.abs_mu == 1.0);
    else
      CHECK(r.abs_mu < 1.0);
  }
  const double w = dispersion_frequency(st, 20.0, 10.0);
  CHECK(rows[4].abs_mu ==
        std::abs(decay_rate_mu(WaveMode{w, {complex(20.0), complex(10.0)}}, 16.0, 1.0 / 16)));
}

TEST_CASE("measured reflection minimum sits next to the decay-factor minimum") {
  const double h = 1.0 / 16;
  SimulationConfig c = example(h, 0.0, 2.0);
  c.output.snapshot_every = 0.125;
  const Stencil st = compute_stencil(c.kernel, c.grid);
  const ReferenceSolution ref = solve_reference(c, 4);
  const std::vector<double> sweep{0.5 / h, 1.0 / h, 2.0 / h, 4.0 / h, 8.0 / h};
  const auto rows = sigma_scan(c, st, sweep, {}, &ref);
  REQUIRE(rows.empty());  // no kappa samples, no rows

  std::vector<double> refl;
  for (double s0 : sweep) {
    const auto r = sigma_scan(c, st, {s0}, {{1.0, 10.0}}, &ref);
    refl.push_back(*r.at(0).reflection);
  }
  const std::size_t measured = std::min_element(refl.begin(), refl.end()) - refl.begin();

  // zone average of |mu| over kappa_1 in (0, pi/h) at kappa_2 = 10
  auto average_mu = [&](double s0) {
    double sum = 0.0;
    const int m = 99;
    for (int j = 1; j <= m; ++j) {
      const double k1 = j * M_PI / (h * (m + 1));
      const double w = dispersion_frequency(st, k1, 10.0);
      sum += std::abs(decay_rate_mu(WaveMode{w, {complex(k1), complex(10.0)}}, s0, h));
    }
    return sum / m;
  };
  double best = std::numeric_limits<double>::infinity(), best_s = 0.0;
  for (double s = 0.1; s <= 10.0 + 1e-12; s += 0.1) {
    const double v = average_mu(s / h);
    if (v < best) {
      best = v;
      best_s = s / h;
    }
  }
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (std::abs(std::log(sweep[i] / best_s)) < std::abs(std::log(sweep[nearest] / best_s)))
      nearest = i;
  CHECK(measured + 1 >= nearest);
  CHECK(measured <= nearest + 1);
}

TEST_CASE("csv headers and rows") {
  std::ostringstream a, b, e, r;
  write_sigma_scan_csv(a, {{32.0, 1.0, 10.0, 0.5, std::nullopt}, {0.0, 1.0, 10.0, 1.0, 0.25}});
  CHECK(a.str() == "sigma0,kappa1,kappa2,abs_mu,reflection\n32,1,10,0.5,\n0,1,10,1,0.25\n");
  ConvergenceTable t;
  t.rows.push_back({0.125, 0.5, 0.75});
  write_convergence_csv(b, t);
  CHECK(b.str() == "h,err_l2,err_max\n0.125,0.5,0.75\n");
  write_energy_csv(e, {0.0, 0.1}, {2.0, 1.5});
  CHECK(e.str() == "t,E\n0,2\n0.1,1.5\n");
  ReflectionTrace tr;
  tr.t = {1.0};
  tr.max_abs_diff = {1e-5};
  write_reflection_csv(r, tr);
  CHECK(r.str() == "t,max_abs_diff\n1,1e-05\n");
}
