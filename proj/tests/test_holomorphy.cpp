#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mode_samples.hpp"
#include "pdpml/holomorphy.hpp"
#include "pdpml/verify.hpp"

#include <cmath>
#include <sstream>

using namespace pdpml;

namespace {

constexpr double h16 = 1.0 / 16;
const Window win{-8, 16};

KernelSpec gaussian_quarter() {
  return {GaussianKernel{gaussian_epsilon_for_horizon(0.25)}, 1e-7};
}

GridConfig theorem_grid() {
  GridConfig g;
  g.h = h16;
  g.n = 8;
  g.n_p = 12;
  g.p = required_radius(gaussian_quarter(), h16);
  return g;
}

const Stencil& gaussian_stencil() {
  static const Stencil st = compute_stencil(gaussian_quarter(), theorem_grid());
  return st;
}

ExtendedMode sampled(std::mt19937& rng) {
  const WaveMode m = samples::random_mode(rng, h16);
  return make_extended_mode(m, samples::random_coordinates(rng, h16, m.omega), 48);
}

ExtendedMode undamped(const WaveMode& m) {
  std::array<StretchedCoordinate, 2> z;
  for (auto& c : z) {
    c.h = h16;
    c.omega = m.omega;
  }
  return make_extended_mode(m, z, 48);
}

}  // namespace

TEST_CASE("stretched coordinate invariants") {
  std::mt19937 rng(1);
  const auto z = samples::random_coordinates(rng, h16, 3.0);
  for (int i = -10; i < 10; ++i)
    for (int j = -40; j < 40; ++j) {
      CHECK(z[0].z(i + 1, j) - z[0].z(i, j) == complex(h16, 0.0));
      CHECK(z[0].z(i, j + 1).imag() >= z[0].z(i, j).imag());
    }
  StretchedCoordinate flat{h16, 3.0, 0, {}};
  for (int j = -5; j < 5; ++j) CHECK(flat.z(2, j).imag() == 0.0);
}

TEST_CASE("undamped extension is the plane wave") {
  const WaveMode m{4.0, {complex(7.0, 0.0), complex(-3.0, 0.0)}};
  const ExtendedMode e = undamped(m);
  for (int i = -5; i <= 5; ++i)
    for (int j = -5; j <= 5; ++j) {
      const complex ref = std::exp(complex(0.0, 1.0) * (7.0 * (i + j) * h16 - 3.0 * (1 + 2) * h16));
      CHECK(std::abs(e(i, 1, j, 2) - ref) < 1e-15);
    }
}

TEST_CASE("Cauchy-Riemann residual") {
  // constant function
  std::mt19937 rng(2);
  const WaveMode flat_mode{5.0, {complex(0.0), complex(0.0)}};
  const auto cst = make_extended_mode(flat_mode, samples::random_coordinates(rng, h16, 5.0), 48);
  CHECK(cauchy_riemann_residual(cst, 0, win) == 0.0);

  // undamped plane wave depends on i + j only
  const ExtendedMode e = undamped(WaveMode{4.0, {complex(7.0, -1.0), complex(2.0)}});
  CHECK(cauchy_riemann_residual(e, 0, win) == 0.0);
  CHECK(cauchy_riemann_residual(e, 1, win) == 0.0);

  for (int t = 0; t < 20; ++t) {
    const ExtendedMode m = sampled(rng);
    CHECK(cauchy_riemann_residual(m, 0, win) < 1e-12);
    CHECK(cauchy_riemann_residual(m, 1, win) < 1e-12);
  }
}

TEST_CASE("shift identities hold on sampled modes") {
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    const ExtendedMode m = sampled(rng);
    for (int axis = 0; axis < 2; ++axis)
      for (int k = 1; k <= 4; ++k) {
        IdentityParams pr;
        pr.axis = axis;
        pr.k = k;
        CHECK(proposition_identity_check(m, Identity::TauMinusK, pr, win).residual < 1e-12);
        CHECK(proposition_identity_check(m, Identity::TauPlusK, pr, win).residual < 1e-12);
        pr.beta = 1 - axis;
        for (bool minus : {true, false}) {
          pr.minus = minus;
          CHECK(proposition_identity_check(m, Identity::TauD, pr, win).residual < 1e-12);
        }
      }
  }
}

TEST_CASE("two-axis shift identities") {
  std::mt19937 rng(4);
  for (int t = 0; t < 6; ++t) {
    const ExtendedMode m = sampled(rng);
    for (int k1 = 1; k1 <= 3; ++k1)
      for (int k2 = 1; k2 <= 3; ++k2)
        for (int form = 0; form < 3; ++form) {
          IdentityParams pr;
          pr.k1 = k1;
          pr.k2 = k2;
          pr.tautau_form = form;
          pr.axis = (k1 + k2) % 2;
          CHECK(proposition_identity_check(m, Identity::TauTau, pr, win).residual < 1e-12);
        }
    // pairing the rho shifts with the wrong tau offsets breaks the identity
    IdentityParams mixed;
    mixed.k1 = 2;
    mixed.k2 = 3;
    mixed.as_printed = false;
    CHECK(proposition_identity_check(m, Identity::TauTau, mixed, win).residual > 1e-3);
  }
}

TEST_CASE("auxiliary derivative identities") {
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) {
    const ExtendedMode m = sampled(rng);
    for (int axis = 0; axis < 2; ++axis)
      for (int k = 1; k <= 4; ++k) {
        IdentityParams pr;
        pr.axis = axis;
        pr.k = k;
        pr.minus = false;
        CHECK(proposition_identity_check(m, Identity::TildePsi, pr, win).residual < 1e-12);
        pr.minus = true;
        pr.as_printed = false;
        CHECK(proposition_identity_check(m, Identity::TildePsi, pr, win).residual < 1e-12);
        // the history sum may not include the l = k term
        pr.as_printed = true;
        CHECK(proposition_identity_check(m, Identity::TildePsi, pr, win).residual > 1e-3);
      }
  }
}

TEST_CASE("identities degenerate without damping") {
  const ExtendedMode e = undamped(WaveMode{2.0, {complex(9.0, -0.5), complex(4.0)}});
  IdentityParams pr;
  pr.k = 3;
  CHECK(proposition_identity_check(e, Identity::TauMinusK, pr, win).residual == 0.0);
  CHECK(proposition_identity_check(e, Identity::TauPlusK, pr, win).residual == 0.0);
}

TEST_CASE("scaled derivative commutes with shifts") {
  std::mt19937 rng(6);
  for (int t = 0; t < 5; ++t) {
    const ExtendedMode m = sampled(rng);
    for (int k = -3; k <= 3; ++k)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(commutation_residual(m, a, b, k, win) < 1e-13);
  }
}

TEST_CASE("window must cover the shifts") {
  std::mt19937 rng(7);
  const ExtendedMode m = sampled(rng);
  IdentityParams pr;
  pr.k = 4;
  CHECK_THROWS_AS(proposition_identity_check(m, Identity::TauMinusK, pr, Window{-44, 44}),
                  std::invalid_argument);
  pr.k = 1;
  pr.beta = pr.axis;
  CHECK_THROWS_AS(proposition_identity_check(m, Identity::TauD, pr, win), std::invalid_argument);
}

TEST_CASE("extended amplitude decays through the layer") {
  const double h = h16;
  for (double w : {1.0, 10.0, 25.0})
    for (double kr : {2.0, 20.0, 45.0}) {
      for (double sg : {1.0, -1.0}) {
        StretchedCoordinate c{h, sg * w, 0, std::vector<double>(12, 32.0)};
        const AxisExtension ax(c, complex(sg * kr, 0.0), 16);
        for (int j = 0; j < 12; ++j) CHECK(std::abs(ax(0, j + 1)) < std::abs(ax(0, j)));
      }
    }
}

TEST_CASE("theorem residual without damping") {
  const GridConfig g = theorem_grid();
  const Stencil& st = gaussian_stencil();
  const PMLProfile prof = build_profile(g, 0.0);
  const double w = std::sqrt(dispersion_omega2(st, 10.0, 4.0));
  const WaveMode m{w, {complex(10.0), complex(4.0)}};
  const TheoremReport r = theorem_residual(m, prof, st, decaying_window(m, prof, st));
  CHECK(r.max() < 1e-13);
  CHECK(r.tilde == 0.0);
  CHECK(r.corner == 0.0);
}

TEST_CASE("theorem residual for propagating modes") {
  const GridConfig g = theorem_grid();
  const Stencil& st = gaussian_stencil();
  const PMLProfile prof = build_profile(g, 32.0);
  for (double kap : {3.0, 10.0, 30.0, 48.0})
    for (double th : {0.0, 0.3, 0.8, 1.4, 2.5, 4.0}) {
      const complex k1(kap * std::cos(th)), k2(kap * std::sin(th));
      const double w = dispersion_frequency(st, k1.real(), k2.real());
      for (double sg : {1.0, -1.0}) {
        const WaveMode m{sg * w, {sg * k1, sg * k2}};
        const TheoremReport r = theorem_residual(m, prof, st, decaying_window(m, prof, st));
        CHECK(r.max() < 1e-10);
      }
    }
}

TEST_CASE("theorem residual for evanescent modes") {
  const GridConfig g = theorem_grid();
  const Stencil& st = gaussian_stencil();
  const PMLProfile prof = build_profile(g, 32.0);
  for (double w : {2.0, 5.0, 9.0})
    for (double k2 : {10.0, 14.0}) {
      const complex k1 = solve_evanescent_kappa1(st, w, k2);
      CHECK(k1.imag() < 0.0);
      CHECK(std::abs(dispersion_omega2(st, k1, complex(k2)) - w * w) < 1e-9);
      const WaveMode m{w, {k1, complex(k2)}};
      CHECK(theorem_residual(m, prof, st, decaying_window(m, prof, st)).max() < 1e-10);
    }
}

TEST_CASE("theorem residual rejects modes off the dispersion relation") {
  const GridConfig g = theorem_grid();
  const Stencil& st = gaussian_stencil();
  const PMLProfile prof = build_profile(g, 32.0);
  const WaveMode m{3.0, {complex(10.0), complex(10.0)}};
  CHECK_THROWS_AS(theorem_residual(m, prof, st, decaying_window(m, prof, st)),
                  std::invalid_argument);
}

TEST_CASE("verify csv") {
  std::ostringstream os;
  write_verify_csv(os, {{"cauchy_riemann", 2.5, complex(1.0, -0.5), complex(3.0), 1e-16}});
  CHECK(os.str() == "check,omega,kappa1_re,kappa1_im,kappa2_re,kappa2_im,residual\n"
                    "cauchy_riemann,2.5,1,-0.5,3,0,1e-16\n");
}

TEST_CASE("verification suite") {
  VerifySettings s;
  s.modes = 4;
  s.theorem_modes = 8;
  s.seed = 11;

  const auto flat = identity_suite(h16, 0.0, s);
  CHECK(flat.size() == 4 * 10);
  for (const auto& r : flat) CHECK(r.residual < 1e-14);

  const auto damped = identity_suite(h16, 4.0 / h16, s);
  REQUIRE(damped.size() == flat.size());
  for (const auto& r : damped) {
    if (r.check == "bar_psi_history_to_k")
      CHECK(r.residual > 1e-3);
    else
      CHECK(r.residual < 1e-12);
  }
  // same seed, same modes
  for (std::size_t i = 0; i < flat.size(); ++i) CHECK(flat[i].omega == damped[i].omega);

  const GridConfig g = theorem_grid();
  const auto thm = theorem_suite(gaussian_stencil(), build_profile(g, 32.0), s);
  REQUIRE(thm.size() == 8);
  for (const auto& r : thm) CHECK(r.residual < 1e-10);
  CHECK(thm[3].kappa1.imag() < 0.0);
}
