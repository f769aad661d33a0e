#pragma once

#include "integrator.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace pdpml {

/// Centred (2n+1)^2 block of a node field; fields already of that size pass through.
RealField restrict_to_physical(const RealField& u, int n);

/// Smallest factor f >= 2 with (f - 1) n h >= v_max t_final: nothing that
/// starts in the box reaches the far wall by t_final. The weaker out-and-back
/// bound lets high-wavenumber tails reflect back at the 1e-8 level.
int minimal_enlargement(const GridConfig& g, double t_final, double v_max);

struct ReferenceSolution {
  GridConfig grid;  // enlarged grid, no layer
  int enlargement = 0;
  std::vector<FieldSnapshot> snapshots;  // restricted to the physical box
};

/// Plain leapfrog on the grid enlarged by `enlargement` with a hard Dirichlet
/// wall; snapshots at the steps of cfg.output. Throws std::invalid_argument
/// naming the minimal admissible factor when the enlargement is too small.
ReferenceSolution solve_reference(const SimulationConfig& cfg, int enlargement);

struct ReflectionTrace {
  std::vector<double> t, max_abs_diff;
  double max() const;
};

/// max over matching snapshot times of max |U - U_ref| on the physical box.
ReflectionTrace reflection_error(const std::vector<FieldSnapshot>& u,
                                 const std::vector<FieldSnapshot>& u_ref, int n);

/// Discrete energy at level t_n from u^{n-1}, u^n, u^{n+1} over the physical
/// box (|i| <= n) and its stencil-interior part.
double energy(const RealField& u_prev, const RealField& u_curr, const RealField& u_next,
              const Stencil& st, int n, double dt);

/// Run observer that records E(t_n) once u^{n+1} is known.
class EnergyTracker {
 public:
  EnergyTracker(const Stencil& st, int n, double dt) : st_(st), n_(n), dt_(dt) {}
  void operator()(const PMLState& s);
  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& values() const { return e_; }

 private:
  const Stencil& st_;
  int n_;
  double dt_;
  std::optional<RealField> older_;
  std::vector<double> t_, e_;
};

struct ConvergenceRow {
  double h = 0.0, err_l2 = 0.0, err_max = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::optional<double> slope_l2, slope_max;  // set when at least 3 meshes
};

/// Least-squares slope of log(err) against log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& err);

/// Layer runs at each h against a leapfrog reference at h_ref on the enlarged
/// box, compared at coincident nodes at t_eval. base supplies the kernel,
/// n_p, sigma0 h (kept fixed), dt / h and the initial data; its grid and
/// profile are rebuilt per mesh.
ConvergenceTable convergence_study(const SimulationConfig& base, double sigma0_h,
                                   const std::vector<double>& meshes, double h_ref,
                                   double t_eval, int enlargement);

/// base with grid rebuilt for mesh h (box (-L, L)^2 kept), sigma0 = sigma0_h / h
/// and dt = dt_over_h h.
SimulationConfig remesh(const SimulationConfig& base, double h, double sigma0_h, double dt_over_h);

struct SigmaScanRow {
  double sigma0 = 0.0, kappa1 = 0.0, kappa2 = 0.0, abs_mu = 0.0;
  std::optional<double> reflection;
};

/// |mu| per (sigma0, kappa) with omega from the dispersion relation; when a
/// reference is given, also the measured reflection of a layer run per sigma0.
std::vector<SigmaScanRow> sigma_scan(const SimulationConfig& base, const Stencil& st,
                                     const std::vector<double>& sigma0,
                                     const std::vector<std::array<double, 2>>& kappa,
                                     const ReferenceSolution* reference = nullptr);

void write_sigma_scan_csv(std::ostream& os, const std::vector<SigmaScanRow>& rows);
void write_convergence_csv(std::ostream& os, const ConvergenceTable& t);
void write_energy_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& e);
void write_reflection_csv(std::ostream& os, const ReflectionTrace& r);

}  // namespace pdpml
