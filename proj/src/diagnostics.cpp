#include "pdpml/diagnostics.hpp"

#include "pdpml/format.hpp"
#include "pdpml/holomorphy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace pdpml {

RealField restrict_to_physical(const RealField& u, int n) {
  const int m = static_cast<int>(u.rows() - 1) / 2;
  if (u.rows() != u.cols() || m < n) throw std::invalid_argument("field smaller than the physical box");
  return u.block(m - n, m - n, 2 * n + 1, 2 * n + 1);
}

int minimal_enlargement(const GridConfig& g, double t_final, double v_max) {
  const double half = g.n * g.h;
  const int f = static_cast<int>(std::ceil(1.0 + v_max * t_final / half - 1e-12));
  return std::max(2, f);
}

ReferenceSolution solve_reference(const SimulationConfig& cfg, int enlargement) {
  validate(cfg);
  ReferenceSolution ref;
  ref.enlargement = enlargement;
  ref.grid = cfg.grid;
  ref.grid.n = cfg.grid.n * enlargement;
  ref.grid.n_p = 0;

  const Stencil st = compute_stencil(cfg.kernel, ref.grid, cfg.quad_order);
  const int need = minimal_enlargement(cfg.grid, cfg.t_final, max_group_speed(st));
  if (enlargement < need)
    throw std::invalid_argument("enlargement " + std::to_string(enlargement) +
                                " is insufficient for t_final; minimal admissible factor is " +
                                std::to_string(need));

  SimulationConfig rc = cfg;
  rc.grid = ref.grid;
  rc.profile = build_profile(ref.grid, 0.0);
  rc.output = {};
  if (const auto* c = std::get_if<CustomField>(&cfg.initial)) {
    RealField big = zero_field<double>(ref.grid);
    const int off = ref.grid.half_width() - cfg.grid.half_width();
    big.block(off, off, c->values.rows(), c->values.cols()) = c->values;
    rc.initial = CustomField{big};
  }
  const long n_steps = step_count(cfg.t_final, cfg.dt);
  const std::vector<long> steps = snapshot_steps(cfg.output, cfg.dt, n_steps);
  auto next = steps.begin();
  const int n = cfg.grid.n;
  run(rc, st, [&](const PMLState& s) {
    if (next != steps.end() && *next == s.step) {
      ref.snapshots.push_back({s.t, s.step, restrict_to_physical(s.u_curr, n)});
      ++next;
    }
  });
  return ref;
}

double ReflectionTrace::max() const {
  double m = 0.0;
  for (double v : max_abs_diff) m = std::max(m, v);
  return m;
}

ReflectionTrace reflection_error(const std::vector<FieldSnapshot>& u,
                                 const std::vector<FieldSnapshot>& u_ref, int n) {
  if (u.size() != u_ref.size()) throw std::invalid_argument("snapshot counts differ");
  ReflectionTrace r;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (std::abs(u[k].t - u_ref[k].t) > 1e-9 * std::max(1.0, std::abs(u[k].t)))
      throw std::invalid_argument("snapshot times differ");
    const RealField a = restrict_to_physical(u[k].u, n), b = restrict_to_physical(u_ref[k].u, n);
    r.t.push_back(u[k].t);
    r.max_abs_diff.push_back((a - b).abs().maxCoeff());
  }
  return r;
}

double energy(const RealField& u_prev, const RealField& u_curr, const RealField& u_next,
              const Stencil& st, int n, double dt) {
  int reach = 0;
  for (const Tap& t : st.taps()) reach = std::max({reach, std::abs(t.k1), std::abs(t.k2)});
  const int nd = n - reach;
  if (nd < 0) throw std::invalid_argument("stencil-interior set is empty");
  const int m = static_cast<int>(u_curr.rows() - 1) / 2;
  if (m < n || u_prev.rows() != u_curr.rows() || u_next.rows() != u_curr.rows())
    throw std::invalid_argument("fields do not cover the physical box");

  double kin = 0.0;
  for (int i2 = -n; i2 <= n; ++i2)
    for (int i1 = -n; i1 <= n; ++i1) {
      const double v = (u_next(i1 + m, i2 + m) - u_prev(i1 + m, i2 + m)) / (2.0 * dt);
      kin += v * v;
    }
  const RealField lu = apply_operator(u_curr, st);
  double pot = 0.0;
  for (int i2 = -nd; i2 <= nd; ++i2)
    for (int i1 = -nd; i1 <= nd; ++i1) pot += lu(i1 + m, i2 + m) * lu(i1 + m, i2 + m);
  const double n_omega = (2.0 * n + 1) * (2.0 * n + 1);
  const double n_delta = (2.0 * nd + 1) * (2.0 * nd + 1);
  return kin / (2.0 * n_omega) + pot / (2.0 * n_delta);
}

void EnergyTracker::operator()(const PMLState& s) {
  if (older_) {
    t_.push_back((s.step - 1) * dt_);
    e_.push_back(energy(*older_, s.u_prev, s.u_curr, st_, n_, dt_));
  }
  older_ = s.u_prev;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t m = h.size();
  if (m < 2 || err.size() != m) throw std::invalid_argument("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SimulationConfig remesh(const SimulationConfig& base, double h, double sigma0_h, double dt_over_h) {
  if (!std::holds_alternative<GaussianPulse>(base.initial))
    throw std::invalid_argument("remeshing needs an analytic initial condition");
  SimulationConfig c = base;
  const double half = base.grid.n * base.grid.h;
  const long n = std::lround(half / h);
  if (std::abs(n * h - half) > 1e-12 * half)
    throw std::invalid_argument("mesh size does not divide the physical box");
  c.grid.h = h;
  c.grid.n = static_cast<int>(n);
  c.grid.p = required_radius(base.kernel, h);
  c.profile = build_profile(c.grid, c.grid.n_p > 0 ? sigma0_h / h : 0.0);
  c.dt = dt_over_h * h;
  c.output = {};
  return c;
}

ConvergenceTable convergence_study(const SimulationConfig& base, double sigma0_h,
                                   const std::vector<double>& meshes, double h_ref,
                                   double t_eval, int enlargement) {
  std::vector<int> ratio;
  for (double h : meshes) {
    const double r = h / h_ref;
    const long ri = std::lround(r);
    if (ri < 1 || std::abs(r - ri) > 1e-12 * r || (ri & (ri - 1)) != 0)
      throw std::invalid_argument("meshes must be nested: h / h_ref a power of two");
    ratio.push_back(static_cast<int>(ri));
  }
  const double dt_over_h = base.dt / base.grid.h;

  SimulationConfig rc = remesh(base, h_ref, 0.0, dt_over_h);
  rc.t_final = t_eval;
  const ReferenceSolution ref = solve_reference(rc, enlargement);
  const RealField& uref = ref.snapshots.back().u;
  const int mref = rc.grid.n;

  ConvergenceTable table;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    SimulationConfig c = remesh(base, meshes[k], sigma0_h, dt_over_h);
    c.t_final = t_eval;
    const RunResult r = run(c);
    const RealField u = restrict_to_physical(r.final_state.u_curr, c.grid.n);
    const int n = c.grid.n;
    double sum = 0.0, mx = 0.0;
    for (int i2 = -n; i2 <= n; ++i2)
      for (int i1 = -n; i1 <= n; ++i1) {
        const double e = u(i1 + n, i2 + n) - uref(i1 * ratio[k] + mref, i2 * ratio[k] + mref);
        sum += e * e;
        mx = std::max(mx, std::abs(e));
      }
    table.rows.push_back({meshes[k], meshes[k] * std::sqrt(sum), mx});
  }
  if (table.rows.size() >= 3) {
    std::vector<double> h, l2, mx;
    for (const auto& row : table.rows) {
      h.push_back(row.h);
      l2.push_back(row.err_l2);
      mx.push_back(row.err_max);
    }
    table.slope_l2 = fitted_slope(h, l2);
    table.slope_max = fitted_slope(h, mx);
  }
  return table;
}

std::vector<SigmaScanRow> sigma_scan(const SimulationConfig& base, const Stencil& st,
                                     const std::vector<double>& sigma0,
                                     const std::vector<std::array<double, 2>>& kappa,
                                     const ReferenceSolution* reference) {
  std::vector<SigmaScanRow> rows;
  const double h = base.grid.h;
  for (double s0 : sigma0) {
    std::optional<double> refl;
    if (reference) {
      SimulationConfig c = base;
      c.profile = build_profile(c.grid, s0);
      std::vector<FieldSnapshot> snaps;
      const long n_steps = step_count(c.t_final, c.dt);
      const std::vector<long> steps = snapshot_steps(c.output, c.dt, n_steps);
      auto next = steps.begin();
      run(c, st, [&](const PMLState& s) {
        if (next != steps.end() && *next == s.step) {
          snaps.push_back({s.t, s.step, restrict_to_physical(s.u_curr, c.grid.n)});
          ++next;
        }
      });
      refl = reflection_error(snaps, reference->snapshots, c.grid.n).max();
    }
    for (const auto& k : kappa) {
      const double w = dispersion_frequency(st, k[0], k[1]);
      SigmaScanRow row{s0, k[0], k[1], 1.0, refl};
      if (w > 0.0) row.abs_mu = std::abs(decay_rate_mu(WaveMode{w, {complex(k[0]), complex(k[1])}}, s0, h));
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sigma_scan_csv(std::ostream& os, const std::vector<SigmaScanRow>& rows) {
  os << "sigma0,kappa1,kappa2,abs_mu,reflection\n";
  for (const auto& r : rows)
    os << format_double(r.sigma0) << ',' << format_double(r.kappa1) << ','
       << format_double(r.kappa2) << ',' << format_double(r.abs_mu) << ','
       << (r.reflection ? format_double(*r.reflection) : std::string()) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "h,err_l2,err_max\n";
  for (const auto& r : t.rows)
    os << format_double(r.h) << ',' << format_double(r.err_l2) << ',' << format_double(r.err_max)
       << '\n';
}

void write_energy_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& e) {
  os << "t,E\n";
  for (std::size_t i = 0; i < t.size(); ++i) os << format_double(t[i]) << ',' << format_double(e[i]) << '\n';
}

void write_reflection_csv(std::ostream& os, const ReflectionTrace& r) {
  os << "t,max_abs_diff\n";
  for (std::size_t i = 0; i < r.t.size(); ++i)
    os << format_double(r.t[i]) << ',' << format_double(r.max_abs_diff[i]) << '\n';
}

}  // namespace pdpml
