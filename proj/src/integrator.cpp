#include "pdpml/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

namespace pdpml {

InstabilityError::InstabilityError(long step, double t)
    : std::runtime_error("non-finite value at step " + std::to_string(step) +
                         " (t = " + std::to_string(t) + ")"),
      step_(step) {}

void validate(const SimulationConfig& cfg) {
  cfg.grid.validate();
  validate(cfg.kernel);
  if (!(cfg.profile.grid == cfg.grid)) throw std::invalid_argument("profile grid differs from grid");
  cfg.profile.validate();
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final))
    throw std::invalid_argument("t_final must be nonnegative");
  if (cfg.quad_order < 2) throw std::invalid_argument("quad_order must be at least 2");
  if (!(cfg.c_cfl > 0.0)) throw std::invalid_argument("c_cfl must be positive");
  if (const auto* c = std::get_if<CustomField>(&cfg.initial)) {
    if (c->values.rows() != cfg.grid.nodes() || c->values.cols() != cfg.grid.nodes())
      throw std::invalid_argument("custom initial field does not match the grid");
  }
  if (!(cfg.output.snapshot_every >= 0.0))
    throw std::invalid_argument("snapshot_every must be nonnegative");
  for (const auto& pr : cfg.output.probes)
    if (!cfg.grid.on_grid(pr[0], pr[1])) throw std::invalid_argument("probe node outside the grid");
  step_count(cfg.t_final, cfg.dt);
}

CflCheck check_cfl(const Stencil& st, double dt, double c_cfl) {
  const double w2 = max_omega2(st);
  CflCheck c;
  c.bound = w2 > 0.0 ? c_cfl * 2.0 / std::sqrt(w2) : std::numeric_limits<double>::infinity();
  c.ok = dt <= c.bound;
  return c;
}

RealField initial_field(const SimulationConfig& cfg) {
  if (const auto* c = std::get_if<CustomField>(&cfg.initial)) return c->values;
  const auto& pulse = std::get<GaussianPulse>(cfg.initial);
  const GridConfig& g = cfg.grid;
  const int M = g.half_width();
  RealField u(g.nodes(), g.nodes());
  for (int i2 = -M; i2 <= M; ++i2)
    for (int i1 = -M; i1 <= M; ++i1) {
      const double x = i1 * g.h, y = i2 * g.h;
      u(i1 + M, i2 + M) = pulse.amplitude * std::exp(-pulse.width * (x * x + y * y));
    }
  return u;
}

RealField leapfrog(const RealField& u_curr, const RealField& u_prev, const RealField& acc,
                   double dt) {
  return 2.0 * u_curr - u_prev + (dt * dt) * acc;
}

PMLState init_state(const SimulationConfig& cfg, const Stencil& st) {
  validate(cfg);
  if (cfg.strict_cfl) {
    const CflCheck c = check_cfl(st, cfg.dt, cfg.c_cfl);
    if (!c.ok)
      throw std::invalid_argument("dt = " + std::to_string(cfg.dt) + " exceeds the CFL bound " +
                                  std::to_string(c.bound));
  }
  PMLState s;
  s.u_curr = initial_field(cfg);
  s.u_prev = s.u_curr + (0.5 * cfg.dt * cfg.dt) * apply_operator(s.u_curr, st);
  s.psi = make_aux<double>(cfg.grid);
  return s;
}

namespace {

template <typename F>
void zip(AuxFields<double>& a, const AuxFields<double>& b, F&& f) {
  for (int x = 0; x < 2; ++x)
    for (std::size_t k = 0; k < a.tilde[x].size(); ++k) {
      f(a.tilde[x][k], b.tilde[x][k]);
      f(a.bar[x][k], b.bar[x][k]);
    }
  for (int c = 0; c < 4; ++c)
    for (std::size_t k = 0; k < a.corner[c].size(); ++k) f(a.corner[c][k], b.corner[c][k]);
}

// a <- (a + b) / 2
void average_into(AuxFields<double>& a, const AuxFields<double>& b) {
  zip(a, b, [](LayerField<double>& x, const LayerField<double>& y) {
    for (std::size_t i = 0; i < x.data().size(); ++i)
      x.data()[i] = 0.5 * (x.data()[i] + y.data()[i]);
  });
}

bool finite(const PMLState& s) {
  if (!s.u_curr.allFinite()) return false;
  bool ok = true;
  s.psi.for_each([&](const LayerField<double>& f) { ok = ok && f.all_finite(); });
  return ok;
}

// Solves m = O + (dt / 2) (R0 - (tau_s + tau_0)(sigma m) / 2) on the active nodes of one
// family, where R0 is the right-hand side with this family's own level left out. The
// self term is bidiagonal along the axis, so one sweep against the shift direction is exact.
void centred_sweep(LayerField<double>& mid, const LayerField<double>& old,
                   const LayerField<double>& r0, const PMLProfile& prof, int axis, bool tilde,
                   bool corner, double dt) {
  const int s = tilde ? 1 : -1;
  for (std::size_t b = 0; b < mid.boxes().size(); ++b) {
    const Box& box = mid.boxes()[b];
    const int lo = axis == 0 ? box.lo1 : box.lo2, hi = axis == 0 ? box.hi1 : box.hi2;
    const int olo = axis == 0 ? box.lo2 : box.lo1, ohi = axis == 0 ? box.hi2 : box.hi1;
    for (int j = olo; j <= ohi; ++j)
      for (int q = 0; q <= hi - lo; ++q) {
        const int i = tilde ? hi - q : lo + q;
        const int i1 = axis == 0 ? i : j, i2 = axis == 0 ? j : i;
        if (corner ? !corner_active(prof, i1, i2) : !slab_active(prof, axis, i1, i2)) continue;
        const int n1 = i1 + (axis == 0 ? s : 0), n2 = i2 + (axis == 0 ? 0 : s);
        const double sig = prof.at(axis, i), sig_n = prof.at(axis, i + s);
        const double rhs = old(i1, i2) + 0.5 * dt * r0(i1, i2) - 0.25 * dt * sig_n * mid(n1, n2);
        mid.ref(i1, i2) = rhs / (1.0 + 0.25 * dt * sig);
      }
  }
}

// new = 2 mid - old
void finish_from_mid(LayerField<double>& x, const LayerField<double>& mid) {
  for (std::size_t b = 0; b < x.data().size(); ++b)
    x.data()[b] = 2.0 * mid.data()[b] - x.data()[b];
}

// Crank-Nicolson in the auxiliaries; returns the mid-level fields used by the u update.
AuxFields<double> advance_centred(PMLState& s, const Stencil& st, const PMLProfile& prof,
                                  double dt) {
  const int p = prof.grid.p;
  AuxFields<double> mid = make_aux<double>(prof.grid);
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 1; k <= p; ++k)
      for (bool tilde : {true, false}) {
        const auto r0 = tilde ? aux_rhs_tilde(s.u_curr, mid, st, prof, axis, k)
                              : aux_rhs_bar(s.u_curr, mid, st, prof, axis, k);
        LayerField<double>& x = s.psi.slab(tilde, axis, k);
        LayerField<double>& m = mid.slab(tilde, axis, k);
        centred_sweep(m, x, r0, prof, axis, tilde, false, dt);
        finish_from_mid(x, m);
      }
  for (int c = 0; c < 4; ++c) {
    const Corner which = static_cast<Corner>(c);
    const bool tilde = which == Corner::TT || which == Corner::BT;
    for (int k2 = 1; k2 <= p; ++k2)
      for (int k1 = 1; k1 <= p; ++k1) {
        const auto r0 = corner_rhs(mid, st, prof, which, k1, k2);
        LayerField<double>& x = s.psi.at(which, k1, k2);
        LayerField<double>& m = mid.at(which, k1, k2);
        centred_sweep(m, x, r0, prof, 0, tilde, true, dt);
        finish_from_mid(x, m);
      }
  }
  return mid;
}

// Forward self term; returns the mid-level fields used by the u update.
AuxFields<double> advance_explicit(PMLState& s, const Stencil& st, const PMLProfile& prof,
                                   double dt, bool fresh) {
  const int p = prof.grid.p;
  const AuxFields<double> old = s.psi;

  // slab families, ascending k so the history sums see the advanced lower orders
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 1; k <= p; ++k) {
      const AuxFields<double>& src = fresh ? s.psi : old;
      const auto rt = aux_rhs_tilde(s.u_curr, src, st, prof, axis, k);
      const auto rb = aux_rhs_bar(s.u_curr, src, st, prof, axis, k);
      s.psi.tilde[axis][k - 1].add_scaled(rt, dt);
      s.psi.bar[axis][k - 1].add_scaled(rb, dt);
    }

  // corners are driven by the axis-2 slab fields centred at t
  AuxFields<double> drive = s.psi;
  average_into(drive, old);
  AuxFields<double> old_src = old;
  AuxFields<double>& src = fresh ? s.psi : old_src;
  std::swap(src.tilde[1], drive.tilde[1]);
  std::swap(src.bar[1], drive.bar[1]);
  for (int c = 0; c < 4; ++c) {
    const Corner which = static_cast<Corner>(c);
    for (int k2 = 1; k2 <= p; ++k2)
      for (int k1 = 1; k1 <= p; ++k1) {
        const auto r = corner_rhs(src, st, prof, which, k1, k2);
        s.psi.at(which, k1, k2).add_scaled(r, dt);
      }
  }
  if (fresh) {
    std::swap(src.tilde[1], drive.tilde[1]);
    std::swap(src.bar[1], drive.bar[1]);
  }

  AuxFields<double> mid = s.psi;
  average_into(mid, old);
  return mid;
}

}  // namespace

void step(PMLState& s, const Stencil& st, const PMLProfile& prof, double dt, AuxScheme scheme) {
  RealField acc;
  if (prof.is_zero()) {
    acc = main_rhs(s.u_curr, s.psi, st, prof);
  } else {
    const AuxFields<double> mid =
        scheme == AuxScheme::Centred
            ? advance_centred(s, st, prof, dt)
            : advance_explicit(s, st, prof, dt, scheme == AuxScheme::Explicit);
    acc = main_rhs(s.u_curr, mid, st, prof);
  }
  RealField next = leapfrog(s.u_curr, s.u_prev, acc, dt);
  s.u_prev = std::move(s.u_curr);
  s.u_curr = std::move(next);
  ++s.step;
  s.t = s.step * dt;
  if (!finite(s)) throw InstabilityError(s.step, s.t);
}

void verlet_step(RealField& u_prev, RealField& u_curr, const Stencil& st, double dt) {
  RealField next = leapfrog(u_curr, u_prev, apply_operator(u_curr, st), dt);
  u_prev = std::move(u_curr);
  u_curr = std::move(next);
}

long step_count(double t_final, double dt) {
  const double r = t_final / dt;
  const long n = std::lround(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument("t_final must be a multiple of dt");
  return n;
}

std::vector<long> snapshot_steps(const OutputConfig& out, double dt, long n_steps) {
  std::set<long> s{n_steps};
  for (double t : out.snapshot_times) {
    const long k = std::lround(t / dt);
    if (k < 0 || k > n_steps) throw std::invalid_argument("snapshot time outside [0, t_final]");
    s.insert(k);
  }
  if (out.snapshot_every > 0.0) {
    const long every = std::max(1L, std::lround(out.snapshot_every / dt));
    for (long k = 0; k <= n_steps; k += every) s.insert(k);
  }
  return {s.begin(), s.end()};
}

RunResult run(const SimulationConfig& cfg, const Stencil& st, const StepObserver& observer) {
  const long n_steps = step_count(cfg.t_final, cfg.dt);
  RunResult res;
  res.final_state = init_state(cfg, st);
  PMLState& s = res.final_state;
  const std::vector<long> snaps = snapshot_steps(cfg.output, cfg.dt, n_steps);
  auto next_snap = snaps.begin();
  for (const auto& node : cfg.output.probes) res.probes.push_back({node, {}, {}});
  const int M = cfg.grid.half_width();

  auto record = [&] {
    if (observer) observer(s);
    for (auto& pr : res.probes) {
      pr.t.push_back(s.t);
      pr.u.push_back(s.u_curr(pr.node[0] + M, pr.node[1] + M));
    }
    if (next_snap != snaps.end() && *next_snap == s.step) {
      res.snapshots.push_back({s.t, s.step, s.u_curr});
      ++next_snap;
    }
  };
  record();
  for (long n = 0; n < n_steps; ++n) {
    step(s, st, cfg.profile, cfg.dt, cfg.aux_scheme);
    record();
  }
  return res;
}

RunResult run(const SimulationConfig& cfg) {
  validate(cfg);
  const Stencil st = compute_stencil(cfg.kernel, cfg.grid, cfg.quad_order);
  return run(cfg, st);
}

}  // namespace pdpml
