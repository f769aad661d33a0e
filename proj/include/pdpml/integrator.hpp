#pragma once

#include "kernel.hpp"
#include "pml.hpp"

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pdpml {

/// u(x, 0) = amplitude exp(-width |x|^2), zero initial velocity.
struct GaussianPulse {
  double amplitude = 1.0;
  double width = 40.0;
  bool operator==(const GaussianPulse&) const = default;
};

/// Tabulated initial field over the full grid.
struct CustomField {
  RealField values;
  bool operator==(const CustomField& o) const {
    return values.rows() == o.values.rows() && values.cols() == o.values.cols() &&
           (values == o.values).all();
  }
};

/// How the auxiliaries advance between half levels.
enum class AuxScheme {
  Centred,             // self term at the mid level, solved by one sweep per family
  Explicit,            // forward self term, history from lower k at the new half level
  ExplicitOldHistory,  // forward self term, everything at the previous half level
};

struct OutputConfig {
  double snapshot_every = 0.0;        // 0: no periodic snapshots
  std::vector<double> snapshot_times;  // extra snapshot times
  std::vector<std::array<int, 2>> probes;
  bool operator==(const OutputConfig&) const = default;
};

struct SimulationConfig {
  GridConfig grid;
  KernelSpec kernel;
  PMLProfile profile;
  double dt = 0.0;
  double t_final = 0.0;
  std::variant<GaussianPulse, CustomField> initial = GaussianPulse{};
  int quad_order = 8;
  double c_cfl = 0.9;
  bool strict_cfl = false;
  AuxScheme aux_scheme = AuxScheme::Centred;
  OutputConfig output;

  bool operator==(const SimulationConfig&) const = default;
};

struct PMLState {
  RealField u_prev, u_curr;
  AuxFields<double> psi;  // at the half level t - dt/2
  double t = 0.0;
  long step = 0;
};

struct CflCheck {
  double bound = 0.0;  // c_cfl * 2 / sqrt(max omega^2)
  bool ok = true;
};

/// Thrown when a step produces a non-finite value.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(long step, double t);
  long step() const { return step_; }

 private:
  long step_;
};

/// Throws std::invalid_argument on inconsistent configurations.
void validate(const SimulationConfig& cfg);

CflCheck check_cfl(const Stencil& st, double dt, double c_cfl);

/// Initial field sampled at the nodes.
RealField initial_field(const SimulationConfig& cfg);

/// Taylor start u_prev = u + (dt^2 / 2) L_h u, zero auxiliaries. Throws
/// std::invalid_argument on a CFL violation when cfg.strict_cfl is set.
PMLState init_state(const SimulationConfig& cfg, const Stencil& st);

/// One step of the staggered scheme; throws InstabilityError on non-finite output.
void step(PMLState& s, const Stencil& st, const PMLProfile& prof, double dt,
          AuxScheme scheme = AuxScheme::Centred);

/// Plain leapfrog for the discrete wave equation, no layer.
void verlet_step(RealField& u_prev, RealField& u_curr, const Stencil& st, double dt);

/// 2 u - u_prev + dt^2 acc, shared by both steppers.
RealField leapfrog(const RealField& u_curr, const RealField& u_prev, const RealField& acc,
                   double dt);

/// Number of steps to t_final; t_final must be a multiple of dt.
long step_count(double t_final, double dt);

struct FieldSnapshot {
  double t = 0.0;
  long step = 0;
  RealField u;
};

struct ProbeTrace {
  std::array<int, 2> node{};
  std::vector<double> t, u;
};

struct RunResult {
  std::vector<FieldSnapshot> snapshots;
  std::vector<ProbeTrace> probes;
  PMLState final_state;
};

/// Called after every step (and once for the initial state with step = 0).
using StepObserver = std::function<void(const PMLState&)>;

/// Steps at which run() records snapshots; the final step is always included.
std::vector<long> snapshot_steps(const OutputConfig& out, double dt, long n_steps);

RunResult run(const SimulationConfig& cfg, const Stencil& st, const StepObserver& observer = {});
RunResult run(const SimulationConfig& cfg);

}  // namespace pdpml
