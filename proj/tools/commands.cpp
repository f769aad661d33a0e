#include "commands.hpp"

#include "pdpml/format.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

namespace pdpml::cli {

namespace {

std::ofstream open_csv(Manifest& m, const std::string& name) {
  std::ofstream os(m.output(name));
  if (!os) throw std::runtime_error("cannot write " + (m.dir() / name).string());
  return os;
}

std::string numbered(const std::string& stem, std::size_t i, bool binary) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", i);
  return stem + buf + (binary ? ".bin" : ".txt");
}

void dump(Manifest& m, const std::string& name, const RealField& u, double h, double t, bool binary) {
  if (binary) {
    write_dump_binary(m.output(name), u, h, t);
    std::filesystem::path hdr = name;
    m.output(hdr.replace_extension(".hdr").string());
  } else {
    write_dump(m.output(name), u, h, t);
  }
}

Stencil timed_stencil(const SimulationConfig& s, Manifest& m) {
  Stopwatch w;
  Stencil st = compute_stencil(s.kernel, s.grid, s.quad_order);
  m.timing("stencil", w.seconds());
  const CflCheck cfl = check_cfl(st, s.dt, s.c_cfl);
  m.info("cfl_bound", cfl.bound);
  m.info("cfl_ok", cfl.ok);
  if (!cfl.ok)
    std::cerr << "warning: dt = " << format_double(s.dt) << " exceeds the CFL bound "
              << format_double(cfl.bound) << '\n';
  return st;
}

double sigma0_of(const SimulationConfig& s) {
  return s.grid.n_p > 0 ? s.profile.sigma[0][0] : 0.0;
}

void cmd_stencil(const CliConfig& c, const Options&, Manifest& m) {
  const Stencil st = timed_stencil(c.sim, m);
  Stopwatch w;
  auto os = open_csv(m, "stencil.csv");
  write_stencil_csv(os, st);
  m.info("p", st.p);
  m.info("taps", st.taps().size());
  m.info("max_omega2", max_omega2(st));
  m.info("max_group_speed", max_group_speed(st));
  m.timing("diagnostics", w.seconds());
}

void cmd_run(const CliConfig& c, const Options& opt, Manifest& m) {
  const Stencil st = timed_stencil(c.sim, m);
  Stopwatch w;
  const RunResult r = run(c.sim, st);
  m.timing("run", w.seconds());
  m.info("steps", r.final_state.step);
  Stopwatch wo;
  for (std::size_t i = 0; i < r.snapshots.size(); ++i)
    dump(m, numbered("snapshot", i, opt.binary), r.snapshots[i].u, c.sim.grid.h, r.snapshots[i].t,
         opt.binary);
  for (const auto& pr : r.probes) {
    auto os = open_csv(m, "probe_" + std::to_string(pr.node[0]) + "_" + std::to_string(pr.node[1]) + ".csv");
    os << "t,u\n";
    for (std::size_t k = 0; k < pr.t.size(); ++k)
      os << format_double(pr.t[k]) << ',' << format_double(pr.u[k]) << '\n';
  }
  m.timing("output", wo.seconds());
}

void cmd_reference(const CliConfig& c, const Options& opt, Manifest& m) {
  Stopwatch w;
  const ReferenceSolution ref = solve_reference(c.sim, c.enlargement);
  m.timing("run", w.seconds());
  m.info("enlargement", ref.enlargement);
  for (std::size_t i = 0; i < ref.snapshots.size(); ++i)
    dump(m, numbered("reference", i, opt.binary), ref.snapshots[i].u, c.sim.grid.h,
         ref.snapshots[i].t, opt.binary);
}

std::vector<FieldSnapshot> load_series(const std::filesystem::path& dir, const std::string& stem) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    const auto ext = e.path().extension();
    if (name.rfind(stem + "_", 0) == 0 && (ext == ".txt" || ext == ".bin")) files.push_back(e.path());
  }
  if (files.empty()) throw std::runtime_error("no " + stem + " dumps in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<FieldSnapshot> out;
  for (const auto& f : files) {
    Dump d = read_dump(f);
    out.push_back({d.t, 0, std::move(d.u)});
  }
  return out;
}

void cmd_compare(const CliConfig& c, const Options& opt, Manifest& m) {
  if (opt.inputs.size() != 2)
    throw std::invalid_argument("compare needs a run directory and a reference directory");
  Stopwatch w;
  const auto u = load_series(opt.inputs[0], "snapshot");
  const auto ref = load_series(opt.inputs[1], "reference");
  const ReflectionTrace tr = reflection_error(u, ref, c.sim.grid.n);
  auto os = open_csv(m, "reflection.csv");
  write_reflection_csv(os, tr);
  m.info("reflection_max", tr.max());
  m.timing("diagnostics", w.seconds());
}

void cmd_scan_sigma(const CliConfig& c, const Options&, Manifest& m) {
  const Stencil st = timed_stencil(c.sim, m);
  std::vector<double> sigma0;
  for (double s : c.scan_sigma0_h) sigma0.push_back(s / c.sim.grid.h);
  std::optional<ReferenceSolution> ref;
  if (c.scan_measure) {
    Stopwatch w;
    ref = solve_reference(c.sim, c.enlargement);
    m.timing("run", w.seconds());
  }
  Stopwatch w;
  const auto rows = sigma_scan(c.sim, st, sigma0, c.scan_kappa, ref ? &*ref : nullptr);
  m.timing("diagnostics", w.seconds());
  auto os = open_csv(m, "sigma_scan.csv");
  write_sigma_scan_csv(os, rows);
  if (c.scan_measure) {
    const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return *a.reflection < *b.reflection;
    });
    m.info("best_sigma0", best->sigma0);
  }
}

void cmd_convergence(const CliConfig& c, const Options&, Manifest& m) {
  Stopwatch w;
  const ConvergenceTable t = convergence_study(c.sim, sigma0_of(c.sim) * c.sim.grid.h, c.conv_meshes,
                                               c.conv_h_ref, c.conv_t_eval, c.conv_enlargement);
  m.timing("run", w.seconds());
  auto os = open_csv(m, "convergence.csv");
  write_convergence_csv(os, t);
  if (t.slope_l2) m.info("slope_l2", *t.slope_l2);
  if (t.slope_max) m.info("slope_max", *t.slope_max);
}

void cmd_energy(const CliConfig& c, const Options&, Manifest& m) {
  const Stencil st = timed_stencil(c.sim, m);
  EnergyTracker tracker(st, c.sim.grid.n, c.sim.dt);
  Stopwatch w;
  run(c.sim, st, [&](const PMLState& s) { tracker(s); });
  m.timing("run", w.seconds());
  auto os = open_csv(m, "energy.csv");
  write_energy_csv(os, tracker.t(), tracker.values());
  if (!tracker.values().empty()) {
    m.info("max_E", *std::max_element(tracker.values().begin(), tracker.values().end()));
    m.info("final_E", tracker.values().back());
  }
}

void cmd_verify(const CliConfig& c, const Options&, Manifest& m) {
  const Stencil st = timed_stencil(c.sim, m);
  Stopwatch w;
  auto rows = identity_suite(c.sim.grid.h, sigma0_of(c.sim), c.verify);
  const auto thm = theorem_suite(st, c.sim.profile, c.verify);
  rows.insert(rows.end(), thm.begin(), thm.end());
  m.timing("diagnostics", w.seconds());
  auto os = open_csv(m, "verify.csv");
  write_verify_csv(os, rows);
  std::map<std::string, double> worst;
  for (const auto& r : rows) worst[r.check] = std::max(worst[r.check], r.residual);
  m.info("max_residual", worst);
}

void cmd_bench(const CliConfig& c, const Options&, Manifest& m) {
  Stopwatch ws;
  const Stencil st = compute_stencil(c.sim.kernel, c.sim.grid, c.sim.quad_order);
  const double t_stencil = ws.seconds();
  m.timing("stencil", t_stencil);
  PMLState s = init_state(c.sim, st);
  Stopwatch wr;
  for (long k = 0; k < c.bench_steps; ++k) step(s, st, c.sim.profile, c.sim.dt, c.sim.aux_scheme);
  const double t_run = wr.seconds();
  m.timing("run", t_run);
  auto os = open_csv(m, "bench.csv");
  os << "phase,seconds\n";
  os << "stencil," << format_double(t_stencil) << '\n';
  os << "steps," << format_double(t_run) << '\n';
  os << "per_step," << format_double(t_run / c.bench_steps) << '\n';
  m.info("threads", threads());
}

using Handler = void (*)(const CliConfig&, const Options&, Manifest&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"stencil", cmd_stencil},         {"run", cmd_run},
      {"reference", cmd_reference},     {"compare", cmd_compare},
      {"scan-sigma", cmd_scan_sigma},   {"convergence", cmd_convergence},
      {"energy", cmd_energy},           {"verify", cmd_verify},
      {"bench", cmd_bench},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"stencil",     "run",    "reference",
                                                 "compare",     "scan-sigma", "convergence",
                                                 "energy",      "verify", "bench"};
  return names;
}

void dispatch(const std::string& command, CliConfig cfg, const Options& opt, Manifest& m) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw std::invalid_argument("unknown command " + command);
  set_threads(opt.threads);
  if (opt.strict_cfl) cfg.sim.strict_cfl = true;
  if (cfg.sim.strict_cfl) {
    const Stencil st = compute_stencil(cfg.sim.kernel, cfg.sim.grid, cfg.sim.quad_order);
    const CflCheck cfl = check_cfl(st, cfg.sim.dt, cfg.sim.c_cfl);
    if (!cfl.ok)
      throw std::invalid_argument("dt = " + format_double(cfg.sim.dt) + " exceeds the CFL bound " +
                                  format_double(cfl.bound));
  }
  it->second(cfg, opt, m);
}

}  // namespace pdpml::cli
