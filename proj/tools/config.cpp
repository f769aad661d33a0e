#include "config.hpp"

#include "pdpml/format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pdpml::cli {

ConfigError::ConfigError(const std::string& source, int line, const std::string& key,
                         const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         key + ": " + what),
      line_(line),
      key_(key) {}

namespace {

const std::map<std::string, std::set<std::string>> known_keys = {
    {"kernel", {"type", "delta", "epsilon", "cutoff", "s", "gamma_bar", "quad_order"}},
    {"grid", {"h", "half_width", "n_p"}},
    {"pml", {"sigma0", "aux_scheme"}},
    {"time", {"dt", "t_final", "c_cfl", "strict_cfl"}},
    {"initial", {"amplitude", "width"}},
    {"output", {"snapshot_every", "snapshot_times", "probes"}},
    {"reference", {"enlargement"}},
    {"scan", {"sigma0_h", "kappa", "measure"}},
    {"convergence", {"meshes", "h_ref", "t_eval", "enlargement"}},
    {"verify", {"modes", "theorem_modes", "seed"}},
    {"bench", {"steps"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : e_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return e_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? e_.at(key).line : 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(source_, line(key), key, what);
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_number(key, e_.at(key).value);
  }
  double required_number(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key");
    return number(key, 0.0);
  }
  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = e_.at(key).value;
    long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty())
      fail(key, "expected an integer, got '" + v + "'");
    return x;
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = e_.at(key).value;
    if (v == "true") return true;
    if (v == "false") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }
  std::string word(const std::string& key, const std::string& fallback) const {
    return has(key) ? e_.at(key).value : fallback;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    const std::string& v = e_.at(key).value;
    if (v.empty()) return out;
    for (const auto& item : split(v, ',')) out.push_back(parse_number(key, item));
    return out;
  }
  std::vector<std::array<double, 2>> pairs(const std::string& key,
                                           std::vector<std::array<double, 2>> fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::array<double, 2>> out;
    const std::string& v = e_.at(key).value;
    if (v.empty()) return out;
    for (const auto& item : split(v, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) fail(key, "expected a:b pairs, got '" + item + "'");
      out.push_back({parse_number(key, parts[0]), parse_number(key, parts[1])});
    }
    return out;
  }

 private:
  double parse_number(const std::string& key, const std::string& v) const {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || v.empty())
      fail(key, "expected a number, got '" + v + "'");
    if (!std::isfinite(x)) fail(key, "value must be finite");
    return x;
  }

  std::map<std::string, Entry> e_;
  std::string source_;
};

KernelSpec read_kernel(const Reader& r) {
  if (!r.has("kernel.type")) r.fail("kernel.type", "missing required key");
  const std::string type = r.word("kernel.type", "");
  KernelSpec k;
  k.cutoff = r.number("kernel.cutoff", 1e-7);
  if (!(k.cutoff > 0.0 && k.cutoff < 1.0)) r.fail("kernel.cutoff", "must lie in (0, 1)");
  if (type == "gaussian") {
    if (r.has("kernel.s") || r.has("kernel.gamma_bar"))
      r.fail(r.has("kernel.s") ? "kernel.s" : "kernel.gamma_bar", "not used by the gaussian kernel");
    if (r.has("kernel.delta") == r.has("kernel.epsilon"))
      r.fail("kernel.epsilon", "give exactly one of delta and epsilon");
    double eps = 0.0;
    if (r.has("kernel.delta")) {
      const double d = r.number("kernel.delta", 0.0);
      if (!(d > 0.0)) r.fail("kernel.delta", "must be positive");
      eps = gaussian_epsilon_for_horizon(d, k.cutoff);
    } else {
      eps = r.number("kernel.epsilon", 0.0);
      if (!(eps > 0.0)) r.fail("kernel.epsilon", "must be positive");
    }
    k.family = GaussianKernel{eps};
    return k;
  }
  if (r.has("kernel.epsilon")) r.fail("kernel.epsilon", "only used by the gaussian kernel");
  const double d = r.required_number("kernel.delta");
  if (!(d > 0.0)) r.fail("kernel.delta", "must be positive");
  if (type == "heaviside_r2") {
    if (r.has("kernel.s") || r.has("kernel.gamma_bar"))
      r.fail(r.has("kernel.s") ? "kernel.s" : "kernel.gamma_bar",
             "not used by the heaviside_r2 kernel");
    k.family = HeavisideOverR2Kernel{d};
    return k;
  }
  if (type == "bounded_singular") {
    BoundedSingularKernel b;
    b.delta = d;
    b.s = r.number("kernel.s", 0.0);
    const std::string g = r.word("kernel.gamma_bar", "heaviside");
    if (g == "heaviside")
      b.gamma_bar = GammaBar::Heaviside;
    else if (g == "linear")
      b.gamma_bar = GammaBar::PiecewiseLinear;
    else if (g == "gaussian")
      b.gamma_bar = GammaBar::Gaussian;
    else
      r.fail("kernel.gamma_bar", "expected heaviside, linear or gaussian, got '" + g + "'");
    k.family = b;
    try {
      validate(k);
    } catch (const std::invalid_argument& e) {
      r.fail("kernel.s", e.what());
    }
    return k;
  }
  r.fail("kernel.type", "expected gaussian, heaviside_r2 or bounded_singular, got '" + type + "'");
}

CliConfig resolve(const Reader& r) {
  CliConfig c;
  SimulationConfig& s = c.sim;
  s.kernel = read_kernel(r);
  s.quad_order = static_cast<int>(r.integer("kernel.quad_order", 8));
  if (s.quad_order < 2) r.fail("kernel.quad_order", "must be at least 2");

  const double h = r.required_number("grid.h");
  if (!(h > 0.0)) r.fail("grid.h", "must be positive");
  const double half = r.number("grid.half_width", 1.0);
  if (!(half > 0.0)) r.fail("grid.half_width", "must be positive");
  const long n = std::lround(half / h);
  if (n < 1 || std::abs(n * h - half) > 1e-9 * half)
    r.fail("grid.half_width", "must be a positive multiple of h");
  s.grid.h = h;
  s.grid.n = static_cast<int>(n);
  s.grid.n_p = static_cast<int>(r.integer("grid.n_p", 4));
  if (s.grid.n_p < 0) r.fail("grid.n_p", "must be nonnegative");
  s.grid.p = required_radius(s.kernel, h);

  const double sigma0 = r.number("pml.sigma0", s.grid.n_p > 0 ? 2.0 / h : 0.0);
  if (!(sigma0 >= 0.0)) r.fail("pml.sigma0", "must be nonnegative");
  if (s.grid.n_p == 0 && sigma0 > 0.0) r.fail("pml.sigma0", "damping requires grid.n_p >= 1");
  s.profile = build_profile(s.grid, sigma0);
  const std::string scheme = r.word("pml.aux_scheme", "centred");
  if (scheme == "centred")
    s.aux_scheme = AuxScheme::Centred;
  else if (scheme == "explicit")
    s.aux_scheme = AuxScheme::Explicit;
  else if (scheme == "explicit_old_history")
    s.aux_scheme = AuxScheme::ExplicitOldHistory;
  else
    r.fail("pml.aux_scheme", "expected centred, explicit or explicit_old_history, got '" + scheme + "'");

  s.dt = r.number("time.dt", h / 32.0);
  if (!(s.dt > 0.0)) r.fail("time.dt", "must be positive");
  s.t_final = r.number("time.t_final", 2.0);
  if (!(s.t_final >= 0.0)) r.fail("time.t_final", "must be nonnegative");
  try {
    step_count(s.t_final, s.dt);
  } catch (const std::invalid_argument& e) {
    r.fail("time.t_final", e.what());
  }
  s.c_cfl = r.number("time.c_cfl", 0.9);
  if (!(s.c_cfl > 0.0)) r.fail("time.c_cfl", "must be positive");
  s.strict_cfl = r.boolean("time.strict_cfl", false);

  GaussianPulse pulse;
  pulse.amplitude = r.number("initial.amplitude", 1.0);
  pulse.width = r.number("initial.width", 40.0);
  if (!(pulse.width > 0.0)) r.fail("initial.width", "must be positive");
  s.initial = pulse;

  s.output.snapshot_every = r.number("output.snapshot_every", 0.0);
  if (!(s.output.snapshot_every >= 0.0)) r.fail("output.snapshot_every", "must be nonnegative");
  s.output.snapshot_times = r.numbers("output.snapshot_times", {});
  for (const auto& pr : r.pairs("output.probes", {})) {
    const int i1 = static_cast<int>(std::lround(pr[0])), i2 = static_cast<int>(std::lround(pr[1]));
    if (i1 != pr[0] || i2 != pr[1]) r.fail("output.probes", "probe indices must be integers");
    if (!s.grid.on_grid(i1, i2)) r.fail("output.probes", "probe node outside the grid");
    s.output.probes.push_back({i1, i2});
  }
  try {
    snapshot_steps(s.output, s.dt, step_count(s.t_final, s.dt));
  } catch (const std::invalid_argument& e) {
    r.fail(r.has("output.snapshot_times") ? "output.snapshot_times" : "output.snapshot_every",
           e.what());
  }

  c.enlargement = static_cast<int>(r.integer("reference.enlargement", 4));
  if (c.enlargement < 2) r.fail("reference.enlargement", "must be at least 2");

  c.scan_sigma0_h = r.numbers("scan.sigma0_h", c.scan_sigma0_h);
  if (c.scan_sigma0_h.empty()) r.fail("scan.sigma0_h", "must not be empty");
  for (double v : c.scan_sigma0_h)
    if (!(v >= 0.0)) r.fail("scan.sigma0_h", "must be nonnegative");
  c.scan_kappa = r.pairs("scan.kappa", c.scan_kappa);
  if (c.scan_kappa.empty()) r.fail("scan.kappa", "must not be empty");
  c.scan_measure = r.boolean("scan.measure", true);

  c.conv_meshes = r.numbers("convergence.meshes", c.conv_meshes);
  if (c.conv_meshes.empty()) r.fail("convergence.meshes", "must not be empty");
  for (double v : c.conv_meshes)
    if (!(v > 0.0)) r.fail("convergence.meshes", "must be positive");
  c.conv_h_ref = r.number("convergence.h_ref", c.conv_h_ref);
  if (!(c.conv_h_ref > 0.0)) r.fail("convergence.h_ref", "must be positive");
  c.conv_t_eval = r.number("convergence.t_eval", c.conv_t_eval);
  if (!(c.conv_t_eval >= 0.0)) r.fail("convergence.t_eval", "must be nonnegative");
  c.conv_enlargement = static_cast<int>(r.integer("convergence.enlargement", 3));
  if (c.conv_enlargement < 2) r.fail("convergence.enlargement", "must be at least 2");

  c.verify.modes = static_cast<int>(r.integer("verify.modes", 50));
  if (c.verify.modes < 0) r.fail("verify.modes", "must be nonnegative");
  c.verify.theorem_modes = static_cast<int>(r.integer("verify.theorem_modes", 20));
  if (c.verify.theorem_modes < 0) r.fail("verify.theorem_modes", "must be nonnegative");
  const long seed = r.integer("verify.seed", 1);
  if (seed < 0) r.fail("verify.seed", "must be nonnegative");
  c.verify.seed = static_cast<unsigned>(seed);

  c.bench_steps = r.integer("bench.steps", 200);
  if (c.bench_steps < 1) r.fail("bench.steps", "must be positive");
  return c;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

std::string join(const std::vector<std::array<double, 2>>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_double(v[i][0]) + ":" + format_double(v[i][1]);
  return s;
}

}  // namespace

CliConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string section, raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(source, line, t, "malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!known_keys.count(section)) throw ConfigError(source, line, section, "unknown section");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, t, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (section.empty()) throw ConfigError(source, line, key, "key outside a section");
    const std::string full = section + "." + key;
    if (!known_keys.at(section).count(key)) throw ConfigError(source, line, full, "unknown key");
    if (entries.count(full))
      throw ConfigError(source, line, full,
                        "duplicate key (first set on line " + std::to_string(entries[full].line) + ")");
    entries[full] = {trim(t.substr(eq + 1)), line};
  }
  return resolve(Reader(std::move(entries), source));
}

CliConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "--config", "cannot open file");
  return parse_config(in, path);
}

std::string serialize_config(const CliConfig& c) {
  const SimulationConfig& s = c.sim;
  std::ostringstream os;
  os << "[kernel]\n";
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GaussianKernel>) {
          os << "type = gaussian\nepsilon = " << format_double(k.epsilon) << '\n';
        } else if constexpr (std::is_same_v<K, HeavisideOverR2Kernel>) {
          os << "type = heaviside_r2\ndelta = " << format_double(k.delta) << '\n';
        } else {
          const char* g = k.gamma_bar == GammaBar::Heaviside         ? "heaviside"
                          : k.gamma_bar == GammaBar::PiecewiseLinear ? "linear"
                                                                      : "gaussian";
          os << "type = bounded_singular\ndelta = " << format_double(k.delta)
             << "\ns = " << format_double(k.s) << "\ngamma_bar = " << g << '\n';
        }
      },
      s.kernel.family);
  os << "cutoff = " << format_double(s.kernel.cutoff) << '\n'
     << "quad_order = " << s.quad_order << "\n\n";

  os << "[grid]\nh = " << format_double(s.grid.h)
     << "\nhalf_width = " << format_double(s.grid.n * s.grid.h) << "\nn_p = " << s.grid.n_p
     << "\n\n";

  const double sigma0 = s.grid.n_p > 0 ? s.profile.sigma[0][0] : 0.0;
  const char* scheme = s.aux_scheme == AuxScheme::Centred    ? "centred"
                       : s.aux_scheme == AuxScheme::Explicit ? "explicit"
                                                             : "explicit_old_history";
  os << "[pml]\nsigma0 = " << format_double(sigma0) << "\naux_scheme = " << scheme << "\n\n";

  os << "[time]\ndt = " << format_double(s.dt) << "\nt_final = " << format_double(s.t_final)
     << "\nc_cfl = " << format_double(s.c_cfl)
     << "\nstrict_cfl = " << (s.strict_cfl ? "true" : "false") << "\n\n";

  const auto& pulse = std::get<GaussianPulse>(s.initial);
  os << "[initial]\namplitude = " << format_double(pulse.amplitude)
     << "\nwidth = " << format_double(pulse.width) << "\n\n";

  std::vector<std::array<double, 2>> probes;
  for (const auto& p : s.output.probes) probes.push_back({double(p[0]), double(p[1])});
  os << "[output]\nsnapshot_every = " << format_double(s.output.snapshot_every)
     << "\nsnapshot_times = " << join(s.output.snapshot_times) << "\nprobes = " << join(probes)
     << "\n\n";

  os << "[reference]\nenlargement = " << c.enlargement << "\n\n";
  os << "[scan]\nsigma0_h = " << join(c.scan_sigma0_h) << "\nkappa = " << join(c.scan_kappa)
     << "\nmeasure = " << (c.scan_measure ? "true" : "false") << "\n\n";
  os << "[convergence]\nmeshes = " << join(c.conv_meshes)
     << "\nh_ref = " << format_double(c.conv_h_ref)
     << "\nt_eval = " << format_double(c.conv_t_eval)
     << "\nenlargement = " << c.conv_enlargement << "\n\n";
  os << "[verify]\nmodes = " << c.verify.modes << "\ntheorem_modes = " << c.verify.theorem_modes
     << "\nseed = " << c.verify.seed << "\n\n";
  os << "[bench]\nsteps = " << c.bench_steps << '\n';
  return os.str();
}

}  // namespace pdpml::cli
