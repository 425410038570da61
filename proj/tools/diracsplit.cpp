// diracsplit: command-line driver for single runs, convergence studies,
// regime sweeps, long-time error series, commutator checks and table presets.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "dirac/commutators.hpp"
#include "dirac/config.hpp"
#include "dirac/observables.hpp"
#include "dirac/study.hpp"

using namespace dirac;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::string format = "csv";
  std::string out;
  std::string reference_dir;
  std::string reference;
  int jobs = -1;
  bool no_timings = false;
  bool save_config = false;

  std::string domain;
  int dim = 0;
  int modes = 0;
  std::string h;
  double epsilon = 0, delta = 0, nu = 0;
  std::string potential;
  std::string initial;
  int mode = 0;
  std::string branch;
  std::string scheme;
  std::string tau;
  double t_final = 0;
  long stride = -1;
  std::string ref_h, ref_tau;
  bool relative = false;
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("-c,--config", c.config_path, "Config file (.ini/.cfg or .json)")->check(CLI::ExistingFile);
  app.add_option("--set", c.sets, "Override any config key: section.key=value (repeatable)");
  app.add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--out", c.out, "Output path (stdout when omitted)");
  app.add_option("--reference-dir", c.reference_dir, "Directory of cached reference solutions");
  app.add_option("--reference", c.reference, "Reference policy")
      ->check(CLI::IsMember({"generate", "load", "analytic"}));
  app.add_option("-j,--jobs", c.jobs, "Concurrent ladder jobs (0: all cores)");
  app.add_flag("--no-timings", c.no_timings, "Omit timings and timestamp (byte-stable output)");
  app.add_flag("--print-config", c.save_config, "Print the effective config as INI to stderr");

  app.add_option("--domain", c.domain, "Interval a,b (same on every axis)");
  app.add_option("--dim", c.dim, "Spatial dimension")->check(CLI::IsMember({1, 2}));
  app.add_option("-M,--modes", c.modes, "Modes per axis (even)");
  app.add_option("--mesh", c.h, "Mesh size h, e.g. 1/16 (overrides --modes)");
  app.add_option("--epsilon", c.epsilon);
  app.add_option("--delta", c.delta);
  app.add_option("--nu", c.nu);
  app.add_option("--potential", c.potential, "paper-1d, honeycomb-2d, zero, constant(V0,A...)");
  app.add_option("--initial", c.initial, "gaussian, wkb, plane-wave");
  app.add_option("--mode", c.mode, "Plane-wave mode index");
  app.add_option("--branch", c.branch, "Plane-wave branch")->check(CLI::IsMember({"+", "-"}));
  app.add_option("-s,--scheme", c.scheme, "S1, S2, S4, S4RK or S4c");
  app.add_option("--tau", c.tau, "Time step");
  app.add_option("-T,--t-final", c.t_final, "Final time");
  app.add_option("--stride", c.stride, "Observer stride in steps (0: automatic)");
  app.add_option("--ref-h", c.ref_h, "Reference mesh size");
  app.add_option("--ref-tau", c.ref_tau, "Reference time step");
  app.add_flag("--relative", c.relative, "Report relative errors as the primary metric");
}

void apply_sets(RunConfig& cfg, const std::vector<std::string>& sets) {
  if (sets.empty()) return;
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(to_ini(cfg));
  pt::read_ini(in, tree);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || s.find('.') > eq)
      throw CLI::ValidationError("--set", "expected section.key=value, got '" + s + "'");
    tree.put(s.substr(0, eq), s.substr(eq + 1));
  }
  std::ostringstream out;
  pt::write_ini(out, tree);
  cfg = config_from_ini(out.str());
}

/// Precedence: built-in defaults (or subcommand preset), config file, --set, flags.
RunConfig effective_config(const CLI::App& app, const Common& c, RunConfig cfg, bool use_file = true) {
  if (use_file && !c.config_path.empty()) cfg = load_config(c.config_path);
  apply_sets(cfg, c.sets);
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--domain")) {
    const auto v = parse_number_list(c.domain);
    if (v.size() != 2) throw CLI::ValidationError("--domain", "expected a,b");
    cfg.grid.a = v[0];
    cfg.grid.b = v[1];
  }
  if (given("--dim")) cfg.grid.dim = c.dim;
  if (given("--modes")) {
    cfg.grid.modes = c.modes;
    cfg.grid.h = 0.0;
  }
  if (given("--mesh")) cfg.grid.h = parse_number(c.h);
  if (given("--epsilon")) cfg.params.epsilon = c.epsilon;
  if (given("--delta")) cfg.params.delta = c.delta;
  if (given("--nu")) cfg.params.nu = c.nu;
  if (given("--potential")) cfg.potential.preset = c.potential;
  if (given("--initial")) cfg.initial.preset = c.initial;
  if (given("--mode")) cfg.initial.mode = c.mode;
  if (given("--branch")) cfg.initial.branch = c.branch;
  if (given("--scheme")) cfg.scheme = parse_scheme(c.scheme);
  if (given("--tau")) cfg.tau = parse_number(c.tau);
  if (given("--t-final")) cfg.t_final = c.t_final;
  if (given("--stride")) cfg.stride = c.stride;
  if (given("--ref-h")) cfg.study.ref_h = parse_number(c.ref_h);
  if (given("--ref-tau")) cfg.study.ref_tau = parse_number(c.ref_tau);
  if (given("--reference")) cfg.study.reference = parse_reference_policy(c.reference);
  if (given("--reference-dir")) cfg.study.reference_dir = c.reference_dir;
  if (given("--relative")) cfg.study.relative = true;
  if (given("--jobs")) cfg.study.jobs = c.jobs;
  cfg.params.validate();
  if (c.save_config) std::cerr << to_ini(cfg);
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_report(const StudyReport& r, const Common& c) {
  ReportOptions o;
  o.timings = !c.no_timings;
  const std::string text = c.format == "json" ? report_json(r, o).dump(2) + "\n" : report_csv(r, o);
  write_text(c.out, text);
}

std::string g(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int cmd_run(const CLI::App& app, const Common& c, const std::string& dump) {
  const RunConfig cfg = effective_config(app, c, RunConfig{});
  const Grid grid = cfg.grid.build();
  const PotentialSamples samples = sample_potentials(cfg.potential.build(), grid);
  const SpinorField phi0 = cfg.initial_field(grid);
  EvolveOptions eo;
  eo.stride = cfg.stride;
  eo.record_energy = true;
  const bool analytic = cfg.study.reference == ReferencePolicy::Analytic;
  if (analytic) {
    const Branch br = cfg.initial.branch == "-" ? Branch::Minus : Branch::Plus;
    eo.reference = [&, br](double t) {
      return plane_wave_solution(std::vector<int>(grid.dim(), cfg.initial.mode), cfg.potential.v0, cfg.potential.a0,
                                 cfg.params, br, t, grid);
    };
  }
  spdlog::info("{} on M={} (h={}), tau={}, t={}", to_string(cfg.scheme), grid.modes(), grid.h(), cfg.tau,
               cfg.t_final);
  const EvolveResult res = evolve(cfg.scheme, cfg.params, samples, phi0, cfg.tau, cfg.t_final, eo);
  for (const auto& w : res.warnings) spdlog::warn("{}", w);
  spdlog::info("{} steps, loop {:.3f}s, propagator build {:.3f}s", res.steps, res.loop_seconds, res.build_seconds);

  std::ostringstream os;
  const double m0 = res.records.empty() ? 1.0 : res.records.front().mass;
  if (c.format == "json") {
    nlohmann::json j;
    j["config"] = to_json(cfg);
    j["config_hash"] = config_hash(cfg);
    j["version"] = kVersion;
    if (!c.no_timings) {
      j["loop_seconds"] = res.loop_seconds;
      j["build_seconds"] = res.build_seconds;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : res.records) {
      nlohmann::json x = {{"t", r.t}, {"step", r.step}, {"mass", r.mass}, {"energy", r.energy}};
      if (r.errors) x["e_phi"] = r.errors->phi;
      rows.push_back(x);
    }
    j["records"] = rows;
    os << j.dump(2) << "\n";
  } else {
    os << "t,step,mass,mass_drift,energy" << (analytic ? ",e_phi" : "") << "\r\n";
    for (const auto& r : res.records) {
      os << g(r.t, 17) << "," << r.step << "," << g(r.mass, 17) << "," << g(std::abs(r.mass - m0) / m0) << ","
         << g(r.energy, 17);
      if (analytic) os << "," << g(r.errors ? r.errors->phi : 0.0);
      os << "\r\n";
    }
  }
  write_text(c.out, os.str());

  if (!dump.empty()) {
    std::ofstream f(dump, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + dump);
    f << (grid.dim() == 1 ? "x" : "x1,x2") << ",re_phi1,im_phi1,re_phi2,im_phi2\r\n";
    const SpinorField& u = res.state.field;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const Point x = node_point(grid, j);
      f << g(x[0], 17);
      if (grid.dim() == 2) f << "," << g(x[1], 17);
      for (int k = 0; k < 2; ++k) f << "," << g(u(k, j).real(), 17) << "," << g(u(k, j).imag(), 17);
      f << "\r\n";
    }
  }
  return 0;
}

StudyOptions study_options(const RunConfig& cfg) { return StudyOptions{cfg.study.jobs}; }

int cmd_converge(const CLI::App& app, const Common& c, const std::string& axis, const std::vector<std::string>& schemes,
                 const std::string& ladder) {
  RunConfig cfg = effective_config(app, c, RunConfig{});
  if (app.count("--axis") || cfg.study.axis.empty()) cfg.study.axis = axis;
  if (!schemes.empty()) cfg.study.schemes = schemes;
  if (!ladder.empty()) cfg.study.ladder = parse_number_list(ladder);
  if (cfg.study.ladder.empty()) {
    cfg.study.ladder = cfg.study.axis == "space" ? std::vector<double>{1.0, 0.5, 0.25, 0.125}
                                                 : std::vector<double>{0.5, 0.25, 0.125, 0.0625, 0.03125};
  }
  cfg.study.kind = "converge";
  ReferenceStore store(cfg.study.reference_dir);
  const StudyReport r = convergence_study(cfg, parse_axis(cfg.study.axis), cfg.study.ladder, store, study_options(cfg));
  write_report(r, c);
  return 0;
}

int cmd_regime(const CLI::App& app, const Common& c, const std::string& regime, const std::string& axis,
               const std::string& params, const std::string& ladder) {
  RegimeSetup s = regime_setup(parse_regime(regime), parse_axis(axis));
  if (!params.empty()) s.params = parse_number_list(params);
  if (!ladder.empty()) s.ladder = parse_number_list(ladder);
  // Flags refine every per-parameter config; the regime fixes the parameter
  // coupling, so epsilon/delta/nu flags are not applied here.
  s.tweak = [&](RunConfig& cfg) {
    const PhysParams keep = cfg.params;
    cfg = effective_config(app, c, cfg, false);
    cfg.params = keep;
  };
  const int jobs = app.count("--jobs") ? c.jobs : 0;
  ReferenceStore store(c.reference_dir);
  const StudyReport r = regime_sweep(s, store, StudyOptions{jobs});
  write_report(r, c);
  return 0;
}

int cmd_longtime(const CLI::App& app, const Common& c, const std::vector<std::string>& schemes) {
  RunConfig preset;
  preset.tau = 0.1;
  preset.t_final = 50.0;
  preset.grid.h = 1.0 / 16.0;
  preset.study.ref_tau = 1e-3;
  preset.study.kind = "longtime";
  RunConfig cfg = effective_config(app, c, preset);
  std::vector<Scheme> list;
  for (const auto& s : schemes) list.push_back(parse_scheme(s));
  if (list.empty()) list.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
  ReferenceStore store(cfg.study.reference_dir);
  const LongTimeResult r = long_time_study(cfg, list, store, study_options(cfg));
  write_report(r.report, c);
  return 0;
}

int cmd_commutator(const Common& c, int dim, int rep, int modes, int samples, unsigned seed) {
  const PhysParams p{0.7, 0.9, 1.3};
  std::ostringstream os;
  os << "dim,rep,check,value,tolerance,pass\r\n";
  bool ok = true;
  auto line = [&](const std::string& check, double v, double tol) {
    const bool pass = v <= tol;
    ok = ok && pass;
    os << dim << "," << rep << "," << check << "," << g(v) << "," << g(tol) << "," << (pass ? "1" : "0") << "\r\n";
  };
  if (dim == 1 || dim == 2) {
    const PotentialSpec spec = dim == 1 ? potentials::rational_1d() : potentials::smooth_magnetic_2d();
    const Grid grid = dim == 1 ? Grid::build(-6.0, 6.0, modes, 1) : Grid::build(-std::numbers::pi, std::numbers::pi, modes, 2);
    const PotentialSamples s = sample_potentials(spec, grid, true);
    auto run = [&]<int N>(BasicField<N> f) {
      // Gaussian in 1D, smooth periodic field on the 2D torus
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const Point x = node_point(grid, j);
        for (int k = 0; k < N; ++k) {
          f(k, j) = dim == 1 ? std::exp(-x[0] * x[0] / (1.0 + 0.3 * k)) * std::polar(1.0, 0.5 * k * x[0])
                             : std::exp(0.5 * std::cos(x[0] - 0.3 * k) + 0.4 * std::sin(x[1])) *
                                   std::polar(1.0, std::sin(x[0]) + k * std::cos(x[1]));
        }
      }
      const auto cf = closed_form_commutator<N>(s, p);
      BasicField<N> d = apply_commutator<N>(cf, f);
      const BasicField<N> b = brute_force_commutator<N>(s, p, f);
      const double nb = field_norm<N>(b);
      d -= b;
      line("closed_vs_brute_relative", field_norm<N>(d) / nb, 1e-8);
      PotentialSpec no_a = spec;
      no_a.A = {};
      no_a.dA = {};
      const PotentialSamples v_only = sample_potentials(no_a, grid, true);
      const BasicField<N> z = apply_commutator<N>(closed_form_commutator<N>(v_only, p), f);
      line("zero_magnetic_norm", field_norm<N>(z), 1e-9);
    };
    if (rep == 2) run(BasicField<2>(grid));
    else run(BasicField<4>(grid));
  } else {
    if (rep != 4) throw std::invalid_argument("3D commutator requires --rep 4");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      LocalPotential w;
      w.V = U(rng);
      for (int a = 0; a < 3; ++a) {
        w.A[a] = U(rng);
        w.dV[a] = U(rng);
        for (int b = 0; b < 3; ++b) w.dA[a][b] = U(rng);
      }
      const std::array<double, 3> k{4 * U(rng), 4 * U(rng), 4 * U(rng)};
      const auto cc = commutator_coefficients(w, p, 3, Representation::FourComponent);
      Eigen::MatrixXcd m = cc.F0;
      for (int j = 0; j < 3; ++j) m += cc.F[j] * cplx(0.0, k[j]);
      const Eigen::MatrixXcd b = commutator_symbol_brute_force(w, p, 3, Representation::FourComponent, k);
      worst = std::max(worst, (m - b).cwiseAbs().maxCoeff());
    }
    line("symbol_entrywise_max", worst, 1e-12);
  }
  write_text(c.out, os.str());
  return ok ? 0 : 1;
}

int cmd_table(const CLI::App& app, const Common& c, const std::string& name, bool list) {
  if (list || name.empty()) {
    for (const auto& n : table_names()) std::cout << n << "\n";
    return 0;
  }
  auto tweak = [&](RunConfig& cfg) {
    // Only the numerical knobs are adjustable on a preset.
    if (app.count("--ref-tau")) cfg.study.ref_tau = parse_number(c.ref_tau);
    if (app.count("--ref-h")) cfg.study.ref_h = parse_number(c.ref_h);
    if (app.count("--t-final")) cfg.t_final = c.t_final;
    if (app.count("--scheme")) cfg.study.schemes = {c.scheme};
    apply_sets(cfg, c.sets);
  };
  const int jobs = app.count("--jobs") ? c.jobs : 0;
  ReferenceStore store(c.reference_dir);
  const StudyReport r = run_table(name, store, StudyOptions{jobs}, tweak);
  write_report(r, c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-splitting Fourier spectral solver for the dimensionless Dirac equation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  int verbosity = 0;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbosity, "More log output (repeatable)");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");

  Common c;
  std::string dump;
  auto* run = app.add_subcommand("run", "Single evolution; emits the observable time series");
  add_common(*run, c);
  run->add_option("--dump-field", dump, "Write the final field as CSV");

  std::string axis = "time", ladder;
  std::vector<std::string> schemes;
  auto* conv = app.add_subcommand("converge", "Convergence study in space or time");
  add_common(*conv, c);
  conv->add_option("--axis", axis)->check(CLI::IsMember({"space", "time"}));
  conv->add_option("--schemes", schemes, "Schemes to compare (default: --scheme)")->delimiter(',');
  conv->add_option("--ladder", ladder, "Decreasing list of h or tau, e.g. 1/2,1/4,1/8");

  std::string regime, params;
  auto* reg = app.add_subcommand("regime", "Parameter-regime sweep of relative errors");
  add_common(*reg, c);
  reg->add_option("--regime", regime)->required()->check(CLI::IsMember({"nr", "sc", "nrml"}));
  reg->add_option("--axis", axis)->check(CLI::IsMember({"space", "time"}));
  reg->add_option("--params", params, "Regime parameter values (epsilon or delta)");
  reg->add_option("--ladder", ladder, "Decreasing list of h or tau");

  auto* lt = app.add_subcommand("longtime", "Error growth over a long interval for several schemes");
  add_common(*lt, c);
  lt->add_option("--schemes", schemes, "Schemes (default: all)")->delimiter(',');

  int cdim = 1, crep = 2, cmodes = 128, csamples = 100;
  unsigned seed = 12345;
  auto* com = app.add_subcommand("commutator-check", "Closed-form double commutator against brute force");
  com->add_option("-o,--out", c.out, "Output path (stdout when omitted)");
  com->add_option("--dim", cdim)->check(CLI::IsMember({1, 2, 3}));
  com->add_option("--rep", crep)->check(CLI::IsMember({2, 4}));
  com->add_option("--grid-modes", cmodes, "Modes per axis for d = 1, 2");
  com->add_option("--samples", csamples, "Random (x, k) samples for d = 3");
  com->add_option("--seed", seed);

  std::string table;
  bool list = false;
  auto* tab = app.add_subcommand("table", "Reproduce a published table by name");
  add_common(*tab, c);
  tab->add_option("name", table, "table2 .. table13");
  tab->add_flag("--list", list, "List preset names");

  CLI11_PARSE(app, argc, argv);

  auto logger = spdlog::stderr_color_mt("diracsplit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");
  spdlog::set_level(quiet ? spdlog::level::warn : verbosity > 0 ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run) return cmd_run(*run, c, dump);
    if (*conv) return cmd_converge(*conv, c, axis, schemes, ladder);
    if (*reg) return cmd_regime(*reg, c, regime, axis, params, ladder);
    if (*lt) return cmd_longtime(*lt, c, schemes);
    if (*com) return cmd_commutator(c, cdim, crep, cmodes, csamples, seed);
    if (*tab) return cmd_table(*tab, c, table, list);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
