#include "dirac/study.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

namespace dirac {

using nlohmann::json;

Axis parse_axis(const std::string& s) {
  if (s == "space") return Axis::Space;
  if (s == "time") return Axis::Time;
  throw std::invalid_argument("axis must be 'space' or 'time' (got '" + s + "')");
}

std::string to_string(Axis a) { return a == Axis::Space ? "space" : "time"; }

Regime parse_regime(const std::string& s) {
  if (s == "nr") return Regime::Nonrelativistic;
  if (s == "sc") return Regime::Semiclassical;
  if (s == "nrml") return Regime::Simultaneous;
  throw std::invalid_argument("regime must be nr, sc or nrml (got '" + s + "')");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Nonrelativistic: return "nr";
    case Regime::Semiclassical: return "sc";
    case Regime::Simultaneous: return "nrml";
  }
  return "?";
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("format must be csv or json");
}

std::vector<const StudyRow*> StudyReport::series(const std::string& scheme, std::optional<double> param) const {
  std::vector<const StudyRow*> out;
  for (const auto& r : rows)
    if (r.scheme == scheme && (!param || (r.param && *r.param == *param))) out.push_back(&r);
  return out;
}

std::optional<double> observed_rate(double e_prev, double e, double x_prev, double x, double floor) {
  if (!(e_prev > 0.0) || !(e > 0.0) || e_prev < floor || e < floor) return std::nullopt;
  if (!(x_prev > 0.0) || !(x > 0.0) || x_prev == x) return std::nullopt;
  return std::log(e_prev / e) / std::log(x_prev / x);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, int jobs, F body) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

void fill_rates(std::vector<StudyRow*>& series, Axis axis, bool relative, double floor) {
  for (std::size_t k = 1; k < series.size(); ++k) {
    const StudyRow& p = *series[k - 1];
    StudyRow& r = *series[k];
    const double xp = axis == Axis::Time ? p.tau : p.h;
    const double x = axis == Axis::Time ? r.tau : r.h;
    const ErrorSet& a = p.errors;
    const ErrorSet& b = r.errors;
    r.rate_phi = observed_rate(relative ? a.phi_rel : a.phi, relative ? b.phi_rel : b.phi, xp, x, floor);
    r.rate_rho = observed_rate(relative ? a.rho_rel : a.rho, relative ? b.rho_rel : b.rho, xp, x, floor);
    r.rate_current =
        observed_rate(relative ? a.current_rel : a.current, relative ? b.current_rel : b.current, xp, x, floor);
  }
}

void require_decreasing(const std::vector<double>& ladder) {
  if (ladder.empty()) throw std::invalid_argument("study: empty ladder");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (!(ladder[k] < ladder[k - 1])) throw std::invalid_argument("study: ladder must be strictly decreasing");
}

}  // namespace

StudyReport convergence_study(const RunConfig& base, Axis axis, const std::vector<double>& ladder,
                              ReferenceStore& store, const StudyOptions& options) {
  require_decreasing(ladder);
  std::vector<Scheme> schemes;
  for (const auto& s : base.study.schemes) schemes.push_back(parse_scheme(s));
  if (schemes.empty()) schemes.push_back(base.scheme);

  const bool analytic = base.study.reference == ReferencePolicy::Analytic;
  RunConfig ref_cfg = base;
  ref_cfg.scheme = Scheme::S4c;
  ref_cfg.tau = base.study.ref_tau;
  if (!analytic && base.study.ref_h > 0.0) ref_cfg.grid = base.grid.with_h(base.study.ref_h);

  if (!analytic) {
    const double ref_h = ref_cfg.grid.resolved_h();
    for (double x : ladder) {
      if (axis == Axis::Time && !(ref_cfg.tau < x))
        throw std::invalid_argument("study: reference tau must be finer than every ladder step");
      if (axis == Axis::Space && !(ref_h < x))
        throw std::invalid_argument("study: reference mesh must be finer than every ladder mesh");
    }
  }

  std::shared_ptr<const ReferenceSolution> reference;
  if (!analytic) {
    spdlog::info("reference: S4c h={} tau={} t={} ({})", ref_cfg.grid.resolved_h(), ref_cfg.tau, base.t_final,
                 store.contains(reference_hash(ref_cfg, {base.t_final})) ? "cached" : "generating");
    try {
      reference = store.get(ref_cfg, {base.t_final}, base.study.reference);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("reference generation failed for config ") + canonical_json(ref_cfg) +
                               ": " + e.what());
    }
    if (reference->seconds > 0.0) spdlog::info("reference done in {:.2f}s", reference->seconds);
  }

  StudyReport rep;
  rep.kind = "converge";
  rep.relative = base.study.relative;
  rep.config = base;
  rep.config_hash = config_hash(base);
  rep.timestamp = utc_timestamp();
  rep.title = "convergence in " + to_string(axis);

  const std::size_t nl = ladder.size();
  rep.rows.resize(schemes.size() * nl);
  parallel_for(rep.rows.size(), options.jobs > 0 ? options.jobs : base.study.jobs, [&](std::size_t i) {
    const Scheme sc = schemes[i / nl];
    const double x = ladder[i % nl];
    RunConfig cfg = base;
    cfg.scheme = sc;
    if (axis == Axis::Time) cfg.tau = x;
    else cfg.grid = base.grid.with_h(x);
    const Grid grid = cfg.grid.build();
    const PotentialSamples samples = sample_potentials(cfg.potential.build(), grid);
    const SpinorField phi0 = cfg.initial_field(grid);
    EvolveOptions eo;
    eo.record_energy = false;
    eo.stride = std::max<long>(1, step_count(cfg.t_final, cfg.tau));
    const EvolveResult res = evolve(sc, cfg.params, samples, phi0, cfg.tau, cfg.t_final, eo);
    for (const auto& w : res.warnings) spdlog::warn("{}", w);

    SpinorField ref_field;
    if (analytic) {
      const Branch br = cfg.initial.branch == "-" ? Branch::Minus : Branch::Plus;
      ref_field = plane_wave_solution(std::vector<int>(grid.dim(), cfg.initial.mode), cfg.potential.v0,
                                      cfg.potential.a0, cfg.params, br, res.state.t, grid);
    } else {
      ref_field = reference->at(base.t_final);
    }
    StudyRow& row = rep.rows[i];
    row.scheme = to_string(sc);
    row.h = grid.h();
    row.tau = cfg.tau;
    row.steps = res.steps;
    row.errors = error_set(res.state.field, ref_field, cfg.params);
    row.loop_seconds = res.loop_seconds;
    row.build_seconds = res.build_seconds;
    spdlog::debug("{} h={} tau={} e_phi={:.3e} ({:.2f}s)", row.scheme, row.h, row.tau, row.errors.phi,
                  row.loop_seconds);
  });

  for (std::size_t s = 0; s < schemes.size(); ++s) {
    std::vector<StudyRow*> series;
    for (std::size_t k = 0; k < nl; ++k) series.push_back(&rep.rows[s * nl + k]);
    fill_rates(series, axis, rep.relative, base.study.error_floor);
  }
  return rep;
}

namespace {

std::vector<double> geometric(double first, double ratio, int count) {
  std::vector<double> v;
  for (int k = 0; k < count; ++k) v.push_back(first * std::pow(ratio, k));
  return v;
}

}  // namespace

RegimeSetup regime_setup(Regime regime, Axis axis) {
  RegimeSetup s;
  s.regime = regime;
  s.axis = axis;
  RunConfig& b = s.base;
  b.scheme = Scheme::S4c;
  b.study.relative = true;
  b.study.error_floor = 1e-10;
  b.potential.preset = "paper-1d";
  b.grid.dim = 1;
  switch (regime) {
    case Regime::Nonrelativistic:
      if (axis != Axis::Time) throw std::invalid_argument("nr regime: only the temporal study is defined");
      b.grid.a = -32.0;
      b.grid.b = 32.0;
      b.grid.h = 1.0 / 16.0;
      b.initial.preset = "gaussian";
      b.t_final = 6.0;
      b.study.ref_h = 1.0 / 16.0;
      s.params = geometric(1.0, 0.5, 5);
      s.ladder = geometric(1.0, 0.25, 6);
      s.param_name = "epsilon";
      break;
    case Regime::Semiclassical:
      b.grid.a = -16.0;
      b.grid.b = 16.0;
      b.grid.h = 1.0 / 128.0;
      b.initial.preset = "wkb";
      b.t_final = 2.0;
      b.tau = 1e-4;
      b.study.ref_h = 1.0 / 128.0;
      s.params = geometric(1.0, 0.5, 6);
      s.ladder = geometric(1.0, 0.5, 7);
      s.param_name = "delta";
      break;
    case Regime::Simultaneous:
      if (axis != Axis::Time) throw std::invalid_argument("nrml regime: only the temporal study is defined");
      b.grid.a = -128.0;
      b.grid.b = 128.0;
      b.grid.h = 1.0 / 16.0;
      b.initial.preset = "gaussian";
      b.t_final = 2.0;
      b.study.ref_h = 1.0 / 16.0;
      s.params = geometric(1.0, 0.5, 7);
      s.ladder = geometric(1.0, 0.5, 7);
      s.param_name = "epsilon";
      break;
  }
  b.grid.modes = b.grid.resolved_modes();
  return s;
}

double RegimeSetup::diagonal(double p) const {
  switch (regime) {
    case Regime::Nonrelativistic: return p * p / 4.0;
    case Regime::Semiclassical: return axis == Axis::Space ? p : p / 2.0;
    case Regime::Simultaneous: return p;
  }
  return 0.0;
}

double RegimeSetup::reference_tau(double p) const {
  // 1e-4 resolves the fast time scale for parameters >= 1/4; below that the
  // step shrinks with it (eps^2, delta, eps respectively).
  switch (regime) {
    case Regime::Nonrelativistic: return 1e-4 * std::min(1.0, 16.0 * p * p);
    case Regime::Semiclassical: return axis == Axis::Space ? 1e-4 : 1e-4 * std::min(1.0, 4.0 * p);
    case Regime::Simultaneous: return 1e-4 * std::min(1.0, 4.0 * p);
  }
  return 1e-4;
}

RunConfig RegimeSetup::with_param(double p) const {
  RunConfig c = base;
  switch (regime) {
    case Regime::Nonrelativistic: c.params = {p, 1.0, 1.0}; break;
    case Regime::Semiclassical: c.params = {1.0, p, 1.0}; break;
    case Regime::Simultaneous: c.params = {p, 1.0, p}; break;
  }
  c.study.ref_tau = reference_tau(p);
  if (axis == Axis::Space) c.tau = c.study.ref_tau;
  if (tweak) tweak(c);
  return c;
}

std::optional<std::size_t> onset_index(const std::vector<const StudyRow*>& series, Axis axis, double min_rate,
                                       double max_error, double max_rate) {
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (axis == Axis::Time) {
      const auto& r = series[k]->rate_phi;
      if (r && *r >= min_rate && *r <= max_rate) return k;
    } else if (series[k]->errors.phi_rel <= max_error) {
      return k;
    }
  }
  return std::nullopt;
}

StudyReport regime_sweep(const RegimeSetup& setup, ReferenceStore& store, const StudyOptions& options) {
  StudyReport rep;
  rep.kind = "regime";
  rep.relative = true;
  rep.config = setup.with_param(setup.params.front());
  rep.config.study.kind = "regime";
  rep.config.study.regime = to_string(setup.regime);
  rep.config.study.axis = to_string(setup.axis);
  rep.config.study.regime_ladder = setup.params;
  rep.config.study.ladder = setup.ladder;
  rep.config_hash = config_hash(rep.config);
  rep.timestamp = utc_timestamp();
  rep.title = to_string(setup.regime) + " regime, " + to_string(setup.axis) + " errors";

  for (double p : setup.params) {
    RunConfig cfg = setup.with_param(p);
    cfg.study.relative = true;
    spdlog::info("{} regime: {} = {}", to_string(setup.regime), setup.param_name, p);
    StudyReport part = convergence_study(cfg, setup.axis, setup.ladder, store, options);
    std::vector<const StudyRow*> series;
    for (auto& r : part.rows) {
      r.param_name = setup.param_name;
      r.param = p;
      const double x = setup.axis == Axis::Time ? r.tau : r.h;
      r.diagonal = std::abs(x - setup.diagonal(p)) <= 1e-12 * x;
    }
    for (const auto& r : part.rows) series.push_back(&r);
    if (auto k = onset_index(series, setup.axis)) part.rows[*k].onset = true;
    for (auto& r : part.rows) rep.rows.push_back(std::move(r));
  }
  return rep;
}

LongTimeResult long_time_study(const RunConfig& base, const std::vector<Scheme>& schemes, ReferenceStore& store,
                               const StudyOptions& options) {
  LongTimeResult out;
  const long n = step_count(base.t_final, base.tau);
  const long stride = base.stride > 0 ? base.stride : default_stride(n);
  std::vector<double> times;
  for (long k = 0; k <= n; k += stride) times.push_back(static_cast<double>(k) * base.tau);
  if (n % stride != 0) times.push_back(static_cast<double>(n) * base.tau);

  RunConfig ref_cfg = base;
  ref_cfg.scheme = Scheme::S4c;
  ref_cfg.tau = base.study.ref_tau;
  spdlog::info("long-time reference: S4c tau={} to t={} ({} snapshots)", ref_cfg.tau, base.t_final, times.size());
  const auto reference = store.get(ref_cfg, times, base.study.reference);

  const Grid grid = base.grid.build();
  const PotentialSamples samples = sample_potentials(base.potential.build(), grid);
  const SpinorField phi0 = base.initial_field(grid);

  out.series.resize(schemes.size());
  parallel_for(schemes.size(), options.jobs > 0 ? options.jobs : base.study.jobs, [&](std::size_t i) {
    EvolveOptions eo;
    eo.stride = stride;
    eo.record_energy = false;
    eo.reference = [&](double t) { return reference->at(t); };
    const EvolveResult res = evolve(schemes[i], base.params, samples, phi0, base.tau, base.t_final, eo);
    TimeSeries& ts = out.series[i];
    ts.scheme = to_string(schemes[i]);
    ts.loop_seconds = res.loop_seconds;
    for (const auto& r : res.records) {
      ts.t.push_back(r.t);
      ts.error.push_back(r.errors->phi);
    }
  });

  StudyReport& rep = out.report;
  rep.kind = "longtime";
  rep.config = base;
  rep.config_hash = config_hash(base);
  rep.timestamp = utc_timestamp();
  rep.title = "error growth to t = " + std::to_string(base.t_final);
  for (const auto& ts : out.series) {
    for (std::size_t k = 0; k < ts.t.size(); ++k) {
      StudyRow row;
      row.scheme = ts.scheme;
      row.param_name = "t";
      row.param = ts.t[k];
      row.h = grid.h();
      row.tau = base.tau;
      row.steps = static_cast<long>(std::llround(ts.t[k] / base.tau));
      row.errors.phi = ts.error[k];
      row.loop_seconds = k + 1 == ts.t.size() ? ts.loop_seconds : 0.0;
      rep.rows.push_back(row);
    }
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt6(const std::optional<double>& v) { return v ? g6(*v) : ""; }

}  // namespace

std::string report_csv(const StudyReport& r, const ReportOptions& o) {
  std::vector<std::string> header = {"config_hash", "scheme",     "param_name",  "param",      "h",
                                     "tau",         "steps",      "e_phi",       "e_rho",      "e_J",
                                     "e_phi_rel",   "e_rho_rel",  "e_J_rel",     "rate_phi",   "rate_rho",
                                     "rate_J",      "onset",      "diagonal",    "e_phi_full", "e_rho_full",
                                     "e_J_full",    "e_phi_rel_full", "e_rho_rel_full", "e_J_rel_full"};
  if (o.timings) {
    header.push_back("loop_seconds");
    header.push_back("build_seconds");
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  };
  line(header);
  for (const auto& row : r.rows) {
    const ErrorSet& e = row.errors;
    std::vector<std::string> c = {r.config_hash,
                                  row.scheme,
                                  row.param_name,
                                  row.param ? g17(*row.param) : "",
                                  g17(row.h),
                                  g17(row.tau),
                                  std::to_string(row.steps),
                                  g6(e.phi),
                                  g6(e.rho),
                                  g6(e.current),
                                  g6(e.phi_rel),
                                  g6(e.rho_rel),
                                  g6(e.current_rel),
                                  opt6(row.rate_phi),
                                  opt6(row.rate_rho),
                                  opt6(row.rate_current),
                                  row.onset ? "1" : "0",
                                  row.diagonal ? "1" : "0",
                                  g17(e.phi),
                                  g17(e.rho),
                                  g17(e.current),
                                  g17(e.phi_rel),
                                  g17(e.rho_rel),
                                  g17(e.current_rel)};
    if (o.timings) {
      c.push_back(g6(row.loop_seconds));
      c.push_back(g6(row.build_seconds));
    }
    line(c);
  }
  return os.str();
}

json report_json(const StudyReport& r, const ReportOptions& o) {
  json j;
  j["title"] = r.title;
  j["kind"] = r.kind;
  j["relative"] = r.relative;
  j["config"] = to_json(r.config);
  j["config_hash"] = r.config_hash;
  j["version"] = r.version;
  if (o.timings) j["timestamp"] = r.timestamp;
  j["notes"] = r.notes;
  json rows = json::array();
  for (const auto& row : r.rows) {
    const ErrorSet& e = row.errors;
    json x = {{"scheme", row.scheme},
              {"h", row.h},
              {"tau", row.tau},
              {"steps", row.steps},
              {"e_phi", e.phi},
              {"e_rho", e.rho},
              {"e_J", e.current},
              {"e_phi_rel", e.phi_rel},
              {"e_rho_rel", e.rho_rel},
              {"e_J_rel", e.current_rel},
              {"onset", row.onset},
              {"diagonal", row.diagonal}};
    if (!row.param_name.empty()) x["param_name"] = row.param_name;
    if (row.param) x["param"] = *row.param;
    x["rate_phi"] = row.rate_phi ? json(*row.rate_phi) : json(nullptr);
    x["rate_rho"] = row.rate_rho ? json(*row.rate_rho) : json(nullptr);
    x["rate_J"] = row.rate_current ? json(*row.rate_current) : json(nullptr);
    if (o.timings) {
      x["loop_seconds"] = row.loop_seconds;
      x["build_seconds"] = row.build_seconds;
    }
    rows.push_back(x);
  }
  j["rows"] = rows;
  return j;
}

void emit_report(const StudyReport& r, ReportFormat format, const std::filesystem::path& path,
                 const ReportOptions& o) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report " + path.string());
  if (format == ReportFormat::Csv) out << report_csv(r, o);
  else out << report_json(r, o).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::string> table_names() {
  return {"table2", "table3", "table4", "table5", "table6", "table7", "table8",
          "table9", "table10", "table11", "table12", "table13"};
}

namespace {

RunConfig paper_1d() {
  RunConfig c;
  c.grid = {-32.0, 32.0, 1, 1024, 1.0 / 16.0};
  c.params = {1.0, 1.0, 1.0};
  c.potential.preset = "paper-1d";
  c.initial.preset = "gaussian";
  c.scheme = Scheme::S4c;
  c.t_final = 6.0;
  c.study.ref_h = 1.0 / 16.0;
  c.study.ref_tau = 1e-5;
  return c;
}

RunConfig honeycomb() {
  RunConfig c;
  c.grid = {-10.0, 10.0, 2, 640, 1.0 / 32.0};
  c.params = {1.0, 1.0, 1.0};
  c.potential.preset = "honeycomb-2d";
  c.initial.preset = "gaussian";
  c.scheme = Scheme::S4c;
  c.t_final = 2.0;
  c.study.ref_h = 1.0 / 32.0;
  c.study.ref_tau = 1e-4;
  c.study.schemes = {"S4", "S4c", "S4RK"};
  return c;
}

}  // namespace

StudyReport run_table(const std::string& name, ReferenceStore& store, const StudyOptions& options,
                      const std::function<void(RunConfig&)>& tweak) {
  auto finish = [&](StudyReport r, const std::string& title) {
    r.title = name + ": " + title;
    return r;
  };
  auto converge = [&](RunConfig c, Axis axis, const std::vector<double>& ladder, const std::string& title) {
    c.study.kind = "converge";
    c.study.axis = to_string(axis);
    c.study.ladder = ladder;
    if (tweak) tweak(c);
    return finish(convergence_study(c, axis, c.study.ladder, store, options), title);
  };
  auto regime = [&](Regime rg, Axis axis, const std::string& title) {
    RegimeSetup s = regime_setup(rg, axis);
    s.tweak = tweak;
    if (tweak) {
      // Ladders may be overridden through the study section.
      RunConfig probe = s.base;
      probe.study.ladder = s.ladder;
      probe.study.regime_ladder = s.params;
      tweak(probe);
      s.ladder = probe.study.ladder;
      s.params = probe.study.regime_ladder;
    }
    return finish(regime_sweep(s, store, options), title);
  };
  const std::vector<std::string> all = {"S1", "S2", "S4", "S4RK", "S4c"};

  if (name == "table2") {
    RunConfig c = paper_1d();
    c.tau = 1e-5;
    c.study.schemes = all;
    return converge(c, Axis::Space, {1.0, 0.5, 0.25, 0.125}, "1D spatial errors e_phi(t=6), tau = 1e-5");
  }
  if (name == "table3") {
    RunConfig c = paper_1d();
    c.study.schemes = all;
    return converge(c, Axis::Time, geometric(0.5, 0.5, 7), "1D temporal errors e_phi(t=6), h = 1/16");
  }
  if (name == "table4") {
    RunConfig c = honeycomb();
    c.tau = c.study.ref_tau;
    return converge(c, Axis::Space, {0.5, 0.25, 0.125, 0.0625}, "2D spatial errors e_phi(t=2)");
  }
  if (name == "table5") {
    RunConfig c = honeycomb();
    // the printed 2D temporal errors are relative: they equal the absolute
    // ones divided by ||Phi_0|| = sqrt(2 pi)
    c.study.relative = true;
    return converge(c, Axis::Time, geometric(0.5, 0.5, 7), "2D temporal errors e_phi/||Phi||(t=2), h = 1/32");
  }
  if (name == "table6" || name == "table7")
    return regime(Regime::Nonrelativistic, Axis::Time, "nonrelativistic regime, temporal e_phi/e_rho/e_J (t=6)");
  if (name == "table8" || name == "table9" || name == "table10")
    return regime(Regime::Semiclassical, Axis::Space, "semiclassical regime, spatial e_phi/e_rho/e_J (t=2)");
  if (name == "table11")
    return regime(Regime::Semiclassical, Axis::Time, "semiclassical regime, temporal e_phi/e_rho/e_J (t=2)");
  if (name == "table12" || name == "table13")
    return regime(Regime::Simultaneous, Axis::Time, "nonrelativistic-massless regime, temporal errors (t=2)");
  throw std::invalid_argument("unknown table preset '" + name + "'");
}

}  // namespace dirac
