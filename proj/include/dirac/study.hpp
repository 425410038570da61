#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dirac/config.hpp"
#include "dirac/observables.hpp"
#include "dirac/reference.hpp"

namespace dirac {

enum class Axis { Space, Time };
Axis parse_axis(const std::string& s);
std::string to_string(Axis a);

struct StudyRow {
  std::string scheme;
  std::string param_name;  // "epsilon", "delta", or empty
  std::optional<double> param;
  double h = 0.0;
  double tau = 0.0;
  long steps = 0;
  ErrorSet errors;
  /// Observed rates against the previous row of the same series, computed
  /// on the primary metric (absolute or relative; the rate is the same).
  std::optional<double> rate_phi, rate_rho, rate_current;
  double loop_seconds = 0.0;
  double build_seconds = 0.0;
  bool onset = false;     // first resolved point of its series
  bool diagonal = false;  // on the resolution law (h ~ delta, tau ~ eps^2, ...)
};

struct StudyReport {
  std::string title;
  std::string kind;  // converge | regime | longtime
  bool relative = false;
  std::vector<StudyRow> rows;
  RunConfig config;
  std::string config_hash;
  std::string version = kVersion;
  std::string timestamp;
  std::vector<std::string> notes;

  /// Rows of one scheme (and parameter, if given), in ladder order.
  std::vector<const StudyRow*> series(const std::string& scheme, std::optional<double> param = {}) const;
};

/// log(e_prev / e) / log(x_prev / x); empty if either error is below `floor`
/// or not positive.
std::optional<double> observed_rate(double e_prev, double e, double x_prev, double x, double floor = 0.0);

struct StudyOptions {
  /// Concurrent ladder jobs; 0 uses std::thread::hardware_concurrency().
  int jobs = 0;
};

/// One row per (scheme, ladder value). Time axis: grid from base.grid and
/// tau from the ladder. Space axis: h from the ladder and tau = base.tau.
/// The reference is S4c on base.study.ref_h with base.study.ref_tau, or the
/// analytic plane wave with ReferencePolicy::Analytic. Schemes come from
/// base.study.schemes (base.scheme when empty).
StudyReport convergence_study(const RunConfig& base, Axis axis, const std::vector<double>& ladder,
                              ReferenceStore& store, const StudyOptions& options = {});

enum class Regime { Nonrelativistic, Semiclassical, Simultaneous };
Regime parse_regime(const std::string& s);
std::string to_string(Regime r);

/// Base configuration, default ladders and resolution law of a regime.
struct RegimeSetup {
  Regime regime;
  Axis axis;
  RunConfig base;
  std::vector<double> params;
  std::vector<double> ladder;
  std::string param_name;
  /// Applied last to every per-parameter configuration (CLI overrides).
  std::function<void(RunConfig&)> tweak;
  /// Step or mesh size on the resolution diagonal for a parameter value.
  double diagonal(double param) const;
  /// Reference time step used for a parameter value.
  double reference_tau(double param) const;
  /// Configuration for one parameter value, reference step included.
  RunConfig with_param(double param) const;
};

/// nr: delta = nu = 1, eps varies, (-32,32), h = 1/16, t = 6, tau ladder 4^-k.
/// sc: eps = nu = 1, delta varies, (-16,16), t = 2, WKB data; time axis at
///     h = 1/128, space axis at tau = 1e-4 with reference h = 1/128.
/// nrml: delta = 1, nu = eps, (-128,128), h = 1/16, t = 2, tau ladder 2^-k.
RegimeSetup regime_setup(Regime regime, Axis axis);

/// Sweep of relative errors over parameter x ladder, with rates per
/// parameter row, onset and diagonal flags.
StudyReport regime_sweep(const RegimeSetup& setup, ReferenceStore& store, const StudyOptions& options = {});

/// Onset of the asymptotic regime in one series: for the time axis the
/// first row whose rate lies in [min_rate, max_rate]; for the space axis the
/// first row whose relative error is <= max_error. Returns the row index.
std::optional<std::size_t> onset_index(const std::vector<const StudyRow*>& series, Axis axis,
                                       double min_rate = 3.5, double max_error = 1e-2,
                                       double max_rate = std::numeric_limits<double>::infinity());

struct TimeSeries {
  std::string scheme;
  std::vector<double> t;
  std::vector<double> error;
  double loop_seconds = 0.0;
};

struct LongTimeResult {
  std::vector<TimeSeries> series;
  StudyReport report;  // one row per (scheme, sample time)
};

/// e_Phi(t_n) on the observer stride up to t_final for each scheme, against
/// an S4c reference trajectory at base.study.ref_tau on the same grid.
LongTimeResult long_time_study(const RunConfig& base, const std::vector<Scheme>& schemes, ReferenceStore& store,
                               const StudyOptions& options = {});

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(const std::string& s);

struct ReportOptions {
  /// Timings and timestamp vary run to run; off gives byte-stable output.
  bool timings = true;
};

std::string report_csv(const StudyReport& r, const ReportOptions& o = {});
nlohmann::json report_json(const StudyReport& r, const ReportOptions& o = {});
void emit_report(const StudyReport& r, ReportFormat format, const std::filesystem::path& path,
                 const ReportOptions& o = {});

/// Named presets reproducing the published tables: table2 .. table13.
std::vector<std::string> table_names();
StudyReport run_table(const std::string& name, ReferenceStore& store, const StudyOptions& options = {},
                      const std::function<void(RunConfig&)>& tweak = {});

}  // namespace dirac
