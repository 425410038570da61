#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dirac/grid.hpp"
#include "dirac/model.hpp"
#include "dirac/splitting.hpp"

namespace dirac {

inline constexpr const char* kVersion = "0.1.0";

/// Domain and resolution. Either `modes` or `h` determines M; `h` wins when
/// set (> 0) and must divide b - a into an even integer count.
struct GridSpec {
  double a = -32.0;
  double b = 32.0;
  int dim = 1;
  int modes = 1024;
  double h = 0.0;

  int resolved_modes() const;
  double resolved_h() const { return (b - a) / resolved_modes(); }
  Grid build() const;
  GridSpec with_h(double new_h) const;
  bool operator==(const GridSpec&) const = default;
};

struct PotentialConfig {
  std::string preset = "paper-1d";
  double v0 = 0.0;
  std::vector<double> a0;
  PotentialSpec build() const;
  bool operator==(const PotentialConfig&) const = default;
};

struct InitialConfig {
  std::string preset = "gaussian";
  int mode = 1;
  std::string branch = "+";
  bool operator==(const InitialConfig&) const = default;
};

enum class ReferencePolicy { Generate, Load, Analytic };
std::string to_string(ReferencePolicy p);
ReferencePolicy parse_reference_policy(const std::string& s);

struct StudyConfig {
  std::string kind = "none";  // none | converge | regime | longtime
  std::string axis = "time";  // time | space
  std::vector<double> ladder;
  std::string regime;  // nr | sc | nrml
  std::vector<double> regime_ladder;
  std::vector<std::string> schemes;
  ReferencePolicy reference = ReferencePolicy::Generate;
  double ref_h = 1.0 / 16.0;
  double ref_tau = 1e-5;
  std::string reference_dir;
  bool relative = false;
  double error_floor = 0.0;
  int jobs = 0;  // 0: hardware concurrency
  bool operator==(const StudyConfig&) const = default;
};

struct RunConfig {
  GridSpec grid;
  PhysParams params;
  PotentialConfig potential;
  InitialConfig initial;
  Scheme scheme = Scheme::S4c;
  double tau = 1e-2;
  double t_final = 6.0;
  long stride = 0;
  StudyConfig study;

  SpinorField initial_field(const Grid& grid) const;
  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Canonical JSON (sorted keys, doubles at full precision).
std::string canonical_json(const RunConfig& c);
/// Hex SHA-256 of the canonical JSON.
std::string config_hash(const RunConfig& c);
std::string sha256_hex(const std::string& data);

/// INI text with sections [grid], [params], [potential], [initial],
/// [scheme], [study]. Missing keys keep their defaults.
std::string to_ini(const RunConfig& c);
RunConfig config_from_ini(const std::string& text);

/// Load by extension: .ini / .cfg as INI, .json as JSON. A JSON document
/// with a top-level "config" object (a study report) is accepted too.
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& c, const std::filesystem::path& path);

/// Comma separated numbers; each item may be a fraction like "1/16" or use
/// exponent notation.
std::vector<double> parse_number_list(const std::string& text);
double parse_number(const std::string& text);
std::string format_number_list(const std::vector<double>& v);

}  // namespace dirac
