#include "dirac/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

namespace dirac {

using nlohmann::json;
namespace pt = boost::property_tree;

int GridSpec::resolved_modes() const {
  if (!(b > a)) throw std::invalid_argument("grid: require b > a");
  if (h <= 0.0) return modes;
  const double q = (b - a) / h;
  const double m = std::round(q);
  if (std::abs(q - m) > 1e-9 * q) throw std::invalid_argument("grid: h does not divide the domain length");
  return static_cast<int>(m);
}

Grid GridSpec::build() const { return Grid::build(a, b, resolved_modes(), dim); }

GridSpec GridSpec::with_h(double new_h) const {
  GridSpec g = *this;
  g.h = new_h;
  g.modes = g.resolved_modes();
  return g;
}

PotentialSpec PotentialConfig::build() const {
  // "constant(V0, A1, A2)" is shorthand for preset constant with v0/a0.
  if (boost::starts_with(preset, "constant(") && boost::ends_with(preset, ")")) {
    const auto inner = preset.substr(9, preset.size() - 10);
    auto vals = parse_number_list(inner);
    if (vals.empty()) throw std::invalid_argument("constant(...) needs at least V0");
    const double v = vals.front();
    vals.erase(vals.begin());
    return potentials::constant(v, vals);
  }
  return potentials::by_name(preset, v0, a0);
}

std::string to_string(ReferencePolicy p) {
  switch (p) {
    case ReferencePolicy::Generate: return "generate";
    case ReferencePolicy::Load: return "load";
    case ReferencePolicy::Analytic: return "analytic";
  }
  return "?";
}

ReferencePolicy parse_reference_policy(const std::string& s) {
  if (s == "generate") return ReferencePolicy::Generate;
  if (s == "load") return ReferencePolicy::Load;
  if (s == "analytic") return ReferencePolicy::Analytic;
  throw std::invalid_argument("reference policy must be generate, load or analytic (got '" + s + "')");
}

SpinorField RunConfig::initial_field(const Grid& grid) const {
  const Branch br = initial.branch == "-" ? Branch::Minus : Branch::Plus;
  double v = potential.v0;
  std::vector<double> a = potential.a0;
  if (boost::starts_with(potential.preset, "constant(")) {
    auto vals = parse_number_list(potential.preset.substr(9, potential.preset.size() - 10));
    v = vals.front();
    a.assign(vals.begin() + 1, vals.end());
  }
  return initial::by_name(initial.preset, grid, params, initial.mode, br, v, a);
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"a", c.grid.a}, {"b", c.grid.b}, {"dim", c.grid.dim}, {"M", c.grid.modes}, {"h", c.grid.h}};
  j["params"] = {{"epsilon", c.params.epsilon}, {"delta", c.params.delta}, {"nu", c.params.nu}};
  j["potential"] = {{"preset", c.potential.preset}, {"v0", c.potential.v0}, {"a0", c.potential.a0}};
  j["initial"] = {{"preset", c.initial.preset}, {"mode", c.initial.mode}, {"branch", c.initial.branch}};
  j["scheme"] = {{"name", to_string(c.scheme)}, {"tau", c.tau}, {"t_final", c.t_final}, {"stride", c.stride}};
  const auto& s = c.study;
  j["study"] = {{"kind", s.kind},
                {"axis", s.axis},
                {"ladder", s.ladder},
                {"regime", s.regime},
                {"regime_ladder", s.regime_ladder},
                {"schemes", s.schemes},
                {"reference", to_string(s.reference)},
                {"ref_h", s.ref_h},
                {"ref_tau", s.ref_tau},
                {"reference_dir", s.reference_dir},
                {"relative", s.relative},
                {"error_floor", s.error_floor},
                {"jobs", s.jobs}};
  return j;
}

namespace {

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const json& root) {
  const json& j = root.contains("config") && root.at("config").is_object() ? root.at("config") : root;
  RunConfig c;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    get_if(g, "a", c.grid.a);
    get_if(g, "b", c.grid.b);
    get_if(g, "dim", c.grid.dim);
    get_if(g, "M", c.grid.modes);
    get_if(g, "h", c.grid.h);
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    get_if(p, "epsilon", c.params.epsilon);
    get_if(p, "delta", c.params.delta);
    get_if(p, "nu", c.params.nu);
  }
  if (j.contains("potential")) {
    const auto& p = j["potential"];
    get_if(p, "preset", c.potential.preset);
    get_if(p, "v0", c.potential.v0);
    get_if(p, "a0", c.potential.a0);
  }
  if (j.contains("initial")) {
    const auto& p = j["initial"];
    get_if(p, "preset", c.initial.preset);
    get_if(p, "mode", c.initial.mode);
    get_if(p, "branch", c.initial.branch);
  }
  if (j.contains("scheme")) {
    const auto& p = j["scheme"];
    if (p.contains("name")) c.scheme = parse_scheme(p["name"].get<std::string>());
    get_if(p, "tau", c.tau);
    get_if(p, "t_final", c.t_final);
    get_if(p, "stride", c.stride);
  }
  if (j.contains("study")) {
    const auto& p = j["study"];
    auto& s = c.study;
    get_if(p, "kind", s.kind);
    get_if(p, "axis", s.axis);
    get_if(p, "ladder", s.ladder);
    get_if(p, "regime", s.regime);
    get_if(p, "regime_ladder", s.regime_ladder);
    get_if(p, "schemes", s.schemes);
    if (p.contains("reference")) s.reference = parse_reference_policy(p["reference"].get<std::string>());
    get_if(p, "ref_h", s.ref_h);
    get_if(p, "ref_tau", s.ref_tau);
    get_if(p, "reference_dir", s.reference_dir);
    get_if(p, "relative", s.relative);
    get_if(p, "error_floor", s.error_floor);
    get_if(p, "jobs", s.jobs);
  }
  return c;
}

std::string canonical_json(const RunConfig& c) { return to_json(c).dump(); }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string config_hash(const RunConfig& c) { return sha256_hex(canonical_json(c)); }

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& v) { return boost::join(v, ","); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  if (boost::trim_copy(text).empty()) return out;
  boost::split(out, text, boost::is_any_of(","));
  for (auto& s : out) boost::trim(s);
  return out;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = boost::trim_copy(text);
  const auto slash = t.find('/');
  std::size_t used = 0;
  if (slash != std::string::npos) {
    const double num = std::stod(t.substr(0, slash), &used);
    const double den = std::stod(t.substr(slash + 1));
    return num / den;
  }
  const double v = std::stod(t, &used);
  if (used != t.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number(item));
  return out;
}

std::string format_number_list(const std::vector<double>& v) {
  std::vector<std::string> s;
  for (double x : v) s.push_back(fmt(x));
  return join(s);
}

std::string to_ini(const RunConfig& c) {
  pt::ptree t;
  t.put("grid.a", fmt(c.grid.a));
  t.put("grid.b", fmt(c.grid.b));
  t.put("grid.dim", c.grid.dim);
  t.put("grid.M", c.grid.modes);
  t.put("grid.h", fmt(c.grid.h));
  t.put("params.epsilon", fmt(c.params.epsilon));
  t.put("params.delta", fmt(c.params.delta));
  t.put("params.nu", fmt(c.params.nu));
  t.put("potential.preset", c.potential.preset);
  t.put("potential.v0", fmt(c.potential.v0));
  t.put("potential.a0", format_number_list(c.potential.a0));
  t.put("initial.preset", c.initial.preset);
  t.put("initial.mode", c.initial.mode);
  t.put("initial.branch", c.initial.branch);
  t.put("scheme.name", to_string(c.scheme));
  t.put("scheme.tau", fmt(c.tau));
  t.put("scheme.t_final", fmt(c.t_final));
  t.put("scheme.stride", c.stride);
  const auto& s = c.study;
  t.put("study.kind", s.kind);
  t.put("study.axis", s.axis);
  t.put("study.ladder", format_number_list(s.ladder));
  t.put("study.regime", s.regime);
  t.put("study.regime_ladder", format_number_list(s.regime_ladder));
  t.put("study.schemes", join(s.schemes));
  t.put("study.reference", to_string(s.reference));
  t.put("study.ref_h", fmt(s.ref_h));
  t.put("study.ref_tau", fmt(s.ref_tau));
  t.put("study.reference_dir", s.reference_dir);
  t.put("study.relative", s.relative ? "true" : "false");
  t.put("study.error_floor", fmt(s.error_floor));
  t.put("study.jobs", s.jobs);
  std::ostringstream os;
  pt::write_ini(os, t);
  return os.str();
}

RunConfig config_from_ini(const std::string& text) {
  pt::ptree t;
  std::istringstream is(text);
  pt::read_ini(is, t);
  RunConfig c;
  auto num = [&](const char* key, double& out) {
    if (auto v = t.get_optional<std::string>(key)) out = parse_number(*v);
  };
  auto str = [&](const char* key, std::string& out) {
    if (auto v = t.get_optional<std::string>(key)) out = boost::trim_copy(*v);
  };
  auto integer = [&](const char* key, auto& out) {
    if (auto v = t.get_optional<std::string>(key)) out = static_cast<std::decay_t<decltype(out)>>(std::stol(*v));
  };
  num("grid.a", c.grid.a);
  num("grid.b", c.grid.b);
  integer("grid.dim", c.grid.dim);
  integer("grid.M", c.grid.modes);
  num("grid.h", c.grid.h);
  num("params.epsilon", c.params.epsilon);
  num("params.delta", c.params.delta);
  num("params.nu", c.params.nu);
  str("potential.preset", c.potential.preset);
  num("potential.v0", c.potential.v0);
  if (auto v = t.get_optional<std::string>("potential.a0")) c.potential.a0 = parse_number_list(*v);
  str("initial.preset", c.initial.preset);
  integer("initial.mode", c.initial.mode);
  str("initial.branch", c.initial.branch);
  if (auto v = t.get_optional<std::string>("scheme.name")) c.scheme = parse_scheme(boost::trim_copy(*v));
  num("scheme.tau", c.tau);
  num("scheme.t_final", c.t_final);
  integer("scheme.stride", c.stride);
  auto& s = c.study;
  str("study.kind", s.kind);
  str("study.axis", s.axis);
  if (auto v = t.get_optional<std::string>("study.ladder")) s.ladder = parse_number_list(*v);
  str("study.regime", s.regime);
  if (auto v = t.get_optional<std::string>("study.regime_ladder")) s.regime_ladder = parse_number_list(*v);
  if (auto v = t.get_optional<std::string>("study.schemes")) s.schemes = split_list(*v);
  if (auto v = t.get_optional<std::string>("study.reference")) s.reference = parse_reference_policy(boost::trim_copy(*v));
  num("study.ref_h", s.ref_h);
  num("study.ref_tau", s.ref_tau);
  str("study.reference_dir", s.reference_dir);
  if (auto v = t.get_optional<std::string>("study.relative")) s.relative = boost::trim_copy(*v) == "true";
  num("study.error_floor", s.error_floor);
  integer("study.jobs", s.jobs);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto ext = path.extension().string();
  if (ext == ".json") return config_from_json(json::parse(ss.str()));
  return config_from_ini(ss.str());
}

void save_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config " + path.string());
  if (path.extension() == ".json") out << to_json(c).dump(2) << "\n";
  else out << to_ini(c);
}

}  // namespace dirac
