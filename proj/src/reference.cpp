#include "dirac/reference.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dirac {

using nlohmann::json;

const SpinorField& ReferenceSolution::at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return snapshots[i];
  throw std::out_of_range("reference has no snapshot at t = " + std::to_string(t));
}

RunConfig reference_key(const RunConfig& c) {
  RunConfig k;
  k.grid = c.grid;
  k.grid.modes = c.grid.resolved_modes();
  k.grid.h = 0.0;
  k.params = c.params;
  k.potential = c.potential;
  k.initial = c.initial;
  k.scheme = c.scheme;
  k.tau = c.tau;
  k.t_final = 0.0;
  k.stride = 0;
  k.study = StudyConfig{};
  k.study.ref_h = 0.0;
  k.study.ref_tau = 0.0;
  return k;
}

std::string reference_hash(const RunConfig& c, const std::vector<double>& times) {
  json j = to_json(reference_key(c));
  j["times"] = times;
  return sha256_hex(j.dump());
}

ReferenceSolution compute_reference(const RunConfig& c, const std::vector<double>& times) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = c.grid.build();
  const PotentialSamples samples = sample_potentials(c.potential.build(), grid);
  std::vector<long> targets;
  for (double t : times) {
    const double q = t / c.tau;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q))
      throw std::invalid_argument("reference: snapshot time " + std::to_string(t) + " is not a multiple of tau");
    targets.push_back(static_cast<long>(std::round(q)));
  }
  ReferenceSolution r;
  r.grid = grid;
  r.params = c.params;
  r.times = times;
  r.snapshots.resize(times.size());

  const Evolver ev(c.scheme, samples, c.params, c.tau);
  SpinorField f = c.initial_field(grid);
  long last = 0;
  for (long n : targets) last = std::max(last, n);
  for (long n = 0; n <= last; ++n) {
    if (n > 0) ev.step(f);
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (targets[i] == n) r.snapshots[i] = f;
    if (n % 1000 == 0 && !f.all_finite())
      throw std::runtime_error("reference: non-finite field at step " + std::to_string(n));
  }
  if (!f.all_finite()) throw std::runtime_error("reference: non-finite field at final step");
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ReferenceStore::ReferenceStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

bool ReferenceStore::contains(const std::string& hash) const {
  std::lock_guard lock(mutex_);
  if (memory_.count(hash)) return true;
  return !dir_.empty() && std::filesystem::exists(dir_ / (hash + ".bin"));
}

ReferenceStore::Stats ReferenceStore::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

namespace {

// Concurrent requests for the same hash wait on the first generator.
struct Pending {
  std::mutex m;
  std::map<std::string, std::shared_future<std::shared_ptr<const ReferenceSolution>>> inflight;
};

Pending& pending() {
  static Pending p;
  return p;
}

}  // namespace

std::shared_ptr<const ReferenceSolution> ReferenceStore::get(const RunConfig& ref_config,
                                                             const std::vector<double>& times,
                                                             ReferencePolicy policy) {
  const std::string hash = reference_hash(ref_config, times);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(hash); it != memory_.end()) {
      ++stats_.memory_hits;
      return it->second;
    }
  }
  const std::string key = dir_.string() + "|" + hash + "|" + std::to_string(reinterpret_cast<std::uintptr_t>(this));
  std::promise<std::shared_ptr<const ReferenceSolution>> promise;
  std::shared_future<std::shared_ptr<const ReferenceSolution>> fut;
  bool owner = false;
  {
    std::lock_guard lock(pending().m);
    auto it = pending().inflight.find(key);
    if (it == pending().inflight.end()) {
      fut = promise.get_future().share();
      pending().inflight.emplace(key, fut);
      owner = true;
    } else {
      fut = it->second;
    }
  }
  if (!owner) return fut.get();

  try {
    std::shared_ptr<const ReferenceSolution> r;
    if (!dir_.empty() && std::filesystem::exists(dir_ / (hash + ".bin"))) {
      r = read(hash);
      std::lock_guard lock(mutex_);
      ++stats_.disk_loads;
    } else if (policy == ReferencePolicy::Load) {
      throw std::runtime_error("reference " + hash + " not found in '" + dir_.string() + "' (policy = load)");
    } else {
      r = generate(ref_config, times, hash);
      if (!dir_.empty()) write(*r, ref_config);
      std::lock_guard lock(mutex_);
      ++stats_.generated;
    }
    {
      std::lock_guard lock(mutex_);
      memory_[hash] = r;
    }
    promise.set_value(r);
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  {
    std::lock_guard lock(pending().m);
    pending().inflight.erase(key);
  }
  return fut.get();
}

std::shared_ptr<const ReferenceSolution> ReferenceStore::generate(const RunConfig& ref_config,
                                                                  const std::vector<double>& times,
                                                                  const std::string& hash) const {
  auto r = std::make_shared<ReferenceSolution>(compute_reference(ref_config, times));
  r->hash = hash;
  return r;
}

void ReferenceStore::write(const ReferenceSolution& r, const RunConfig& ref_config) const {
  static_assert(std::endian::native == std::endian::little, "reference files are little-endian");
  const auto bin = dir_ / (r.hash + ".bin");
  const auto tmp = dir_ / (r.hash + ".bin.tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    for (const auto& s : r.snapshots)
      out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(2 * s.nodes() * sizeof(cplx)));
  }
  json meta;
  meta["hash"] = r.hash;
  meta["version"] = kVersion;
  meta["grid"] = {{"a", r.grid.a()}, {"b", r.grid.b()}, {"dim", r.grid.dim()}, {"M", r.grid.modes()}};
  meta["params"] = {{"epsilon", r.params.epsilon}, {"delta", r.params.delta}, {"nu", r.params.nu}};
  meta["times"] = r.times;
  meta["components"] = 2;
  meta["layout"] = "snapshot-major, component-major, complex128 little-endian";
  meta["config"] = to_json(reference_key(ref_config));
  {
    std::ofstream out(dir_ / (r.hash + ".json"));
    out << meta.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, bin);
}

std::shared_ptr<const ReferenceSolution> ReferenceStore::read(const std::string& hash) const {
  std::ifstream meta_in(dir_ / (hash + ".json"));
  if (!meta_in) throw std::runtime_error("reference sidecar missing for " + hash);
  const json meta = json::parse(meta_in);
  auto r = std::make_shared<ReferenceSolution>();
  r->hash = hash;
  const auto& g = meta.at("grid");
  r->grid = Grid::build(g.at("a").get<double>(), g.at("b").get<double>(), g.at("M").get<int>(), g.at("dim").get<int>());
  const auto& p = meta.at("params");
  r->params = {p.at("epsilon").get<double>(), p.at("delta").get<double>(), p.at("nu").get<double>()};
  r->times = meta.at("times").get<std::vector<double>>();
  std::ifstream in(dir_ / (hash + ".bin"), std::ios::binary);
  const std::size_t bytes = 2 * r->grid.size() * sizeof(cplx);
  for (std::size_t i = 0; i < r->times.size(); ++i) {
    SpinorField f(r->grid);
    in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw std::runtime_error("reference file truncated: " + hash);
    r->snapshots.push_back(std::move(f));
  }
  return r;
}

}  // namespace dirac
