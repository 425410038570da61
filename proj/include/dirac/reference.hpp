#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dirac/config.hpp"

namespace dirac {

/// Solution snapshots of one reference run.
struct ReferenceSolution {
  std::string hash;
  Grid grid;
  PhysParams params;
  std::vector<double> times;
  std::vector<SpinorField> snapshots;
  double seconds = 0.0;  // generation time, 0 when loaded

  /// Snapshot at time t (matched within 1e-9). Throws std::out_of_range.
  const SpinorField& at(double t) const;
};

/// The fields that determine a reference: grid, params, potential, initial
/// data, scheme, step and snapshot times. Study-only fields are dropped.
RunConfig reference_key(const RunConfig& ref_config);
std::string reference_hash(const RunConfig& ref_config, const std::vector<double>& times);

/// Content-addressed store of reference solutions.
///
/// Files are <hash>.bin (raw little-endian complex doubles, snapshot-major,
/// then component-major) plus <hash>.json carrying grid, params, times and
/// the full reference config. An empty directory means memory only.
class ReferenceStore {
 public:
  explicit ReferenceStore(std::filesystem::path dir = {});

  /// Reference for `ref_config` (scheme, tau, grid taken from it) at the
  /// given times. Reuses memory or disk copies when the hash matches.
  /// With ReferencePolicy::Load a missing reference is an error.
  std::shared_ptr<const ReferenceSolution> get(const RunConfig& ref_config, const std::vector<double>& times,
                                               ReferencePolicy policy = ReferencePolicy::Generate);

  bool contains(const std::string& hash) const;
  const std::filesystem::path& directory() const { return dir_; }

  struct Stats {
    int memory_hits = 0;
    int disk_loads = 0;
    int generated = 0;
  };
  Stats stats() const;

 private:
  std::shared_ptr<const ReferenceSolution> generate(const RunConfig& ref_config, const std::vector<double>& times,
                                                    const std::string& hash) const;
  void write(const ReferenceSolution& r, const RunConfig& ref_config) const;
  std::shared_ptr<const ReferenceSolution> read(const std::string& hash) const;

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const ReferenceSolution>> memory_;
  Stats stats_;
};

/// Evolve `config` (its scheme, tau, grid) and keep the field at each of
/// `times`, which must be integer multiples of tau within 1e-9.
ReferenceSolution compute_reference(const RunConfig& config, const std::vector<double>& times);

}  // namespace dirac
