#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dirac/grid.hpp"
#include "dirac/model.hpp"
#include "dirac/observables.hpp"
#include "dirac/propagators.hpp"

namespace dirac {

enum class Scheme { S1, S2, S4, S4RK, S4c };

inline constexpr Scheme kAllSchemes[] = {Scheme::S1, Scheme::S2, Scheme::S4, Scheme::S4RK, Scheme::S4c};

std::string to_string(Scheme s);
/// Case-insensitive; accepts "S1", "S2", "S4", "S4RK", "S4c".
Scheme parse_scheme(const std::string& name);
/// Formal order of accuracy: 1, 2 or 4.
int scheme_order(Scheme s);

enum class Flow { W, T, WHat };

std::string to_string(Flow f);

struct Factor {
  Flow flow;
  double coefficient;
};

namespace coefficients {

/// Triple-jump weights.
double w1();
double w2();

// Fourth-order partitioned Runge-Kutta splitting, 13 factors.
inline constexpr double a1 = 0.0792036964311957;
inline constexpr double a2 = 0.353172906049774;
inline constexpr double a3 = -0.0420650803577195;
inline constexpr double a4 = 1.0 - 2.0 * (a1 + a2 + a3);
inline constexpr double b1 = 0.209515106613362;
inline constexpr double b2 = -0.143851773179818;
inline constexpr double b3 = 0.5 - (b1 + b2);

}  // namespace coefficients

/// One step as a product of exact flows. `factors` are in application
/// order: factors[0] acts on the field first.
struct CompositionPlan {
  Scheme scheme = Scheme::S2;
  double tau = 0.0;
  int dim = 1;
  bool magnetic = false;
  std::vector<Factor> factors;

  /// Number of factors of the given flow. WHat counts as a W application
  /// when `merge_what` is set (the accounting used for work comparisons).
  int count(Flow f, bool merge_what = true) const;
  /// Sum of coefficients of T flows, or of W and WHat flows together.
  double coefficient_sum(Flow f) const;
};

/// Throws std::invalid_argument for dim = 2 with magnetic = true.
CompositionPlan build_plan(Scheme scheme, double tau, int dim, bool magnetic);

/// The exact flows a plan needs, built once and shared by stage. Factors
/// with equal (flow, coefficient) share one propagator.
class PropagatorSet {
 public:
  PropagatorSet(const CompositionPlan& plan, const PotentialSamples& samples, const PhysParams& params);

  struct Stage {
    Flow flow;
    double coefficient;
    std::shared_ptr<const PointwisePropagator> pointwise;  // W or WHat
    std::shared_ptr<const SymbolPropagator> symbol;        // T
  };

  const std::vector<Stage>& stages() const { return stages_; }
  std::size_t unique_count() const { return unique_; }
  /// Same stages with every matrix replaced by its adjoint, in reverse order.
  PropagatorSet inverse() const;

 private:
  PropagatorSet() = default;
  std::vector<Stage> stages_;
  std::size_t unique_ = 0;
};

struct EvolutionState {
  SpinorField field;
  long step = 0;
  double t = 0.0;
};

/// Applies one composition step with cached propagators.
class Evolver {
 public:
  Evolver(const CompositionPlan& plan, const PotentialSamples& samples, const PhysParams& params);
  Evolver(Scheme scheme, const PotentialSamples& samples, const PhysParams& params, double tau);

  void step(SpinorField& f) const;
  /// Exact inverse of step(): adjoint factors in reverse order.
  void step_back(SpinorField& f) const;

  EvolutionState step(EvolutionState s) const;

  const CompositionPlan& plan() const { return plan_; }
  const PropagatorSet& propagators() const { return forward_; }
  double build_seconds() const { return build_seconds_; }

 private:
  static void run(const PropagatorSet& set, SpinorField& f);

  CompositionPlan plan_;
  PropagatorSet forward_;
  PropagatorSet backward_;
  double build_seconds_ = 0.0;
};

struct EvolveOptions {
  /// Observer stride in steps; 0 selects 1 for n <= 100, else ceil(n/1000).
  long stride = 0;
  bool record_energy = true;
  /// Optional reference solution at time t for the error columns.
  std::function<SpinorField(double t)> reference;
  /// Called on every sampled state (including t = 0 and the final state).
  std::function<void(const EvolutionState&)> on_sample;
};

struct EvolveResult {
  EvolutionState state;
  std::vector<ObservableRecord> records;
  double build_seconds = 0.0;
  double loop_seconds = 0.0;
  long steps = 0;
  std::vector<std::string> warnings;
};

/// Number of steps for T_final / tau: the rounded quotient when it is within
/// 1e-9 of an integer, otherwise the truncated quotient and a warning.
long step_count(double t_final, double tau, std::string* warning = nullptr);

long default_stride(long steps);

/// Evolve phi0 to t_final. Throws std::runtime_error with the step index if
/// the field becomes non-finite.
EvolveResult evolve(Scheme scheme, const PhysParams& params, const PotentialSamples& samples,
                    const SpinorField& phi0, double tau, double t_final, const EvolveOptions& options = {});

/// Same with an explicit plan (the scheme overload picks magnetic from the samples).
EvolveResult evolve(const CompositionPlan& plan, const PhysParams& params, const PotentialSamples& samples,
                    const SpinorField& phi0, double t_final, const EvolveOptions& options = {});

}  // namespace dirac
