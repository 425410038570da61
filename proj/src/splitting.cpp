#include "dirac/splitting.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dirac {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::S1: return "S1";
    case Scheme::S2: return "S2";
    case Scheme::S4: return "S4";
    case Scheme::S4RK: return "S4RK";
    case Scheme::S4c: return "S4c";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string u(name);
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Scheme s : kAllSchemes) {
    std::string v = to_string(s);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::toupper(c); });
    if (u == v) return s;
  }
  throw std::invalid_argument("unknown scheme '" + name + "' (expected S1, S2, S4, S4RK or S4c)");
}

int scheme_order(Scheme s) {
  switch (s) {
    case Scheme::S1: return 1;
    case Scheme::S2: return 2;
    default: return 4;
  }
}

std::string to_string(Flow f) {
  switch (f) {
    case Flow::W: return "W";
    case Flow::T: return "T";
    case Flow::WHat: return "What";
  }
  return "?";
}

namespace coefficients {

double w1() { return 1.0 / (2.0 - std::cbrt(2.0)); }
double w2() { return -std::cbrt(2.0) / (2.0 - std::cbrt(2.0)); }

}  // namespace coefficients

int CompositionPlan::count(Flow f, bool merge_what) const {
  int n = 0;
  for (const Factor& x : factors) {
    if (x.flow == f) ++n;
    else if (merge_what && f == Flow::W && x.flow == Flow::WHat) ++n;
  }
  return n;
}

double CompositionPlan::coefficient_sum(Flow f) const {
  double s = 0.0;
  for (const Factor& x : factors) {
    const bool w_family = x.flow == Flow::W || x.flow == Flow::WHat;
    if ((f == Flow::T && x.flow == Flow::T) || (f != Flow::T && w_family)) s += x.coefficient;
  }
  return s;
}

CompositionPlan build_plan(Scheme scheme, double tau, int dim, bool magnetic) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_plan: dim must be 1 or 2");
  if (dim == 2 && magnetic)
    throw std::invalid_argument(
        "build_plan: 2D stepping with a magnetic potential is not supported (the W flow is then not "
        "diagonal in physical space and needs a characteristics/NUFFT solver)");
  CompositionPlan p{scheme, tau, dim, magnetic, {}};
  auto& f = p.factors;
  switch (scheme) {
    case Scheme::S1:
      f = {{Flow::W, 1.0}, {Flow::T, 1.0}};
      break;
    case Scheme::S2:
      f = {{Flow::W, 0.5}, {Flow::T, 1.0}, {Flow::W, 0.5}};
      break;
    case Scheme::S4: {
      // Three Strang blocks at w1, w2, w1 tau with neighbouring half W steps merged.
      const double w1 = coefficients::w1(), w2 = coefficients::w2();
      const double mid = 0.5 * (w1 + w2);
      f = {{Flow::W, 0.5 * w1}, {Flow::T, w1}, {Flow::W, mid}, {Flow::T, w2},
           {Flow::W, mid},      {Flow::T, w1}, {Flow::W, 0.5 * w1}};
      break;
    }
    case Scheme::S4RK: {
      using namespace coefficients;
      f = {{Flow::W, a1}, {Flow::T, b1}, {Flow::W, a2}, {Flow::T, b2}, {Flow::W, a3},
           {Flow::T, b3}, {Flow::W, a4}, {Flow::T, b3}, {Flow::W, a3}, {Flow::T, b2},
           {Flow::W, a2}, {Flow::T, b1}, {Flow::W, a1}};
      break;
    }
    case Scheme::S4c:
      // The commutator correction vanishes without a magnetic potential.
      f = {{Flow::W, 1.0 / 6.0},
           {Flow::T, 0.5},
           {magnetic ? Flow::WHat : Flow::W, 2.0 / 3.0},
           {Flow::T, 0.5},
           {Flow::W, 1.0 / 6.0}};
      break;
  }
  return p;
}

PropagatorSet::PropagatorSet(const CompositionPlan& plan, const PotentialSamples& samples,
                             const PhysParams& params) {
  if (samples.grid.dim() != plan.dim) throw std::invalid_argument("propagator set: plan/grid dimension mismatch");
  std::map<std::pair<int, double>, Stage> cache;
  for (const Factor& x : plan.factors) {
    const auto key = std::make_pair(static_cast<int>(x.flow), x.coefficient);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Stage s{x.flow, x.coefficient, nullptr, nullptr};
      const double c_tau = x.coefficient * plan.tau;
      switch (x.flow) {
        case Flow::W:
          s.pointwise = std::make_shared<PointwisePropagator>(build_w_propagator(samples, params, c_tau));
          break;
        case Flow::T:
          s.symbol = std::make_shared<SymbolPropagator>(build_t_propagator(samples.grid, params, c_tau));
          break;
        case Flow::WHat:
          s.pointwise = std::make_shared<PointwisePropagator>(
              build_what_propagator(samples, params, plan.tau, x.coefficient).flow);
          break;
      }
      it = cache.emplace(key, s).first;
    }
    stages_.push_back(it->second);
  }
  unique_ = cache.size();
}

PropagatorSet PropagatorSet::inverse() const {
  PropagatorSet out;
  std::map<const void*, Stage> done;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    const void* id = it->pointwise ? static_cast<const void*>(it->pointwise.get()) : it->symbol.get();
    auto found = done.find(id);
    if (found == done.end()) {
      Stage s{it->flow, -it->coefficient, nullptr, nullptr};
      if (it->pointwise) s.pointwise = std::make_shared<PointwisePropagator>(it->pointwise->adjoint());
      if (it->symbol) s.symbol = std::make_shared<SymbolPropagator>(it->symbol->adjoint());
      found = done.emplace(id, s).first;
    }
    out.stages_.push_back(found->second);
  }
  out.unique_ = done.size();
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Evolver::Evolver(const CompositionPlan& plan, const PotentialSamples& samples, const PhysParams& params)
    : plan_(plan),
      forward_([&] {
        params.validate();
        return PropagatorSet(plan, samples, params);
      }()),
      backward_(forward_.inverse()) {}

Evolver::Evolver(Scheme scheme, const PotentialSamples& samples, const PhysParams& params, double tau)
    : Evolver(build_plan(scheme, tau, samples.grid.dim(), samples.magnetic()), samples, params) {}

void Evolver::run(const PropagatorSet& set, SpinorField& f) {
  for (const auto& s : set.stages()) {
    if (s.pointwise) apply_pointwise(*s.pointwise, f);
    else apply_symbol(*s.symbol, f);
  }
}

void Evolver::step(SpinorField& f) const { run(forward_, f); }
void Evolver::step_back(SpinorField& f) const { run(backward_, f); }

EvolutionState Evolver::step(EvolutionState s) const {
  run(forward_, s.field);
  ++s.step;
  s.t = static_cast<double>(s.step) * plan_.tau;
  return s;
}

long step_count(double t_final, double tau, std::string* warning) {
  if (!(tau > 0.0)) throw std::invalid_argument("evolve: tau must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("evolve: final time must be non-negative");
  const double q = t_final / tau;
  const double n = std::round(q);
  if (std::abs(q - n) <= 1e-9 * std::max(1.0, q)) return static_cast<long>(n);
  const long m = static_cast<long>(std::floor(q));
  if (warning != nullptr) {
    std::ostringstream os;
    os << "T_final/tau = " << q << " is not an integer; truncating to " << m << " steps (t = " << m * tau << ")";
    *warning = os.str();
  }
  return m;
}

long default_stride(long steps) {
  if (steps <= 100) return 1;
  return (steps + 999) / 1000;
}

EvolveResult evolve(const CompositionPlan& plan, const PhysParams& params, const PotentialSamples& samples,
                    const SpinorField& phi0, double t_final, const EvolveOptions& options) {
  if (!(phi0.grid() == samples.grid)) throw std::invalid_argument("evolve: initial data and potentials on different grids");
  EvolveResult res;
  std::string warning;
  const long n = step_count(t_final, plan.tau, &warning);
  if (!warning.empty()) res.warnings.push_back(warning);
  res.steps = n;

  const auto t_build = std::chrono::steady_clock::now();
  const Evolver ev(plan, samples, params);
  res.build_seconds = seconds_since(t_build);

  const long stride = options.stride > 0 ? options.stride : default_stride(n);
  EvolutionState st{phi0, 0, 0.0};

  auto observe = [&] {
    ObservableRecord r;
    r.t = st.t;
    r.step = st.step;
    r.mass = mass(st.field);
    if (options.record_energy) r.energy = energy(st.field, samples, params);
    if (options.reference) r.errors = error_set(st.field, options.reference(st.t), params);
    res.records.push_back(r);
    if (options.on_sample) options.on_sample(st);
  };

  double observe_seconds = 0.0;
  auto timed_observe = [&] {
    const auto t0 = std::chrono::steady_clock::now();
    observe();
    observe_seconds += seconds_since(t0);
  };

  const auto t_loop = std::chrono::steady_clock::now();
  timed_observe();
  for (long k = 1; k <= n; ++k) {
    ev.step(st.field);
    st.step = k;
    st.t = static_cast<double>(k) * plan.tau;
    if (!st.field.all_finite()) {
      std::ostringstream os;
      os << "evolve: non-finite field after step " << k << " (t = " << st.t << ", scheme " << to_string(plan.scheme)
         << ")";
      throw std::runtime_error(os.str());
    }
    if (k % stride == 0 || k == n) timed_observe();
  }
  res.loop_seconds = seconds_since(t_loop) - observe_seconds;
  res.state = std::move(st);
  return res;
}

EvolveResult evolve(Scheme scheme, const PhysParams& params, const PotentialSamples& samples,
                    const SpinorField& phi0, double tau, double t_final, const EvolveOptions& options) {
  return evolve(build_plan(scheme, tau, samples.grid.dim(), samples.magnetic()), params, samples, phi0, t_final,
                options);
}

}  // namespace dirac
