#include "doctest.h"

#include <cmath>

#include "dirac/splitting.hpp"

using namespace dirac;

namespace {

double rel_l2(const SpinorField& a, const SpinorField& b) { return l2_error(a, b) / l2_error(b, SpinorField(b.grid())); }

struct PaperSetup {
  Grid grid = Grid::build(-32.0, 32.0, 1024);
  PhysParams params{1.0, 1.0, 1.0};
  PotentialSamples samples = sample_potentials(potentials::rational_1d(), grid);
  SpinorField phi0 = initial::gaussian_pair(grid);
};

}  // namespace

TEST_CASE("scheme names and orders") {
  for (Scheme s : kAllSchemes) CHECK(parse_scheme(to_string(s)) == s);
  CHECK(parse_scheme("s4rk") == Scheme::S4RK);
  CHECK(parse_scheme("S4C") == Scheme::S4c);
  CHECK_THROWS_AS(parse_scheme("S3"), std::invalid_argument);
  CHECK(scheme_order(Scheme::S1) == 1);
  CHECK(scheme_order(Scheme::S2) == 2);
  CHECK(scheme_order(Scheme::S4) == 4);
  CHECK(scheme_order(Scheme::S4RK) == 4);
  CHECK(scheme_order(Scheme::S4c) == 4);
}

TEST_CASE("composition plans") {
  const CompositionPlan s2 = build_plan(Scheme::S2, 0.1, 1, true);
  REQUIRE(s2.factors.size() == 3);
  CHECK(s2.factors[0].flow == Flow::W);
  CHECK(s2.factors[0].coefficient == 0.5);
  CHECK(s2.factors[1].flow == Flow::T);
  CHECK(s2.factors[1].coefficient == 1.0);
  CHECK(s2.factors[2].flow == Flow::W);
  CHECK(s2.factors[2].coefficient == 0.5);

  // e^{tau T} e^{tau W}: W acts first
  const CompositionPlan s1 = build_plan(Scheme::S1, 0.1, 1, true);
  REQUIRE(s1.factors.size() == 2);
  CHECK(s1.factors[0].flow == Flow::W);
  CHECK(s1.factors[1].flow == Flow::T);

  const CompositionPlan s4 = build_plan(Scheme::S4, 0.1, 1, true);
  std::vector<double> t4;
  for (const Factor& f : s4.factors)
    if (f.flow == Flow::T) t4.push_back(f.coefficient);
  REQUIRE(t4.size() == 3);
  CHECK(t4[0] == coefficients::w1());
  CHECK(t4[1] == coefficients::w2());
  CHECK(t4[2] == coefficients::w1());
  CHECK(coefficients::w1() == doctest::Approx(1.0 / (2.0 - std::cbrt(2.0))));
  CHECK(coefficients::w2() == doctest::Approx(-std::cbrt(2.0) / (2.0 - std::cbrt(2.0))));

  CHECK(build_plan(Scheme::S4RK, 0.1, 1, true).factors.size() == 13);
  CHECK(coefficients::a4 == 1.0 - 2.0 * (coefficients::a1 + coefficients::a2 + coefficients::a3));

  const CompositionPlan c = build_plan(Scheme::S4c, 0.1, 1, true);
  REQUIRE(c.factors.size() == 5);
  CHECK(c.factors[0].flow == Flow::W);
  CHECK(c.factors[0].coefficient == doctest::Approx(1.0 / 6.0));
  CHECK(c.factors[2].flow == Flow::WHat);
  CHECK(c.factors[2].coefficient == doctest::Approx(2.0 / 3.0));
  CHECK(build_plan(Scheme::S4c, 0.1, 1, false).count(Flow::WHat, false) == 0);
  CHECK(build_plan(Scheme::S4c, 0.1, 1, false).factors[2].flow == Flow::W);

  for (Scheme s : kAllSchemes)
    for (bool magnetic : {false, true}) {
      CAPTURE(to_string(s));
      const CompositionPlan p = build_plan(s, 0.1, 1, magnetic);
      CHECK(std::abs(p.coefficient_sum(Flow::T) - 1.0) <= 1e-15);
      CHECK(std::abs(p.coefficient_sum(Flow::W) - 1.0) <= 1e-15);
      CHECK_NOTHROW(build_plan(s, 0.1, 2, false));
      CHECK_THROWS_AS(build_plan(s, 0.1, 2, true), std::invalid_argument);
    }
}

TEST_CASE("flow-application counts per step") {
  const int T[] = {1, 1, 3, 6, 2};
  const int W[] = {1, 2, 4, 7, 3};
  for (int i = 0; i < 5; ++i) {
    const CompositionPlan p = build_plan(kAllSchemes[i], 0.1, 1, true);
    CAPTURE(to_string(kAllSchemes[i]));
    CHECK(p.count(Flow::T) == T[i]);
    CHECK(p.count(Flow::W) == W[i]);
  }
}

TEST_CASE("a step is exactly reversible") {
  const PaperSetup s;
  for (Scheme sc : kAllSchemes) {
    CAPTURE(to_string(sc));
    const Evolver ev(sc, s.samples, s.params, 0.1);
    SpinorField f = s.phi0;
    for (int n = 0; n < 10; ++n) ev.step(f);
    CHECK(rel_l2(f, s.phi0) > 1e-3);
    for (int n = 0; n < 10; ++n) ev.step_back(f);
    CHECK(rel_l2(f, s.phi0) < 1e-10);
  }
}

TEST_CASE("without a magnetic potential the corrected scheme is the plain W composition") {
  const PaperSetup s;
  PotentialSpec v = potentials::rational_1d();
  v.A = {};
  v.dA = {};
  const PotentialSamples samples = sample_potentials(v, s.grid);
  const Evolver with_hat(build_plan(Scheme::S4c, 0.05, 1, true), samples, s.params);
  const Evolver plain(build_plan(Scheme::S4c, 0.05, 1, false), samples, s.params);
  SpinorField a = s.phi0, b = s.phi0;
  for (int n = 0; n < 20; ++n) {
    with_hat.step(a);
    plain.step(b);
  }
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST_CASE("S1 without potentials is the free flow") {
  const Grid g = Grid::build(-16.0, 16.0, 256);
  const PhysParams p{0.8, 1.2, 0.9};
  const SpinorField f0 = initial::gaussian_pair(g);
  SpinorField f = f0;
  Evolver(Scheme::S1, sample_potentials(potentials::zero(), g), p, 0.2).step(f);
  SpinorField free = f0;
  apply_symbol(build_t_propagator(g, p, 0.2), free);
  CHECK(rel_l2(f, free) < 1e-15);
}

TEST_CASE("one-step error against the exact plane wave") {
  // Constant V and A1 with nu != 0, so T and W do not commute.
  const Grid g = Grid::build(-kPi, kPi, 16);
  const PhysParams p{0.9, 1.0, 1.1};
  const double v0 = 0.7;
  const std::vector<double> a0{0.8};
  const PotentialSamples s = sample_potentials(potentials::constant(v0, a0), g);
  const SpinorField phi0 = plane_wave_solution({2}, v0, a0, p, Branch::Plus, 0.0, g);
  for (Scheme sc : kAllSchemes) {
    CAPTURE(to_string(sc));
    std::vector<double> err;
    for (double tau : {0.1, 0.05, 0.025}) {
      SpinorField f = phi0;
      Evolver(sc, s, p, tau).step(f);
      err.push_back(rel_l2(f, plane_wave_solution({2}, v0, a0, p, Branch::Plus, tau, g)));
    }
    const int q = scheme_order(sc) + 1;
    CHECK(std::log2(err[0] / err[1]) > q - 0.2);
    CHECK(std::log2(err[1] / err[2]) > q - 0.2);
  }
}

TEST_CASE("global order over a step ladder") {
  const Grid g = Grid::build(-kPi, kPi, 16);
  const PhysParams p{0.9, 1.0, 1.1};
  const double v0 = 0.7;
  const std::vector<double> a0{0.8};
  const PotentialSamples s = sample_potentials(potentials::constant(v0, a0), g);
  const SpinorField phi0 = plane_wave_solution({1}, v0, a0, p, Branch::Minus, 0.0, g);
  const SpinorField exact = plane_wave_solution({1}, v0, a0, p, Branch::Minus, 1.0, g);
  for (Scheme sc : kAllSchemes) {
    CAPTURE(to_string(sc));
    std::vector<double> err;
    for (double tau : {1.0 / 16, 1.0 / 32, 1.0 / 64}) err.push_back(rel_l2(evolve(sc, p, s, phi0, tau, 1.0).state.field, exact));
    const double rate = std::log2(err[1] / err[2]);
    CHECK(std::abs(rate - scheme_order(sc)) < 0.15);
  }
}

TEST_CASE("mass is conserved by every scheme") {
  const PaperSetup s;
  const double m0 = mass(s.phi0);
  for (Scheme sc : kAllSchemes) {
    CAPTURE(to_string(sc));
    EvolveOptions o;
    o.record_energy = false;
    const EvolveResult r = evolve(sc, s.params, s.samples, s.phi0, 0.1, 20.0, o);
    CHECK(r.steps == 200);
    double drift = 0.0;
    for (const ObservableRecord& rec : r.records) drift = std::max(drift, std::abs(rec.mass - m0) / m0);
    CHECK(drift <= 1e-11);
  }

  // 10^4 steps on a smaller grid
  const Grid g = Grid::build(-16.0, 16.0, 256);
  const PotentialSamples ps = sample_potentials(potentials::rational_1d(), g);
  const SpinorField f0 = initial::gaussian_pair(g);
  EvolveOptions o;
  o.record_energy = false;
  const EvolveResult r = evolve(Scheme::S4c, s.params, ps, f0, 0.005, 50.0, o);
  CHECK(r.steps == 10000);
  CHECK(std::abs(mass(r.state.field) - mass(f0)) <= 1e-11 * mass(f0));
}

TEST_CASE("step counts and observer stride") {
  std::string w;
  CHECK(step_count(6.0, 1.0 / 128, &w) == 768);
  CHECK(w.empty());
  CHECK(step_count(0.3, 0.1, &w) == 3);
  CHECK(w.empty());
  CHECK(step_count(1.0, 0.3, &w) == 3);
  CHECK_FALSE(w.empty());
  CHECK(default_stride(100) == 1);
  CHECK(default_stride(101) == 1);
  CHECK(default_stride(60000) == 60);
  CHECK(default_stride(60001) == 61);

  const PaperSetup s;
  const EvolveResult r = evolve(Scheme::S2, s.params, s.samples, s.phi0, 0.3, 1.0);
  CHECK(r.steps == 3);
  CHECK(r.warnings.size() == 1);
  CHECK(r.records.front().t == 0.0);
  CHECK(r.records.back().step == 3);

  EvolveOptions o;
  o.stride = 7;
  const EvolveResult q = evolve(Scheme::S2, s.params, s.samples, s.phi0, 0.1, 2.0, o);
  REQUIRE(q.records.size() == 4);  // 0, 7, 14 and the final 20
  CHECK(q.records[1].step == 7);
  CHECK(q.records.back().step == 20);
}

TEST_CASE("a single step through evolve equals Evolver::step") {
  const PaperSetup s;
  SpinorField f = s.phi0;
  Evolver(Scheme::S4RK, s.samples, s.params, 0.25).step(f);
  const EvolveResult r = evolve(Scheme::S4RK, s.params, s.samples, s.phi0, 0.25, 0.25);
  CHECK(std::equal(f.values().begin(), f.values().end(), r.state.field.values().begin()));
}

TEST_CASE("non-finite fields abort with the step index") {
  const PaperSetup s;
  SpinorField bad = s.phi0;
  bad(0, 10) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(evolve(Scheme::S2, s.params, s.samples, bad, 0.1, 1.0), std::runtime_error);
}

TEST_CASE("the paper 1D setup reaches the published S4c error") {
  // S4c at tau = 1/4 against an S4c solution at tau = 1e-3
  const PaperSetup s;
  const SpinorField ref = evolve(Scheme::S4c, s.params, s.samples, s.phi0, 1e-3, 6.0).state.field;
  const SpinorField num = evolve(Scheme::S4c, s.params, s.samples, s.phi0, 0.25, 6.0).state.field;
  CHECK(l2_error(num, ref) == doctest::Approx(9.54e-4).epsilon(0.02));
}
