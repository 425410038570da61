#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>

#include "dirac/observables.hpp"
#include "dirac/propagators.hpp"
#include "oracles.hpp"

using namespace dirac;

namespace {

const cplx I{0.0, 1.0};

oracle::MatX w_generator(double v, double a1, const PhysParams& p) {
  return (-I / p.delta) * (v * oracle::MatX::Identity(2, 2) - a1 * oracle::pauli(1));
}

oracle::MatX t_generator(double mu1, double mu2, const PhysParams& p) {
  return -I * (mu1 / p.epsilon) * oracle::pauli(1) - I * (mu2 / p.epsilon) * oracle::pauli(2) -
         I * (p.nu / (p.delta * p.epsilon * p.epsilon)) * oracle::pauli(3);
}

double max_abs(const oracle::MatX& a, const Mat2& b) {
  const oracle::MatX d = a - oracle::MatX(b);
  return d.cwiseAbs().maxCoeff();
}

double unitarity_defect(const Mat2& m) { return (m * m.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff(); }

SpinorField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  SpinorField f(g);
  for (auto& v : f.values()) v = {n(rng), n(rng)};
  return f;
}

}  // namespace

TEST_CASE("W node matrices") {
  const PhysParams unit{1.0, 1.0, 1.0};
  CHECK(w_node_matrix(0.0, 0.0, unit, 0.7) == Mat2::Identity());
  // lambda+ = 2, lambda- = 0 at V = A1 = 1, and c tau = pi closes the phase
  CHECK((w_node_matrix(1.0, 1.0, unit, kPi) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const PhysParams p{0.8, 0.6, 1.1};
  double worst = 0.0, unit_worst = 0.0;
  for (int j = 0; j < 64; ++j) {
    const double v = U(rng), a = U(rng), c = 0.1 * U(rng);
    const Mat2 m = w_node_matrix(v, a, p, c);
    worst = std::max(worst, max_abs(oracle::expm(c * w_generator(v, a, p)), m));
    unit_worst = std::max(unit_worst, unitarity_defect(m));
  }
  CHECK(worst < 1e-12);
  CHECK(unit_worst < 1e-13);
}

TEST_CASE("T mode matrices") {
  const PhysParams p{0.7, 0.5, 1.3};
  const double c = 0.3;
  const double ph = c * p.nu / (p.delta * p.epsilon * p.epsilon);
  const Mat2 m0 = t_mode_matrix_1d(0.0, p, c);
  CHECK(std::abs(m0(0, 0) - std::polar(1.0, -ph)) < 1e-15);
  CHECK(std::abs(m0(1, 1) - std::polar(1.0, ph)) < 1e-15);
  CHECK(std::abs(m0(0, 1)) < 1e-15);
  CHECK(std::abs(m0(1, 0)) < 1e-15);

  const PhysParams massless{1.0, 1.0, 0.0};
  CHECK(t_mode_matrix_1d(0.0, massless, 0.9) == Mat2::Identity());
  CHECK(t_mode_matrix_2d(0.0, 0.0, massless, 0.9) == Mat2::Identity());

  // eigenphases +-c sqrt(2) at mu = 1 with unit parameters
  const PhysParams unit{1.0, 1.0, 1.0};
  const Mat2 m1 = t_mode_matrix_1d(1.0, unit, c);
  Eigen::ComplexEigenSolver<Mat2> es(m1);
  std::vector<double> phases{std::arg(es.eigenvalues()(0)), std::arg(es.eigenvalues()(1))};
  std::sort(phases.begin(), phases.end());
  CHECK(phases[0] == doctest::Approx(-c * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(phases[1] == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(max_abs(oracle::expm(c * t_generator(1.0, 0.0, unit)), m1) < 1e-12);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-20.0, 20.0);
  double worst = 0.0, worst2 = 0.0, unit_worst = 0.0;
  for (int j = 0; j < 64; ++j) {
    const double mu1 = U(rng), mu2 = U(rng), cc = 0.01 * U(rng);
    const Mat2 a = t_mode_matrix_1d(mu1, p, cc);
    const Mat2 b = t_mode_matrix_2d(mu1, mu2, p, cc);
    worst = std::max(worst, max_abs(oracle::expm(cc * t_generator(mu1, 0.0, p)), a));
    worst2 = std::max(worst2, max_abs(oracle::expm(cc * t_generator(mu1, mu2, p)), b));
    unit_worst = std::max({unit_worst, unitarity_defect(a), unitarity_defect(b)});
  }
  CHECK(worst < 1e-12);
  CHECK(worst2 < 1e-12);
  CHECK(unit_worst < 1e-13);
}

TEST_CASE("eigenframes reconstruct the generators") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const PhysParams p{0.6, 0.4, 0.9};
  for (int j = 0; j < 32; ++j) {
    const double v = U(rng), a = U(rng), mu = 5.0 * U(rng), tau = 0.2 * std::abs(U(rng));
    auto rebuild = [](const EigenFrame& fr) {
      Mat2 d = Mat2::Zero();
      d(0, 0) = -I * fr.lambda_plus;
      d(1, 1) = -I * fr.lambda_minus;
      return Mat2(fr.P * d * fr.P.adjoint());
    };
    const EigenFrame w = w_frame(v, a, p);
    CHECK((w.P * w.P.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(max_abs(w_generator(v, a, p), rebuild(w)) < 1e-13);

    const EigenFrame t = t_frame(mu, p);
    CHECK((t.P * t.P.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(max_abs(t_generator(mu, 0.0, p), rebuild(t)) < 1e-12);

    const EigenFrame h = what_frame(v, a, p, tau);
    const oracle::MatX what =
        w_generator(v, a, p) + (tau * tau / 48.0) * (-4.0 * I * p.nu / (std::pow(p.delta, 3) * p.epsilon * p.epsilon)) *
                                   a * a * oracle::pauli(3);
    CHECK((h.P * h.P.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(max_abs(what, rebuild(h)) < 1e-12);
  }
}

TEST_CASE("modified potential flow") {
  const PhysParams unit{1.0, 1.0, 1.0};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const double tau = 0.1;
  double worst = 0.0;
  for (int j = 0; j < 64; ++j) {
    const double v = U(rng), a = U(rng);
    const oracle::MatX gen = w_generator(v, a, unit) + (tau * tau / 48.0) * (-4.0 * I) * a * a * oracle::pauli(3);
    worst = std::max(worst, max_abs(oracle::expm((2.0 * tau / 3.0) * gen), what_node_matrix(v, a, unit, tau, 2.0 * tau / 3.0)));
  }
  CHECK(worst < 1e-12);

  // What - W is O(tau^3) per node: halving tau divides the gap by ~8
  const double v = 0.4, a = 1.2;
  std::vector<double> gaps;
  for (double t : {1e-2, 5e-3, 2.5e-3}) {
    const double c = 2.0 * t / 3.0;
    gaps.push_back((what_node_matrix(v, a, unit, t, c) - w_node_matrix(v, a, unit, c)).cwiseAbs().maxCoeff());
  }
  CHECK(gaps[0] / gaps[1] == doctest::Approx(8.0).epsilon(0.01));
  CHECK(gaps[1] / gaps[2] == doctest::Approx(8.0).epsilon(0.01));

  // A1 = 0 everywhere: identical to the W propagator
  const Grid g = Grid::build(-8.0, 8.0, 64);
  PotentialSpec vonly = potentials::rational_1d();
  vonly.A = {};
  vonly.dA = {};
  const PotentialSamples s = sample_potentials(vonly, g);
  const WhatPropagator wh = build_what_propagator(s, unit, tau);
  const PointwisePropagator w = build_w_propagator(s, unit, (2.0 / 3.0) * tau);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(wh.flow.matrices[j] == w.matrices[j]);
}

TEST_CASE("applying propagators to fields") {
  const Grid g = Grid::build(-4.0, 4.0, 64);
  const PhysParams p{0.9, 0.7, 1.2};
  const SpinorField f0 = random_field(g, 4);

  SpinorField f = f0;
  apply_pointwise(build_w_propagator(sample_potentials(potentials::zero(), g), p, 0.3), f);
  CHECK(std::equal(f.values().begin(), f.values().end(), f0.values().begin()));

  // forward then negated coefficient restores the field
  const PotentialSamples s = sample_potentials(potentials::rational_1d(), g);
  apply_pointwise(build_w_propagator(s, p, 0.3), f);
  apply_pointwise(build_w_propagator(s, p, -0.3), f);
  CHECK(l2_error(f, f0) < 1e-12 * l2_error(f0, SpinorField(g)));
  apply_symbol(build_t_propagator(g, p, 0.3), f);
  CHECK(std::abs(mass(f) - mass(f0)) < 1e-12 * mass(f0));
  apply_symbol(build_t_propagator(g, p, -0.3), f);
  CHECK(l2_error(f, f0) < 1e-12 * l2_error(f0, SpinorField(g)));

  const WhatPropagator wh = build_what_propagator(s, p, 0.2);
  SpinorField h = f0;
  apply_pointwise(wh.flow, h);
  apply_pointwise(wh.flow.adjoint(), h);
  CHECK(l2_error(h, f0) < 1e-12 * l2_error(f0, SpinorField(g)));

  // every built matrix is unitary
  double worst = 0.0;
  for (const Mat2& m : build_w_propagator(s, p, 0.37).matrices) worst = std::max(worst, unitarity_defect(m));
  for (const Mat2& m : wh.flow.matrices) worst = std::max(worst, unitarity_defect(m));
  for (const Mat2& m : build_t_propagator(g, p, 0.37).matrices) worst = std::max(worst, unitarity_defect(m));
  for (const Mat2& m : build_t_propagator(Grid::build(-3.0, 3.0, 16, 2), p, 0.37).matrices)
    worst = std::max(worst, unitarity_defect(m));
  CHECK(worst < 1e-12);
}

TEST_CASE("symbol propagator on a single mode") {
  const Grid g = Grid::build(-2.0, 3.0, 32);
  const PhysParams p{0.8, 1.1, 0.9};
  const double c = 0.45;
  Vec2 v;
  v << cplx(0.3, -0.2), cplx(1.0, 0.5);
  SpinorField f(g);
  const double mu = g.wavenumber_of_mode(1);
  for (std::size_t j = 0; j < g.size(); ++j) f.set(j, std::polar(1.0, mu * (g.node(static_cast<int>(j)) - g.a())) * v);
  apply_symbol(build_t_propagator(g, p, c), f);
  const oracle::MatX m = oracle::expm(c * t_generator(mu, 0.0, p));
  const Eigen::VectorXcd expect = m * Eigen::VectorXcd(v);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx ph = std::polar(1.0, mu * (g.node(static_cast<int>(j)) - g.a()));
    worst = std::max(worst, (Eigen::VectorXcd(f.at(j)) - ph * expect).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("2D potential flow rejects magnetic samples") {
  const Grid g = Grid::build(-kPi, kPi, 16, 2);
  const PhysParams p{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(build_w_propagator(sample_potentials(potentials::smooth_magnetic_2d(), g), p, 0.1),
                  std::invalid_argument);
  const PointwisePropagator h = build_w_propagator(sample_potentials(potentials::honeycomb_2d(), g), p, 0.1);
  CHECK(h.matrices.size() == g.size());
}

TEST_CASE("many small flows do not accumulate coherent rounding") {
  // 1e5 steps of size 1e-5 against one step of size 1: both flows are exact,
  // so the gap is rounding alone. Storing U instead of U - I, or sending the
  // whole field through the FFT pair, makes it grow linearly with the count.
  const Grid g = Grid::build(-8.0, 8.0, 128);
  const PhysParams p{1.0, 1.0, 1.0};
  const PotentialSamples s = sample_potentials(potentials::rational_1d(), g);
  const SpinorField f0 = initial::gaussian_pair(g);
  const int n = 100000;
  for (bool symbol : {false, true}) {
    SpinorField small = f0, large = f0;
    if (symbol) {
      const SymbolPropagator t = build_t_propagator(g, p, 1.0 / n);
      for (int k = 0; k < n; ++k) apply_symbol(t, small);
      apply_symbol(build_t_propagator(g, p, 1.0), large);
    } else {
      const PointwisePropagator w = build_w_propagator(s, p, 1.0 / n);
      for (int k = 0; k < n; ++k) apply_pointwise(w, small);
      apply_pointwise(build_w_propagator(s, p, 1.0), large);
    }
    CHECK(l2_error(small, large) < 1e-12);
  }
}
