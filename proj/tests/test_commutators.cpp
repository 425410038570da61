#include "doctest.h"

#include <random>

#include "dirac/commutators.hpp"
#include "oracles.hpp"

using namespace dirac;

namespace {

const cplx I{0.0, 1.0};

/// Local Dirac data for the oracle from a LocalPotential.
oracle::LocalDirac local_dirac(const LocalPotential& w, const PhysParams& p, int d, int n) {
  oracle::LocalDirac L;
  L.d = d;
  L.n = n;
  L.eps = p.epsilon;
  L.delta = p.delta;
  L.nu = p.nu;
  for (int j = 0; j < 3; ++j) L.alpha[j] = n == 2 ? oracle::pauli(j + 1) : oracle::dirac_alpha(j + 1);
  L.beta = n == 2 ? oracle::pauli(3) : oracle::dirac_beta();
  const oracle::MatX Id = oracle::MatX::Identity(n, n);
  const int na = n == 2 ? std::min(d, 2) : d;  // two components carry at most sigma_1, sigma_2
  L.W.value = w.V * Id;
  for (int k = 0; k < na; ++k) L.W.value -= w.A[k] * L.alpha[k];
  L.W.value *= -I / p.delta;
  for (int m = 0; m < 3; ++m) {
    L.W.grad[m] = (m < d ? w.dV[m] : 0.0) * Id;
    for (int k = 0; k < na; ++k) L.W.grad[m] -= (m < d ? w.dA[k][m] : 0.0) * L.alpha[k];
    L.W.grad[m] *= -I / p.delta;
  }
  return L;
}

LocalPotential random_local(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  LocalPotential w;
  w.V = U(rng);
  for (int a = 0; a < d; ++a) {
    w.A[a] = U(rng);
    w.dV[a] = U(rng);
    for (int b = 0; b < d; ++b) w.dA[a][b] = U(rng);
  }
  return w;
}

Eigen::MatrixXcd symbol_of(const CommutatorCoefficients& c, const std::array<double, 3>& k) {
  Eigen::MatrixXcd m = c.F0;
  for (int j = 0; j < c.dim; ++j) m += c.F[j] * cplx(0.0, k[j]);
  return m;
}

template <int N>
BasicField<N> smooth_random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  BasicField<N> f(g);
  if (g.dim() == 1) {
    // Gaussian envelope times a random low-frequency modulation
    for (int c = 0; c < N; ++c) {
      const cplx a{n(rng), n(rng)}, b{n(rng), n(rng)};
      const double w = 1.0 + 0.5 * std::abs(n(rng)), k = n(rng), x0 = 0.3 * n(rng);
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(static_cast<int>(j));
        f(c, j) = (a + b * std::polar(1.0, k * x)) * std::exp(-w * (x - x0) * (x - x0));
      }
    }
  } else {
    // random trigonometric polynomial with |l| <= 3 on the torus
    for (int c = 0; c < N; ++c)
      for (int l1 = -3; l1 <= 3; ++l1)
        for (int l2 = -3; l2 <= 3; ++l2) {
          const cplx a{n(rng), n(rng)};
          for (std::size_t j = 0; j < g.size(); ++j) {
            const Point x = node_point(g, j);
            f(c, j) += a * std::polar(1.0, l1 * x[0] + l2 * x[1]);
          }
        }
  }
  return f;
}

template <int N>
double relative_gap(BasicField<N> a, const BasicField<N>& b) {
  const double nb = field_norm<N>(b);
  a -= b;
  return field_norm<N>(a) / nb;
}

}  // namespace

TEST_CASE("closed-form coefficients at single points") {
  const PhysParams unit{1.0, 1.0, 1.0};
  LocalPotential w;
  w.A[0] = 1.0;
  const auto c1 = commutator_coefficients(w, unit, 1, Representation::TwoComponent);
  CHECK((c1.F0 - Eigen::MatrixXcd(-4.0 * I * matrices::sigma(3))).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(c1.F[0].cwiseAbs().maxCoeff() < 1e-15);

  const auto c2 = commutator_coefficients(w, unit, 2, Representation::TwoComponent);
  CHECK(c2.F[0].cwiseAbs().maxCoeff() < 1e-15);
  CHECK((c2.F[1] - Eigen::MatrixXcd(-4.0 * matrices::sigma(2))).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((c2.F0 - Eigen::MatrixXcd(-4.0 * I * matrices::sigma(3))).cwiseAbs().maxCoeff() < 1e-15);

  const auto z = commutator_coefficients(LocalPotential{}, unit, 2, Representation::FourComponent);
  CHECK(z.F0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.F[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.F[1].cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(commutator_coefficients(w, unit, 3, Representation::TwoComponent), std::invalid_argument);
  CHECK_THROWS_AS(commutator_coefficients(w, unit, 4, Representation::FourComponent), std::invalid_argument);
}

TEST_CASE("closed forms match the product-rule oracle symbol") {
  const PhysParams p{0.7, 0.9, 1.3};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  struct Case {
    int d;
    Representation rep;
  };
  for (Case c : {Case{1, Representation::TwoComponent}, Case{1, Representation::FourComponent},
                 Case{2, Representation::TwoComponent}, Case{2, Representation::FourComponent},
                 Case{3, Representation::FourComponent}}) {
    CAPTURE(c.d);
    CAPTURE(static_cast<int>(c.rep));
    double worst = 0.0, worst_lib = 0.0;
    for (int i = 0; i < 100; ++i) {
      const LocalPotential w = random_local(rng, c.d);
      const std::array<double, 3> k{U(rng), c.d > 1 ? U(rng) : 0.0, c.d > 2 ? U(rng) : 0.0};
      const Eigen::MatrixXcd closed = symbol_of(commutator_coefficients(w, p, c.d, c.rep), k);
      const oracle::MatX ref = oracle::double_commutator_symbol(local_dirac(w, p, c.d, static_cast<int>(c.rep)), k);
      worst = std::max(worst, (closed - ref).cwiseAbs().maxCoeff());
      worst_lib = std::max(worst_lib, (commutator_symbol_brute_force(w, p, c.d, c.rep, k) - ref).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
    CHECK(worst_lib < 1e-12);
  }
}

TEST_CASE("abbreviated zero-order form agrees only for constant A") {
  const PhysParams p{0.7, 0.9, 1.3};
  std::mt19937_64 rng(77);
  for (Representation rep : {Representation::TwoComponent, Representation::FourComponent}) {
    LocalPotential w = random_local(rng, 2);
    LocalPotential flat = w;
    flat.dA = {};
    const auto e = commutator_coefficients(flat, p, 2, rep, CommutatorForm::Expanded);
    const auto a = commutator_coefficients(flat, p, 2, rep, CommutatorForm::Abbreviated);
    CHECK((e.F0 - a.F0).cwiseAbs().maxCoeff() < 1e-14);

    // A = (1, 0) with d1 A2 = 1: the expansion gives (2/(delta^2 eps)) sigma_2 (or alpha_2)
    LocalPotential s;
    s.A[0] = 1.0;
    s.dA[1][0] = 1.0;
    const auto se = commutator_coefficients(s, p, 2, rep, CommutatorForm::Expanded);
    const auto sa = commutator_coefficients(s, p, 2, rep, CommutatorForm::Abbreviated);
    CHECK((se.F0 - sa.F0).cwiseAbs().maxCoeff() > 0.1);
    const oracle::MatX ref = oracle::double_commutator_symbol(local_dirac(s, p, 2, static_cast<int>(rep)), {0.0, 0.0, 0.0});
    CHECK((se.F0 - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
  // 3D constant A with a nonzero curl-free field: both agree
  LocalPotential c3 = random_local(rng, 3);
  c3.dA = {};
  CHECK((commutator_coefficients(c3, p, 3, Representation::FourComponent, CommutatorForm::Expanded).F0 -
         commutator_coefficients(c3, p, 3, Representation::FourComponent, CommutatorForm::Abbreviated).F0)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("field-level closed form against spectral brute force, 1D") {
  const PhysParams p{0.7, 0.9, 1.3};
  const Grid g = Grid::build(-6.0, 6.0, 128);
  const PotentialSamples s = sample_potentials(potentials::rational_1d(), g, true);
  const auto cf2 = closed_form_commutator<2>(s, p);
  const auto cf4 = closed_form_commutator<4>(s, p);
  double worst = 0.0;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const BasicField<2> f = smooth_random_field<2>(g, seed);
    worst = std::max(worst, relative_gap<2>(apply_commutator<2>(cf2, f), brute_force_commutator<2>(s, p, f)));
    const BasicField<4> h = smooth_random_field<4>(g, 100 + seed);
    worst = std::max(worst, relative_gap<4>(apply_commutator<4>(cf4, h), brute_force_commutator<4>(s, p, h)));
  }
  CHECK(worst < 1e-8);

  // 1D is independent of V
  PotentialSpec no_v = potentials::rational_1d();
  no_v.V = {};
  no_v.dV = {};
  const auto cfa = closed_form_commutator<2>(sample_potentials(no_v, g, true), p);
  const BasicField<2> f = smooth_random_field<2>(g, 5);
  CHECK(relative_gap<2>(apply_commutator<2>(cf2, f), apply_commutator<2>(cfa, f)) < 1e-14);

  // constant field, A1 = 1, unit parameters: (-4i, 0) everywhere
  const PhysParams unit{1.0, 1.0, 1.0};
  const PotentialSamples one = sample_potentials(potentials::constant(0.3, {1.0}), g, true);
  SpinorField e(g);
  for (std::size_t j = 0; j < g.size(); ++j) e(0, j) = 1.0;
  const SpinorField r = apply_commutator<2>(closed_form_commutator<2>(one, unit), e);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(r(0, j) - cplx(0.0, -4.0)) < 1e-14);
    CHECK(std::abs(r(1, j)) < 1e-14);
  }
  CHECK(field_norm<2>(apply_commutator<2>(cf2, SpinorField(g))) == 0.0);
}

TEST_CASE("field-level closed form against spectral brute force, 2D") {
  const PhysParams p{0.7, 0.9, 1.3};
  const Grid g = Grid::build(-kPi, kPi, 32, 2);
  const PotentialSamples s = sample_potentials(potentials::smooth_magnetic_2d(), g, true);
  const auto cf2 = closed_form_commutator<2>(s, p);
  const auto cf4 = closed_form_commutator<4>(s, p);
  const auto ab2 = closed_form_commutator<2>(s, p, CommutatorForm::Abbreviated);
  double worst = 0.0, abbreviated = 1.0;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const BasicField<2> f = smooth_random_field<2>(g, seed);
    const BasicField<2> b = brute_force_commutator<2>(s, p, f);
    worst = std::max(worst, relative_gap<2>(apply_commutator<2>(cf2, f), b));
    abbreviated = std::min(abbreviated, relative_gap<2>(apply_commutator<2>(ab2, f), b));
    const BasicField<4> h = smooth_random_field<4>(g, 100 + seed);
    worst = std::max(worst, relative_gap<4>(apply_commutator<4>(cf4, h), brute_force_commutator<4>(s, p, h)));
  }
  CHECK(worst < 1e-10);
  CHECK(abbreviated > 1e-3);

  CHECK_THROWS_AS(closed_form_commutator<2>(sample_potentials(potentials::smooth_magnetic_2d(), g), p),
                  std::invalid_argument);
}

TEST_CASE("no magnetic potential: the double commutator vanishes") {
  const PhysParams p{0.7, 0.9, 1.3};
  const Grid g1 = Grid::build(-6.0, 6.0, 128);
  PotentialSpec v1 = potentials::rational_1d();
  v1.A = {};
  v1.dA = {};
  const PotentialSamples s1 = sample_potentials(v1, g1, true);
  const BasicField<2> f1 = smooth_random_field<2>(g1, 3);
  CHECK(field_norm<2>(brute_force_commutator<2>(s1, p, f1)) < 1e-9 * field_norm<2>(f1));
  CHECK(field_norm<2>(apply_commutator<2>(closed_form_commutator<2>(s1, p), f1)) == 0.0);

  // The lattice potential is not periodic on a square box, so the test
  // field is localized to keep every product smooth on the torus.
  const Grid g2 = Grid::build(-10.0, 10.0, 256, 2);
  const PotentialSamples s2 = sample_potentials(potentials::honeycomb_2d(), g2, true);
  BasicField<2> f2(g2);
  for (std::size_t j = 0; j < g2.size(); ++j) {
    const Point x = node_point(g2, j);
    f2(0, j) = std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0);
    f2(1, j) = std::exp(-((x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1]) / 2.0) * std::polar(1.0, x[1]);
  }
  CHECK(field_norm<2>(brute_force_commutator<2>(s2, p, f2)) < 1e-9 * field_norm<2>(f2));
  CHECK(field_norm<2>(apply_commutator<2>(closed_form_commutator<2>(s2, p), f2)) == 0.0);
}

TEST_CASE("linearity in the kinetic operator") {
  const PhysParams p{0.7, 0.9, 1.3};
  const Grid g = Grid::build(-6.0, 6.0, 128);
  const PotentialSamples s = sample_potentials(potentials::rational_1d(), g, true);
  const BasicField<2> f = smooth_random_field<2>(g, 8);

  // derivative part alone vanishes in 1D
  const LinearityReport d = verify_commutator_linearity<2>(s, p, f, 1.0, 0.0);
  CHECK(d.norm_combined < 1e-9 * field_norm<2>(f));

  // mass part alone is -(i nu/(delta eps^2)) (4/delta^2) A1^2 sigma_3 f
  const BasicField<2> m = brute_force_commutator<2>(s, p, f, 0.0, 1.0);
  SpinorField expect(g);
  const double c = p.nu / (p.delta * p.epsilon * p.epsilon) * 4.0 / (p.delta * p.delta);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double a = s.a(0, j);
    expect(0, j) = -I * c * a * a * f(0, j);
    expect(1, j) = I * c * a * a * f(1, j);
  }
  CHECK(relative_gap<2>(m, expect) < 1e-10);

  const LinearityReport both = verify_commutator_linearity<2>(s, p, f, 1.0, 1.0);
  CHECK(both.residual < 1e-10);
  CHECK(both.norm_combined == doctest::Approx(both.norm_mass_part).epsilon(1e-8));
  const LinearityReport scaled = verify_commutator_linearity<2>(s, p, f, 0.3, -1.7);
  CHECK(scaled.residual < 1e-10);
}

TEST_CASE("brute-force discretization error shrinks with the grid") {
  const PhysParams p{0.7, 0.9, 1.3};
  std::vector<double> gaps;
  for (int M : {32, 64, 128}) {
    const Grid g = Grid::build(-6.0, 6.0, M);
    const PotentialSamples s = sample_potentials(potentials::rational_1d(), g, true);
    SpinorField f(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.node(static_cast<int>(j));
      f(0, j) = std::exp(-x * x);
      f(1, j) = std::exp(-(x - 0.5) * (x - 0.5)) * std::polar(1.0, x);
    }
    gaps.push_back(relative_gap<2>(apply_commutator<2>(closed_form_commutator<2>(s, p), f), brute_force_commutator<2>(s, p, f)));
  }
  CHECK(gaps[1] < 0.1 * gaps[0]);
  CHECK(gaps[2] < gaps[1]);
  CHECK(gaps[2] < 1e-8);
}
