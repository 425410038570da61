#include "dirac/commutators.hpp"

#include <stdexcept>

namespace dirac {

namespace {

using MatX = Eigen::MatrixXcd;
const cplx kI{0.0, 1.0};

struct Basis {
  int n;
  MatX id, beta, gamma;
  std::array<MatX, 3> alpha;
};

Basis basis(Representation rep) {
  Basis b;
  if (rep == Representation::TwoComponent) {
    b.n = 2;
    b.id = matrices::identity2();
    b.beta = matrices::sigma(3);
    for (int j = 0; j < 3; ++j) b.alpha[j] = matrices::sigma(j + 1);
  } else {
    b.n = 4;
    b.id = matrices::identity4();
    b.beta = matrices::beta();
    b.gamma = matrices::gamma();
    for (int j = 0; j < 3; ++j) b.alpha[j] = matrices::alpha(j + 1);
  }
  return b;
}

void check_dim(int d, Representation rep) {
  if (d < 1 || d > 3) throw std::invalid_argument("commutator: dimension must be 1, 2 or 3");
  if (d == 3 && rep != Representation::FourComponent)
    throw std::invalid_argument("commutator: the 3D closed form needs the four-component representation");
}

}  // namespace

LocalPotential LocalPotential::at(const PotentialSamples& s, std::size_t j) {
  LocalPotential w;
  w.V = s.V[j];
  for (int k = 0; k < 3; ++k) w.A[k] = s.a(k, j);
  if (s.has_derivatives) {
    for (int m = 0; m < 3; ++m) {
      w.dV[m] = s.dv(m, j);
      for (int k = 0; k < 3; ++k) w.dA[k][m] = s.da(k, m, j);
    }
  }
  return w;
}

LocalPotential LocalPotential::evaluate(const PotentialSpec& spec, const Point& x) {
  LocalPotential w;
  w.V = spec.V ? spec.V(x) : 0.0;
  for (int k = 0; k < 3; ++k) {
    w.A[k] = spec.A[k] ? spec.A[k](x) : 0.0;
    w.dV[k] = spec.dV[k] ? spec.dV[k](x) : 0.0;
    for (int m = 0; m < 3; ++m) w.dA[k][m] = spec.dA[k][m] ? spec.dA[k][m](x) : 0.0;
  }
  return w;
}

CommutatorCoefficients commutator_coefficients(const LocalPotential& w, const PhysParams& p, int d,
                                               Representation rep, CommutatorForm form) {
  check_dim(d, rep);
  const Basis b = basis(rep);
  const double de = p.delta, ep = p.epsilon;
  const double c = 4.0 / (de * de * ep);
  const double cm = 4.0 * p.nu / (de * de * de * ep * ep);
  const auto& A = w.A;
  const auto& dA = w.dA;
  const auto& dV = w.dV;

  CommutatorCoefficients out;
  out.dim = d;
  const MatX zero = MatX::Zero(b.n, b.n);
  out.F = {zero, zero, zero};

  if (d == 1) {
    out.F0 = -kI * cm * A[0] * A[0] * b.beta;
    return out;
  }

  if (d == 2) {
    out.F[0] = c * (-A[1] * A[1] * b.alpha[0] + A[0] * A[1] * b.alpha[1]);
    out.F[1] = c * (A[0] * A[1] * b.alpha[0] - A[0] * A[0] * b.alpha[1]);
    double s1 = A[0] * dA[1][1] - A[1] * dA[1][0];
    double s2 = A[1] * dA[0][0] - A[0] * dA[0][1];
    if (form == CommutatorForm::Expanded) {
      s1 += 0.5 * (A[1] * dA[0][1] - A[0] * dA[1][1]);
      s2 += 0.5 * (A[0] * dA[1][0] - A[1] * dA[0][0]);
    }
    const double sv = A[1] * dV[0] - A[0] * dV[1];
    const double sm = A[0] * A[0] + A[1] * A[1];
    out.F0 = c * s1 * b.alpha[0] + c * s2 * b.alpha[1] - kI * cm * sm * b.beta;
    // gamma alpha_3 reduces to sigma_3 for two components
    out.F0 += kI * c * sv * (rep == Representation::TwoComponent ? b.beta : MatX(b.gamma * b.alpha[2]));
    return out;
  }

  const double a1 = A[0], a2 = A[1], a3 = A[2];
  out.F[0] = c * (-(a2 * a2 + a3 * a3) * b.alpha[0] + a1 * a2 * b.alpha[1] + a1 * a3 * b.alpha[2]);
  out.F[1] = c * (a2 * a1 * b.alpha[0] - (a1 * a1 + a3 * a3) * b.alpha[1] + a2 * a3 * b.alpha[2]);
  out.F[2] = c * (a3 * a1 * b.alpha[0] + a3 * a2 * b.alpha[1] - (a1 * a1 + a2 * a2) * b.alpha[2]);

  std::array<double, 3> s{a1 * (dA[1][1] + dA[2][2]) - a2 * dA[1][0] - a3 * dA[2][0],
                          a2 * (dA[0][0] + dA[2][2]) - a1 * dA[0][1] - a3 * dA[2][1],
                          a3 * (dA[0][0] + dA[1][1]) - a1 * dA[0][2] - a2 * dA[1][2]};
  double curl = a1 * (dA[2][1] - dA[1][2]) + a2 * (dA[0][2] - dA[2][0]) + a3 * (dA[1][0] - dA[0][1]);
  if (form == CommutatorForm::Expanded) {
    // (1/2)(A.grad)A_m + (1/2)(div A)A_m - A.d_m A, and half the helicity term
    const double div = dA[0][0] + dA[1][1] + dA[2][2];
    for (int m = 0; m < 3; ++m) {
      double adv = 0.0, grad = 0.0;
      for (int j = 0; j < 3; ++j) {
        adv += A[j] * dA[m][j];
        grad += A[j] * dA[j][m];
      }
      s[m] = 0.5 * adv + 0.5 * div * A[m] - grad;
    }
    curl *= 0.5;
  }
  const double s1 = s[0], s2 = s[1], s3 = s[2];
  const double g1 = a3 * dV[1] - a2 * dV[2];
  const double g2 = a1 * dV[2] - a3 * dV[0];
  const double g3 = a2 * dV[0] - a1 * dV[1];
  const double sm = a1 * a1 + a2 * a2 + a3 * a3;
  out.F0 = c * (s1 * b.alpha[0] + s2 * b.alpha[1] + s3 * b.alpha[2]) + kI * c * curl * b.gamma +
           kI * c * (g1 * b.gamma * b.alpha[0] + g2 * b.gamma * b.alpha[1] + g3 * b.gamma * b.alpha[2]) -
           kI * cm * sm * b.beta;
  return out;
}

Eigen::MatrixXcd commutator_symbol_brute_force(const LocalPotential& w, const PhysParams& p, int d,
                                               Representation rep, const std::array<double, 3>& k) {
  check_dim(d, rep);
  const Basis b = basis(rep);
  const cplx wi = -kI / p.delta;
  // W(x) and its partials d_m W
  MatX W = wi * w.V * b.id;
  std::array<MatX, 3> dW;
  for (int m = 0; m < d; ++m) dW[m] = wi * w.dV[m] * b.id;
  for (int j = 0; j < d; ++j) {
    W -= wi * w.A[j] * b.alpha[j];
    for (int m = 0; m < d; ++m) dW[m] -= wi * w.dA[j][m] * b.alpha[j];
  }
  MatX S = -kI * (p.nu / (p.delta * p.epsilon * p.epsilon)) * b.beta;
  for (int j = 0; j < d; ++j) S -= (kI * k[j] / p.epsilon) * b.alpha[j];

  // T (M(x) e^{ik.x}) = (S M - (1/eps) sum_j alpha_j d_j M) e^{ik.x}
  auto t_of = [&](const MatX& M, const std::array<MatX, 3>& dM) {
    MatX r = S * M;
    for (int j = 0; j < d; ++j) r -= (1.0 / p.epsilon) * b.alpha[j] * dM[j];
    return r;
  };
  std::array<MatX, 3> dWW;
  for (int m = 0; m < d; ++m) dWW[m] = dW[m] * W + W * dW[m];
  const MatX WW = W * W;
  return 2.0 * W * t_of(W, dW) - WW * S - t_of(WW, dWW);
}

template <int N>
CommutatorClosedForm<N> closed_form_commutator(const PotentialSamples& samples, const PhysParams& params,
                                               CommutatorForm form) {
  params.validate();
  const Grid& g = samples.grid;
  const int d = g.dim();
  if (d >= 2 && !samples.has_derivatives)
    throw std::invalid_argument("closed_form_commutator: 2D closed form needs potential derivative samples");
  const Representation rep = N == 2 ? Representation::TwoComponent : Representation::FourComponent;
  CommutatorClosedForm<N> cf;
  cf.grid = g;
  cf.dim = d;
  cf.F0.resize(g.size());
  for (int m = 0; m < d; ++m) cf.F[m].resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const CommutatorCoefficients c = commutator_coefficients(LocalPotential::at(samples, j), params, d, rep, form);
    cf.F0[j] = c.F0;
    for (int m = 0; m < d; ++m) cf.F[m][j] = c.F[m];
  }
  return cf;
}

template <int N>
BasicField<N> apply_commutator(const CommutatorClosedForm<N>& cf, const BasicField<N>& f) {
  if (!(cf.grid == f.grid())) throw std::invalid_argument("apply_commutator: grid mismatch");
  BasicField<N> out(f.grid());
  std::array<BasicField<N>, 2> df;
  for (int m = 0; m < cf.dim; ++m) df[m] = spectral_derivative(f, m + 1);
  for (std::size_t j = 0; j < f.nodes(); ++j) {
    typename BasicField<N>::Spinor v = cf.F0[j] * f.at(j);
    for (int m = 0; m < cf.dim; ++m) v += cf.F[m][j] * df[m].at(j);
    out.set(j, v);
  }
  return out;
}

namespace {

template <int N>
struct FieldOps {
  using Matrix = typename Algebra<N>::Matrix;
  const PotentialSamples& s;
  const PhysParams& p;
  double a1, a2;

  BasicField<N> W(const BasicField<N>& f) const {
    BasicField<N> out(f.grid());
    const int d = f.grid().dim();
    for (std::size_t j = 0; j < f.nodes(); ++j) {
      Matrix m = s.V[j] * Algebra<N>::identity();
      for (int k = 0; k < d; ++k) m -= s.a(k, j) * Algebra<N>::alpha(k + 1);
      out.set(j, (-kI / p.delta) * (m * f.at(j)));
    }
    return out;
  }

  BasicField<N> T(const BasicField<N>& f) const {
    BasicField<N> out(f.grid());
    const int d = f.grid().dim();
    const cplx mass = -kI * p.nu / (p.delta * p.epsilon * p.epsilon);
    if (a2 != 0.0) {
      const Matrix b = Algebra<N>::beta();
      for (std::size_t j = 0; j < f.nodes(); ++j) out.set(j, (a2 * mass) * (b * f.at(j)));
    }
    if (a1 != 0.0) {
      for (int k = 0; k < d; ++k) {
        const BasicField<N> df = spectral_derivative(f, k + 1);
        const Matrix al = Algebra<N>::alpha(k + 1);
        for (std::size_t j = 0; j < f.nodes(); ++j)
          out.set(j, out.at(j) - (a1 / p.epsilon) * (al * df.at(j)));
      }
    }
    return out;
  }
};

}  // namespace

template <int N>
BasicField<N> brute_force_commutator(const PotentialSamples& samples, const PhysParams& params,
                                     const BasicField<N>& f, double a1, double a2) {
  if (!(samples.grid == f.grid())) throw std::invalid_argument("brute_force_commutator: grid mismatch");
  const FieldOps<N> ops{samples, params, a1, a2};
  const BasicField<N> wf = ops.W(f);
  const BasicField<N> wtw = ops.W(ops.T(wf));
  const BasicField<N> wwt = ops.W(ops.W(ops.T(f)));
  const BasicField<N> tww = ops.T(ops.W(wf));
  BasicField<N> out = cplx(2.0) * wtw;
  out -= wwt;
  out -= tww;
  return out;
}

template <int N>
LinearityReport verify_commutator_linearity(const PotentialSamples& samples, const PhysParams& params,
                                            const BasicField<N>& f, double a1, double a2) {
  const BasicField<N> d = brute_force_commutator(samples, params, f, 1.0, 0.0);
  const BasicField<N> m = brute_force_commutator(samples, params, f, 0.0, 1.0);
  const BasicField<N> c = brute_force_commutator(samples, params, f, a1, a2);
  BasicField<N> r = c;
  r -= cplx(a1) * d;
  r -= cplx(a2) * m;
  LinearityReport rep;
  rep.a1 = a1;
  rep.a2 = a2;
  rep.norm_derivative_part = field_norm(d);
  rep.norm_mass_part = field_norm(m);
  rep.norm_combined = field_norm(c);
  rep.residual = field_norm(r) / std::max(rep.norm_combined, 1e-300);
  return rep;
}

template CommutatorClosedForm<2> closed_form_commutator<2>(const PotentialSamples&, const PhysParams&, CommutatorForm);
template CommutatorClosedForm<4> closed_form_commutator<4>(const PotentialSamples&, const PhysParams&, CommutatorForm);
template BasicField<2> apply_commutator<2>(const CommutatorClosedForm<2>&, const BasicField<2>&);
template BasicField<4> apply_commutator<4>(const CommutatorClosedForm<4>&, const BasicField<4>&);
template BasicField<2> brute_force_commutator<2>(const PotentialSamples&, const PhysParams&, const BasicField<2>&,
                                                 double, double);
template BasicField<4> brute_force_commutator<4>(const PotentialSamples&, const PhysParams&, const BasicField<4>&,
                                                 double, double);
template LinearityReport verify_commutator_linearity<2>(const PotentialSamples&, const PhysParams&,
                                                        const BasicField<2>&, double, double);
template LinearityReport verify_commutator_linearity<4>(const PotentialSamples&, const PhysParams&,
                                                        const BasicField<4>&, double, double);

}  // namespace dirac
