#include "dirac/propagators.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace dirac {

namespace {

const cplx kI{0.0, 1.0};

// exp(-i theta) - 1 without cancellation
cplx expm1_i(double theta) {
  const double h = std::sin(0.5 * theta);
  return {-2.0 * h * h, -std::sin(theta)};
}

Mat2 assemble_increment(const EigenFrame& fr, double c_tau) {
  const cplx ep = expm1_i(c_tau * fr.lambda_plus);
  const cplx em = expm1_i(c_tau * fr.lambda_minus);
  return fr.P * Eigen::DiagonalMatrix<cplx, 2>(ep, em) * fr.P.adjoint();
}

std::vector<Mat2> adjoints(const std::vector<Mat2>& ms) {
  std::vector<Mat2> out(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) out[i] = ms[i].adjoint();
  return out;
}

std::vector<Mat2> add_identity(const std::vector<Mat2>& ds) {
  std::vector<Mat2> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) out[i] = ds[i] + Mat2::Identity();
  return out;
}

Mat2 w_node_increment(double v, double a1, const PhysParams& params, double c_tau) {
  // no magnetic part: a scalar phase
  if (a1 == 0.0) return expm1_i(c_tau * v / params.delta) * Mat2::Identity();
  return assemble_increment(w_frame(v, a1, params), c_tau);
}

Mat2 t_mode_increment_2d(double mu1, double mu2, const PhysParams& params, double c_tau) {
  const double h1 = mu1 / params.epsilon;
  const double h2 = mu2 / params.epsilon;
  const double h3 = params.nu / (params.delta * params.epsilon * params.epsilon);
  const double r = std::sqrt(h1 * h1 + h2 * h2 + h3 * h3);
  if (r < 1e-14 * std::max(1.0, h3)) return Mat2::Zero();
  const double hs = std::sin(0.5 * c_tau * r);
  const double c = -2.0 * hs * hs, s = std::sin(c_tau * r) / r;
  Mat2 m;
  // (cos(r c_tau) - 1) I - i sin(r c_tau) (h . sigma) / r
  m << cplx(c, -s * h3), cplx(-s * h2, -s * h1), cplx(s * h2, -s * h1), cplx(c, s * h3);
  return m;
}

Mat2 what_node_increment(double v, double a1, const PhysParams& params, double tau, double c_tau) {
  if (a1 == 0.0) return w_node_increment(v, 0.0, params, c_tau);
  return assemble_increment(what_frame(v, a1, params, tau), c_tau);
}

}  // namespace

PointwisePropagator PointwisePropagator::adjoint() const {
  return {grid, adjoints(matrices), adjoints(increments)};
}
SymbolPropagator SymbolPropagator::adjoint() const { return {grid, adjoints(matrices), adjoints(increments)}; }

EigenFrame w_frame(double v, double a1, const PhysParams& params) {
  const double s = 1.0 / std::sqrt(2.0);
  EigenFrame fr;
  fr.P << s, s, -s, s;
  fr.lambda_plus = (v + a1) / params.delta;
  fr.lambda_minus = (v - a1) / params.delta;
  return fr;
}

EigenFrame t_frame(double mu, const PhysParams& params) {
  const double de = params.delta * params.epsilon;
  const double eta = std::sqrt(params.nu * params.nu + de * de * mu * mu);
  EigenFrame fr;
  const double norm = eta * (eta + params.nu);
  if (norm < 1e-300) {
    fr.P = Mat2::Identity();
    return fr;
  }
  const double s = 1.0 / std::sqrt(2.0 * norm);
  fr.P << s * (eta + params.nu), -s * de * mu, s * de * mu, s * (eta + params.nu);
  const double scale = params.delta * params.epsilon * params.epsilon;
  fr.lambda_plus = eta / scale;
  fr.lambda_minus = -eta / scale;
  return fr;
}

EigenFrame what_frame(double v, double a1, const PhysParams& params, double tau) {
  const double d = params.delta, e = params.epsilon;
  const double d2e2 = d * d * e * e;
  const double beta1 = std::sqrt(144.0 * d2e2 * d2e2 + params.nu * params.nu * tau * tau * tau * tau * a1 * a1);
  const double beta2 = params.nu * tau * tau * a1;
  assert(beta1 > std::abs(beta2));
  const double s = 1.0 / std::sqrt(2.0 * beta1);
  const double p = std::sqrt(beta1 + beta2), q = std::sqrt(beta1 - beta2);
  EigenFrame fr;
  fr.P << s * p, s * q, -s * q, s * p;
  const double shift = a1 * beta1 / (12.0 * d * d2e2);
  fr.lambda_plus = v / d + shift;
  fr.lambda_minus = v / d - shift;
  return fr;
}

Mat2 w_node_matrix(double v, double a1, const PhysParams& params, double c_tau) {
  return w_node_increment(v, a1, params, c_tau) + Mat2::Identity();
}

Mat2 t_mode_matrix_1d(double mu, const PhysParams& params, double c_tau) {
  return assemble_increment(t_frame(mu, params), c_tau) + Mat2::Identity();
}

Mat2 t_mode_matrix_2d(double mu1, double mu2, const PhysParams& params, double c_tau) {
  return t_mode_increment_2d(mu1, mu2, params, c_tau) + Mat2::Identity();
}

Mat2 what_node_matrix(double v, double a1, const PhysParams& params, double tau, double c_tau) {
  return what_node_increment(v, a1, params, tau, c_tau) + Mat2::Identity();
}

PointwisePropagator build_w_propagator(const PotentialSamples& samples, const PhysParams& params, double c_tau) {
  params.validate();
  const Grid& g = samples.grid;
  if (g.dim() == 2 && samples.magnetic())
    throw std::invalid_argument(
        "2D time stepping supports only A = 0; magnetic 2D flows need a characteristics/NUFFT solver");
  std::vector<Mat2> d(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    d[j] = w_node_increment(samples.V[j], g.dim() == 1 ? samples.a(0, j) : 0.0, params, c_tau);
  return {g, add_identity(d), d};
}

SymbolPropagator build_t_propagator(const Grid& grid, const PhysParams& params, double c_tau) {
  params.validate();
  std::vector<Mat2> d(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    d[k] = grid.dim() == 1 ? assemble_increment(t_frame(axis_wavenumber(grid, k, 1), params), c_tau)
                           : t_mode_increment_2d(axis_wavenumber(grid, k, 1), axis_wavenumber(grid, k, 2), params,
                                                 c_tau);
  }
  return {grid, add_identity(d), d};
}

WhatPropagator build_what_propagator(const PotentialSamples& samples, const PhysParams& params, double tau,
                                     double coefficient) {
  params.validate();
  const Grid& g = samples.grid;
  if (g.dim() != 1) throw std::invalid_argument("the corrected What flow is implemented in 1D only");
  const double c_tau = coefficient * tau;
  std::vector<Mat2> d(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) d[j] = what_node_increment(samples.V[j], samples.a(0, j), params, tau, c_tau);
  return {tau, {g, add_identity(d), d}};
}

namespace {

// u <- u + D u with D = U - I: the rounding of the stored operator is then
// relative to the increment, so it does not build up coherently over many
// small steps.
inline void mul_block(const std::vector<Mat2>& ds, cplx* u0, cplx* u1, std::size_t n, double scale) {
  for (std::size_t j = 0; j < n; ++j) {
    const Mat2& d = ds[j];
    const cplx a = u0[j] * scale, b = u1[j] * scale;
    u0[j] = a + (d(0, 0) * a + d(0, 1) * b);
    u1[j] = b + (d(1, 0) * a + d(1, 1) * b);
  }
}

}  // namespace

void apply_pointwise(const PointwisePropagator& p, SpinorField& f) {
  if (!(p.grid == f.grid())) throw std::invalid_argument("apply_pointwise: grid mismatch");
  const std::size_t n = f.nodes();
  mul_block(p.increments, f.data(), f.data() + n, n, 1.0);
}

void apply_symbol(const SymbolPropagator& p, SpinorField& f) {
  if (!(p.grid == f.grid())) throw std::invalid_argument("apply_symbol: grid mismatch");
  const std::size_t n = f.nodes();
  // Only the increment (U - I) f passes through the transform pair, so the
  // fixed rounding of the FFT round trip scales with the step, not with f.
  thread_local AlignedBuffer work;
  work.assign(f.data(), f.data() + 2 * n);
  fft::forward(f.grid(), 2, work.data());
  const double scale = 1.0 / static_cast<double>(n);
  cplx* w0 = work.data();
  cplx* w1 = work.data() + n;
  for (std::size_t j = 0; j < n; ++j) {
    const Mat2& d = p.increments[j];
    const cplx a = w0[j] * scale, b = w1[j] * scale;
    w0[j] = d(0, 0) * a + d(0, 1) * b;
    w1[j] = d(1, 0) * a + d(1, 1) * b;
  }
  fft::backward(f.grid(), 2, work.data());
  cplx* u = f.data();
  for (std::size_t j = 0; j < 2 * n; ++j) u[j] += work[j];
}

}  // namespace dirac
