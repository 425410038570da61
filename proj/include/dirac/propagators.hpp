#pragma once

#include <vector>

#include "dirac/grid.hpp"
#include "dirac/model.hpp"

namespace dirac {

/// Per-node 2x2 unitary, applied in physical space. `increments` holds
/// U - I, computed without cancellation; application uses it.
struct PointwisePropagator {
  Grid grid;
  std::vector<Mat2> matrices;
  std::vector<Mat2> increments;

  PointwisePropagator adjoint() const;
};

/// Per-mode 2x2 unitary, applied to Fourier coefficients. `matrices` is in
/// FFT order (flat FFT index, x2 fastest in 2D).
struct SymbolPropagator {
  Grid grid;
  std::vector<Mat2> matrices;
  std::vector<Mat2> increments;

  SymbolPropagator adjoint() const;
};

/// exp((2/3) tau What(x_j)) per node, What = W + (tau^2/48)[W,[T,W]].
struct WhatPropagator {
  double tau = 0.0;
  PointwisePropagator flow;
};

/// exp(c_tau W) with W = -(i/delta)(V - A_1 sigma_1) in 1D, or the scalar
/// phase exp(-i c_tau V/delta) in 2D. Throws std::invalid_argument for 2D
/// samples with a nonzero magnetic potential.
PointwisePropagator build_w_propagator(const PotentialSamples& samples, const PhysParams& params, double c_tau);

/// exp(c_tau Gamma_l), Gamma_l the Fourier symbol of
/// T = -(1/eps) sum_j sigma_j d_j - i nu/(delta eps^2) sigma_3.
SymbolPropagator build_t_propagator(const Grid& grid, const PhysParams& params, double c_tau);

/// exp(coefficient * tau * What). 1D only. With A_1 = 0 at a node the node
/// matrix is produced by the W code path, so A_1 = 0 everywhere gives a
/// result identical to build_w_propagator(samples, params, coefficient * tau).
WhatPropagator build_what_propagator(const PotentialSamples& samples, const PhysParams& params, double tau,
                                     double coefficient = 2.0 / 3.0);

/// Node matrix of exp(c_tau W) for 1D potentials V, A_1.
Mat2 w_node_matrix(double v, double a1, const PhysParams& params, double c_tau);
/// Mode matrix of exp(c_tau Gamma) for wavenumber mu (1D).
Mat2 t_mode_matrix_1d(double mu, const PhysParams& params, double c_tau);
/// Mode matrix of exp(c_tau Gamma) for wavenumbers (mu1, mu2) (2D).
Mat2 t_mode_matrix_2d(double mu1, double mu2, const PhysParams& params, double c_tau);
/// Node matrix of exp(c_tau What) for 1D potentials at step tau.
Mat2 what_node_matrix(double v, double a1, const PhysParams& params, double tau, double c_tau);

/// Eigen-frames used by the propagators, exposed for reconstruction checks.
/// W = -i P1 diag(lambda+, lambda-) P1^*, Gamma = -i Q diag(eta, -eta)/(delta eps^2) Q^*,
/// What = -i P2 diag(lambda2+, lambda2-) P2^*.
struct EigenFrame {
  Mat2 P;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
};
EigenFrame w_frame(double v, double a1, const PhysParams& params);
EigenFrame t_frame(double mu, const PhysParams& params);
EigenFrame what_frame(double v, double a1, const PhysParams& params, double tau);

void apply_pointwise(const PointwisePropagator& p, SpinorField& f);
void apply_symbol(const SymbolPropagator& p, SpinorField& f);

}  // namespace dirac
