#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirac/grid.hpp"

namespace dirac {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;

/// Dimensionless parameters: epsilon (wave speed / light speed), delta
/// (scaled Planck constant) and nu (mass ratio).
///
/// nu = 0 is accepted and gives the massless (Weyl) limit.
struct PhysParams {
  double epsilon = 1.0;
  double delta = 1.0;
  double nu = 1.0;

  /// Throws std::invalid_argument unless epsilon > 0, delta > 0, nu >= 0.
  void validate() const;
  bool operator==(const PhysParams&) const = default;
};

/// Pauli and Dirac matrices. Entries are exactly 0, +-1, +-i.
namespace matrices {

Mat2 identity2();
/// sigma_j, j = 1, 2, 3.
Mat2 sigma(int j);
Mat4 identity4();
/// alpha_j = [[0, sigma_j], [sigma_j, 0]], j = 1, 2, 3.
Mat4 alpha(int j);
Mat4 beta();
Mat4 gamma();

}  // namespace matrices

/// The matrices entering T and W for an N-component model: alpha_j / beta
/// for N = 4 and sigma_j / sigma_3 for N = 2.
template <int N>
struct Algebra;

template <>
struct Algebra<2> {
  using Matrix = Mat2;
  static Matrix identity() { return matrices::identity2(); }
  static Matrix alpha(int j) { return matrices::sigma(j); }
  static Matrix beta() { return matrices::sigma(3); }
};

template <>
struct Algebra<4> {
  using Matrix = Mat4;
  static Matrix identity() { return matrices::identity4(); }
  static Matrix alpha(int j) { return matrices::alpha(j); }
  static Matrix beta() { return matrices::beta(); }
};

using Point = std::array<double, 3>;
using ScalarFn = std::function<double(const Point&)>;

/// Electric potential V and magnetic potentials A_1..A_3 as functions of
/// position, with optional analytic first partials. Empty A_k means A_k = 0.
struct PotentialSpec {
  std::string name = "zero";
  ScalarFn V;
  std::array<ScalarFn, 3> A;
  /// dV[m] = d V / d x_{m+1}
  std::array<ScalarFn, 3> dV;
  /// dA[k][m] = d A_{k+1} / d x_{m+1}
  std::array<std::array<ScalarFn, 3>, 3> dA;

  bool has_magnetic() const { return A[0] || A[1] || A[2]; }
};

namespace potentials {

/// V = 0, A = 0.
PotentialSpec zero();
/// Constant V0 and A0 (components beyond the vector's size are zero).
PotentialSpec constant(double v0, std::vector<double> a0 = {});
/// V(x) = (1 - x) / (1 + x^2), A_1(x) = (x + 1)^2 / (1 + x^2).
PotentialSpec rational_1d();
/// V(x) = sum_k cos(4 pi / sqrt(3) e_k . x) on the honeycomb directions
/// e_1 = (-1, 0), e_2 = (1/2, sqrt(3)/2), e_3 = (1/2, -sqrt(3)/2); A = 0.
PotentialSpec honeycomb_2d();
/// Smooth trigonometric V, A_1, A_2 with analytic partials. Used to
/// exercise the magnetic 2D commutator.
PotentialSpec smooth_magnetic_2d();

/// Look up a preset by name: "paper-1d", "honeycomb-2d", "zero",
/// "constant" (uses v0/a0), "smooth-magnetic-2d".
PotentialSpec by_name(const std::string& name, double v0 = 0.0, std::vector<double> a0 = {});

}  // namespace potentials

/// Potentials sampled at the grid nodes.
///
/// A[k] is empty when A_{k+1} is identically zero. Derivative arrays are
/// filled only when requested.
struct PotentialSamples {
  Grid grid;
  std::vector<double> V;
  std::array<std::vector<double>, 3> A;
  bool has_derivatives = false;
  std::array<std::vector<double>, 3> dV;
  std::array<std::array<std::vector<double>, 3>, 3> dA;

  /// True if any sampled A_k is nonzero at some node.
  bool magnetic() const;
  double a(int k, std::size_t j) const { return A[k].empty() ? 0.0 : A[k][j]; }
  double da(int k, int m, std::size_t j) const { return dA[k][m].empty() ? 0.0 : dA[k][m][j]; }
  double dv(int m, std::size_t j) const { return dV[m].empty() ? 0.0 : dV[m][j]; }
};

/// Evaluate the potentials at every node. With `with_derivatives`, partials
/// come from the analytic functions when present, otherwise from spectral
/// differentiation of the samples. Throws std::domain_error naming the node
/// on any non-finite sample.
PotentialSamples sample_potentials(const PotentialSpec& spec, const Grid& grid, bool with_derivatives = false);

/// Coordinates of flat node index j.
Point node_point(const Grid& grid, std::size_t j);

enum class Branch { Plus, Minus };

/// Frequency omega(k) = V0 +- (1/eps^2) sqrt(nu^2 + eps^2 |delta k - eps A0|^2).
double dispersion(const std::vector<double>& k, double v0, const std::vector<double>& a0, const PhysParams& p,
                  Branch branch);

/// Unit eigenvector of sum_j (delta k_j / eps - A0_j) sigma_j + (nu/eps^2) sigma_3 + V0 I
/// for the chosen branch, first nonzero component real positive.
Vec2 plane_wave_amplitude(const std::vector<double>& k, double v0, const std::vector<double>& a0,
                          const PhysParams& p, Branch branch);

/// Exact plane wave B exp(i (k.x - omega t / delta)) for constant potentials.
/// `modes` are the integer mode numbers l (one per dimension) so k = mu_l
/// and the sampled wave is exactly periodic.
SpinorField plane_wave_solution(const std::vector<int>& modes, double v0, const std::vector<double>& a0,
                                const PhysParams& p, Branch branch, double t, const Grid& grid);

/// Multiply by the global phase exp(-i V0 t / delta): the effect of
/// shifting V by the constant V0.
SpinorField gauge_shift_reference(const SpinorField& f, double v0, double t, const PhysParams& p);

/// Initial data presets.
namespace initial {

/// phi_1 = exp(-|x|^2/2), phi_2 = exp(-|x - e_1|^2/2) (1D or 2D).
SpinorField gaussian_pair(const Grid& grid);
/// WKB data with S0(x) = (1 + cos(2 pi x)) / 40 and amplitude exp(-4 x^2).
SpinorField wkb(const Grid& grid, const PhysParams& p);
/// Look up by name: "gaussian", "wkb", "plane-wave" (mode/branch/constant potential).
SpinorField by_name(const std::string& name, const Grid& grid, const PhysParams& p, int mode = 1,
                    Branch branch = Branch::Plus, double v0 = 0.0, const std::vector<double>& a0 = {});

}  // namespace initial

}  // namespace dirac
