#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "dirac/grid.hpp"
#include "dirac/model.hpp"

namespace dirac {

enum class Representation { TwoComponent = 2, FourComponent = 4 };

/// Potential values and first partials at one point. Index conventions
/// follow PotentialSpec: dA[k][m] = d A_{k+1} / d x_{m+1}.
struct LocalPotential {
  double V = 0.0;
  std::array<double, 3> A{};
  std::array<double, 3> dV{};
  std::array<std::array<double, 3>, 3> dA{};

  static LocalPotential at(const PotentialSamples& s, std::size_t j);
  static LocalPotential evaluate(const PotentialSpec& spec, const Point& x);
};

/// [W,[T,W]] = F0(x) + sum_j F_j(x) d_j at one point.
struct CommutatorCoefficients {
  int dim = 1;
  Eigen::MatrixXcd F0;
  std::array<Eigen::MatrixXcd, 3> F;  // F[j] multiplies d_{j+1}; only the first `dim` are set
};

/// Zero-order coefficient variant in 2D and 3D.
///
/// Expanded is the product-rule expansion of 2WTW - WWT - TWW and is exact.
/// Abbreviated takes A_1 (d_2 A_2 + d_3 A_3) - A_2 d_1 A_2 - A_3 d_1 A_3
/// (and cyclic) as the alpha_j coefficients and the full helicity A.curl A
/// for gamma; it agrees with the expansion only when the remaining
/// gradient terms vanish, e.g. for constant A. The d_j coefficients, the
/// grad V terms and the mass term are the same in both.
enum class CommutatorForm { Expanded, Abbreviated };

/// Closed forms: d = 1 and 2 in either representation, d = 3 with four
/// components only. Throws std::invalid_argument otherwise.
CommutatorCoefficients commutator_coefficients(const LocalPotential& w, const PhysParams& params, int d,
                                               Representation rep,
                                               CommutatorForm form = CommutatorForm::Expanded);

/// Symbol-level evaluation of 2WTW - WWT - TWW acting on exp(i k.x) v at a
/// point, expanded with the product rule (needs W and its first partials).
/// Returned as the matrix M with (2WTW - WWT - TWW)(e^{ik.x} v) = e^{ik.x} M v.
Eigen::MatrixXcd commutator_symbol_brute_force(const LocalPotential& w, const PhysParams& params, int d,
                                               Representation rep, const std::array<double, 3>& k);

/// Closed form sampled on a 1D or 2D grid.
template <int N>
struct CommutatorClosedForm {
  using Matrix = typename Algebra<N>::Matrix;
  Grid grid;
  int dim = 1;
  std::vector<Matrix> F0;
  std::array<std::vector<Matrix>, 2> F;
};

/// Throws std::invalid_argument if dim >= 2 and the samples carry no derivatives.
template <int N>
CommutatorClosedForm<N> closed_form_commutator(const PotentialSamples& samples, const PhysParams& params,
                                               CommutatorForm form = CommutatorForm::Expanded);

template <int N>
BasicField<N> apply_commutator(const CommutatorClosedForm<N>& cf, const BasicField<N>& f);

/// 2WTW - WWT - TWW with T = a1 T1 + a2 T2, T1 = -(1/eps) sum alpha_j d_j
/// (spectral derivatives) and T2 = -i nu/(delta eps^2) beta.
template <int N>
BasicField<N> brute_force_commutator(const PotentialSamples& samples, const PhysParams& params,
                                     const BasicField<N>& f, double a1 = 1.0, double a2 = 1.0);

struct LinearityReport {
  double a1 = 1.0, a2 = 1.0;
  double norm_derivative_part = 0.0;  // ||[W,[T1,W]] f||
  double norm_mass_part = 0.0;        // ||[W,[T2,W]] f||
  double norm_combined = 0.0;         // ||[W,[a1 T1 + a2 T2,W]] f||
  double residual = 0.0;              // ||combined - a1 derivative - a2 mass|| / max(||combined||, tiny)
};

template <int N>
LinearityReport verify_commutator_linearity(const PotentialSamples& samples, const PhysParams& params,
                                            const BasicField<N>& f, double a1 = 1.0, double a2 = 1.0);

/// Grid-weighted l2 norm of any N-component field.
template <int N>
double field_norm(const BasicField<N>& f) {
  double s = 0.0;
  for (const cplx& v : f.values()) s += std::norm(v);
  return std::sqrt(f.grid().cell_volume() * s);
}

}  // namespace dirac
