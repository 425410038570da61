#pragma once

#include <optional>
#include <vector>

#include "dirac/grid.hpp"
#include "dirac/model.hpp"

namespace dirac {

/// h^dim sum_j |Phi_j|^2 over both components.
double mass(const SpinorField& f);

/// rho_j = |phi_1|^2 + |phi_2|^2 per node.
std::vector<double> density(const SpinorField& f);

/// J_l = (1/eps) Phi^* sigma_l Phi per node, l = 1..dim. Throws
/// std::logic_error if the discarded imaginary part exceeds 1e-14 max|Phi|^2.
std::vector<std::vector<double>> current(const SpinorField& f, const PhysParams& params);

/// Energy functional with spectral derivatives and nodal quadrature.
/// Throws std::logic_error if the imaginary part exceeds 1e-10 (1 + |E|).
double energy(const SpinorField& f, const PotentialSamples& samples, const PhysParams& params);

/// Grid-weighted l2 norm of a nodal scalar or vector field.
double l2_norm(const Grid& grid, const std::vector<double>& values);

/// Restrict `fine` to the nodes of `coarse` when the grids nest by an
/// integer stride (same domain, M_fine = s M_coarse). Throws
/// std::invalid_argument otherwise.
SpinorField restrict_to(const SpinorField& fine, const Grid& coarse);

/// sqrt(h^dim sum |num - ref|^2); `ref` may live on a finer nested grid.
double l2_error(const SpinorField& num, const SpinorField& ref);
double l2_error_relative(const SpinorField& num, const SpinorField& ref);

/// e_Phi, e_rho, e_J (absolute) and their relative variants.
struct ErrorSet {
  double phi = 0.0, rho = 0.0, current = 0.0;
  double phi_rel = 0.0, rho_rel = 0.0, current_rel = 0.0;
};
ErrorSet error_set(const SpinorField& num, const SpinorField& ref, const PhysParams& params);

struct ObservableRecord {
  double t = 0.0;
  long step = 0;
  double mass = 0.0;
  double energy = 0.0;
  std::optional<ErrorSet> errors;
};

}  // namespace dirac
