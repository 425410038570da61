#include "dirac/observables.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dirac {

double mass(const SpinorField& f) {
  double s = 0.0;
  for (const cplx& v : f.values()) s += std::norm(v);
  return f.grid().cell_volume() * s;
}

std::vector<double> density(const SpinorField& f) {
  std::vector<double> rho(f.nodes());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(f(0, j)) + std::norm(f(1, j));
  return rho;
}

std::vector<std::vector<double>> current(const SpinorField& f, const PhysParams& params) {
  const int d = f.grid().dim();
  std::vector<std::vector<double>> J(d, std::vector<double>(f.nodes()));
  double peak = 0.0, worst = 0.0;
  for (std::size_t j = 0; j < f.nodes(); ++j) {
    const auto phi = f.at(j);
    peak = std::max(peak, phi.squaredNorm());
    for (int l = 0; l < d; ++l) {
      const cplx q = phi.dot(matrices::sigma(l + 1) * phi) / params.epsilon;
      J[l][j] = q.real();
      worst = std::max(worst, std::abs(q.imag()));
    }
  }
  if (worst > 1e-14 * std::max(peak, 1.0) / params.epsilon)
    throw std::logic_error("current: imaginary residual too large");
  return J;
}

double energy(const SpinorField& f, const PotentialSamples& samples, const PhysParams& params) {
  const Grid& g = f.grid();
  if (!(g == samples.grid)) throw std::invalid_argument("energy: grid mismatch");
  const int d = g.dim();
  std::array<SpinorField, 2> df;
  for (int m = 0; m < d; ++m) df[m] = spectral_derivative(f, m + 1);
  const cplx I{0.0, 1.0};
  const Mat2 s3 = matrices::sigma(3);
  cplx total{0.0, 0.0};
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Vec2 phi = f.at(j);
    cplx e = (params.nu / (params.epsilon * params.epsilon)) * phi.dot(s3 * phi) + samples.V[j] * phi.squaredNorm();
    for (int m = 0; m < d; ++m) {
      const Mat2 sm = matrices::sigma(m + 1);
      e += -I * (params.delta / params.epsilon) * phi.dot(sm * df[m].at(j));
      e -= samples.a(m, j) * phi.dot(sm * phi);
    }
    total += e;
  }
  total *= g.cell_volume();
  if (std::abs(total.imag()) > 1e-10 * (1.0 + std::abs(total.real()))) {
    std::ostringstream os;
    os << "energy: imaginary part " << total.imag() << " exceeds tolerance (real part " << total.real() << ")";
    throw std::logic_error(os.str());
  }
  return total.real();
}

double l2_norm(const Grid& grid, const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(grid.cell_volume() * s);
}

SpinorField restrict_to(const SpinorField& fine, const Grid& coarse) {
  const Grid& g = fine.grid();
  if (g == coarse) return fine;
  if (g.dim() != coarse.dim() || g.a() != coarse.a() || g.b() != coarse.b() || g.modes() % coarse.modes() != 0)
    throw std::invalid_argument("grids do not nest: " + g.describe() + " vs " + coarse.describe());
  const std::size_t s = static_cast<std::size_t>(g.modes() / coarse.modes());
  const std::size_t mf = static_cast<std::size_t>(g.modes());
  const std::size_t mc = static_cast<std::size_t>(coarse.modes());
  SpinorField out(coarse);
  for (int c = 0; c < 2; ++c) {
    if (coarse.dim() == 1) {
      for (std::size_t j = 0; j < mc; ++j) out(c, j) = fine(c, j * s);
    } else {
      for (std::size_t j1 = 0; j1 < mc; ++j1)
        for (std::size_t j2 = 0; j2 < mc; ++j2) out(c, j1 * mc + j2) = fine(c, j1 * s * mf + j2 * s);
    }
  }
  return out;
}

double l2_error(const SpinorField& num, const SpinorField& ref) {
  const SpinorField r = restrict_to(ref, num.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < 2 * num.nodes(); ++i) s += std::norm(num.data()[i] - r.data()[i]);
  return std::sqrt(num.grid().cell_volume() * s);
}

double l2_error_relative(const SpinorField& num, const SpinorField& ref) {
  const SpinorField r = restrict_to(ref, num.grid());
  return l2_error(num, r) / std::sqrt(mass(r));
}

ErrorSet error_set(const SpinorField& num, const SpinorField& ref, const PhysParams& params) {
  const SpinorField r = restrict_to(ref, num.grid());
  const Grid& g = num.grid();
  ErrorSet e;
  e.phi = l2_error(num, r);
  e.phi_rel = e.phi / std::sqrt(mass(r));

  const auto rho_n = density(num), rho_r = density(r);
  std::vector<double> diff(rho_n.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = rho_n[j] - rho_r[j];
  e.rho = l2_norm(g, diff);
  e.rho_rel = e.rho / l2_norm(g, rho_r);

  const auto J_n = current(num, params), J_r = current(r, params);
  double dj = 0.0, nj = 0.0;
  for (std::size_t l = 0; l < J_n.size(); ++l)
    for (std::size_t j = 0; j < J_n[l].size(); ++j) {
      const double dd = J_n[l][j] - J_r[l][j];
      dj += dd * dd;
      nj += J_r[l][j] * J_r[l][j];
    }
  e.current = std::sqrt(g.cell_volume() * dj);
  e.current_rel = e.current / std::sqrt(g.cell_volume() * nj);
  return e;
}

}  // namespace dirac
