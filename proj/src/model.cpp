#include "dirac/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace dirac {

void PhysParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("params: epsilon must be > 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("params: delta must be > 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("params: nu must be >= 0");
}

namespace matrices {

namespace {
const cplx I{0.0, 1.0};
}

Mat2 identity2() { return Mat2::Identity(); }

Mat2 sigma(int j) {
  Mat2 s;
  switch (j) {
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -I, I, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw std::invalid_argument("sigma: index must be 1, 2 or 3");
  }
  return s;
}

Mat4 identity4() { return Mat4::Identity(); }

Mat4 alpha(int j) {
  Mat4 a = Mat4::Zero();
  a.topRightCorner<2, 2>() = sigma(j);
  a.bottomLeftCorner<2, 2>() = sigma(j);
  return a;
}

Mat4 beta() {
  Mat4 b = Mat4::Zero();
  b.topLeftCorner<2, 2>() = Mat2::Identity();
  b.bottomRightCorner<2, 2>() = -Mat2::Identity();
  return b;
}

Mat4 gamma() {
  Mat4 g = Mat4::Zero();
  g.topRightCorner<2, 2>() = Mat2::Identity();
  g.bottomLeftCorner<2, 2>() = Mat2::Identity();
  return g;
}

}  // namespace matrices

namespace potentials {

PotentialSpec zero() {
  PotentialSpec s;
  s.name = "zero";
  s.V = [](const Point&) { return 0.0; };
  for (auto& d : s.dV) d = [](const Point&) { return 0.0; };
  return s;
}

PotentialSpec constant(double v0, std::vector<double> a0) {
  if (a0.size() > 3) throw std::invalid_argument("constant potential: at most 3 magnetic components");
  PotentialSpec s;
  s.name = "constant";
  s.V = [v0](const Point&) { return v0; };
  const ScalarFn zero_fn = [](const Point&) { return 0.0; };
  for (auto& d : s.dV) d = zero_fn;
  for (std::size_t k = 0; k < a0.size(); ++k) {
    if (a0[k] == 0.0) continue;
    const double ak = a0[k];
    s.A[k] = [ak](const Point&) { return ak; };
    for (auto& d : s.dA[k]) d = zero_fn;
  }
  return s;
}

PotentialSpec rational_1d() {
  PotentialSpec s;
  s.name = "paper-1d";
  s.V = [](const Point& p) { return (1.0 - p[0]) / (1.0 + p[0] * p[0]); };
  s.A[0] = [](const Point& p) { return (p[0] + 1.0) * (p[0] + 1.0) / (1.0 + p[0] * p[0]); };
  // V' = (x^2 - 2x - 1)/(1+x^2)^2, A1' = 2(1 - x^2)/(1+x^2)^2
  s.dV[0] = [](const Point& p) {
    const double x = p[0], q = 1.0 + x * x;
    return (x * x - 2.0 * x - 1.0) / (q * q);
  };
  s.dA[0][0] = [](const Point& p) {
    const double x = p[0], q = 1.0 + x * x;
    return 2.0 * (1.0 - x * x) / (q * q);
  };
  return s;
}

PotentialSpec honeycomb_2d() {
  PotentialSpec s;
  s.name = "honeycomb-2d";
  const double c = 4.0 * kPi / std::sqrt(3.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  const double e[3][2] = {{-1.0, 0.0}, {0.5, r3}, {0.5, -r3}};
  s.V = [=](const Point& p) {
    double v = 0.0;
    for (const auto& ek : e) v += std::cos(c * (ek[0] * p[0] + ek[1] * p[1]));
    return v;
  };
  for (int m = 0; m < 2; ++m) {
    s.dV[m] = [=](const Point& p) {
      double d = 0.0;
      for (const auto& ek : e) d -= c * ek[m] * std::sin(c * (ek[0] * p[0] + ek[1] * p[1]));
      return d;
    };
  }
  return s;
}

PotentialSpec smooth_magnetic_2d() {
  PotentialSpec s;
  s.name = "smooth-magnetic-2d";
  s.V = [](const Point& p) { return std::cos(p[0]) + 0.5 * std::sin(p[1]); };
  s.dV[0] = [](const Point& p) { return -std::sin(p[0]); };
  s.dV[1] = [](const Point& p) { return 0.5 * std::cos(p[1]); };
  s.A[0] = [](const Point& p) { return 0.6 + 0.4 * std::sin(p[0] + p[1]); };
  s.dA[0][0] = [](const Point& p) { return 0.4 * std::cos(p[0] + p[1]); };
  s.dA[0][1] = [](const Point& p) { return 0.4 * std::cos(p[0] + p[1]); };
  s.A[1] = [](const Point& p) { return 0.3 * std::cos(p[0]) - 0.7 * std::sin(2.0 * p[1]); };
  s.dA[1][0] = [](const Point& p) { return -0.3 * std::sin(p[0]); };
  s.dA[1][1] = [](const Point& p) { return -1.4 * std::cos(2.0 * p[1]); };
  return s;
}

PotentialSpec by_name(const std::string& name, double v0, std::vector<double> a0) {
  if (name == "paper-1d") return rational_1d();
  if (name == "honeycomb-2d") return honeycomb_2d();
  if (name == "zero") return zero();
  if (name == "constant") return constant(v0, std::move(a0));
  if (name == "smooth-magnetic-2d") return smooth_magnetic_2d();
  throw std::invalid_argument("unknown potential preset '" + name + "'");
}

}  // namespace potentials

Point node_point(const Grid& grid, std::size_t j) {
  if (grid.dim() == 1) return {grid.node(static_cast<int>(j)), 0.0, 0.0};
  const std::size_t m = static_cast<std::size_t>(grid.modes());
  return {grid.node(static_cast<int>(j / m)), grid.node(static_cast<int>(j % m)), 0.0};
}

bool PotentialSamples::magnetic() const {
  for (const auto& ak : A)
    for (double v : ak)
      if (v != 0.0) return true;
  return false;
}

namespace {

std::vector<double> sample(const ScalarFn& fn, const Grid& grid, const std::string& what) {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Point p = node_point(grid, j);
    const double v = fn(p);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "potential " << what << " is not finite at node " << j << " (x = " << p[0];
      if (grid.dim() == 2) os << ", " << p[1];
      os << ")";
      throw std::domain_error(os.str());
    }
    out[j] = v;
  }
  return out;
}

std::vector<double> spectral_partial(const std::vector<double>& values, const Grid& grid, int axis) {
  BasicField<1> f(grid);
  for (std::size_t j = 0; j < values.size(); ++j) f(0, j) = values[j];
  const BasicField<1> d = spectral_derivative(f, axis);
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = d(0, j).real();
  return out;
}

}  // namespace

PotentialSamples sample_potentials(const PotentialSpec& spec, const Grid& grid, bool with_derivatives) {
  PotentialSamples s;
  s.grid = grid;
  s.V = spec.V ? sample(spec.V, grid, "V") : std::vector<double>(grid.size(), 0.0);
  const int dim = grid.dim();
  for (int k = 0; k < 3; ++k)
    if (spec.A[k]) s.A[k] = sample(spec.A[k], grid, "A" + std::to_string(k + 1));
  if (!with_derivatives) return s;

  s.has_derivatives = true;
  for (int m = 0; m < dim; ++m) {
    const std::string tag = "/dx" + std::to_string(m + 1);
    s.dV[m] = spec.dV[m] ? sample(spec.dV[m], grid, "dV" + tag) : spectral_partial(s.V, grid, m + 1);
    for (int k = 0; k < 3; ++k) {
      if (s.A[k].empty()) continue;
      s.dA[k][m] = spec.dA[k][m] ? sample(spec.dA[k][m], grid, "dA" + std::to_string(k + 1) + tag)
                                 : spectral_partial(s.A[k], grid, m + 1);
    }
  }
  return s;
}

namespace {

Mat2 plane_wave_symbol(const std::vector<double>& k, double v0, const std::vector<double>& a0, const PhysParams& p) {
  Mat2 h = (p.nu / (p.epsilon * p.epsilon)) * matrices::sigma(3) + v0 * Mat2::Identity();
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double aj = j < a0.size() ? a0[j] : 0.0;
    h += (p.delta * k[j] / p.epsilon - aj) * matrices::sigma(static_cast<int>(j) + 1);
  }
  return h;
}

}  // namespace

double dispersion(const std::vector<double>& k, double v0, const std::vector<double>& a0, const PhysParams& p,
                  Branch branch) {
  double q = 0.0;
  for (std::size_t j = 0; j < std::max(k.size(), a0.size()); ++j) {
    const double kj = j < k.size() ? k[j] : 0.0;
    const double aj = j < a0.size() ? a0[j] : 0.0;
    const double d = p.delta * kj - p.epsilon * aj;
    q += d * d;
  }
  const double root = std::sqrt(p.nu * p.nu + p.epsilon * p.epsilon * q) / (p.epsilon * p.epsilon);
  return branch == Branch::Plus ? v0 + root : v0 - root;
}

Vec2 plane_wave_amplitude(const std::vector<double>& k, double v0, const std::vector<double>& a0,
                          const PhysParams& p, Branch branch) {
  const Mat2 h = plane_wave_symbol(k, v0, a0, p);
  Vec2 b;
  const Mat2 traceless = h - v0 * Mat2::Identity();
  if (traceless.norm() == 0.0) {
    b = branch == Branch::Plus ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat2> es(h);
    b = es.eigenvectors().col(branch == Branch::Plus ? 1 : 0);
  }
  b.normalize();
  const int lead = std::abs(b(0)) > 1e-14 ? 0 : 1;
  b *= std::conj(b(lead)) / std::abs(b(lead));
  b(lead) = std::abs(b(lead));
  return b;
}

SpinorField plane_wave_solution(const std::vector<int>& modes, double v0, const std::vector<double>& a0,
                                const PhysParams& p, Branch branch, double t, const Grid& grid) {
  p.validate();
  if (static_cast<int>(modes.size()) != grid.dim())
    throw std::invalid_argument("plane wave: one mode number per dimension required");
  std::vector<double> k(modes.size());
  for (std::size_t j = 0; j < modes.size(); ++j) {
    if (modes[j] < -grid.modes() / 2 || modes[j] >= grid.modes() / 2)
      throw std::invalid_argument("plane wave: mode " + std::to_string(modes[j]) + " is not on the grid lattice");
    k[j] = grid.wavenumber_of_mode(modes[j]);
  }
  const Vec2 b = plane_wave_amplitude(k, v0, a0, p, branch);
  const double omega = dispersion(k, v0, a0, p, branch);
  SpinorField f(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Point x = node_point(grid, j);
    double phase = -omega * t / p.delta;
    for (std::size_t m = 0; m < k.size(); ++m) phase += k[m] * (x[m] - grid.a());
    const cplx e = std::polar(1.0, phase);
    f(0, j) = b(0) * e;
    f(1, j) = b(1) * e;
  }
  return f;
}

SpinorField gauge_shift_reference(const SpinorField& f, double v0, double t, const PhysParams& p) {
  SpinorField out = f;
  out *= std::polar(1.0, -v0 * t / p.delta);
  return out;
}

namespace initial {

SpinorField gaussian_pair(const Grid& grid) {
  SpinorField f(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Point x = node_point(grid, j);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double s2 = (x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1];
    f(0, j) = std::exp(-r2 / 2.0);
    f(1, j) = std::exp(-s2 / 2.0);
  }
  return f;
}

SpinorField wkb(const Grid& grid, const PhysParams& p) {
  if (grid.dim() != 1) throw std::invalid_argument("wkb initial data is 1D only");
  SpinorField f(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(static_cast<int>(j));
    const double s0 = (1.0 + std::cos(2.0 * kPi * x)) / 40.0;
    const double ds0 = -2.0 * kPi * std::sin(2.0 * kPi * x) / 40.0;
    const cplx amp = 0.5 * std::exp(-4.0 * x * x) * std::polar(1.0, s0 / p.delta);
    f(0, j) = amp * (1.0 + std::sqrt(1.0 + ds0 * ds0));
    f(1, j) = amp * ds0;
  }
  return f;
}

SpinorField by_name(const std::string& name, const Grid& grid, const PhysParams& p, int mode, Branch branch,
                    double v0, const std::vector<double>& a0) {
  if (name == "gaussian") return gaussian_pair(grid);
  if (name == "wkb") return wkb(grid, p);
  if (name == "plane-wave") return plane_wave_solution(std::vector<int>(grid.dim(), mode), v0, a0, p, branch, 0.0, grid);
  throw std::invalid_argument("unknown initial data preset '" + name + "'");
}

}  // namespace initial

}  // namespace dirac
