#include "dirac/grid.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace dirac {

Grid Grid::build(double a, double b, int modes, int dim) {
  if (!(b > a)) throw std::invalid_argument("grid: require b > a");
  if (modes < 4) throw std::invalid_argument("grid: require M >= 4");
  if (modes % 2 != 0) throw std::invalid_argument("grid: M must be even");
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
  return Grid(a, b, modes, dim);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(modes_);
  for (int j = 0; j < modes_; ++j) x[j] = node(j);
  return x;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> mu(modes_);
  for (int l = -modes_ / 2; l < modes_ / 2; ++l) mu[l + modes_ / 2] = wavenumber_of_mode(l);
  return mu;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << "Grid(dim=" << dim_ << ", [" << a_ << ", " << b_ << "), M=" << modes_ << ", h=" << h() << ")";
  return os.str();
}

double axis_wavenumber(const Grid& grid, std::size_t flat_index, int axis) {
  const std::size_t m = static_cast<std::size_t>(grid.modes());
  if (grid.dim() == 1) return grid.wavenumber_at(static_cast<int>(flat_index));
  const int k = static_cast<int>(axis == 1 ? flat_index / m : flat_index % m);
  return grid.wavenumber_at(k);
}

namespace fft {
namespace {

using PlanKey = std::tuple<int, int, int, int>;  // dim, M, howmany, sign

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& grid, int howmany, int sign) {
    const PlanKey key{grid.dim(), grid.modes(), howmany, sign};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int rank = grid.dim();
    const int n[2] = {grid.modes(), grid.modes()};
    const int dist = static_cast<int>(grid.size());
    AlignedBuffer scratch(static_cast<std::size_t>(howmany) * grid.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // FFTW_ESTIMATE keeps the chosen algorithm, and hence the rounding, reproducible across runs.
    fftw_plan plan = fftw_plan_many_dft(rank, n, howmany, buf, nullptr, 1, dist, buf, nullptr, 1, dist, sign,
                                        FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

void execute(const Grid& grid, int howmany, cplx* data, int sign) {
  fftw_plan plan = PlanCache::instance().get(grid, howmany, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(const Grid& grid, int howmany, cplx* data) { execute(grid, howmany, data, FFTW_FORWARD); }
void backward(const Grid& grid, int howmany, cplx* data) { execute(grid, howmany, data, FFTW_BACKWARD); }

}  // namespace fft
}  // namespace dirac
