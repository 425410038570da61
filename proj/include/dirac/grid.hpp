#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <fftw3.h>

namespace dirac {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform periodic grid on [a,b)^dim with M nodes per dimension.
///
/// Nodes are x_j = a + j h, j = 0..M-1 (x_M is identified with x_0).
/// Fourier modes are indexed by l in [-M/2, M/2-1] with wavenumber
/// mu_l = 2 pi l / (b - a). Internally spectral data is kept in FFT order
/// (k = 0..M-1, l = k for k < M/2 and l = k - M otherwise).
///
/// 2D data is row-major with the x2 index varying fastest: node (j1, j2)
/// lives at j1 * M + j2.
class Grid {
 public:
  Grid() = default;

  /// Throws std::invalid_argument for b <= a, odd M, M < 4 or dim not in {1,2}.
  static Grid build(double a, double b, int modes, int dim = 1);

  double a() const { return a_; }
  double b() const { return b_; }
  int modes() const { return modes_; }
  int dim() const { return dim_; }
  double length() const { return b_ - a_; }
  double h() const { return (b_ - a_) / modes_; }
  /// h^dim, the quadrature weight of one node.
  double cell_volume() const { return dim_ == 1 ? h() : h() * h(); }
  std::size_t size() const {
    return dim_ == 1 ? static_cast<std::size_t>(modes_)
                     : static_cast<std::size_t>(modes_) * static_cast<std::size_t>(modes_);
  }

  double node(int j) const { return a_ + j * h(); }
  std::vector<double> nodes() const;

  /// Mode number l of FFT index k.
  int mode_of_index(int k) const { return k < modes_ / 2 ? k : k - modes_; }
  /// FFT index k of mode number l, l in [-M/2, M/2-1].
  int index_of_mode(int l) const { return l >= 0 ? l : l + modes_; }
  double wavenumber_of_mode(int l) const { return 2.0 * kPi * l / (b_ - a_); }
  double wavenumber_at(int k) const { return wavenumber_of_mode(mode_of_index(k)); }
  /// mu_l for l = -M/2 .. M/2-1 in increasing order.
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid&) const = default;

  std::string describe() const;

 private:
  Grid(double a, double b, int modes, int dim) : a_(a), b_(b), modes_(modes), dim_(dim) {}

  double a_ = 0.0;
  double b_ = 1.0;
  int modes_ = 4;
  int dim_ = 1;
};

namespace detail {

/// Allocator backed by fftw_malloc so every buffer meets FFTW's SIMD alignment.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

}  // namespace detail

using AlignedBuffer = std::vector<cplx, detail::FftwAllocator<cplx>>;

/// N-component complex field sampled on a grid, stored component-major.
///
/// N = 2 is the spinor of the reduced 1D/2D model; N = 4 is used by the
/// four-component commutator checks.
template <int N>
class BasicField {
 public:
  using Spinor = Eigen::Matrix<cplx, N, 1>;
  static constexpr int components = N;

  BasicField() = default;
  explicit BasicField(const Grid& grid) : grid_(grid), data_(N * grid.size(), cplx{0.0, 0.0}) {}

  const Grid& grid() const { return grid_; }
  std::size_t nodes() const { return grid_.size(); }

  std::span<cplx> component(int c) { return {data_.data() + c * nodes(), nodes()}; }
  std::span<const cplx> component(int c) const { return {data_.data() + c * nodes(), nodes()}; }

  cplx& operator()(int c, std::size_t j) { return data_[c * nodes() + j]; }
  const cplx& operator()(int c, std::size_t j) const { return data_[c * nodes() + j]; }

  Spinor at(std::size_t j) const {
    Spinor s;
    for (int c = 0; c < N; ++c) s(c) = (*this)(c, j);
    return s;
  }
  void set(std::size_t j, const Spinor& s) {
    for (int c = 0; c < N; ++c) (*this)(c, j) = s(c);
  }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  std::span<cplx> values() { return {data_.data(), data_.size()}; }
  std::span<const cplx> values() const { return {data_.data(), data_.size()}; }

  bool all_finite() const {
    for (const cplx& v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  BasicField& operator+=(const BasicField& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  BasicField& operator*=(cplx s) {
    for (cplx& v : data_) v *= s;
    return *this;
  }
  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(cplx s, BasicField a) { return a *= s; }

  void require_same_grid(const BasicField& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("field grid mismatch");
  }

 private:
  Grid grid_;
  AlignedBuffer data_;
};

using SpinorField = BasicField<2>;
using DiracField = BasicField<4>;

/// Fourier coefficients of an N-component field, normalized so that
/// U_j = sum_l C_l exp(i mu_l (x_j - a)) with C_l = (1/M) sum_j U_j exp(-2 pi i j l / M).
template <int N>
class BasicSpectralField {
 public:
  BasicSpectralField() = default;
  explicit BasicSpectralField(const Grid& grid) : grid_(grid), data_(N * grid.size(), cplx{0.0, 0.0}) {}

  const Grid& grid() const { return grid_; }
  std::size_t modes() const { return grid_.size(); }

  /// Coefficient of component c at mode l (1D).
  cplx& coefficient(int c, int l) { return data_[c * modes() + grid_.index_of_mode(l)]; }
  const cplx& coefficient(int c, int l) const { return data_[c * modes() + grid_.index_of_mode(l)]; }
  /// Coefficient of component c at mode (l1, l2) (2D).
  cplx& coefficient(int c, int l1, int l2) { return data_[c * modes() + flat(l1, l2)]; }
  const cplx& coefficient(int c, int l1, int l2) const { return data_[c * modes() + flat(l1, l2)]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  std::span<const cplx> values() const { return {data_.data(), data_.size()}; }

 private:
  std::size_t flat(int l1, int l2) const {
    return static_cast<std::size_t>(grid_.index_of_mode(l1)) * grid_.modes() + grid_.index_of_mode(l2);
  }

  Grid grid_;
  AlignedBuffer data_;
};

using SpectralField = BasicSpectralField<2>;

namespace fft {

/// Unnormalized in-place transforms of `howmany` contiguous blocks of
/// grid.size() values each. Forward uses exp(-i...), backward exp(+i...).
/// Plans are cached process-wide; execution is thread safe.
void forward(const Grid& grid, int howmany, cplx* data);
void backward(const Grid& grid, int howmany, cplx* data);

}  // namespace fft

template <int N>
BasicSpectralField<N> dft_forward(const BasicField<N>& f) {
  BasicSpectralField<N> out(f.grid());
  std::copy(f.data(), f.data() + N * f.nodes(), out.data());
  fft::forward(f.grid(), N, out.data());
  const double scale = 1.0 / static_cast<double>(f.nodes());
  for (std::size_t i = 0; i < N * f.nodes(); ++i) out.data()[i] *= scale;
  return out;
}

template <int N>
BasicField<N> dft_inverse(const BasicSpectralField<N>& F) {
  BasicField<N> out(F.grid());
  std::copy(F.data(), F.data() + N * F.modes(), out.data());
  fft::backward(F.grid(), N, out.data());
  return out;
}

/// Wavenumber along `axis` (1 or 2) of the FFT-ordered flat index.
double axis_wavenumber(const Grid& grid, std::size_t flat_index, int axis);

/// Componentwise d/dx_axis via multiplication by i mu_l. The unpaired
/// l = -M/2 mode is kept.
template <int N>
BasicField<N> spectral_derivative(const BasicField<N>& f, int axis = 1) {
  const Grid& g = f.grid();
  if (axis < 1 || axis > g.dim()) throw std::invalid_argument("spectral_derivative: axis out of range");
  BasicField<N> out = f;
  fft::forward(g, N, out.data());
  const std::size_t n = g.size();
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx factor{0.0, axis_wavenumber(g, k, axis) * scale};
    for (int c = 0; c < N; ++c) out(c, k) *= factor;
  }
  fft::backward(g, N, out.data());
  return out;
}

}  // namespace dirac
