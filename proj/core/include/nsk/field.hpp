#pragma once

#include <array>
#include <complex>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

#include "nsk/grid.hpp"

namespace nsk {

using cplx = std::complex<double>;

/// 64-byte aligned storage so transform plans can assume SIMD alignment.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlign = 64;

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    const std::size_t bytes = ((count * sizeof(T) + kAlign - 1) / kAlign) * kAlign;
    void* p = std::aligned_alloc(kAlign, bytes == 0 ? kAlign : bytes);
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

/// A field with `ncomp` components of type T on a grid, stored component-major.
/// Scalars have one component, vectors N, tensors N*N (row-major j,k).
template <class T>
class BasicField {
 public:
  BasicField(Grid grid, std::size_t ncomp)
      : grid_(grid), ncomp_(ncomp), data_(grid.size() * ncomp, T{}) {}

  const Grid& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return ncomp_; }
  std::size_t points() const noexcept { return grid_.size(); }

  std::span<T> component(std::size_t c) noexcept {
    return {data_.data() + c * grid_.size(), grid_.size()};
  }
  std::span<const T> component(std::size_t c) const noexcept {
    return {data_.data() + c * grid_.size(), grid_.size()};
  }
  /// Tensor component (j,k) of an N*N field.
  std::span<T> tensor(int j, int k) noexcept {
    return component(static_cast<std::size_t>(j * grid_.dim() + k));
  }
  std::span<const T> tensor(int j, int k) const noexcept {
    return component(static_cast<std::size_t>(j * grid_.dim() + k));
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

 private:
  Grid grid_;
  std::size_t ncomp_;
  aligned_vector<T> data_;
};

using RealField = BasicField<double>;
using ComplexField = BasicField<cplx>;

inline RealField scalar_field(const Grid& g) { return RealField(g, 1); }
inline RealField vector_field(const Grid& g) { return RealField(g, static_cast<std::size_t>(g.dim())); }
inline RealField tensor_field(const Grid& g) {
  return RealField(g, static_cast<std::size_t>(g.dim() * g.dim()));
}

/// Real-space unknowns: density perturbation theta = rho - rho* and momentum m.
struct State {
  RealField theta;
  RealField m;

  explicit State(const Grid& g) : theta(scalar_field(g)), m(vector_field(g)) {}
  State(RealField th, RealField mom);

  const Grid& grid() const noexcept { return theta.grid(); }
  bool all_finite() const noexcept;
  /// rho*/4 <= rho* + theta <= 4 rho* at every grid point.
  bool admissible(double rho_star) const noexcept;
};

/// Fourier coefficients of (theta, m).
struct SpectralState {
  ComplexField theta_hat;
  ComplexField m_hat;

  explicit SpectralState(const Grid& g)
      : theta_hat(g, 1), m_hat(g, static_cast<std::size_t>(g.dim())) {}

  const Grid& grid() const noexcept { return theta_hat.grid(); }
};

/// Largest |c(-xi) - conj(c(xi))| over all modes and components, relative to
/// the largest coefficient magnitude (0 for an all-zero field).
double conjugate_symmetry_defect(const ComplexField& f);
double conjugate_symmetry_defect(const SpectralState& s);

/// amplitude * exp(-|x - center|^2 / (2 width^2)) using the minimum-image
/// distance on the periodic box. Logs a warning when width is not well
/// inside (h, L).
RealField gaussian_bump(const Grid& grid, const std::array<double, kMaxDim>& center, double width,
                        double amplitude);

/// Centre of the box, (L/2, ..., L/2).
std::array<double, kMaxDim> box_center(const Grid& grid);

}  // namespace nsk
