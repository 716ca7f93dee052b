#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nsk {

inline constexpr int kMaxDim = 4;

/// Uniform periodic grid on [0, L)^N with n points per axis. Storage order is
/// row-major (last axis fastest), matching the transform backend.
class Grid {
 public:
  /// Throws InvalidArgument unless 1 <= dim <= 4, n is a power of two >= 4,
  /// and box_len > 0.
  Grid(int dim, std::size_t n, double box_len);

  int dim() const noexcept { return dim_; }
  std::size_t n() const noexcept { return n_; }
  double box_len() const noexcept { return box_len_; }
  double spacing() const noexcept { return box_len_ / static_cast<double>(n_); }
  double cell_volume() const noexcept;
  double volume() const noexcept;
  /// n^N
  std::size_t size() const noexcept { return size_; }

  /// 2*pi/L
  double wavenumber_unit() const noexcept;
  /// Signed alias of an axis index, in [-n/2, n/2).
  long signed_index(std::size_t i) const noexcept;
  /// Axis index of a signed alias (inverse of signed_index).
  std::size_t axis_index(long k) const noexcept;
  bool is_nyquist(std::size_t i) const noexcept { return i == n_ / 2; }

  /// Per-axis indices of a flat offset.
  std::array<std::size_t, kMaxDim> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const std::array<std::size_t, kMaxDim>& idx) const noexcept;
  /// Flat offset of the mode -k (conjugate partner).
  std::size_t conjugate_offset(std::size_t flat) const noexcept;

  /// Wavevector (2*pi/L) * signed alias per axis.
  std::array<double, kMaxDim> wavevector(std::size_t flat) const noexcept;
  /// Largest resolved |xi| along an axis, pi*n/L.
  double xi_max() const noexcept;

  /// Physical coordinate of a point, x_i = i*h.
  std::array<double, kMaxDim> position(std::size_t flat) const noexcept;

  bool operator==(const Grid& o) const noexcept {
    return dim_ == o.dim_ && n_ == o.n_ && box_len_ == o.box_len_;
  }
  bool operator!=(const Grid& o) const noexcept { return !(*this == o); }

 private:
  int dim_;
  std::size_t n_;
  double box_len_;
  std::size_t size_;
};

/// Throws GridMismatch naming `what` when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nsk
