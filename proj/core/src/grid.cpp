#include "nsk/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nsk/errors.hpp"

namespace nsk {

Grid::Grid(int dim, std::size_t n, double box_len) : dim_(dim), n_(n), box_len_(box_len) {
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("grid dimension must be in [1, 4]");
  if (n < 4 || (n & (n - 1)) != 0) throw InvalidArgument("points per axis must be a power of two >= 4");
  if (!(box_len > 0) || !std::isfinite(box_len)) throw InvalidArgument("box length must be positive");
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= n;
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double Grid::volume() const noexcept { return std::pow(box_len_, dim_); }

double Grid::wavenumber_unit() const noexcept { return 2.0 * std::numbers::pi / box_len_; }

long Grid::signed_index(std::size_t i) const noexcept {
  const long ni = static_cast<long>(n_);
  const long k = static_cast<long>(i);
  return k >= ni / 2 ? k - ni : k;
}

std::size_t Grid::axis_index(long k) const noexcept {
  const long ni = static_cast<long>(n_);
  return static_cast<std::size_t>(((k % ni) + ni) % ni);
}

std::array<std::size_t, kMaxDim> Grid::unflatten(std::size_t flat) const noexcept {
  std::array<std::size_t, kMaxDim> idx{};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = flat % n_;
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<std::size_t, kMaxDim>& idx) const noexcept {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) flat = flat * n_ + idx[d];
  return flat;
}

std::size_t Grid::conjugate_offset(std::size_t flat) const noexcept {
  auto idx = unflatten(flat);
  for (int d = 0; d < dim_; ++d) idx[d] = (n_ - idx[d]) % n_;
  return flatten(idx);
}

std::array<double, kMaxDim> Grid::wavevector(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  std::array<double, kMaxDim> xi{};
  for (int d = 0; d < dim_; ++d) xi[d] = wavenumber_unit() * static_cast<double>(signed_index(idx[d]));
  return xi;
}

double Grid::xi_max() const noexcept {
  return std::numbers::pi * static_cast<double>(n_) / box_len_;
}

std::array<double, kMaxDim> Grid::position(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  std::array<double, kMaxDim> x{};
  for (int d = 0; d < dim_; ++d) x[d] = spacing() * static_cast<double>(idx[d]);
  return x;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw GridMismatch(std::string(what) + ": grids differ");
}

}  // namespace nsk
