#include "nsk/field.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

#include "nsk/errors.hpp"
#include "nsk/log.hpp"

namespace nsk {

namespace {
std::mutex g_sink_mutex;
LogSink g_sink;
}  // namespace

void set_warning_sink(LogSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void log_warning(const std::string& message) {
  std::lock_guard lock(g_sink_mutex);
  if (g_sink)
    g_sink(message);
  else
    std::cerr << "warning: " << message << '\n';
}

State::State(RealField th, RealField mom) : theta(std::move(th)), m(std::move(mom)) {
  require_same_grid(theta.grid(), m.grid(), "State");
  if (theta.components() != 1 || m.components() != static_cast<std::size_t>(theta.grid().dim()))
    throw InvalidArgument("State needs a scalar theta and an N-vector m");
}

bool State::all_finite() const noexcept {
  auto finite = [](std::span<const double> d) {
    return std::all_of(d.begin(), d.end(), [](double v) { return std::isfinite(v); });
  };
  return finite(theta.data()) && finite(m.data());
}

bool State::admissible(double rho_star) const noexcept {
  for (double th : theta.data()) {
    const double rho = rho_star + th;
    if (!(rho >= 0.25 * rho_star && rho <= 4.0 * rho_star)) return false;
  }
  return true;
}

double conjugate_symmetry_defect(const ComplexField& f) {
  const Grid& g = f.grid();
  double scale = 0.0;
  for (const cplx& c : f.data()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t c = 0; c < f.components(); ++c) {
    auto comp = f.component(c);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::size_t kc = g.conjugate_offset(k);
      worst = std::max(worst, std::abs(comp[kc] - std::conj(comp[k])));
    }
  }
  return worst / scale;
}

double conjugate_symmetry_defect(const SpectralState& s) {
  return std::max(conjugate_symmetry_defect(s.theta_hat), conjugate_symmetry_defect(s.m_hat));
}

std::array<double, kMaxDim> box_center(const Grid& grid) {
  std::array<double, kMaxDim> c{};
  for (int d = 0; d < grid.dim(); ++d) c[d] = 0.5 * grid.box_len();
  return c;
}

RealField gaussian_bump(const Grid& grid, const std::array<double, kMaxDim>& center, double width,
                        double amplitude) {
  if (!(width > 0)) throw InvalidArgument("gaussian_bump width must be positive");
  if (width < 2.0 * grid.spacing() || width > 0.25 * grid.box_len()) {
    std::ostringstream msg;
    msg << "gaussian_bump width " << width << " is not well inside (h, L) = (" << grid.spacing()
        << ", " << grid.box_len() << ")";
    log_warning(msg.str());
  }
  RealField f = scalar_field(grid);
  auto out = f.component(0);
  if (amplitude == 0.0) return f;
  const double L = grid.box_len();
  const double inv = 1.0 / (2.0 * width * width);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.position(k);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      double dx = x[d] - center[d];
      dx -= L * std::round(dx / L);
      r2 += dx * dx;
    }
    out[k] = amplitude * std::exp(-r2 * inv);
  }
  return f;
}

}  // namespace nsk
