#include "nsk/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsk/errors.hpp"

namespace nsk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sample_points(const PressureLaw& law) {
  double lo = law.rho_min;
  double hi = law.rho_max;
  if (!std::isfinite(hi)) hi = std::max(10.0 * lo, lo + 10.0);
  const double w = hi - lo;
  lo += 0.1 * w;
  hi -= 0.1 * w;
  std::vector<double> pts;
  for (int i = 0; i <= 8; ++i) pts.push_back(lo + (hi - lo) * i / 8.0);
  return pts;
}

double interval_width(const PressureLaw& law) {
  const auto pts = sample_points(law);
  return pts.back() - pts.front();
}

}  // namespace

PressureLaw critical_quadratic(double K, double rho_ref) {
  if (!(rho_ref > 0)) throw ConstraintViolation("rho_star > 0");
  PressureLaw law;
  law.name = "critical-quadratic";
  law.evaluate = [K, rho_ref](double r) { return K * (r - rho_ref) * (r - rho_ref); };
  law.d1 = [K, rho_ref](double r) { return 2.0 * K * (r - rho_ref); };
  law.d2 = [K](double) { return 2.0 * K; };
  law.rho_min = std::numeric_limits<double>::min();
  law.rho_max = kInf;
  law.coefficients = {K};
  return law;
}

PressureLaw polynomial_pressure(std::vector<double> coeffs, double rho_ref, double rho_min,
                                double rho_max) {
  if (!(rho_min > 0) || !(rho_max > rho_min))
    throw ConstraintViolation("pressure validity interval must satisfy 0 < rho_min < rho_max");
  PressureLaw law;
  law.name = "polynomial";
  law.coefficients = coeffs;
  // Horner on the shifted variable for P, P', P''.
  law.evaluate = [coeffs, rho_ref](double r) {
    const double x = r - rho_ref;
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  law.d1 = [coeffs, rho_ref](double r) {
    const double x = r - rho_ref;
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * coeffs[k];
    return acc;
  };
  law.d2 = [coeffs, rho_ref](double r) {
    const double x = r - rho_ref;
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 2;)
      acc = acc * x + static_cast<double>(k * (k - 1)) * coeffs[k];
    return acc;
  };
  law.rho_min = rho_min;
  law.rho_max = rho_max;
  return law;
}

double pressure_fd_defect(const PressureLaw& law, double h) {
  double worst = 0.0;
  for (double r : sample_points(law)) {
    const double fd1 = (law.evaluate(r + h) - law.evaluate(r - h)) / (2.0 * h);
    const double fd2 = (law.d1(r + h) - law.d1(r - h)) / (2.0 * h);
    worst = std::max({worst, std::abs(law.d1(r) - fd1), std::abs(law.d2(r) - fd2)});
  }
  return worst;
}

PressureLaw make_pressure_law(std::string name, std::function<double(double)> evaluate,
                              std::function<double(double)> d1,
                              std::function<double(double)> d2, double rho_min,
                              double rho_max) {
  if (!evaluate || !d1 || !d2) throw ConstraintViolation("pressure law needs P, P' and P''");
  if (!(rho_min > 0) || !(rho_max > rho_min) || !std::isfinite(rho_max))
    throw ConstraintViolation("pressure validity interval must satisfy 0 < rho_min < rho_max < inf");
  PressureLaw law{std::move(name), std::move(evaluate), std::move(d1), std::move(d2),
                  rho_min, rho_max, {}};

  double scale = 1.0;
  for (double r : sample_points(law))
    scale = std::max({scale, std::abs(law.evaluate(r)), std::abs(law.d1(r)), std::abs(law.d2(r))});

  // Correct derivatives give an O(h^2) defect: halving h must cut it by ~4.
  const double h = 1e-3 * interval_width(law);
  const double e1 = pressure_fd_defect(law, h);
  const double e2 = pressure_fd_defect(law, 0.5 * h);
  const double floor = 1e-9 * scale;
  if (!(e2 <= 0.35 * e1 + floor)) {
    std::ostringstream msg;
    msg << "pressure derivative consistency: finite-difference defect " << e1 << " -> " << e2
        << " under step halving is not second order";
    throw ConstraintViolation(msg.str());
  }
  return law;
}

FluidParams make_params(double mu, double nu, double kappa, double rho_ref, PressureLaw pressure) {
  if (!std::isfinite(mu) || !(mu > 0)) throw ConstraintViolation("mu_star > 0");
  if (!std::isfinite(nu) || !(mu + nu > 0)) throw ConstraintViolation("mu_star + nu_star > 0");
  if (!std::isfinite(kappa) || !(kappa > 0)) throw ConstraintViolation("kappa_star > 0");
  if (!std::isfinite(rho_ref) || !(rho_ref > 0)) throw ConstraintViolation("rho_star > 0");
  if (!pressure.evaluate || !pressure.d1 || !pressure.d2)
    throw ConstraintViolation("pressure law is incomplete");
  if (!pressure.contains(rho_ref))
    throw ConstraintViolation("rho_star inside the pressure validity interval");

  const double p1 = pressure.d1(rho_ref);
  const double p2 = pressure.d2(rho_ref);
  if (!(std::abs(p1) <= kCriticalityTol * std::max(1.0, std::abs(p2)))) {
    std::ostringstream msg;
    msg << "P'(rho_star) = " << p1 << " is not zero (critical state required)";
    throw CriticalityViolation(msg.str());
  }

  FluidParams fp;
  fp.mu_ = mu;
  fp.nu_ = nu;
  fp.kappa_ = kappa;
  fp.rho_ = rho_ref;
  fp.alpha_ = mu / rho_ref;
  fp.beta_ = nu / rho_ref;
  const double half = 0.5 * (fp.alpha_ + fp.beta_);
  fp.delta_ = half * half - rho_ref * kappa;
  fp.pressure_ = std::move(pressure);
  if (!std::isfinite(fp.alpha_) || !std::isfinite(fp.beta_) || !std::isfinite(fp.delta_))
    throw ConstraintViolation("derived alpha_star, beta_star finite");
  return fp;
}

}  // namespace nsk
