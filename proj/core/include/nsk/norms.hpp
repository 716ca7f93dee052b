#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "nsk/field.hpp"

namespace nsk {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum |f(x)|^q h^N)^{1/q}, or max |f| for q = inf. Multi-component fields
/// use the pointwise Euclidean length.
double lp_norm(const RealField& f, double q);
/// Pointwise Euclidean length of the stacked vector (theta, m).
double lp_norm(const State& s, double q);
/// L2 norm of the field whose DFT is `c`, from Parseval.
double l2_norm_spectral(const ComplexField& c);

/// sum over |alpha| <= k of lp_norm(d^alpha f, q), 0 <= k <= 3.
double sobolev_norm(const RealField& f, int k, double q);

/// Samples of one norm along a run.
class NormSeries {
 public:
  NormSeries() = default;
  explicit NormSeries(std::string descriptor) : descriptor_(std::move(descriptor)) {}

  /// Throws InvalidArgument unless t exceeds the last time and value >= 0.
  void append(double t, double value);

  const std::string& descriptor() const noexcept { return descriptor_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

 private:
  std::string descriptor_;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// max over samples in [a, t] of (1+s)^ell value(s). Throws WindowUncovered
/// unless the samples reach both ends of the window.
double weighted_sup(const NormSeries& series, double ell, double a, double t);

/// (int_0^t ((1+s)^ell value(s))^p ds)^{1/p} by the composite trapezoid rule
/// on the samples in [0, t]. Throws WindowUncovered as weighted_sup.
double weighted_lp_in_time(const NormSeries& series, double ell, double p, double t);

using NormBundle = std::map<std::string, NormSeries>;

/// Keys of the constituents of the aggregate norm. `q` is printed with %g,
/// inf as "inf".
std::string sup_key(int j, double q);
std::string strong_key(double q);      // W^{3,2}_q of (theta, m)
std::string time_deriv_key(double q);  // W^{1,0}_q of (d_t theta, d_t m)

/// Every key aggregate_N needs for exponents (q1, q2).
std::vector<std::string> constituent_keys(double q1, double q2);

struct AggregateExponents {
  int dim;
  double p;
  double q1;
  double q2;
  double tau;

  double ell(int i) const;  // ell_1 = N/(2 q1) - tau, ell_2 = N/(2 q2) + 1 - tau
};

/// The aggregate weighted norm at time t, summed over j in {0,1}, i in {1,2}.
/// Throws MissingConstituent listing the absent keys.
double aggregate_N(const NormBundle& bundle, const AggregateExponents& e, double t);

/// Values of every constituent for one snapshot. `u` holds (theta_hat, m_hat),
/// `du` their time derivatives. Pair norms are ||theta|| + ||m||.
std::map<std::string, double> constituent_values(const SpectralState& u, const SpectralState& du,
                                                 double q1, double q2);

}  // namespace nsk
