#include "nsk/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace nsk {

namespace {

// FFTW planning is not thread-safe; execution on new arrays is. Plans are made
// once per (dim, n, sign) with FFTW_ESTIMATE so results never depend on timing.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    int dims[kMaxDim];
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) {
      dims[d] = static_cast<int>(n);
      total *= n;
    }
    aligned_vector<cplx> in(total), out(total);
    fftw_plan p = fftw_plan_dft(dim, dims, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

void execute(const Grid& g, int sign, const cplx* in, cplx* out) {
  fftw_plan p = PlanCache::instance().get(g.dim(), g.n(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

ComplexField forward_transform(const RealField& f) {
  const Grid& g = f.grid();
  ComplexField out(g, f.components());
  aligned_vector<cplx> buf(g.size());
  for (std::size_t c = 0; c < f.components(); ++c) {
    auto src = f.component(c);
    for (std::size_t k = 0; k < g.size(); ++k) buf[k] = src[k];
    execute(g, FFTW_FORWARD, buf.data(), out.component(c).data());
  }
  return out;
}

ComplexField forward_transform(const ComplexField& f) {
  const Grid& g = f.grid();
  ComplexField out(g, f.components());
  for (std::size_t c = 0; c < f.components(); ++c)
    execute(g, FFTW_FORWARD, f.component(c).data(), out.component(c).data());
  return out;
}

ComplexField inverse_transform(const ComplexField& c) {
  const Grid& g = c.grid();
  ComplexField out(g, c.components());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t k = 0; k < c.components(); ++k) {
    auto dst = out.component(k);
    execute(g, FFTW_BACKWARD, c.component(k).data(), dst.data());
    for (auto& v : dst) v *= scale;
  }
  return out;
}

RealField inverse_transform_real(const ComplexField& c) {
  const Grid& g = c.grid();
  RealField out(g, c.components());
  aligned_vector<cplx> buf(g.size());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t k = 0; k < c.components(); ++k) {
    execute(g, FFTW_BACKWARD, c.component(k).data(), buf.data());
    auto dst = out.component(k);
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] = buf[i].real() * scale;
  }
  return out;
}

}  // namespace nsk
