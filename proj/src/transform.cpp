#include "anls/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace anls {
namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is. One immutable plan pair per grid size, created under a lock
// with FFTW_ESTIMATE (deterministic across runs, unlike FFTW_MEASURE).
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~PlanPair() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

const PlanPair& plans_for(int nx, int ny) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nx, ny);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto pp = std::make_unique<PlanPair>();
  std::size_t n = static_cast<std::size_t>(nx) * ny;
  fftw_complex* buf = fftw_alloc_complex(n);
  pp->fwd = fftw_plan_dft_2d(nx, ny, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  pp->bwd = fftw_plan_dft_2d(nx, ny, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  auto [pos, _] = cache.emplace(key, std::move(pp));
  return *pos->second;
}

struct FftwBuffer {
  fftw_complex* p;
  explicit FftwBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {
    if (!p) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

SpectralField forward_impl(const GridSpec& g, const std::vector<cdouble>& in) {
  g.validate();
  const PlanPair& pp = plans_for(g.nx, g.ny);
  std::size_t n = g.size();
  FftwBuffer buf(n);
  for (std::size_t k = 0; k < n; ++k) {
    buf.p[k][0] = in[k].real();
    buf.p[k][1] = in[k].imag();
  }
  fftw_execute_dft(pp.fwd, buf.p, buf.p);
  SpectralField out(g);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) out.c[k] = cdouble(buf.p[k][0], buf.p[k][1]) * scale;
  return out;
}

}  // namespace

SpectralField forward_transform(const RealField& f) {
  if (!f.finite()) fail_validation("forward_transform: non-finite real input");
  std::vector<cdouble> in(f.v.size());
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = f.v[k];
  return forward_impl(f.grid, in);
}

SpectralField forward_transform(const ComplexField& f) {
  if (!f.finite()) fail_validation("forward_transform: non-finite complex input");
  return forward_impl(f.grid, f.v);
}

ComplexField inverse_transform(const SpectralField& f) {
  f.grid.validate();
  const PlanPair& pp = plans_for(f.grid.nx, f.grid.ny);
  std::size_t n = f.grid.size();
  FftwBuffer buf(n);
  for (std::size_t k = 0; k < n; ++k) {
    buf.p[k][0] = f.c[k].real();
    buf.p[k][1] = f.c[k].imag();
  }
  fftw_execute_dft(pp.bwd, buf.p, buf.p);
  ComplexField out(f.grid);
  for (std::size_t k = 0; k < n; ++k) out.v[k] = cdouble(buf.p[k][0], buf.p[k][1]);
  return out;
}

RealField inverse_transform_real(const SpectralField& f, double imag_tol) {
  ComplexField z = inverse_transform(f);
  double max_abs = 0.0, max_imag = 0.0;
  for (const cdouble& w : z.v) {
    max_abs = std::max(max_abs, std::abs(w));
    max_imag = std::max(max_imag, std::abs(w.imag()));
  }
  if (max_abs > 0 && max_imag > imag_tol * max_abs)
    fail_inconsistency("inverse_transform_real: Hermitian symmetry corrupted (imag residue " +
                       std::to_string(max_imag / max_abs) + ")");
  RealField out(f.grid);
  for (std::size_t k = 0; k < z.v.size(); ++k) out.v[k] = z.v[k].real();
  return out;
}

}  // namespace anls
