#include "nmx/fourier.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace nmx {
namespace {

// One forward/backward plan pair per grid size, created once and reused
// via the new-array execute interface.  FFTW_ESTIMATE keeps planning
// deterministic (no runtime measurement) and FFTW_UNALIGNED lets the
// plans run on any buffer.  Plans live for the whole process.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair plans_for(int n) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::int64_t total = std::int64_t(n) * n * n;
  std::vector<std::complex<double>> a(total), b(total);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  // layout is x fastest, so x is FFTW's last (contiguous) dimension
  p.fwd = fftw_plan_dft_3d(n, n, n, pa, pb, FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_3d(n, n, n, pa, pb, FFTW_BACKWARD, flags);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fourier: plan creation failed");
  cache[n] = p;
  return p;
}

}  // namespace

SpectralVectorField to_spectral(const VectorField& f) {
  const int n = f.grid().n;
  const std::int64_t total = f.points();
  PlanPair plans = plans_for(n);
  SpectralVectorField out(f.grid());

  std::vector<std::complex<double>> in(total);
  for (int c = 0; c < 3; ++c) {
    auto src = f.comp(c);
    for (std::int64_t i = 0; i < total; ++i) in[i] = {src[i], 0.0};
    fftw_execute_dft(plans.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.comp(c).data()));
  }
  return out;
}

VectorField to_physical(const SpectralVectorField& c) {
  const int n = c.grid().n;
  const std::int64_t total = c.points();
  PlanPair plans = plans_for(n);
  VectorField out(c.grid());

  std::vector<std::complex<double>> in(total), raw(total);
  const double scale = 1.0 / double(total);
  double max_re = 0.0, max_im = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    auto src = c.comp(comp);
    for (std::int64_t i = 0; i < total; ++i) in[i] = src[i];
    fftw_execute_dft(plans.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(raw.data()));
    auto dst = out.comp(comp);
    for (std::int64_t i = 0; i < total; ++i) {
      const double re = raw[i].real() * scale;
      const double im = raw[i].imag() * scale;
      dst[i] = re;
      max_re = std::max(max_re, std::abs(re));
      max_im = std::max(max_im, std::abs(im));
    }
  }
  // unit floor keeps the zero field from tripping a 0/0 comparison
  if (max_im > 1e-9 * std::max(1.0, max_re)) {
    throw std::runtime_error(
        "to_physical: imaginary residue exceeds tolerance, coefficients are not "
        "conjugate-symmetric");
  }
  return out;
}

Eigen::ArrayXcd scalar_to_spectral(const ScalarField& s) {
  const std::int64_t total = s.grid.points();
  PlanPair plans = plans_for(s.grid.n);
  std::vector<std::complex<double>> in(total);
  for (std::int64_t i = 0; i < total; ++i) in[i] = {s.data[i], 0.0};
  Eigen::ArrayXcd out(total);
  fftw_execute_dft(plans.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

ScalarField scalar_to_physical(const Eigen::ArrayXcd& c, const GridSpec& g) {
  const std::int64_t total = g.points();
  if (c.size() != total) throw std::invalid_argument("scalar_to_physical: size mismatch");
  PlanPair plans = plans_for(g.n);
  std::vector<std::complex<double>> in(total), raw(total);
  for (std::int64_t i = 0; i < total; ++i) in[i] = c[i];
  fftw_execute_dft(plans.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(raw.data()));
  ScalarField out(g);
  const double scale = 1.0 / double(total);
  double max_re = 0.0, max_im = 0.0;
  for (std::int64_t i = 0; i < total; ++i) {
    const double re = raw[i].real() * scale;
    out.data[i] = re;
    max_re = std::max(max_re, std::abs(re));
    max_im = std::max(max_im, std::abs(raw[i].imag()) * scale);
  }
  if (max_im > 1e-9 * std::max(1.0, max_re)) {
    throw std::runtime_error(
        "scalar_to_physical: imaginary residue exceeds tolerance, coefficients are not "
        "conjugate-symmetric");
  }
  return out;
}

}  // namespace nmx
