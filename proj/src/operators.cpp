#include "nmx/operators.hpp"

#include <complex>
#include <stdexcept>
#include <string>

#include "nmx/fourier.hpp"

namespace nmx {
namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Eigen::ArrayXd axis_wavenumbers(const GridSpec& g) {
  Eigen::ArrayXd k(g.n);
  for (int i = 0; i < g.n; ++i) k[i] = g.wavenumber_d(i);
  return k;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

// Transforms f, rewrites each mode in place via op(kx, ky, kz, v0, v1, v2),
// transforms back.
template <class Op>
VectorField apply_multiplier(const VectorField& f, Op&& op) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  const Eigen::ArrayXd k = axis_wavenumbers(g);
  SpectralVectorField c = to_spectral(f);
  auto c0 = c.comp(0);
  auto c1 = c.comp(1);
  auto c2 = c.comp(2);
  std::int64_t i = 0;
  for (int iz = 0; iz < n; ++iz) {
    const double kz = k[iz];
    for (int iy = 0; iy < n; ++iy) {
      const double ky = k[iy];
      for (int ix = 0; ix < n; ++ix, ++i) {
        op(k[ix], ky, kz, c0[i], c1[i], c2[i]);
      }
    }
  }
  return to_physical(c);
}

}  // namespace

VectorField curl(const VectorField& f) {
  using C = std::complex<double>;
  return apply_multiplier(f, [](double kx, double ky, double kz, C& v0, C& v1, C& v2) {
    const C a = kI * (ky * v2 - kz * v1);
    const C b = kI * (kz * v0 - kx * v2);
    const C c = kI * (kx * v1 - ky * v0);
    v0 = a;
    v1 = b;
    v2 = c;
  });
}

VectorField curl_curl(const VectorField& f) {
  using C = std::complex<double>;
  return apply_multiplier(f, [](double kx, double ky, double kz, C& v0, C& v1, C& v2) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    const C kdotv = kx * v0 + ky * v1 + kz * v2;
    v0 = k2 * v0 - kdotv * kx;
    v1 = k2 * v1 - kdotv * ky;
    v2 = k2 * v2 - kdotv * kz;
  });
}

VectorField neg_laplacian(const VectorField& f) {
  using C = std::complex<double>;
  return apply_multiplier(f, [](double kx, double ky, double kz, C& v0, C& v1, C& v2) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    v0 *= k2;
    v1 *= k2;
    v2 *= k2;
  });
}

VectorField helmholtz_project(const VectorField& f) {
  using C = std::complex<double>;
  return apply_multiplier(f, [](double kx, double ky, double kz, C& v0, C& v1, C& v2) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {
      v0 = v1 = v2 = 0.0;
      return;
    }
    const C kdotv = (kx * v0 + ky * v1 + kz * v2) / k2;
    v0 -= kdotv * kx;
    v1 -= kdotv * ky;
    v2 -= kdotv * kz;
  });
}

VectorField inv_laplacian(const VectorField& f) {
  using C = std::complex<double>;
  return apply_multiplier(f, [](double kx, double ky, double kz, C& v0, C& v1, C& v2) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double w = k2 == 0.0 ? 0.0 : 1.0 / k2;
    v0 *= w;
    v1 *= w;
    v2 *= w;
  });
}

ScalarField divergence(const VectorField& f) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  const Eigen::ArrayXd k = axis_wavenumbers(g);
  SpectralVectorField c = to_spectral(f);
  auto c0 = c.comp(0);
  auto c1 = c.comp(1);
  auto c2 = c.comp(2);
  Eigen::ArrayXcd d(g.points());
  std::int64_t i = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++i) {
        d[i] = kI * (k[ix] * c0[i] + k[iy] * c1[i] + k[iz] * c2[i]);
      }
    }
  }
  return scalar_to_physical(d, g);
}

VectorField gradient(const ScalarField& s) {
  const GridSpec& g = s.grid;
  const int n = g.n;
  const Eigen::ArrayXd k = axis_wavenumbers(g);
  Eigen::ArrayXcd c = scalar_to_spectral(s);
  SpectralVectorField out(g);
  auto o0 = out.comp(0);
  auto o1 = out.comp(1);
  auto o2 = out.comp(2);
  std::int64_t i = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++i) {
        o0[i] = kI * k[ix] * c[i];
        o1[i] = kI * k[iy] * c[i];
        o2[i] = kI * k[iz] * c[i];
      }
    }
  }
  return to_physical(out);
}

double l2_inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_inner");
  const double h = a.grid().h();
  return h * h * h * (a.data() * b.data()).sum();
}

double l2_norm(const VectorField& f) { return std::sqrt(l2_inner(f, f)); }

double l2_norm(const ScalarField& s) {
  const double h = s.grid.h();
  return std::sqrt(h * h * h * s.data.square().sum());
}

double linf_norm(const VectorField& f) { return f.data().abs().maxCoeff(); }

}  // namespace nmx
