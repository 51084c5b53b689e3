#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace nmx {

// Uniform periodic grid on [0,l)^3 with n points per axis, spacing h = l/n.
// Point j along an axis sits at x_j = j*h; the box is periodic, so x = l
// is identified with x = 0.
//
// Spectral convention: integer frequencies m run over {-n/2, ..., n/2-1}
// (standard unshuffled DFT order, index i <-> m = i for i < n/2, m = i-n
// otherwise) and wavenumbers are k = 2*pi*m/l.  Differentiation operators
// use wavenumber_d(), which maps the unpaired Nyquist frequency m = -n/2
// to zero.  Every multiplier operator in this codebase shares that single
// convention; mixing conventions breaks the exact operator algebra
// (div(project(f)) = 0, curlcurl = -Lap on solenoidal fields) on inputs
// with Nyquist content.
struct GridSpec {
  int n = 0;
  double l = 0.0;

  GridSpec(int n_, double l_) : n(n_), l(l_) {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("grid: n must be even and >= 4");
    if (!(l > 0.0)) throw std::invalid_argument("grid: l must be positive");
  }

  double h() const { return l / n; }
  std::int64_t points() const { return std::int64_t(n) * n * n; }

  double coord(int j) const { return h() * j; }
  Eigen::Vector3d point(int jx, int jy, int jz) const {
    return {coord(jx), coord(jy), coord(jz)};
  }
  Eigen::Vector3d center() const { return {l / 2, l / 2, l / 2}; }

  // integer frequency of DFT index i
  int freq(int i) const { return i < n / 2 ? i : i - n; }

  // raw wavenumber 2*pi*m/l, m in {-n/2, ..., n/2-1}
  double wavenumber(int i) const {
    return 2.0 * std::numbers::pi * freq(i) / l;
  }

  // differentiation wavenumber: as above but with the Nyquist mode zeroed
  double wavenumber_d(int i) const {
    return freq(i) == -n / 2 ? 0.0 : wavenumber(i);
  }

  // linear index, x fastest
  std::int64_t idx(int jx, int jy, int jz) const {
    return jx + std::int64_t(n) * (jy + std::int64_t(n) * jz);
  }

  bool operator==(const GridSpec& o) const { return n == o.n && l == o.l; }
};

}  // namespace nmx
