#pragma once

#include <Eigen/Dense>

#include "nmx/grid.hpp"

namespace nmx {

// Real scalar field sampled on a GridSpec, n^3 values, x index fastest.
struct ScalarField {
  GridSpec grid;
  Eigen::ArrayXd data;

  explicit ScalarField(const GridSpec& g) : grid(g), data(Eigen::ArrayXd::Zero(g.points())) {}

  double& at(int jx, int jy, int jz) { return data[grid.idx(jx, jy, jz)]; }
  double at(int jx, int jy, int jz) const { return data[grid.idx(jx, jy, jz)]; }
};

// Real vector field, three components stored component-major in one flat
// array of 3*n^3 doubles; within a component the x index runs fastest.
class VectorField {
 public:
  explicit VectorField(const GridSpec& g)
      : grid_(g), data_(Eigen::ArrayXd::Zero(3 * g.points())) {}

  const GridSpec& grid() const { return grid_; }
  std::int64_t points() const { return grid_.points(); }

  Eigen::Map<Eigen::ArrayXd> comp(int c) {
    return {data_.data() + c * points(), points()};
  }
  Eigen::Map<const Eigen::ArrayXd> comp(int c) const {
    return {data_.data() + c * points(), points()};
  }

  Eigen::ArrayXd& data() { return data_; }
  const Eigen::ArrayXd& data() const { return data_; }

  double& at(int c, int jx, int jy, int jz) { return data_[c * points() + grid_.idx(jx, jy, jz)]; }
  double at(int c, int jx, int jy, int jz) const {
    return data_[c * points() + grid_.idx(jx, jy, jz)];
  }

  bool all_finite() const { return data_.isFinite().all(); }

  // pointwise Euclidean magnitude |f(x)|
  Eigen::ArrayXd magnitude() const {
    return (comp(0).square() + comp(1).square() + comp(2).square()).sqrt();
  }

  VectorField& operator+=(const VectorField& o) { data_ += o.data_; return *this; }
  VectorField& operator-=(const VectorField& o) { data_ -= o.data_; return *this; }
  VectorField& operator*=(double a) { data_ *= a; return *this; }

  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double a, VectorField f) { return f *= a; }

 private:
  GridSpec grid_;
  Eigen::ArrayXd data_;
};

// Complex spectral coefficients of a vector field, same layout as
// VectorField (component-major, x-frequency index fastest), full n^3
// complex modes per component.  Coefficients of a real field satisfy
// c(-m) = conj(c(m)).
class SpectralVectorField {
 public:
  explicit SpectralVectorField(const GridSpec& g)
      : grid_(g), data_(Eigen::ArrayXcd::Zero(3 * g.points())) {}

  const GridSpec& grid() const { return grid_; }
  std::int64_t points() const { return grid_.points(); }

  Eigen::Map<Eigen::ArrayXcd> comp(int c) {
    return {data_.data() + c * points(), points()};
  }
  Eigen::Map<const Eigen::ArrayXcd> comp(int c) const {
    return {data_.data() + c * points(), points()};
  }

  Eigen::ArrayXcd& data() { return data_; }
  const Eigen::ArrayXcd& data() const { return data_; }

  std::complex<double>& at(int c, int ix, int iy, int iz) {
    return data_[c * points() + grid_.idx(ix, iy, iz)];
  }
  std::complex<double> at(int c, int ix, int iy, int iz) const {
    return data_[c * points() + grid_.idx(ix, iy, iz)];
  }

 private:
  GridSpec grid_;
  Eigen::ArrayXcd data_;
};

}  // namespace nmx
