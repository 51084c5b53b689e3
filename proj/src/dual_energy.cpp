#include "nmx/dual_energy.hpp"

#include <cmath>
#include <stdexcept>

#include "nmx/fourier.hpp"

namespace nmx {
namespace {

// spectral weights 1/|k|^2 with null modes dropped; shared by quad_form
// and the gradient
double spectral_quad(const SpectralVectorField& c) {
  const GridSpec& g = c.grid();
  const int n = g.n;
  Eigen::ArrayXd k(n);
  for (int i = 0; i < n; ++i) k[i] = g.wavenumber_d(i);
  auto c0 = c.comp(0);
  auto c1 = c.comp(1);
  auto c2 = c.comp(2);
  double acc = 0.0;
  std::int64_t i = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++i) {
        const double k2 = k[ix] * k[ix] + k[iy] * k[iy] + k[iz] * k[iz];
        if (k2 == 0.0) continue;
        const double m2 = std::norm(c0[i]) + std::norm(c1[i]) + std::norm(c2[i]);
        acc += m2 / k2;
      }
    }
  }
  const double h = g.h();
  return h * h * h * acc / double(g.points());
}

}  // namespace

double j1(const VectorField& P, const NonlinearityModel& m) {
  const GridSpec& g = P.grid();
  const double h = g.h();
  const double vol = h * h * h;
  const Eigen::ArrayXd z = P.magnitude();
  if (m.kind() == ModelKind::pure_power) {
    const double pc = m.p() / (m.p() - 1.0);
    const Eigen::ArrayXd& gp = m.gamma_power_on(g, 1.0 - pc);
    return vol * (gp * z.pow(pc)).sum() / pc;
  }
  const Eigen::ArrayXd& gam = m.gamma_on(g);
  double acc = 0.0;
  for (std::int64_t i = 0; i < z.size(); ++i) acc += m.Psi(gam[i], z[i]);
  return vol * acc;
}

double quad_form(const VectorField& P) { return spectral_quad(to_spectral(P)); }

EnergyBreakdown j_energy(const VectorField& P, const NonlinearityModel& m) {
  EnergyBreakdown e;
  e.j1 = j1(P, m);
  e.quad = quad_form(P);
  e.total = e.j1 - 0.5 * e.quad;
  return e;
}

GradientData j_grad_data(const VectorField& P, const NonlinearityModel& m) {
  const GridSpec& g = P.grid();
  const int n = g.n;
  Eigen::ArrayXd k(n);
  for (int i = 0; i < n; ++i) k[i] = g.wavenumber_d(i);

  SpectralVectorField c = to_spectral(P);
  auto c0 = c.comp(0);
  auto c1 = c.comp(1);
  auto c2 = c.comp(2);

  // one sweep: divergence residual of P and the multiplier 1/|k|^2
  double div_acc = 0.0;
  double norm_acc = 0.0;
  std::int64_t i = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++i) {
        const double kx = k[ix], ky = k[iy], kz = k[iz];
        const double k2 = kx * kx + ky * ky + kz * kz;
        const std::complex<double> div = kx * c0[i] + ky * c1[i] + kz * c2[i];
        div_acc += std::norm(div);
        norm_acc += std::norm(c0[i]) + std::norm(c1[i]) + std::norm(c2[i]);
        const double w = k2 == 0.0 ? 0.0 : 1.0 / k2;
        c0[i] *= w;
        c1[i] *= w;
        c2[i] *= w;
      }
    }
  }
  const double h = g.h();
  const double parseval = h * h * h / double(g.points());
  const double div_norm = std::sqrt(parseval * div_acc);
  const double p_norm = std::sqrt(parseval * norm_acc);
  if (div_norm > 1e-10 * std::max(1.0, p_norm))
    throw std::invalid_argument("j_grad: input field is not divergence-free");

  GradientData out{helmholtz_project(psi_apply(P, m)), 0.0, 0.0};
  VectorField inv_lap = to_physical(c);
  out.grad -= inv_lap;
  out.grad_norm = l2_norm(out.grad);
  out.denom_norm = l2_norm(inv_lap);
  return out;
}

VectorField j_grad(const VectorField& P, const NonlinearityModel& m) {
  return std::move(j_grad_data(P, m).grad);
}

FiberingContext::FiberingContext(const VectorField& P, const NonlinearityModel& m)
    : m_(m), absP_(P.magnitude()) {
  const GridSpec& g = P.grid();
  const double h = g.h();
  h3_ = h * h * h;
  gam_ = &m_.gamma_on(g);
  quad_ = quad_form(P);
  zero_field_ = !(absP_.maxCoeff() > 0.0);
  if (m_.kind() == ModelKind::pure_power) {
    power_ray_ = true;
    pc_ = m_.p() / (m_.p() - 1.0);
    a_ = h3_ * (m_.gamma_power_on(g, 1.0 - pc_) * absP_.pow(pc_)).sum();
  }
}

double FiberingContext::value(double t) const {
  if (power_ray_) return a_ * std::pow(t, pc_) / pc_ - 0.5 * t * t * quad_;
  const Eigen::ArrayXd& gam = *gam_;
  double acc = 0.0;
  for (std::int64_t i = 0; i < absP_.size(); ++i) acc += m_.Psi(gam[i], t * absP_[i]);
  return h3_ * acc - 0.5 * t * t * quad_;
}

double FiberingContext::derivative(double t) const {
  if (power_ray_) return a_ * std::pow(t, pc_ - 1.0) - t * quad_;
  const Eigen::ArrayXd& gam = *gam_;
  double acc = 0.0;
  for (std::int64_t i = 0; i < absP_.size(); ++i)
    acc += m_.psi0_direct(gam[i], t * absP_[i]) * absP_[i];
  return h3_ * acc - t * quad_;
}

FiberingResult FiberingContext::scale() const {
  if (zero_field_) throw std::invalid_argument("nehari_scale: zero field has no fibering root");
  if (!(quad_ > 0.0))
    throw std::invalid_argument("nehari_scale: quadratic form vanishes, ray has no root");

  // phi(t) = derivative(t)/t is strictly decreasing with phi(0+) = +inf,
  // so the root bracket can be grown geometrically from t = 1
  auto phi = [this](double t) { return derivative(t) / t; };
  double lo = 1.0, hi = 1.0;
  if (phi(1.0) >= 0.0) {
    int grow = 0;
    while (phi(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++grow > 200) throw std::runtime_error("nehari_scale: bracket growth exhausted");
    }
  } else {
    int grow = 0;
    while (phi(lo) < 0.0) {
      hi = lo;
      lo *= 0.5;
      if (++grow > 200) throw std::runtime_error("nehari_scale: bracket growth exhausted");
    }
  }
  while (hi - lo > 1e-12 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (phi(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  FiberingResult r;
  r.t_star = 0.5 * (lo + hi);
  r.value = value(r.t_star);
  r.gamma_prime_residual = std::abs(derivative(r.t_star));
  r.relative_bracket = (hi - lo) / r.t_star;
  return r;
}

FiberingPoint fibering_gamma(const VectorField& P, const NonlinearityModel& m, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("fibering_gamma: t must be positive");
  FiberingContext ctx(P, m);
  return {ctx.value(t), ctx.derivative(t)};
}

FiberingResult nehari_scale(const VectorField& P, const NonlinearityModel& m) {
  return FiberingContext(P, m).scale();
}

VectorField nehari_project(const VectorField& P, const NonlinearityModel& m) {
  const FiberingResult r = nehari_scale(P, m);
  VectorField out = P;
  out *= r.t_star;
  return out;
}

double reduced_j(const VectorField& P, const NonlinearityModel& m) {
  return nehari_scale(P, m).value;
}

}  // namespace nmx
