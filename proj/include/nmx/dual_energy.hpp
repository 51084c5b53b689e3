#pragma once

#include "nmx/material.hpp"
#include "nmx/operators.hpp"

namespace nmx {

// Dual energy of a polarization field P:
//   J(P) = int Psi(x, |P|) dx - 1/2 int (-Lap)^{-1} P . P dx.
// Critical points of J restricted to divergence-free fields are the
// objects the solver looks for; the scaling structure along rays t -> tP
// (the fibering map) singles out the constraint manifold where
// d/dt J(tP) = 0 at t = 1.

struct EnergyBreakdown {
  double j1 = 0.0;    // int Psi(x, |P|) dx
  double quad = 0.0;  // int (-Lap)^{-1} P . P dx
  double total = 0.0; // j1 - quad / 2
};

struct FiberingPoint {
  double value = 0.0;       // J(tP)
  double derivative = 0.0;  // d/dt J(tP)
};

struct FiberingResult {
  double t_star = 0.0;                 // positive root of the fibering derivative
  double value = 0.0;                  // J(t_star P)
  double gamma_prime_residual = 0.0;   // |d/dt J(tP)| at t_star
  double relative_bracket = 0.0;       // final bisection width / t_star
};

double j1(const VectorField& P, const NonlinearityModel& m);

// int (-Lap)^{-1} P . P dx, evaluated as a spectral sum; nonnegative up
// to roundoff because the multiplier is
double quad_form(const VectorField& P);

EnergyBreakdown j_energy(const VectorField& P, const NonlinearityModel& m);

// L^2 gradient of J within the divergence-free subspace:
//   grad J(P) = project(psi(x, P)) - (-Lap)^{-1} P.
// Throws std::invalid_argument if ||div P|| > 1e-10 * max(1, ||P||);
// the formula represents the derivative only against solenoidal
// directions, so a non-solenoidal P is a caller bug.
VectorField j_grad(const VectorField& P, const NonlinearityModel& m);

// gradient plus the norms the descent loop divides by, from one sweep
struct GradientData {
  VectorField grad;
  double grad_norm = 0.0;
  double denom_norm = 0.0;  // ||(-Lap)^{-1} P||
};
GradientData j_grad_data(const VectorField& P, const NonlinearityModel& m);

FiberingPoint fibering_gamma(const VectorField& P, const NonlinearityModel& m, double t);

// Unique positive root t* of d/dt J(tP) = 0, located by bisection on the
// strictly decreasing map t -> (d/dt J(tP)) / t down to relative bracket
// width 1e-12.  Throws std::invalid_argument for the zero field or when
// the quadratic form of P vanishes (no root on the ray).
FiberingResult nehari_scale(const VectorField& P, const NonlinearityModel& m);

// t* P
VectorField nehari_project(const VectorField& P, const NonlinearityModel& m);

// J(t* P), the value minimized over the constraint manifold
double reduced_j(const VectorField& P, const NonlinearityModel& m);

// Caches everything the fibering map needs about a fixed P (|P|, the
// weight, the quadratic form, and for the pure power law the single
// moment that determines the whole ray) so that evaluations along t are
// cheap.  The descent loop leans on this.
class FiberingContext {
 public:
  FiberingContext(const VectorField& P, const NonlinearityModel& m);

  double quad() const { return quad_; }
  double value(double t) const;
  double derivative(double t) const;
  FiberingResult scale() const;

 private:
  NonlinearityModel m_;
  const Eigen::ArrayXd* gam_ = nullptr;  // owned by the model's cache
  Eigen::ArrayXd absP_;
  double h3_ = 0.0;
  double quad_ = 0.0;
  bool zero_field_ = true;
  // pure power ray: J(tP) = a t^{pc} / pc - quad t^2 / 2
  bool power_ray_ = false;
  double a_ = 0.0;
  double pc_ = 0.0;
};

}  // namespace nmx
