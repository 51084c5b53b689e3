#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nmx/dual_energy.hpp"

namespace nmx {

enum class InitKind { gaussian, single_mode, from_file };

struct SolverConfig {
  int max_iters = 2000;
  double tol = 1e-6;         // on the relative dual residual
  double step0 = 1.0;
  double backtrack = 0.5;    // step shrink factor
  double armijo = 1e-4;      // sufficient-decrease constant
  std::uint64_t seed = 0;
  int seeds = 1;             // independent restarts (gaussian init only)
  InitKind init = InitKind::gaussian;
  std::string init_path;     // from_file init
};

struct TracePoint {
  int iter = 0;
  double value = 0.0;
  double residual = 0.0;
};

struct PrimalResidual {
  double value = 0.0;
  bool trivial = false;  // the reconstructed field is numerically zero
};

struct SolverReport {
  bool converged = false;
  int iterations = 0;
  double c_level = 0.0;        // constrained minimum of the dual energy
  double dual_residual = 0.0;  // ||grad|| / ||(-Lap)^{-1} P||
  double div_residual = 0.0;   // ||div P|| / ||P||
  double primal_energy = 0.0;
  double duality_gap = 0.0;    // |dual - primal| / max(1, |dual|)
  PrimalResidual primal;
  std::pair<double, double> nehari_norms{0.0, 0.0};
  double symmetry_defect = 0.0;  // quarter-turn defect of the primal field
  std::uint64_t seed = 0;        // seed of the reported run
  std::string failure_reason;
  std::vector<TracePoint> trace;
};

struct SolveOutput {
  SolverReport report;
  VectorField P;
  VectorField E;
};

// Starting field on the constraint manifold.  gaussian: centered bump
// exp(-|x - center|^2) along the first axis plus seeded uniform noise of
// amplitude 0.01, made solenoidal, then ray-scaled.  single_mode: the
// lowest solenoidal mode sin(2*pi*y/l) along the first axis, ray-scaled.
// from_file: a stored dual field, grid-checked, projected, ray-scaled.
VectorField init_field(const GridSpec& g, const NonlinearityModel& m, const SolverConfig& cfg);

struct StepState {
  double step = 0.0;   // trial step entering the iteration
  double value = 0.0;  // energy at the current iterate
};

struct StepResult {
  VectorField P;       // next iterate, on the manifold
  double value = 0.0;
  double step = 0.0;   // accepted step size
  int backtracks = 0;
  double grad_norm = 0.0;
  double denom_norm = 0.0;  // ||(-Lap)^{-1} P|| at the incoming iterate
};

// One projected-descent step: move against the gradient, re-project onto
// solenoidal fields, rescale to the constraint manifold, and accept by
// the Armijo rule on the constrained energy.  Throws std::runtime_error
// if the step collapses below 1e-14 without acceptance.
StepResult descend_step(const VectorField& P, const NonlinearityModel& m,
                        const SolverConfig& cfg, const StepState& state);

SolveOutput solve_ground_state(const GridSpec& g, const NonlinearityModel& m,
                               const SolverConfig& cfg);

// primal field E(x) = psi0(x, |P|) P/|P| recovered from the dual minimizer
VectorField reconstruct_primal(const VectorField& P, const NonlinearityModel& m);

// 1/2 int |curl E|^2 dx - int F(x, |E|) dx
double primal_energy(const VectorField& E, const NonlinearityModel& m);

// relative strong-form residual ||curlcurl E - f(x, E)|| / ||f(x, E)||
PrimalResidual primal_residual(const VectorField& E, const NonlinearityModel& m);

// max over the three axes of the relative defect under an exact
// quarter turn about the box center (diagnostic; the weight and the
// operators commute with these turns, minimizers need not)
double symmetry_defect(const VectorField& f);

}  // namespace nmx
