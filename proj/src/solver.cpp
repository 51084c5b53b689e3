#include "nmx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "nmx/field_io.hpp"
#include "nmx/rng.hpp"

namespace nmx {
namespace {

VectorField gaussian_start(const GridSpec& g, std::uint64_t seed) {
  VectorField f(g);
  const Eigen::Vector3d c = g.center();
  auto f0 = f.comp(0);
  std::int64_t i = 0;
  for (int jz = 0; jz < g.n; ++jz) {
    const double dz = g.coord(jz) - c.z();
    for (int jy = 0; jy < g.n; ++jy) {
      const double dy = g.coord(jy) - c.y();
      for (int jx = 0; jx < g.n; ++jx, ++i) {
        const double dx = g.coord(jx) - c.x();
        f0[i] = std::exp(-(dx * dx + dy * dy + dz * dz));
      }
    }
  }
  SplitMix64 rng(seed);
  for (int comp = 0; comp < 3; ++comp) {
    auto fc = f.comp(comp);
    for (std::int64_t j = 0; j < f.points(); ++j) fc[j] += 0.01 * rng.symmetric();
  }
  return f;
}

VectorField single_mode_start(const GridSpec& g) {
  VectorField f(g);
  auto f0 = f.comp(0);
  std::int64_t i = 0;
  for (int jz = 0; jz < g.n; ++jz) {
    for (int jy = 0; jy < g.n; ++jy) {
      const double s = std::sin(2.0 * std::numbers::pi * jy / g.n);
      for (int jx = 0; jx < g.n; ++jx, ++i) f0[i] = s;
    }
  }
  return f;
}

struct LineOutcome {
  VectorField P;
  double value = 0.0;
  double accepted_step = 0.0;
  int backtracks = 0;
};

// backtracking line search against grad, with re-projection and ray
// rescaling folded into every trial so each candidate sits on the
// constraint manifold.  grad_small tells the collapse branch whether the
// gradient is already at residual level; collapsing there is
// stationarity, not a failure.
LineOutcome armijo_descend(const VectorField& P, const VectorField& grad, double grad_norm2,
                           double value, const NonlinearityModel& m, const SolverConfig& cfg,
                           double step, bool grad_small) {
  double s = step;
  int backtracks = 0;
  while (true) {
    if (s < 1e-14) {
      if (grad_small) return {P, value, s, backtracks};
      throw std::runtime_error(
          "descent step collapsed below 1e-14 with a non-stationary gradient");
    }
    VectorField Q(P.grid());
    Q.data() = P.data() - s * grad.data();
    Q = helmholtz_project(Q);
    bool usable = false;
    FiberingResult fr;
    try {
      fr = FiberingContext(Q, m).scale();
      usable = true;
    } catch (const std::invalid_argument&) {
      // trial degenerated to a field without a fibering root; shrink
    }
    if (usable && fr.value <= value - cfg.armijo * s * grad_norm2) {
      Q *= fr.t_star;
      return {std::move(Q), fr.value, s, backtracks};
    }
    s *= cfg.backtrack;
    ++backtracks;
  }
}

SolveOutput single_solve(const GridSpec& g, const NonlinearityModel& m, const SolverConfig& cfg,
                         std::uint64_t seed) {
  SolverConfig local = cfg;
  local.seed = seed;
  VectorField P = init_field(g, m, local);
  double value = j_energy(P, m).total;

  SolverReport rep;
  rep.seed = seed;
  double step = cfg.step0;
  int iter = 0;
  while (true) {
    GradientData gd = j_grad_data(P, m);
    const double residual = gd.grad_norm / gd.denom_norm;
    rep.trace.push_back({iter, value, residual});
    if (residual <= cfg.tol) {
      rep.converged = true;
      break;
    }
    if (iter >= cfg.max_iters) {
      rep.failure_reason = "no convergence within the iteration budget";
      break;
    }
    try {
      bool grad_small = gd.grad_norm <= cfg.tol * gd.denom_norm;
      LineOutcome lo = armijo_descend(P, gd.grad, gd.grad_norm * gd.grad_norm, value, m, cfg,
                                      step, grad_small);
      P = std::move(lo.P);
      value = lo.value;
      step = std::min(lo.accepted_step / cfg.backtrack, cfg.step0);
    } catch (const std::runtime_error& e) {
      rep.failure_reason = e.what();
      break;
    }
    ++iter;
  }
  rep.iterations = iter;
  rep.c_level = value;
  rep.dual_residual = rep.trace.back().residual;

  rep.div_residual = l2_norm(divergence(P)) / l2_norm(P);
  VectorField E = reconstruct_primal(P, m);
  rep.primal_energy = primal_energy(E, m);
  rep.duality_gap =
      std::abs(rep.c_level - rep.primal_energy) / std::max(1.0, std::abs(rep.c_level));
  rep.primal = primal_residual(E, m);
  rep.nehari_norms = weighted_norm_Z(P, m);
  rep.symmetry_defect = symmetry_defect(E);
  return {std::move(rep), std::move(P), std::move(E)};
}

}  // namespace

VectorField init_field(const GridSpec& g, const NonlinearityModel& m, const SolverConfig& cfg) {
  VectorField raw(g);
  switch (cfg.init) {
    case InitKind::gaussian:
      raw = gaussian_start(g, cfg.seed);
      break;
    case InitKind::single_mode:
      raw = single_mode_start(g);
      break;
    case InitKind::from_file: {
      StoredField stored = read_field(cfg.init_path);
      if (stored.kind == FieldKind::primal)
        throw std::invalid_argument("init_field: file holds a primal field, expected a dual one");
      if (!(stored.field.grid() == g))
        throw std::invalid_argument("init_field: stored grid does not match the run grid");
      raw = std::move(stored.field);
      break;
    }
  }
  VectorField sol = helmholtz_project(raw);
  if (l2_norm(sol) <= 1e-14 * std::max(1.0, l2_norm(raw)))
    throw std::invalid_argument("init_field: divergence-free projection annihilated the seed");
  return nehari_project(sol, m);
}

StepResult descend_step(const VectorField& P, const NonlinearityModel& m,
                        const SolverConfig& cfg, const StepState& state) {
  GradientData gd = j_grad_data(P, m);
  bool grad_small = gd.grad_norm <= cfg.tol * gd.denom_norm;
  LineOutcome lo = armijo_descend(P, gd.grad, gd.grad_norm * gd.grad_norm, state.value, m, cfg,
                                  state.step, grad_small);
  return {std::move(lo.P), lo.value,      lo.accepted_step,
          lo.backtracks,   gd.grad_norm, gd.denom_norm};
}

SolveOutput solve_ground_state(const GridSpec& g, const NonlinearityModel& m,
                               const SolverConfig& cfg) {
  const int restarts = cfg.init == InitKind::gaussian ? std::max(1, cfg.seeds) : 1;
  std::optional<SolveOutput> best;
  for (int k = 0; k < restarts; ++k) {
    SolveOutput run = single_solve(g, m, cfg, cfg.seed + std::uint64_t(k));
    const bool better =
        !best || (run.report.converged && !best->report.converged) ||
        (run.report.converged == best->report.converged && run.report.c_level < best->report.c_level);
    if (better) best.emplace(std::move(run));
  }
  return std::move(*best);
}

VectorField reconstruct_primal(const VectorField& P, const NonlinearityModel& m) {
  return psi_apply(P, m);
}

double primal_energy(const VectorField& E, const NonlinearityModel& m) {
  const VectorField c = curl(E);
  const Eigen::ArrayXd& gam = m.gamma_on(E.grid());
  const Eigen::ArrayXd s = E.magnitude();
  double acc = 0.0;
  for (std::int64_t i = 0; i < s.size(); ++i) acc += m.F(gam[i], s[i]);
  const double h = E.grid().h();
  return 0.5 * l2_inner(c, c) - h * h * h * acc;
}

PrimalResidual primal_residual(const VectorField& E, const NonlinearityModel& m) {
  VectorField lhs = curl_curl(E);
  const VectorField rhs = f_apply(E, m);
  lhs -= rhs;
  const double den = l2_norm(rhs);
  PrimalResidual r;
  r.trivial = l2_norm(E) <= 1e-12;
  r.value = r.trivial && den == 0.0 && l2_norm(lhs) == 0.0
                ? 0.0
                : l2_norm(lhs) / std::max(den, 1e-30);
  return r;
}

double symmetry_defect(const VectorField& f) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  auto f0 = f.comp(0);
  auto f1 = f.comp(1);
  auto f2 = f.comp(2);
  const double norm2 = f.data().square().sum();
  if (!(norm2 > 0.0)) return 0.0;

  double worst = 0.0;
  // quarter turns about the axes through the box center; the center sits
  // at index n/2, so the maps stay on the grid
  for (int axis = 0; axis < 3; ++axis) {
    double acc = 0.0;
    for (int jz = 0; jz < n; ++jz) {
      for (int jy = 0; jy < n; ++jy) {
        for (int jx = 0; jx < n; ++jx) {
          const std::int64_t i = g.idx(jx, jy, jz);
          std::int64_t s = 0;
          double r0 = 0.0, r1 = 0.0, r2 = 0.0;
          if (axis == 2) {  // (x, y) -> (-y, x)
            s = g.idx(jy, (n - jx) % n, jz);
            r0 = -f1[s];
            r1 = f0[s];
            r2 = f2[s];
          } else if (axis == 0) {  // (y, z) -> (-z, y)
            s = g.idx(jx, jz, (n - jy) % n);
            r0 = f0[s];
            r1 = -f2[s];
            r2 = f1[s];
          } else {  // (z, x) -> (-x, z)
            s = g.idx((n - jz) % n, jy, jx);
            r0 = f2[s];
            r1 = f1[s];
            r2 = -f0[s];
          }
          const double d0 = r0 - f0[i];
          const double d1 = r1 - f1[i];
          const double d2 = r2 - f2[i];
          acc += d0 * d0 + d1 * d1 + d2 * d2;
        }
      }
    }
    worst = std::max(worst, std::sqrt(acc / norm2));
  }
  return worst;
}

}  // namespace nmx
