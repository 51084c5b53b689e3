#include "nmx/checks.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "nmx/dual_energy.hpp"
#include "nmx/fourier.hpp"
#include "nmx/rng.hpp"
#include "nmx/solver.hpp"

namespace nmx {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// random field with the Nyquist planes empty, so that every multiplier
// identity holds at roundoff level
VectorField bandlimited_random(const GridSpec& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  VectorField f(g);
  for (int c = 0; c < 3; ++c) {
    auto fc = f.comp(c);
    for (std::int64_t i = 0; i < g.points(); ++i) fc[i] = rng.symmetric();
  }
  SpectralVectorField s = to_spectral(f);
  const int ny = g.n / 2;
  for (int c = 0; c < 3; ++c) {
    auto sc = s.comp(c);
    for (int iz = 0; iz < g.n; ++iz)
      for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
          if (ix == ny || iy == ny || iz == ny) sc[g.idx(ix, iy, iz)] = 0.0;
  }
  return to_physical(s);
}

double rel_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0, scale = 0.0;
  for (std::int64_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    scale = std::max(scale, std::abs(b.data()[i]));
  }
  return m / std::max(1.0, scale);
}

CheckResult check_fft_round_trip(int n) {
  const GridSpec g(n, 6.4);
  const VectorField f = bandlimited_random(g, 11);
  const VectorField back = to_physical(to_spectral(f));
  const double err = rel_diff(back, f);
  return {"fft_round_trip_n" + std::to_string(n), err <= 1e-12, "relative error " + num(err)};
}

CheckResult check_operator_identities(int n) {
  const GridSpec g(n, 6.4);
  const VectorField f = bandlimited_random(g, 23);
  const VectorField u = helmholtz_project(f);

  const double div_u = l2_norm(divergence(u)) / l2_norm(u);
  const double proj_twice = rel_diff(helmholtz_project(u), u);
  const double div_curl = l2_norm(divergence(curl(f))) / std::max(1.0, l2_norm(curl(f)));
  const double cc_vs_lap = rel_diff(curl_curl(u), neg_laplacian(u));
  const double inv_round = rel_diff(inv_laplacian(neg_laplacian(u)), u);

  const double worst =
      std::max({div_u, proj_twice, div_curl, cc_vs_lap, inv_round});
  return {"operator_identities_n" + std::to_string(n), worst <= 1e-11,
          "worst identity defect " + num(worst)};
}

CheckResult check_parseval(int n) {
  const GridSpec g(n, 6.4);
  const VectorField f = bandlimited_random(g, 37);
  const double phys = l2_inner(f, f);
  SpectralVectorField s = to_spectral(f);
  double acc = 0.0;
  for (std::int64_t i = 0; i < s.data().size(); ++i) acc += std::norm(s.data()[i]);
  const double h = g.h();
  const double spec = h * h * h * acc / double(g.points());
  const double err = std::abs(phys - spec) / std::max(1.0, std::abs(phys));
  return {"parseval_n" + std::to_string(n), err <= 1e-12, "relative error " + num(err)};
}

CheckResult check_material_duality() {
  std::vector<NonlinearityModel> models;
  models.push_back(NonlinearityModel::pure_power(3.5, WeightSpec{1.2, 0.7}));
  models.push_back(NonlinearityModel::double_power(3.0, 4.5, WeightSpec{2.0, 1.3}));
  MonotoneTable t;
  for (int i = 0; i <= 24; ++i) {
    const double s = std::pow(10.0, -3.0 + 0.25 * i);
    t.s.push_back(s);
    t.f.push_back(std::pow(s, 2.4) + std::pow(s, 3.2));  // slopes within [2.4, 3.2]
  }
  models.push_back(NonlinearityModel::custom_monotone(t, 3.4, 4.2, WeightSpec{0.8, 1.0}));

  double worst = 0.0;
  for (const NonlinearityModel& m : models) {
    for (double gamma : {0.3, 1.0, 2.7}) {
      for (int i = -6; i <= 4; ++i) {
        const double s = std::pow(10.0, 0.5 * i);
        const double z = m.f0(gamma, s);
        const double defect = m.fenchel_defect(gamma, s) / std::max(1.0, s * z);
        const double inv = std::abs(m.psi0(gamma, z) - s) / std::max(1.0, s);
        worst = std::max({worst, defect, inv});
      }
    }
  }
  return {"material_duality", worst <= 1e-9, "worst defect " + num(worst)};
}

CheckResult check_fibering_root() {
  const GridSpec g(8, 6.4);
  const NonlinearityModel m = NonlinearityModel::pure_power(4.0, WeightSpec{2.0, 1.0});
  const VectorField P = helmholtz_project(bandlimited_random(g, 51));

  const FiberingResult r = nehari_scale(P, m);
  const double res = r.gamma_prime_residual / std::max(1.0, std::abs(r.value));
  // the constrained value is invariant along the ray
  const VectorField P2 = 2.0 * P;
  const double ray = std::abs(reduced_j(P2, m) - r.value) / std::max(1.0, std::abs(r.value));
  const double worst = std::max(res, ray);
  return {"fibering_root", worst <= 1e-10, "worst residual " + num(worst)};
}

CheckResult check_gradient_consistency() {
  const GridSpec g(8, 6.4);
  const NonlinearityModel m = NonlinearityModel::pure_power(4.0, WeightSpec{2.0, 1.0});
  VectorField P = helmholtz_project(bandlimited_random(g, 67));
  const VectorField G = j_grad(P, m);
  const VectorField Q = helmholtz_project(bandlimited_random(g, 83));
  const double slope = l2_inner(G, Q);

  double best = 1e300;
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
    VectorField Pp(g), Pm(g);
    Pp.data() = P.data() + eps * Q.data();
    Pm.data() = P.data() - eps * Q.data();
    const double fd =
        (j_energy(Pp, m).total - j_energy(Pm, m).total) / (2.0 * eps);
    best = std::min(best, std::abs(fd - slope) / std::max(1.0, std::abs(slope)));
  }
  return {"gradient_consistency", best <= 1e-5, "best relative error " + num(best)};
}

// The descent is certified by its guaranteed properties: exact monotone
// energy trace, manifold preservation, positive constrained level, and a
// residual that actually drops.  Full convergence to tight tolerances is a
// separate conversation; the dual energy has unbounded curvature where the
// field vanishes and plain projected descent crawls there (see README).
CheckResult check_descent(int n, double l, int max_iters, const char* name) {
  const NonlinearityModel m = NonlinearityModel::pure_power(4.0, WeightSpec{2.0, 1.0});
  SolverConfig cfg;
  cfg.tol = 1e-6;
  cfg.max_iters = max_iters;
  const GridSpec g(n, l);
  const SolveOutput out = solve_ground_state(g, m, cfg);
  const SolverReport& r = out.report;

  bool monotone = true;
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    if (r.trace[i].value > r.trace[i - 1].value) monotone = false;

  const FiberingResult fr = nehari_scale(out.P, m);
  const bool on_manifold = r.div_residual <= 1e-10 &&
                           fr.gamma_prime_residual <= 1e-9 * std::max(1.0, std::abs(fr.value));
  const double drop = r.trace.back().residual / r.trace.front().residual;
  const bool ok = monotone && on_manifold && r.c_level > 0.0 && !r.primal.trivial &&
                  (r.converged || drop <= 0.25) && out.P.all_finite() && out.E.all_finite();
  return {name, ok,
          "monotone " + std::string(monotone ? "true" : "false") + ", c " + num(r.c_level) +
              ", residual drop " + num(drop) + ", iterations " + std::to_string(r.iterations)};
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& level) {
  std::vector<CheckResult> out;
  out.push_back(check_fft_round_trip(8));
  out.push_back(check_operator_identities(8));
  out.push_back(check_parseval(8));
  out.push_back(check_material_duality());
  out.push_back(check_fibering_root());
  out.push_back(check_gradient_consistency());
  out.push_back(check_descent(8, 6.4, 400, "descent_n8"));
  if (level == "full") {
    out.push_back(check_fft_round_trip(16));
    out.push_back(check_operator_identities(16));
    out.push_back(check_parseval(16));
    out.push_back(check_descent(24, 16.0, 2000, "ground_state_n24"));
  }
  return out;
}

}  // namespace nmx
