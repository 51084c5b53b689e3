#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "nmx/field.hpp"

namespace nmx {

// Radially decaying material weight Gamma(x) = scale * (1 + r)^(-alpha),
// r = |x - box center|.  The decay window 0 < alpha < 3 keeps the weighted
// dual norms compatible with the energy; validate() enforces it, while
// alpha = 0 (constant weight) is still evaluable for diagnostics.
struct WeightSpec {
  double alpha = 0.0;
  double scale = 1.0;
};

double gamma_eval(const WeightSpec& w, double r);
ScalarField gamma_field(const GridSpec& g, const WeightSpec& w);

enum class ModelKind { pure_power, double_power, custom_monotone };

// Samples of a superlinear monotone law s -> f0(s) at unit weight,
// interpolated linearly in log-log space (exact on power laws).  Outside
// the sampled range the first/last segment's power law continues.
struct MonotoneTable {
  std::vector<double> s;
  std::vector<double> f;
};

// Pointwise constitutive model.  The monotone law z = f0(x, s) relates
// field strengths; psi0 is its inverse in s, F and Psi the primitives of
// f0 and psi0.  All x-dependence enters through the scalar weight
// gamma = Gamma(x), so the scalar entry points take that value directly.
class NonlinearityModel {
 public:
  static NonlinearityModel pure_power(double p, WeightSpec w);
  static NonlinearityModel double_power(double p, double q, WeightSpec w);
  static NonlinearityModel custom_monotone(MonotoneTable table, double p, double q,
                                           WeightSpec w);

  ModelKind kind() const { return kind_; }
  double p() const { return p_; }
  double q() const { return q_; }
  const WeightSpec& weight() const { return weight_; }

  // monotone law and its primitive, s >= 0
  double f0(double gamma, double s) const;
  double F(double gamma, double s) const;

  // inverse law and its primitive, z >= 0.  For the custom kind psi0 is
  // found by safeguarded bisection: bracket growth capped at 200
  // doublings, accepted when |f0(s) - z| <= 1e-12 * max(1, z).
  double psi0(double gamma, double z) const;
  double Psi(double gamma, double z) const;

  // same inverse through closed-form segment inversion instead of
  // bisection; the field maps and energy loops use this path, and a test
  // pins it against psi0 at its acceptance tolerance
  double psi0_direct(double gamma, double z) const;

  // |F(s) + Psi(f0(s)) - s*f0(s)|; the convex-duality identity makes this
  // vanish, so the defect measures how consistently the four evaluators
  // are wired together
  double fenchel_defect(double gamma, double s) const;

  // constants 0 < c1 <= c2 < 1/2 with
  //   c1*f0(s)*s <= 1/2*f0(s)*s - F(s) <= c2*f0(s)*s  for all s >= 0
  double c1() const;
  double c2() const;

  // growth window, weight window, monotonicity of the table; throws
  // std::invalid_argument with a reason on violation
  void validate() const;

  // weight field on a grid, cached per grid
  const Eigen::ArrayXd& gamma_on(const GridSpec& g) const;
  // cached pow(Gamma, e) on a grid
  const Eigen::ArrayXd& gamma_power_on(const GridSpec& g, double e) const;

 private:
  NonlinearityModel() = default;

  ModelKind kind_ = ModelKind::pure_power;
  double p_ = 0.0;
  double q_ = 0.0;
  WeightSpec weight_;
  MonotoneTable table_;       // custom kind only
  std::vector<double> logs_;  // cached log of table_.s
  std::vector<double> logf_;  // cached log of table_.f
  std::vector<double> slope_; // per-segment log-log slope

  // unit-weight custom law and helpers
  double table_f(double s) const;
  double table_F(double s) const;

  struct GammaCache;
  std::shared_ptr<GammaCache> cache_;
};

// E(x) = psi0(Gamma(x), |P(x)|) * P(x)/|P(x)|, zero where P vanishes
VectorField psi_apply(const VectorField& P, const NonlinearityModel& m);

// P(x) = f0(Gamma(x), |E(x)|) * E(x)/|E(x)|, zero where E vanishes
VectorField f_apply(const VectorField& E, const NonlinearityModel& m);

// dual-space norms ( ||Gamma^(-1/p) f||_{p'}, ||Gamma^(-1/q) f||_{q'} )
// with e' = e/(e-1) the conjugate exponents
std::pair<double, double> weighted_norm_Z(const VectorField& f, const NonlinearityModel& m);

}  // namespace nmx
