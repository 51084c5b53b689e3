#include "nmx/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nmx {
namespace {

// adaptive Simpson with Richardson correction
template <class Fn>
double simpson_rec(const Fn& fn, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class Fn>
double adaptive_simpson(const Fn& fn, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = fn(a);
  const double fm = fn(m);
  const double fb = fn(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // floor the tolerance at the roundoff scale of this span's own value;
  // an absolute tol below that keeps the recursion from ever accepting
  const double floor = 1e-13 * std::abs(whole);
  return simpson_rec(fn, a, b, fa, fm, fb, whole, std::max(tol, floor), 48);
}

// integrate fn over [0, hi], splitting at the interior knots; per-span
// tolerance keeps the summed error near 1e-10
template <class Fn>
double integrate_with_knots(const Fn& fn, const std::vector<double>& knots, double hi) {
  double acc = 0.0;
  double lo = 0.0;
  for (double k : knots) {
    if (k >= hi) break;
    if (k > lo) {
      acc += adaptive_simpson(fn, lo, k, 1e-11 * std::max(1.0, std::abs(acc)));
      lo = k;
    }
  }
  if (hi > lo) acc += adaptive_simpson(fn, lo, hi, 1e-11 * std::max(1.0, std::abs(acc)));
  return acc;
}

void require_nonnegative(double v, const char* who) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative argument");
}

}  // namespace

double gamma_eval(const WeightSpec& w, double r) {
  require_nonnegative(r, "gamma_eval");
  return w.scale * std::pow(1.0 + r, -w.alpha);
}

ScalarField gamma_field(const GridSpec& g, const WeightSpec& w) {
  ScalarField out(g);
  const Eigen::Vector3d c = g.center();
  std::int64_t i = 0;
  for (int jz = 0; jz < g.n; ++jz) {
    const double dz = g.coord(jz) - c.z();
    for (int jy = 0; jy < g.n; ++jy) {
      const double dy = g.coord(jy) - c.y();
      for (int jx = 0; jx < g.n; ++jx, ++i) {
        const double dx = g.coord(jx) - c.x();
        out.data[i] = gamma_eval(w, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
    }
  }
  return out;
}

struct NonlinearityModel::GammaCache {
  struct Key {
    int n;
    double l;
    double e;
    bool operator<(const Key& o) const {
      if (n != o.n) return n < o.n;
      if (l != o.l) return l < o.l;
      return e < o.e;
    }
  };
  std::mutex mu;
  std::map<Key, std::unique_ptr<Eigen::ArrayXd>> store;
};

NonlinearityModel NonlinearityModel::pure_power(double p, WeightSpec w) {
  NonlinearityModel m;
  m.kind_ = ModelKind::pure_power;
  m.p_ = p;
  m.q_ = p;
  m.weight_ = w;
  m.cache_ = std::make_shared<GammaCache>();
  return m;
}

NonlinearityModel NonlinearityModel::double_power(double p, double q, WeightSpec w) {
  NonlinearityModel m;
  m.kind_ = ModelKind::double_power;
  m.p_ = p;
  m.q_ = q;
  m.weight_ = w;
  m.cache_ = std::make_shared<GammaCache>();
  return m;
}

NonlinearityModel NonlinearityModel::custom_monotone(MonotoneTable table, double p, double q,
                                                     WeightSpec w) {
  if (table.s.size() != table.f.size() || table.s.size() < 2)
    throw std::invalid_argument("custom_monotone: table needs >= 2 matching samples");
  NonlinearityModel m;
  m.kind_ = ModelKind::custom_monotone;
  m.p_ = p;
  m.q_ = q;
  m.weight_ = w;
  m.table_ = std::move(table);
  const std::size_t k = m.table_.s.size();
  m.logs_.resize(k);
  m.logf_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(m.table_.s[i] > 0.0) || !(m.table_.f[i] > 0.0))
      throw std::invalid_argument("custom_monotone: samples must be positive");
    if (i > 0 && (m.table_.s[i] <= m.table_.s[i - 1] || m.table_.f[i] <= m.table_.f[i - 1]))
      throw std::invalid_argument("custom_monotone: samples must be strictly increasing");
    m.logs_[i] = std::log(m.table_.s[i]);
    m.logf_[i] = std::log(m.table_.f[i]);
  }
  m.slope_.resize(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i)
    m.slope_[i] = (m.logf_[i + 1] - m.logf_[i]) / (m.logs_[i + 1] - m.logs_[i]);
  m.cache_ = std::make_shared<GammaCache>();
  return m;
}

// unit-weight table law: log-log linear inside the samples, power-law
// continuation of the boundary segments outside
double NonlinearityModel::table_f(double s) const {
  if (s <= 0.0) return 0.0;
  const double x = std::log(s);
  std::size_t i;
  if (x <= logs_.front()) {
    i = 0;
  } else if (x >= logs_.back()) {
    i = slope_.size() - 1;
  } else {
    i = std::upper_bound(logs_.begin(), logs_.end(), x) - logs_.begin() - 1;
  }
  return std::exp(logf_[i] + slope_[i] * (x - logs_[i]));
}

double NonlinearityModel::table_F(double s) const {
  if (s <= 0.0) return 0.0;
  return integrate_with_knots([this](double u) { return table_f(u); }, table_.s, s);
}

double NonlinearityModel::f0(double gamma, double s) const {
  require_nonnegative(s, "f0");
  switch (kind_) {
    case ModelKind::pure_power:
      return gamma * std::pow(s, p_ - 1.0);
    case ModelKind::double_power:
      return gamma * std::min(std::pow(s, p_ - 1.0), std::pow(s, q_ - 1.0));
    case ModelKind::custom_monotone:
      return gamma * table_f(s);
  }
  return 0.0;
}

double NonlinearityModel::F(double gamma, double s) const {
  require_nonnegative(s, "F");
  switch (kind_) {
    case ModelKind::pure_power:
      return gamma * std::pow(s, p_) / p_;
    case ModelKind::double_power: {
      const double a = std::max(p_, q_);  // exponent active below s = 1
      const double b = std::min(p_, q_);  // exponent active above s = 1
      if (s <= 1.0) return gamma * std::pow(s, a) / a;
      return gamma * (1.0 / a - 1.0 / b) + gamma * std::pow(s, b) / b;
    }
    case ModelKind::custom_monotone:
      return gamma * table_F(s);
  }
  return 0.0;
}

double NonlinearityModel::psi0_direct(double gamma, double z) const {
  require_nonnegative(z, "psi0");
  if (z == 0.0) return 0.0;
  const double w = z / gamma;
  switch (kind_) {
    case ModelKind::pure_power:
      return std::pow(w, 1.0 / (p_ - 1.0));
    case ModelKind::double_power: {
      const double a = std::max(p_, q_);
      const double b = std::min(p_, q_);
      return w <= 1.0 ? std::pow(w, 1.0 / (a - 1.0)) : std::pow(w, 1.0 / (b - 1.0));
    }
    case ModelKind::custom_monotone: {
      // closed-form inversion of the interpolant, segment by segment
      const double y = std::log(w);
      std::size_t i;
      if (y <= logf_.front()) {
        i = 0;
      } else if (y >= logf_.back()) {
        i = slope_.size() - 1;
      } else {
        i = std::upper_bound(logf_.begin(), logf_.end(), y) - logf_.begin() - 1;
      }
      return std::exp(logs_[i] + (y - logf_[i]) / slope_[i]);
    }
  }
  return 0.0;
}

double NonlinearityModel::psi0(double gamma, double z) const {
  require_nonnegative(z, "psi0");
  if (kind_ != ModelKind::custom_monotone) return psi0_direct(gamma, z);
  if (z == 0.0) return 0.0;

  // safeguarded bisection on s -> f0(s) - z; the bracket is tightened in s
  // as well, not just until the f-residual is small, so the inverse stays
  // accurate where f0 is nearly flat
  const double ztol = 1e-12 * std::max(1.0, z);
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (f0(gamma, hi) < z) {
    hi *= 2.0;
    if (++doublings > 200) throw std::runtime_error("psi0: bracket growth exhausted");
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f0(gamma, mid) - z < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * lo) break;
  }
  const double s = 0.5 * (lo + hi);
  if (std::abs(f0(gamma, s) - z) <= ztol) return s;
  throw std::runtime_error("psi0: bisection failed to meet tolerance");
}

double NonlinearityModel::Psi(double gamma, double z) const {
  require_nonnegative(z, "Psi");
  if (z == 0.0) return 0.0;
  const double w = z / gamma;
  switch (kind_) {
    case ModelKind::pure_power: {
      const double pc = p_ / (p_ - 1.0);
      return gamma * std::pow(w, pc) / pc;
    }
    case ModelKind::double_power: {
      const double a = std::max(p_, q_);
      const double b = std::min(p_, q_);
      const double ac = a / (a - 1.0);
      const double bc = b / (b - 1.0);
      if (w <= 1.0) return gamma * std::pow(w, ac) / ac;
      return gamma * ((1.0 / ac - 1.0 / bc) + std::pow(w, bc) / bc);
    }
    case ModelKind::custom_monotone: {
      // primitive of the inverse law, integrated between the sample
      // images where the interpolant changes power
      const double val = integrate_with_knots(
          [this](double u) { return psi0_direct(1.0, u); }, table_.f, w);
      return gamma * val;
    }
  }
  return 0.0;
}

double NonlinearityModel::fenchel_defect(double gamma, double s) const {
  const double z = f0(gamma, s);
  return std::abs(F(gamma, s) + Psi(gamma, z) - s * z);
}

double NonlinearityModel::c1() const { return 0.5 - 1.0 / std::min(p_, q_); }
double NonlinearityModel::c2() const { return 0.5 - 1.0 / std::max(p_, q_); }

void NonlinearityModel::validate() const {
  if (!(weight_.scale > 0.0)) throw std::invalid_argument("model: weight scale must be positive");
  if (!(weight_.alpha > 0.0 && weight_.alpha < 3.0))
    throw std::invalid_argument("model: weight decay alpha must lie in (0, 3)");
  if (!(p_ > 2.0 && p_ < 6.0))
    throw std::invalid_argument("model: growth exponent p must lie in (2, 6)");
  if (!(q_ > 2.0)) throw std::invalid_argument("model: growth exponent q must exceed 2");
  if (!(q_ >= p_)) throw std::invalid_argument("model: exponents must be ordered q >= p");
  if (kind_ == ModelKind::custom_monotone) {
    const double lo = std::min(p_, q_) - 1.0;
    const double hi = std::max(p_, q_) - 1.0;
    for (double m : slope_) {
      if (m < lo - 1e-9 || m > hi + 1e-9)
        throw std::invalid_argument(
            "model: table slope leaves the declared growth window [p-1, q-1]");
    }
  }
}

const Eigen::ArrayXd& NonlinearityModel::gamma_on(const GridSpec& g) const {
  return gamma_power_on(g, 1.0);
}

const Eigen::ArrayXd& NonlinearityModel::gamma_power_on(const GridSpec& g, double e) const {
  GammaCache::Key key{g.n, g.l, e};
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->store.find(key);
  if (it != cache_->store.end()) return *it->second;

  Eigen::ArrayXd vals;
  if (e == 1.0) {
    vals = gamma_field(g, weight_).data;
  } else {
    GammaCache::Key base{g.n, g.l, 1.0};
    auto bit = cache_->store.find(base);
    if (bit == cache_->store.end()) {
      bit = cache_->store.emplace(base, std::make_unique<Eigen::ArrayXd>(gamma_field(g, weight_).data))
                .first;
    }
    vals = bit->second->pow(e);
  }
  auto ins = cache_->store.emplace(key, std::make_unique<Eigen::ArrayXd>(std::move(vals)));
  return *ins.first->second;
}

VectorField psi_apply(const VectorField& P, const NonlinearityModel& m) {
  const Eigen::ArrayXd& gam = m.gamma_on(P.grid());
  VectorField E(P.grid());
  auto p0 = P.comp(0);
  auto p1 = P.comp(1);
  auto p2 = P.comp(2);
  auto e0 = E.comp(0);
  auto e1 = E.comp(1);
  auto e2 = E.comp(2);
  const std::int64_t total = P.points();
  for (std::int64_t i = 0; i < total; ++i) {
    const double z = std::sqrt(p0[i] * p0[i] + p1[i] * p1[i] + p2[i] * p2[i]);
    if (z == 0.0) continue;
    const double factor = m.psi0_direct(gam[i], z) / z;
    e0[i] = factor * p0[i];
    e1[i] = factor * p1[i];
    e2[i] = factor * p2[i];
  }
  return E;
}

VectorField f_apply(const VectorField& E, const NonlinearityModel& m) {
  const Eigen::ArrayXd& gam = m.gamma_on(E.grid());
  VectorField P(E.grid());
  auto e0 = E.comp(0);
  auto e1 = E.comp(1);
  auto e2 = E.comp(2);
  auto q0 = P.comp(0);
  auto q1 = P.comp(1);
  auto q2 = P.comp(2);
  const std::int64_t total = E.points();
  for (std::int64_t i = 0; i < total; ++i) {
    const double s = std::sqrt(e0[i] * e0[i] + e1[i] * e1[i] + e2[i] * e2[i]);
    if (s == 0.0) continue;
    const double factor = m.f0(gam[i], s) / s;
    q0[i] = factor * e0[i];
    q1[i] = factor * e1[i];
    q2[i] = factor * e2[i];
  }
  return P;
}

std::pair<double, double> weighted_norm_Z(const VectorField& f, const NonlinearityModel& m) {
  const double pc = m.p() / (m.p() - 1.0);
  const double qc = m.q() / (m.q() - 1.0);
  const Eigen::ArrayXd& gp = m.gamma_power_on(f.grid(), 1.0 - pc);
  const Eigen::ArrayXd& gq = m.gamma_power_on(f.grid(), 1.0 - qc);
  const Eigen::ArrayXd mag = f.magnitude();
  const double h = f.grid().h();
  const double vol = h * h * h;
  const double np = std::pow(vol * (gp * mag.pow(pc)).sum(), 1.0 / pc);
  const double nq = std::pow(vol * (gq * mag.pow(qc)).sum(), 1.0 / qc);
  return {np, nq};
}

}  // namespace nmx
