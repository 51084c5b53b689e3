#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nmx/material.hpp>

#include <cmath>
#include <stdexcept>

#include "test_util.hpp"

using namespace nmx;
using testutil::noise_field;
using testutil::rel_diff;

namespace {

MonotoneTable cubic_table() {
  // exact samples of f(s) = s^3; log-log interpolation reproduces the
  // power law, so the custom model mirrors pure_power with p = 4
  MonotoneTable t;
  for (double s : {1e-4, 1e-2, 1.0, 1e2, 1e4}) {
    t.s.push_back(s);
    t.f.push_back(s * s * s);
  }
  return t;
}

}  // namespace

TEST_CASE("weight evaluates the shifted power decay") {
  CHECK(gamma_eval(WeightSpec{2.0, 1.0}, 0.0) == 1.0);
  CHECK(rel_diff(gamma_eval(WeightSpec{2.0, 1.0}, 1.0), 0.25) <= 1e-15);
  CHECK(rel_diff(gamma_eval(WeightSpec{1.0, 3.0}, 2.0), 1.0) <= 1e-15);
  CHECK_THROWS_AS((void)gamma_eval(WeightSpec{1.0, 1.0}, -0.5), std::invalid_argument);
}

TEST_CASE("weight field peaks at the box center") {
  const GridSpec g{8, 6.0};
  const WeightSpec w{2.0, 1.5};
  const ScalarField gam = gamma_field(g, w);
  const int c = g.n / 2;
  const auto idx = c + g.n * (c + std::ptrdiff_t(g.n) * c);
  CHECK(gam.data(idx) == w.scale);
  CHECK(rel_diff(gam.data.maxCoeff(), w.scale) <= 1e-15);
  CHECK(gam.data.minCoeff() > 0.0);
}

TEST_CASE("monotone law hits hand values") {
  const auto pure = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  CHECK(pure.f0(1.0, 0.0) == 0.0);
  CHECK(rel_diff(pure.f0(1.0, 2.0), 8.0) <= 1e-15);
  CHECK(rel_diff(pure.f0(2.0, 2.0), 16.0) <= 1e-15);

  const auto dbl = NonlinearityModel::double_power(3.0, 5.0, WeightSpec{0.0, 1.0});
  CHECK(rel_diff(dbl.f0(1.0, 0.5), 0.0625) <= 1e-15);  // steep branch below 1
  CHECK(rel_diff(dbl.f0(1.0, 1.0), 1.0) <= 1e-15);
  CHECK(rel_diff(dbl.f0(1.0, 2.0), 4.0) <= 1e-15);     // shallow branch above 1

  CHECK_THROWS_AS((void)pure.f0(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("primitive of the law matches closed forms") {
  const auto pure = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  CHECK(pure.F(1.0, 0.0) == 0.0);
  CHECK(rel_diff(pure.F(1.0, 2.0), 4.0) <= 1e-15);

  const auto dbl = NonlinearityModel::double_power(3.0, 5.0, WeightSpec{0.0, 1.0});
  CHECK(rel_diff(dbl.F(1.0, 0.5), std::pow(0.5, 5.0) / 5.0) <= 1e-14);
  CHECK(rel_diff(dbl.F(1.0, 2.0), (1.0 / 5.0 - 1.0 / 3.0) + 8.0 / 3.0) <= 1e-14);

  const auto cus = NonlinearityModel::custom_monotone(cubic_table(), 4.0, 4.0, WeightSpec{0.0, 1.0});
  SplitMix64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const double s = std::exp2(8.0 * rng.symmetric());
    CHECK(rel_diff(cus.F(1.0, s), std::pow(s, 4.0) / 4.0) <= 1e-9);
  }
}

TEST_CASE("inverse law hits hand values and round-trips") {
  const auto pure = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  CHECK(rel_diff(pure.psi0(1.0, 8.0), 2.0) <= 1e-14);
  CHECK(pure.psi0(1.0, 0.0) == 0.0);

  const auto dbl = NonlinearityModel::double_power(3.0, 5.0, WeightSpec{0.0, 1.0});
  CHECK(rel_diff(dbl.psi0(1.0, 1.0), 1.0) <= 1e-14);
  CHECK(rel_diff(dbl.psi0(1.0, 0.0625), 0.5) <= 1e-14);
  CHECK(rel_diff(dbl.psi0(1.0, 4.0), 2.0) <= 1e-14);

  const auto cus = NonlinearityModel::custom_monotone(cubic_table(), 4.0, 4.0, WeightSpec{0.0, 1.0});
  SplitMix64 rng(9);
  for (const auto* m : {&pure, &dbl, &cus}) {
    for (int i = 0; i < 100; ++i) {
      const double gamma = std::exp2(3.0 * rng.symmetric());
      const double s = std::exp2(10.0 * rng.symmetric());
      const double z = std::exp2(10.0 * rng.symmetric());
      CHECK(rel_diff(m->psi0(gamma, m->f0(gamma, s)), s) <= 1e-10);
      CHECK(rel_diff(m->f0(gamma, m->psi0(gamma, z)), z) <= 1e-10);
    }
  }
}

TEST_CASE("inverse primitive matches closed forms and convex duality") {
  const auto pure = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  CHECK(rel_diff(pure.Psi(1.0, 1.0), 0.75) <= 1e-15);
  CHECK(pure.Psi(1.0, 0.0) == 0.0);
  CHECK(pure.fenchel_defect(1.0, 1.0) <= 1e-15);

  const auto dbl = NonlinearityModel::double_power(3.0, 5.0, WeightSpec{0.0, 1.0});
  const auto cus = NonlinearityModel::custom_monotone(cubic_table(), 4.0, 4.0, WeightSpec{0.0, 1.0});
  SplitMix64 rng(13);
  for (const auto* m : {&pure, &dbl, &cus}) {
    for (int i = 0; i < 100; ++i) {
      const double gamma = std::exp2(3.0 * rng.symmetric());
      const double s = std::exp2(8.0 * rng.symmetric());
      const double scale = std::max(1.0, s * m->f0(gamma, s));
      CHECK(m->fenchel_defect(gamma, s) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("law and inverse are monotone and superlinear on a dyadic ladder") {
  const auto pure = NonlinearityModel::pure_power(3.5, WeightSpec{0.0, 1.0});
  const auto dbl = NonlinearityModel::double_power(3.0, 5.0, WeightSpec{0.0, 1.0});
  const auto cus = NonlinearityModel::custom_monotone(cubic_table(), 4.0, 4.0, WeightSpec{0.0, 1.0});
  for (const auto* m : {&pure, &dbl, &cus}) {
    double prev_f = 0.0;
    double prev_ratio = 0.0;
    double prev_inv = 0.0;
    for (int e = -10; e <= 10; ++e) {
      const double s = std::exp2(double(e));
      const double f = m->f0(1.0, s);
      CHECK(f > prev_f);
      CHECK(f / s >= prev_ratio);  // superlinear growth
      const double inv = m->psi0(1.0, s);
      CHECK(inv > prev_inv);
      prev_f = f;
      prev_ratio = f / s;
      prev_inv = inv;
    }
  }
}

TEST_CASE("sandwich constants bound the Legendre slack") {
  const auto pure = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  CHECK(pure.c1() == 0.25);
  CHECK(pure.c2() == 0.25);

  const auto dbl = NonlinearityModel::double_power(3.0, 5.0, WeightSpec{0.0, 1.0});
  CHECK(rel_diff(dbl.c1(), 0.5 - 1.0 / 3.0) <= 1e-15);
  CHECK(rel_diff(dbl.c2(), 0.3) <= 1e-15);
  CHECK(dbl.c1() <= dbl.c2());

  SplitMix64 rng(17);
  for (const auto* m : {&pure, &dbl}) {
    for (int i = 0; i < 200; ++i) {
      const double gamma = std::exp2(3.0 * rng.symmetric());
      const double s = std::exp2(10.0 * rng.symmetric());
      const double fs = m->f0(gamma, s) * s;
      const double mid = 0.5 * fs - m->F(gamma, s);
      CHECK(mid >= m->c1() * fs - 1e-12 * fs);
      CHECK(mid <= m->c2() * fs + 1e-12 * fs);
    }
  }
}

TEST_CASE("pure power inverse has the conjugate-exponent growth") {
  const auto pure = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  SplitMix64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const double gamma = std::exp2(2.0 * rng.symmetric());
    const double z = std::exp2(10.0 * rng.symmetric());
    CHECK(rel_diff(pure.psi0(gamma, z), std::pow(z / gamma, 1.0 / 3.0)) <= 1e-12);
  }
}

TEST_CASE("segment inversion agrees with bisection on the table law") {
  const auto cus = NonlinearityModel::custom_monotone(cubic_table(), 4.0, 4.0, WeightSpec{0.0, 1.0});
  SplitMix64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const double gamma = std::exp2(2.0 * rng.symmetric());
    const double z = std::exp2(12.0 * rng.symmetric());
    CHECK(rel_diff(cus.psi0(gamma, z), cus.psi0_direct(gamma, z)) <= 1e-10);
  }
}

TEST_CASE("field maps preserve direction and invert each other") {
  const GridSpec g{8, 4.0};
  const auto m = NonlinearityModel::double_power(3.0, 4.0, WeightSpec{2.0, 1.0});
  const VectorField P = noise_field(g, 29);

  const VectorField E = psi_apply(P, m);
  double cross = 0.0;
  double scale = 0.0;
  for (std::int64_t i = 0; i < P.points(); ++i) {
    const double px = P.comp(0)(i), py = P.comp(1)(i), pz = P.comp(2)(i);
    const double ex = E.comp(0)(i), ey = E.comp(1)(i), ez = E.comp(2)(i);
    cross = std::max({cross, std::abs(py * ez - pz * ey), std::abs(pz * ex - px * ez),
                      std::abs(px * ey - py * ex)});
    scale = std::max(scale, std::sqrt((px * px + py * py + pz * pz) * (ex * ex + ey * ey + ez * ez)));
  }
  CHECK(cross <= 1e-12 * scale);
  CHECK(testutil::linf_diff(f_apply(E, m), P) <= 1e-10 * linf_norm(P));

  const VectorField z(g);
  CHECK(linf_norm(psi_apply(z, m)) == 0.0);
  CHECK(linf_norm(f_apply(z, m)) == 0.0);
}

TEST_CASE("field maps hit hand values under the unit weight") {
  const GridSpec g{4, 2.0};
  const auto m = NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0});
  VectorField P(g);
  P.comp(0).setConstant(8.0);
  const VectorField E = psi_apply(P, m);
  CHECK(rel_diff(E.comp(0).maxCoeff(), 2.0) <= 1e-14);
  CHECK(rel_diff(E.comp(0).minCoeff(), 2.0) <= 1e-14);
  const VectorField back = f_apply(E, m);
  CHECK(rel_diff(back.comp(0).minCoeff(), 8.0) <= 1e-13);
}

TEST_CASE("parameter windows are enforced") {
  const WeightSpec ok{1.5, 1.0};
  CHECK_NOTHROW(NonlinearityModel::pure_power(4.0, ok).validate());
  CHECK_NOTHROW(NonlinearityModel::double_power(3.0, 5.0, ok).validate());

  CHECK_THROWS_AS(NonlinearityModel::pure_power(2.0, ok).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::pure_power(6.0, ok).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::pure_power(7.0, ok).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::double_power(3.0, 2.0, ok).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::double_power(3.0, 2.5, ok).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::pure_power(4.0, WeightSpec{0.0, 1.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::pure_power(4.0, WeightSpec{3.0, 1.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::pure_power(4.0, WeightSpec{1.0, 0.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel::pure_power(4.0, WeightSpec{1.0, -2.0}).validate(),
                  std::invalid_argument);

  // cubic table slope 3 sits outside the declared window [4, 4]
  CHECK_THROWS_AS(NonlinearityModel::custom_monotone(cubic_table(), 5.0, 5.0, ok).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(NonlinearityModel::custom_monotone(cubic_table(), 3.5, 4.5, ok).validate());
}

TEST_CASE("table construction rejects malformed samples") {
  const WeightSpec ok{1.5, 1.0};
  MonotoneTable short_t{{1.0}, {1.0}};
  CHECK_THROWS_AS((void)NonlinearityModel::custom_monotone(short_t, 3.0, 4.0, ok),
                  std::invalid_argument);
  MonotoneTable mismatched{{1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS((void)NonlinearityModel::custom_monotone(mismatched, 3.0, 4.0, ok),
                  std::invalid_argument);
  MonotoneTable decreasing{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_AS((void)NonlinearityModel::custom_monotone(decreasing, 3.0, 4.0, ok),
                  std::invalid_argument);
  MonotoneTable nonpositive{{0.0, 1.0}, {1.0, 2.0}};
  CHECK_THROWS_AS((void)NonlinearityModel::custom_monotone(nonpositive, 3.0, 4.0, ok),
                  std::invalid_argument);
}
