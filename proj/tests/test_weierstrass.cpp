#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "trinoid/weierstrass.hpp"

using namespace trinoid;

namespace {

std::vector<cplx> full(cplx lead, const poly::Coeffs& tail) {
  std::vector<cplx> v{lead};
  v.insert(v.end(), tail.begin(), tail.end());
  return v;
}

Vec3 re3(const std::array<cplx, 3>& v) { return {v[0].real(), v[1].real(), v[2].real()}; }

struct RandomEnds {
  std::mt19937_64 rng;
  explicit RandomEnds(unsigned seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  cplx small() { return {uniform(-0.3, 0.3), uniform(-0.3, 0.3)}; }

  PowerEndData complex_end() {
    double alpha = uniform(0.2, 2.0);
    if (std::fabs(alpha - 1.0) < 0.05) alpha += 0.1;
    const cplx g0 = std::polar(uniform(0.5, 2.0), uniform(-kPi, kPi));
    poly::Coeffs g1{small(), small()}, w1{small(), small(), small()};
    PowerEndData d = make_power_end_for_g0(alpha, g0, g1, w1);
    return d;
  }

  cplx point_in_d(double r_min = 0.05) { return std::polar(uniform(r_min, 1.0), uniform(0.0, kPi)); }
};

}  // namespace

TEST(Exponential, HalfTurnDisplacement) {
  for (double l : {-0.2, 0.5, 1.0, 3.0}) {
    const Vec3 p = integrate(make_exponential(l), cplx(0.0, kPi));
    EXPECT_NEAR(p.x(), 4.0 * l, 1e-10);
    EXPECT_NEAR(p.y(), 0.0, 1e-10);
    EXPECT_NEAR(p.z(), 0.0, 1e-10);
  }
}

TEST(Exponential, MatchesClosedFormPrimitive) {
  RandomEnds r(1);
  for (cplx c : {cplx(1, 0), kI}) {
    for (int k = 0; k < 50; ++k) {
      const double l = r.uniform(-0.24, 3.0);
      const cplx z(r.uniform(-2, 2), r.uniform(-kPi, kPi));
      const Vec3 p = integrate(make_exponential(l, c), z);
      EXPECT_LT((p - oracle::exponential_primitive(l, c, z)).norm(), 1e-9);
    }
  }
}

TEST(PowerEnd, UnperturbedThirdComponentIsLogarithmic) {
  for (double alpha : {1.0 / 3.0, 0.5, 1.5, 2.0}) {
    const PowerEndData d = make_power_end_for_g0(alpha, 1.0);
    const double k = (1.0 - alpha * alpha) / (2.0 * alpha);
    for (double t : {1.0, 0.5, 0.1, 0.01}) {
      EXPECT_NEAR(integrate(d, cplx(t, 0.0)).z(), k * std::log(t), 1e-11);
    }
  }
}

TEST(PowerEnd, MatchesTermwisePrimitive) {
  RandomEnds r(2);
  for (int k = 0; k < 100; ++k) {
    PowerEndData d = r.complex_end();
    if (k % 2) d = conjugate_data(d);
    const cplx z = r.point_in_d();
    const Vec3 p = integrate(d, z, 1e-11);
    const Vec3 q = re3(oracle::power_end_primitive(d.alpha, full(d.g0, d.g1), full(d.w0, d.w1), d.omega_factor, z));
    ASSERT_LT((p - q).norm(), 1e-9 * std::max(1.0, q.norm())) << "alpha " << d.alpha << " z " << z;
  }
}

TEST(PowerEnd, PathIndependence) {
  RandomEnds r(3);
  const double tol = 1e-10;
  for (int k = 0; k < 100; ++k) {
    const PowerEndData d = r.complex_end();
    const cplx z = r.point_in_d();
    const auto a = integrate_complex(d, {1.0, z, Route::RadialThenArc}, tol);
    const auto b = integrate_complex(d, {1.0, z, Route::ArcThenRadial}, tol);
    for (int j = 0; j < 3; ++j) ASSERT_LE(std::abs(a.value[j].real() - b.value[j].real()), 2 * tol);
  }
}

TEST(PowerEnd, CompatibilityConstraintEnforced) {
  const double alpha = 0.5;
  const double p = power_end_product(alpha);
  EXPECT_NO_THROW(make_power_end(alpha, 2.0, p / 2.0));
  EXPECT_THROW(make_power_end(alpha, 2.0, p / 2.0 * (1.0 + 1e-11)), DomainError);
  EXPECT_THROW(make_power_end(1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(make_power_end(-0.5, 1.0, 1.0), DomainError);
}

TEST(PowerEnd, PrincipalPlusCorrectionSplit) {
  RandomEnds r(4);
  for (int k = 0; k < 50; ++k) {
    const PowerEndData d = r.complex_end();
    const cplx z = r.point_in_d();
    const cplx c = d.omega_factor;
    const double third = integrate(d, z, 1e-11).z();
    const cplx split = 2.0 * c * d.g0 * d.w0 * branch_log(z) + 2.0 * c * correction_integral(d, z, 1e-12);
    ASSERT_NEAR(third, split.real(), 1e-10);
  }
}

TEST(Conjugate, ExponentialFactorRotates) {
  const auto d = conjugate_data(WeierstrassData(make_exponential(2.0)));
  EXPECT_EQ(std::get<ExponentialData>(d).omega_factor, kI);
}

TEST(Conjugate, TwiceNegates) {
  RandomEnds r(5);
  const PowerEndData d = r.complex_end();
  const PowerEndData dd = conjugate_data(conjugate_data(d));
  EXPECT_EQ(dd.omega_factor, cplx(-1, 0));
  for (int k = 0; k < 10; ++k) {
    const cplx z = r.point_in_d();
    EXPECT_LT((integrate(dd, z) + integrate(d, z)).norm(), 1e-9);
  }
}

TEST(Conjugate, PrincipalCoefficientRotates) {
  const double alpha = 0.5;
  const auto logs = power_end_log_coefficients(conjugate_data(make_power_end_for_g0(alpha, 1.0)));
  const double k = (1.0 - alpha * alpha) / (2.0 * alpha);
  EXPECT_NEAR(logs[2].real(), 0.0, 1e-15);
  EXPECT_NEAR(logs[2].imag(), k, 1e-15);
}

TEST(Conjugate, AssociateSurfacesAreIsometric) {
  RandomEnds r(6);
  for (int k = 0; k < 50; ++k) {
    const PowerEndData d = r.complex_end();
    const PowerEndData c = conjugate_data(d);
    const cplx za = r.point_in_d(0.1), zb = r.point_in_d(0.1);
    for (int s = 0; s <= 20; ++s) {
      const cplx z = za + (zb - za) * (s / 20.0);
      if (std::abs(z) < 0.05) continue;
      auto form = [&](const PowerEndData& data) {
        const auto f = weierstrass_integrand(data, z);
        Vec3 fx, fy;
        for (int j = 0; j < 3; ++j) {
          fx[j] = f[j].real();
          fy[j] = (kI * f[j]).real();
        }
        return Eigen::Vector3d(fx.dot(fx), fx.dot(fy), fy.dot(fy));
      };
      const Eigen::Vector3d a = form(d), b = form(c);
      ASSERT_LT((a - b).norm(), 1e-8 * std::max(1.0, a.norm()));
    }
  }
}

TEST(Correction, VanishesWithoutPerturbation) {
  const PowerEndData d = make_power_end_for_g0(0.5, 1.0);
  EXPECT_EQ(correction_integral(d, cplx(0.3, 0.4)), cplx(0.0, 0.0));
}

TEST(Correction, MatchesPolynomialPrimitive) {
  RandomEnds r(7);
  for (int k = 0; k < 50; ++k) {
    const PowerEndData d = r.complex_end();
    const cplx z = r.point_in_d(0.01);
    const poly::Coeffs h = correction_integrand(d);
    const std::vector<cplx> hv(h.begin(), h.end());
    const cplx exact = oracle::poly_primitive(hv, z) - oracle::poly_primitive(hv, 1.0);
    ASSERT_LT(std::abs(correction_integral(d, z) - exact), 1e-12);
  }
}

TEST(Correction, RealOnBoundaryForRealCoefficients) {
  const PowerEndData d = make_power_end_for_g0(0.5, 1.2, {0.01, -0.02, 0.005}, {0.003, 0.01});
  for (double t : {1.0, 0.5, 0.1, 1e-3}) {
    EXPECT_NEAR(correction_integral(d, cplx(t, 0.0)).imag(), 0.0, 1e-13);
    EXPECT_NEAR(correction_integral(d, std::polar(t, kPi)).imag(), 0.0, 1e-12);
  }
}

TEST(Correction, BoundedByCoefficientSum) {
  RandomEnds r(8);
  for (int k = 0; k < 20; ++k) {
    const PowerEndData d = r.complex_end();
    const double bound = correction_bound(d);
    double sup = 0.0;
    for (int i = 1; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) sup = std::max(sup, std::abs(correction_integral(d, std::polar(i / 20.0, kPi * j / 20.0))));
    ASSERT_LE(sup, bound);
  }
}

TEST(Correction, RejectsPointsOutsideD) {
  const PowerEndData d = make_power_end_for_g0(0.5, 1.0, {0.01}, {0.01});
  EXPECT_THROW(correction_integral(d, cplx(0.0, 0.0)), DomainError);
  EXPECT_THROW(correction_integral(d, cplx(0.5, -0.5)), DomainError);
  EXPECT_THROW(correction_integral(d, cplx(1.5, 0.0)), DomainError);
}

TEST(Paths, InvalidPathsRejected) {
  const WeierstrassData d = make_power_end_for_g0(0.5, 1.0);
  EXPECT_THROW(integrate(d, cplx(0.0, 0.0)), DomainError);
  EXPECT_THROW(integrate(d, cplx(0.0, -0.5)), DomainError);
  EXPECT_THROW(integrate(d, IntegrationPath{1.0, -1.0, Route::Straight}), DomainError);
  EXPECT_THROW(integrate(d, cplx(0.5, 0.5), -1.0), DomainError);
}

TEST(GaussNormal, Conventions) {
  const WeierstrassData pe = make_power_end_for_g0(0.5, 1.0);
  EXPECT_LT((gauss_normal(pe, cplx(0.0, 0.0)) - Vec3(0, 0, -1)).norm(), 1e-15);
  const WeierstrassData ex = make_exponential(1.0);
  EXPECT_NEAR(gauss_normal(ex, cplx(0.0, 0.7)).z(), 0.0, 1e-15);
  EXPECT_NEAR(gauss_normal(ex, cplx(0.0, 0.7)).norm(), 1.0, 1e-15);
  EXPECT_LT((inverse_stereographic(cplx(1e200, 0)) - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(GaussNormal, PowerEndLimitIsVertical) {
  const WeierstrassData d = make_power_end_for_g0(0.5, 1.3, {0.01}, {0.02});
  double prev = 2.0;
  for (double t = 0.5; t > 1e-8; t *= 0.1) {
    const double dev = (gauss_normal(d, std::polar(t, 0.7)) + Vec3::UnitZ()).norm();
    EXPECT_LT(dev, prev);
    prev = dev;
  }
  EXPECT_LT(prev, 1e-3);
}
