#include <gtest/gtest.h>

#include <cmath>

#include "trinoid/quadrature.hpp"

using namespace trinoid;
using quad::cplx;

TEST(Quadrature, PolynomialIsExactOnOnePanel) {
  auto f = [](double t) { return quad::CVec<1>{cplx(3 * t * t + 2 * t + 1, 0)}; };
  const auto r = quad::integrate<1>(f, 0.0, 2.0);
  EXPECT_NEAR(r.value[0].real(), 8.0 + 4.0 + 2.0, 1e-13);
  EXPECT_EQ(r.panels, 1);
}

TEST(Quadrature, ComplexExponential) {
  auto f = [](double t) { return quad::CVec<1>{std::exp(cplx(0, 7) * t)}; };
  const auto r = quad::integrate<1>(f, 0.0, 3.0);
  const cplx exact = (std::exp(cplx(0, 21)) - 1.0) / cplx(0, 7);
  EXPECT_LT(std::abs(r.value[0] - exact), 1e-11);
}

TEST(Quadrature, VectorComponentsConvergeTogether) {
  auto f = [](double t) { return quad::CVec<2>{cplx(std::cos(t), 0), cplx(0, std::sqrt(t))}; };
  const auto r = quad::integrate<2>(f, 0.0, 1.0, {1e-12, 4000});
  EXPECT_NEAR(r.value[0].real(), std::sin(1.0), 1e-12);
  EXPECT_NEAR(r.value[1].imag(), 2.0 / 3.0, 1e-12);
  EXPECT_LE(r.error[0], 1e-12);
  EXPECT_LE(r.error[1], 1e-12);
}

TEST(Quadrature, ReversedIntervalNegates) {
  auto f = [](double t) { return quad::CVec<1>{cplx(std::exp(t), 0)}; };
  const auto a = quad::integrate<1>(f, 0.0, 1.0);
  const auto b = quad::integrate<1>(f, 1.0, 0.0);
  EXPECT_NEAR(a.value[0].real(), -b.value[0].real(), 1e-14);
}

TEST(Quadrature, DivergentIntegralReportsAchievedError) {
  auto f = [](double t) { return quad::CVec<1>{cplx(1.0 / t, 0)}; };
  try {
    quad::integrate<1>(f, 0.0, 1.0, {1e-10, 200});
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.achieved_error(), 1e-10);
  }
}
