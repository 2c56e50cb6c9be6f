#include "iqccert/algorithms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using iqccert::make_algorithm;
using iqccert::Mat;
using iqccert::Method;
using iqccert::quad_worst_rate;
using iqccert::standard_tuning;
using iqccert::StateSpace;
using iqccert::Tuning;
using iqccert::TuningVariant;

namespace {

Tuning three_param(double alpha, double b1, double b2, double m, double L) {
  Tuning t;
  t.method = Method::three_param;
  t.alpha = alpha;
  t.beta1 = b1;
  t.beta2 = b2;
  t.m = m;
  t.L = L;
  return t;
}

}  // namespace

TEST(AlgorithmsTest, GradientRealization) {
  Tuning t = standard_tuning(Method::gradient, TuningVariant::popular, 1.0, 10.0);
  ASSERT_DOUBLE_EQ(t.alpha, 0.1);
  const StateSpace ss = make_algorithm(t);
  EXPECT_EQ(ss.states(), 1);
  EXPECT_DOUBLE_EQ(ss.a(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(ss.b(0, 0), -0.1);
  EXPECT_DOUBLE_EQ(ss.c(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(ss.d(0, 0), 0.0);
}

TEST(AlgorithmsTest, ThreeParamSpecializations) {
  // (alpha, b, b) produces exactly the nesterov matrices
  const Tuning nest = standard_tuning(Method::nesterov, TuningVariant::standard, 1.0, 10.0);
  const StateSpace a = make_algorithm(nest);
  const StateSpace b = make_algorithm(three_param(nest.alpha, nest.beta1, nest.beta1, 1.0, 10.0));
  EXPECT_EQ((a.a - b.a).max_abs(), 0.0);
  EXPECT_EQ((a.b - b.b).max_abs(), 0.0);
  EXPECT_EQ((a.c - b.c).max_abs(), 0.0);

  // (alpha, 0, 0) has the same closed-loop worst rate as the 1-state gradient
  const Tuning grad = standard_tuning(Method::gradient, TuningVariant::optimal, 1.0, 10.0);
  const double r1 = quad_worst_rate(grad);
  const double r2 = quad_worst_rate(three_param(grad.alpha, 0.0, 0.0, 1.0, 10.0));
  EXPECT_NEAR(r1, r2, 1e-10);
}

TEST(AlgorithmsTest, StandardTuningTable) {
  const Tuning hb = standard_tuning(Method::heavy_ball, TuningVariant::optimal, 1.0, 9.0);
  EXPECT_NEAR(hb.alpha, 0.25, 1e-15);
  EXPECT_NEAR(hb.beta1, 0.25, 1e-15);

  const Tuning g = standard_tuning(Method::gradient, TuningVariant::optimal, 1.0, 1.0);
  EXPECT_NEAR(g.alpha, 1.0, 1e-15);

  const Tuning n = standard_tuning(Method::nesterov, TuningVariant::standard, 1.0, 4.0);
  EXPECT_NEAR(n.alpha, 0.25, 1e-15);
  EXPECT_NEAR(n.beta1, 1.0 / 3.0, 1e-15);

  EXPECT_THROW(standard_tuning(Method::heavy_ball, TuningVariant::popular, 1.0, 4.0),
               std::invalid_argument);
}

TEST(AlgorithmsTest, QuadWorstRateClosedForms) {
  for (double kappa : {1.5, 2.0, 5.0, 10.0, 100.0, 1000.0}) {
    const double m = 1.0, L = kappa;
    const double rk = std::sqrt(kappa);
    EXPECT_NEAR(quad_worst_rate(standard_tuning(Method::gradient, TuningVariant::popular, m, L)),
                1.0 - 1.0 / kappa, 1e-8)
        << kappa;
    EXPECT_NEAR(quad_worst_rate(standard_tuning(Method::gradient, TuningVariant::optimal, m, L)),
                (kappa - 1.0) / (kappa + 1.0), 1e-8)
        << kappa;
    EXPECT_NEAR(quad_worst_rate(standard_tuning(Method::nesterov, TuningVariant::standard, m, L)),
                1.0 - 1.0 / rk, 1e-8)
        << kappa;
    EXPECT_NEAR(quad_worst_rate(standard_tuning(Method::nesterov, TuningVariant::optimal, m, L)),
                1.0 - 2.0 / std::sqrt(3.0 * kappa + 1.0), 1e-8)
        << kappa;
    EXPECT_NEAR(quad_worst_rate(standard_tuning(Method::heavy_ball, TuningVariant::optimal, m, L)),
                (rk - 1.0) / (rk + 1.0), 1e-8)
        << kappa;
  }
}

TEST(AlgorithmsTest, QuadWorstRateKappaOne) {
  EXPECT_NEAR(quad_worst_rate(standard_tuning(Method::gradient, TuningVariant::optimal, 1.0, 1.0)),
              0.0, 1e-12);
}

TEST(AlgorithmsTest, RateScaleInvariance) {
  // (m, L, alpha) -> (c m, c L, alpha / c) leaves the worst rate unchanged
  const double c = 7.3;
  Tuning t = standard_tuning(Method::nesterov, TuningVariant::standard, 1.0, 50.0);
  Tuning scaled = t;
  scaled.m *= c;
  scaled.L *= c;
  scaled.alpha /= c;
  EXPECT_NEAR(quad_worst_rate(t), quad_worst_rate(scaled), 1e-10);
}

TEST(AlgorithmsTest, RealizationEquivalence) {
  // conjugating the 2-state realization by invertible T preserves the rate
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const Tuning t = standard_tuning(Method::heavy_ball, TuningVariant::optimal, 1.0, 16.0);
  const StateSpace ss = make_algorithm(t);
  const double base = quad_worst_rate(ss, t.m, t.L);
  int done = 0;
  while (done < 10) {
    Mat tm(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) tm(i, j) = dist(rng);
    const double det = tm(0, 0) * tm(1, 1) - tm(0, 1) * tm(1, 0);
    if (std::abs(det) < 0.1) continue;
    Mat tinv = {{tm(1, 1) / det, -tm(0, 1) / det}, {-tm(1, 0) / det, tm(0, 0) / det}};
    const StateSpace conj(tm * ss.a * tinv, tm * ss.b, ss.c * tinv, ss.d);
    EXPECT_NEAR(quad_worst_rate(conj, t.m, t.L), base, 1e-8);
    ++done;
  }
}

TEST(AlgorithmsTest, NesterovRootMagnitudeFormula) {
  // spectral radius of the 2x2 closed loop equals the discriminant-branch
  // formula for the characteristic roots
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> adist(0.01, 1.0), bdist(0.0, 0.95), ldist(0.5, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = adist(rng), beta = bdist(rng), lam = ldist(rng);
    Tuning t = three_param(alpha, beta, beta, 0.5, 30.0);
    t.method = Method::nesterov;
    t.beta1 = t.beta2 = beta;
    const Mat t0 = iqccert::closed_loop_matrix(make_algorithm(t), lam);
    const double s = (1.0 - alpha * lam);
    const double disc = (1.0 + beta) * (1.0 + beta) * s * s - 4.0 * beta * s;
    double expected;
    if (disc >= 0.0)
      expected = 0.5 * std::abs((1.0 + beta) * s) + 0.5 * std::sqrt(disc);
    else
      expected = std::sqrt(beta * s);
    EXPECT_NEAR(iqccert::spectral_radius(t0), expected, 1e-10);
  }
}

TEST(AlgorithmsTest, FixedPointCheck) {
  const auto grad = make_algorithm(standard_tuning(Method::gradient, TuningVariant::popular, 1, 10));
  const auto fg = iqccert::fixed_point_check(grad);
  ASSERT_TRUE(fg.has_unit_eigenvalue);
  EXPECT_NEAR(std::abs(fg.xi_star[0]), 1.0, 1e-12);

  // nesterov: (A - I)v = 0 has solution v = (1, 1)/sqrt(2)
  const auto nest =
      make_algorithm(standard_tuning(Method::nesterov, TuningVariant::standard, 1, 10));
  const auto fn = iqccert::fixed_point_check(nest);
  ASSERT_TRUE(fn.has_unit_eigenvalue);
  EXPECT_NEAR(std::abs(fn.xi_star[0] - fn.xi_star[1]), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(fn.y_star), std::abs(fn.xi_star[0]), 1e-9);

  // A = [0.5] has no unit eigenvalue: verdict, not exception
  const StateSpace shrink(Mat{{0.5}}, Mat{{-0.1}}, Mat{{1.0}}, Mat{{0.0}});
  EXPECT_FALSE(iqccert::fixed_point_check(shrink).has_unit_eigenvalue);
}

TEST(AlgorithmsTest, InvalidTuningsRejected) {
  Tuning bad;
  bad.method = Method::gradient;
  bad.alpha = -0.1;
  bad.m = 1.0;
  bad.L = 10.0;
  EXPECT_THROW(make_algorithm(bad), std::invalid_argument);
  EXPECT_THROW(standard_tuning(Method::gradient, TuningVariant::popular, -1.0, 10.0),
               std::invalid_argument);
}
