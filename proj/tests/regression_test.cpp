// Copyright 2026 The occam-icl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>

#include "gtest/gtest.h"
#include "occam/regression.hpp"
#include "oracles/special_oracle.hpp"

namespace occam::regression {
namespace {

const double kLn2Pi = std::log(2.0 * std::numbers::pi);

RegressionContext make_context(Matrix x, Vector y) {
  RegressionContext ctx;
  ctx.query = Vector::Zero(x.cols());
  ctx.features = std::move(x);
  ctx.labels = std::move(y);
  return ctx;
}

// y = B w with w ~ N(0, I_k). For T ≤ k, y ~ N(0, B Bᵀ): evaluate that Gaussian
// with an LDLT factorization. For T > k, change variables on range(B): the
// density of w at the normal-equation solution times det(BᵀB)^{-1/2}.
double gaussian_density_oracle(const Matrix& b, const Vector& y) {
  if (b.rows() <= b.cols()) {
    const Eigen::MatrixXd sigma = b * b.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
    const double quad = y.dot(ldlt.solve(y));
    const double log_det = ldlt.vectorD().array().log().sum();
    return -0.5 * b.rows() * kLn2Pi - 0.5 * log_det - 0.5 * quad;
  }
  const Eigen::MatrixXd gram = b.transpose() * b;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Vector w = ldlt.solve(b.transpose() * y);
  if ((b * w - y).norm() > 1e-8 * y.norm()) return -std::numeric_limits<double>::infinity();
  return -0.5 * b.cols() * kLn2Pi - 0.5 * ldlt.vectorD().array().log().sum() - 0.5 * w.squaredNorm();
}

RegressionContext draw(Rng& rng, std::size_t d, Category cat, std::size_t t) {
  return generate_context(rng, sample_task(rng, d, cat), t);
}

// --- Tasks and contexts ------------------------------------------------------------

TEST(SampleTaskTest, SimplePadsWithExactZeros) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const RegressionTask task = sample_task(rng, 4, Category::kSimple);
    EXPECT_EQ(task.weights[2], 0.0);
    EXPECT_EQ(task.weights[3], 0.0);
    EXPECT_EQ(task.category(), Category::kSimple);
  }
  EXPECT_THROW(sample_task(rng, 5, Category::kSimple), DomainError);
  EXPECT_THROW(sample_task(rng, 0, Category::kComplex), DomainError);
}

TEST(SampleTaskTest, ChiSquareMeans) {
  Rng rng(2);
  double complex_mean = 0, simple_mean = 0;
  constexpr int kN = 10000;
  for (int i = 0; i < kN; ++i) {
    complex_mean += sample_task(rng, 20, Category::kComplex).weights.squaredNorm() / 20.0 / kN;
    simple_mean += sample_task(rng, 20, Category::kSimple).weights.squaredNorm() / kN;
  }
  EXPECT_NEAR(complex_mean, 1.0, 0.05);
  EXPECT_NEAR(simple_mean, 10.0, 0.5);
}

TEST(SampleTaskTest, MixedCategoryIsBalanced) {
  Rng rng(3);
  int simple = 0;
  for (int i = 0; i < 4000; ++i) simple += sample_mixed_task(rng, 6).category() == Category::kSimple;
  EXPECT_NEAR(simple / 4000.0, 0.5, 0.03);
}

TEST(GenerateContextTest, LabelsAreExactInnerProducts) {
  Rng rng(4);
  RegressionTask e1{2, 2, Vector::Unit(2, 0)};
  const RegressionContext ctx = generate_context(rng, e1, 10);
  for (Eigen::Index t = 0; t < 10; ++t) EXPECT_EQ(ctx.labels[t], ctx.features(t, 0));
  EXPECT_EQ(ctx.query.size(), 2);
  EXPECT_THROW(generate_context(rng, e1, 0), DomainError);
}

TEST(GenerateContextTest, ReproducibleUnderSeed) {
  Rng a(5), b(5);
  const RegressionContext ca = draw(a, 8, Category::kComplex, 6);
  const RegressionContext cb = draw(b, 8, Category::kComplex, 6);
  EXPECT_EQ(ca.features, cb.features);
  EXPECT_EQ(ca.labels, cb.labels);
  EXPECT_EQ(ca.query, cb.query);
}

TEST(GenerateContextTest, GramDiagonalMean) {
  Rng rng(6);
  double diag = 0, off = 0;
  constexpr int kN = 200;
  for (int i = 0; i < kN; ++i) {
    const RegressionContext ctx = draw(rng, 100, Category::kComplex, 5);
    const Matrix g = ctx.features * ctx.features.transpose() / 100.0;
    diag += g.diagonal().mean() / kN;
    off += g(0, 1) / kN;
  }
  EXPECT_NEAR(diag, 1.0, 0.05);
  EXPECT_NEAR(off, 0.0, 0.05);
}

// --- Least squares --------------------------------------------------------------

TEST(LsSolutionTest, MinNormExample) {
  Matrix x(1, 2);
  x << 1, 1;
  const Vector w = ls_solution(make_context(x, Vector::Constant(1, 2.0)), Restriction::kFull);
  EXPECT_NEAR(w[0], 1.0, 1e-14);
  EXPECT_NEAR(w[1], 1.0, 1e-14);
}

TEST(LsSolutionTest, RecoversSimpleTaskWhenOverdetermined) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const RegressionTask task = sample_task(rng, 20, Category::kSimple);
    const RegressionContext ctx = generate_context(rng, task, 20 + rng.uniform_int(20));
    EXPECT_LT((ls_solution(ctx, Restriction::kHalf) - task.weights).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((ls_solution(ctx, Restriction::kFull) - task.weights).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(LsSolutionTest, BothSolutionsInterpolateInAmbiguousRegime) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 10 + rng.uniform_int(10);
    const RegressionContext ctx = draw(rng, 20, Category::kSimple, t);
    const double scale = 1e-8 * ctx.labels.norm();
    for (auto r : {Restriction::kHalf, Restriction::kFull}) {
      EXPECT_LE((ctx.features * ls_solution(ctx, r) - ctx.labels).cwiseAbs().maxCoeff(), scale);
    }
  }
}

TEST(LsSolutionTest, FullInterpolatesAnyNoiselessContextWhenUnderdetermined) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 1 + rng.uniform_int(20);
    const RegressionContext ctx = draw(rng, 20, trial % 2 ? Category::kSimple : Category::kComplex, t);
    EXPECT_LE((ctx.features * ls_solution(ctx, Restriction::kFull) - ctx.labels).cwiseAbs().maxCoeff(),
              1e-8 * ctx.labels.norm());
  }
}

TEST(LsSolutionTest, FullSolutionHasSmallerNormInAmbiguousRegime) {
  // A_d† y is the minimum-norm interpolator, and the padded half solution
  // also interpolates here, so it can never be shorter.
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t t = 10 + rng.uniform_int(10);
    const RegressionContext ctx = draw(rng, 20, Category::kSimple, t);
    EXPECT_LE(ls_solution(ctx, Restriction::kFull).norm(), ls_solution(ctx, Restriction::kHalf).norm() + 1e-9);
  }
}

// --- Densities ------------------------------------------------------------------

TEST(MarginalLogDensityTest, InertSecondFeature) {
  Matrix x(1, 2);
  x << 1, 0;
  const RegressionContext ctx = make_context(x, Vector::Constant(1, 3.0));
  const double expected = -0.5 * kLn2Pi - 4.5;
  EXPECT_NEAR(marginal_log_density(ctx, Restriction::kHalf), expected, 1e-13);
  EXPECT_NEAR(marginal_log_density(ctx, Restriction::kFull), expected, 1e-13);
  EXPECT_NEAR(expected, -5.4189, 1e-4);
  const DimPosterior post = dim_posterior(ctx);
  EXPECT_NEAR(post.posterior[0], 0.5, 1e-12);
  EXPECT_NEAR(post.posterior[1], 0.5, 1e-12);
}

TEST(MarginalLogDensityTest, MatchesGaussianOracleAcrossRegimes) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 * (1 + rng.uniform_int(8));
    const std::size_t t = 1 + rng.uniform_int(2 * d);
    const RegressionContext ctx = draw(rng, d, trial % 2 ? Category::kSimple : Category::kComplex, t);
    for (auto r : {Restriction::kHalf, Restriction::kFull}) {
      const Matrix b = r == Restriction::kHalf ? Matrix(ctx.features.leftCols(d / 2)) : ctx.features;
      const double oracle = gaussian_density_oracle(b, ctx.labels);
      const double got = marginal_log_density(ctx, r);
      if (std::isinf(oracle)) {
        EXPECT_EQ(got, oracle) << "d=" << d << " T=" << t;
      } else {
        EXPECT_NEAR(got, oracle, 1e-8 * (1 + std::abs(oracle))) << "d=" << d << " T=" << t;
      }
    }
  }
}

TEST(MarginalLogDensityTest, MonteCarloOracleForSingleLabel) {
  // T=1: y = xᵀw is N(0, ‖x‖²); compare against a kernel density of sampled labels.
  Rng rng(12);
  Matrix x(1, 4);
  x << 0.5, -1.0, 0.3, 0.2;
  const double y0 = 0.7;
  const RegressionContext ctx = make_context(x, Vector::Constant(1, y0));
  constexpr int kN = 400000;
  constexpr double kH = 0.01;
  int inside = 0;
  for (int i = 0; i < kN; ++i) {
    Vector w(4);
    for (auto& v : w) v = rng.normal();
    inside += std::abs(x.row(0).dot(w) - y0) < kH;
  }
  const double mc = inside / (2.0 * kH * kN);
  EXPECT_NEAR(std::exp(marginal_log_density(ctx, Restriction::kFull)), mc, 0.02 * mc);
}

TEST(MarginalLogDensityTest, ComplexTaskExcludedBySimpleFamily) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const RegressionContext ctx = draw(rng, 20, Category::kComplex, 15);
    EXPECT_EQ(marginal_log_density(ctx, Restriction::kHalf), -std::numeric_limits<double>::infinity());
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = 11 + rng.uniform_int(30);
    const RegressionContext ctx = draw(rng, 20, Category::kComplex, t);
    EXPECT_EQ(marginal_log_density(ctx, Restriction::kHalf), -std::numeric_limits<double>::infinity());
  }
}

TEST(MarginalLogDensityTest, SimpleTaskBothFinite) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const RegressionContext ctx = draw(rng, 20, Category::kSimple, 15);
    EXPECT_TRUE(std::isfinite(marginal_log_density(ctx, Restriction::kHalf)));
    EXPECT_TRUE(std::isfinite(marginal_log_density(ctx, Restriction::kFull)));
  }
}

TEST(MarginalLogDensityTest, SingularDesignThrows) {
  Matrix x(2, 2);
  x << 1, 0, 2, 0;
  const RegressionContext ctx = make_context(x, Vector::Constant(2, 1.0));
  EXPECT_THROW(marginal_log_density(ctx, Restriction::kFull), SingularityError);
}

TEST(MarginalLogDensityTest, LogRatioGrowsWithDimension) {
  std::vector<double> means;
  for (std::size_t d : {16u, 32u, 64u}) {
    const std::size_t t = gap_length(d, 0.75);
    double mean = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      Rng rng(15, trial);
      const RegressionContext ctx = draw(rng, d, Category::kSimple, t);
      mean += (marginal_log_density(ctx, Restriction::kHalf) - marginal_log_density(ctx, Restriction::kFull)) / 200;
    }
    means.push_back(mean);
  }
  EXPECT_GT(means[0], 0.0);
  EXPECT_LT(means[0], means[1]);
  EXPECT_LT(means[1], means[2]);
}

// --- Posterior ------------------------------------------------------------------

TEST(DimPosteriorTest, SimpleTaskFavoursHalfDimension) {
  int confident = 0;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    Rng rng(16, trial);
    const DimPosterior p = dim_posterior(draw(rng, 20, Category::kSimple, 15));
    if (p.posterior[0] > 0.99) {
      ++confident;
      EXPECT_LT((p.w_bayes - p.w_half).norm() / p.w_half.norm(), 0.01);
    }
    EXPECT_NEAR(p.posterior.sum(), 1.0, 1e-12);
  }
  EXPECT_GE(confident, 475);
}

TEST(DimPosteriorTest, ComplexTaskGivesFullDimensionExactly) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const DimPosterior p = dim_posterior(draw(rng, 20, Category::kComplex, 15));
    EXPECT_EQ(p.posterior[1], 1.0);
    EXPECT_EQ(p.w_bayes, p.w_full);
  }
}

TEST(DimPosteriorTest, ShortContextUsesDensities) {
  Rng rng(18);
  for (int trial = 0; trial < 50; ++trial) {
    const DimPosterior p = dim_posterior(draw(rng, 20, Category::kSimple, 5));
    EXPECT_FALSE(p.by_membership);
    const double odds = std::exp(p.log_density_half - p.log_density_full);
    EXPECT_NEAR(p.posterior[0], odds / (1 + odds), 1e-9);
    const Vector mix = p.posterior[0] * p.w_half + p.posterior[1] * p.w_full;
    EXPECT_LT((p.w_bayes - mix).norm(), 1e-12 * (1 + mix.norm()));
  }
}

TEST(DimPosteriorTest, LongContextRecoversTrueWeights) {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const Category cat = trial % 2 ? Category::kSimple : Category::kComplex;
    const RegressionTask task = sample_task(rng, 12, cat);
    const DimPosterior p = dim_posterior(generate_context(rng, task, 12 + rng.uniform_int(12)));
    EXPECT_TRUE(p.by_membership);
    EXPECT_EQ(p.posterior[0], cat == Category::kSimple ? 1.0 : 0.0);
    EXPECT_LT((p.w_bayes - task.weights).norm(), 1e-6 * task.weights.norm());
  }
}

// --- Wishart log-determinants -------------------------------------------------------

TEST(ExpectedLogDetTest, TwoByTwoSpecialValue) {
  EXPECT_NEAR(expected_log_det(WishartForm::kRowGram, 2, 2), -2 * testing::kEulerGamma, 1e-12);
  EXPECT_NEAR(expected_log_det(WishartForm::kRowGram, 2, 2), -1.1544, 1e-4);
}

TEST(ExpectedLogDetTest, DomainChecks) {
  EXPECT_THROW(expected_log_det(WishartForm::kRowGram, 20, 21), DomainError);
  EXPECT_THROW(expected_log_det(WishartForm::kRowGram, 20, 0), DomainError);
  EXPECT_THROW(expected_log_det(WishartForm::kHalfColumnGram, 20, 9), DomainError);
  EXPECT_THROW(expected_log_det(WishartForm::kHalfColumnGram, 7, 9), DomainError);
}

TEST(ExpectedLogDetTest, SumOfDigammasOracle) {
  // ψ_p(a) = Σ_{i<p} ψ(a − i/2), with ψ evaluated by the series oracle.
  for (std::size_t t : {1u, 5u, 15u, 20u}) {
    double expected = t * std::numbers::ln2;
    for (std::size_t i = 0; i < t; ++i) expected += testing::digamma_series(10.0 - i / 2.0);
    EXPECT_NEAR(expected_log_det(WishartForm::kRowGram, 20, t), expected, 1e-10);
  }
}

void expect_monte_carlo_match(WishartForm form, std::size_t d, std::size_t t, std::uint64_t seed) {
  Rng rng(seed);
  constexpr int kN = 2000;
  std::vector<double> xs;
  for (int i = 0; i < kN; ++i) {
    Matrix a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = rng.normal();
    xs.push_back(form == WishartForm::kRowGram
                     ? log_det_gram(a, GramMode::kRowGram)
                     : log_det_gram(a.leftCols(static_cast<Eigen::Index>(d / 2)), GramMode::kColumnGram));
  }
  double mean = 0;
  for (double x : xs) mean += x / kN;
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean) / (kN - 1);
  const double se = std::sqrt(var / kN);
  EXPECT_NEAR(mean, expected_log_det(form, d, t), 3 * se);
}

TEST(ExpectedLogDetTest, RowGramMonteCarlo) { expect_monte_carlo_match(WishartForm::kRowGram, 20, 15, 20); }

TEST(ExpectedLogDetTest, HalfColumnGramMonteCarlo) {
  expect_monte_carlo_match(WishartForm::kHalfColumnGram, 20, 15, 21);
}

TEST(LogDetGapTest, LengthRule) {
  EXPECT_EQ(gap_length(16, 0.75), 12u);
  EXPECT_EQ(gap_length(20, 0.75), 15u);
  EXPECT_THROW(gap_length(2, 0.75), DomainError);
  EXPECT_THROW(gap_length(16, 0.5), DomainError);
  EXPECT_THROW(gap_length(16, 1.0), DomainError);
  EXPECT_THROW(log_det_gap_experiment(Rng(1), {2}, 0.75, 10), DomainError);
  EXPECT_THROW(log_det_gap_experiment(Rng(1), {16}, 0.75, 0), DomainError);
}

TEST(LogDetGapTest, GrowsLikeDLogD) {
  const std::vector<GapRow> rows = log_det_gap_experiment(Rng(22), {16, 32, 64, 128}, 0.75, 300);
  ASSERT_EQ(rows.size(), 4u);
  double lo = 1e300, hi = -1e300;
  for (const GapRow& row : rows) {
    EXPECT_NEAR(row.mean, row.analytic, 3 * row.std_error) << "d=" << row.d;
    lo = std::min(lo, row.normalized());
    hi = std::max(hi, row.normalized());
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 2.0);
}

TEST(LogDetGapTest, ThreadCountDoesNotChangeDraws) {
  const auto a = log_det_gap_experiment(Rng(23), {16, 32}, 0.75, 40, 1);
  const auto b = log_det_gap_experiment(Rng(23), {16, 32}, 0.75, 40, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean, b[i].mean);
    EXPECT_EQ(a[i].stddev, b[i].stddev);
  }
}

}  // namespace
}  // namespace occam::regression
