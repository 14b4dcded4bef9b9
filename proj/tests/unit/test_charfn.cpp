#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "momentkit/charfn.hpp"
#include "momentkit/density.hpp"
#include "momentkit/error.hpp"
#include "momentkit/named_sequences.hpp"
#include "test_support.hpp"

using namespace momentkit;
using std::numbers::pi;

namespace {

MomentSequence chi01(int D) { return moments_from_density(momentkit::testing::unit_indicator(), D); }
MomentSequence dirac1(int D) { return dirac_sequence({1}, D); }

std::complex<double> eval1(const MomentSequence& s, double z, EvalDiagnostics* d = nullptr) {
  const CharSeries c(s);
  const double zz[] = {z};
  return char_eval(c, zz, d);
}

// Fornberg weights for the m-th derivative at 0 on the given nodes.
std::vector<double> fd_weights(const std::vector<double>& x, int m) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

}  // namespace

TEST(CharEval, DiracAtPi) {
  EvalDiagnostics d;
  const auto v = eval1(dirac1(40), pi, &d);
  EXPECT_NEAR(v.real(), -1.0, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
  EXPECT_TRUE(d.reliable);
  EXPECT_GT(d.cancellation, 1.0);
  EXPECT_LT(d.truncation_proxy, 1e-12);
}

TEST(CharEval, ZeroGivesMass) {
  const auto s = chi01(10).scale(Rational(3));
  EXPECT_EQ(eval1(s, 0.0), std::complex<double>(3.0, 0.0));
}

TEST(CharEval, IndicatorAtTwoPi) {
  const auto v = eval1(chi01(60), 2 * pi);
  EXPECT_NEAR(std::abs(v), 0.0, 1e-10);
  // closed form (e^{iz} - 1) / (iz) at z = 1
  const auto w = eval1(chi01(60), 1.0);
  const std::complex<double> I(0, 1);
  const auto expected = (std::exp(I) - 1.0) / I;
  EXPECT_NEAR(std::abs(w - expected), 0.0, 1e-14);
}

TEST(CharEval, ForcedDoubleFlagsCancellation) {
  const CharSeries c(gaussian_cf_sequence(1, 300));
  SeriesOptions opts;
  opts.precision_bits = 53;
  const double z[] = {7.0};
  const SeriesEvaluator ev(c, z, opts);
  const auto v = ev.evaluate(z);
  EXPECT_GT(v.diag.cancellation, kUnreliableCancellation);
  EXPECT_FALSE(v.diag.reliable);
}

TEST(CharEval, MultiprecisionPathIsAccurate) {
  EvalDiagnostics d;
  const auto v = eval1(gaussian_cf_sequence(1, 300), 6.0, &d);
  EXPECT_GT(d.precision_bits, 53);
  EXPECT_NEAR(v.real(), std::exp(-36.0), 1e-20);
  EXPECT_TRUE(d.reliable);
  EXPECT_GT(d.cancellation, 1e30);
}

TEST(CharEval, HermitianSymmetry) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const CharSeries c(chi01(120));
  for (int t = 0; t < 50; ++t) {
    const double z[] = {u(g)};
    const double mz[] = {-z[0]};
    EXPECT_NEAR(std::abs(char_eval(c, mz) - std::conj(char_eval(c, z))), 0.0, 1e-13);
  }
}

TEST(CharEval, TwoDimensionalProduct) {
  const auto s = gaussian_cf_sequence(2, 60);
  const CharSeries c(s);
  const double z[] = {0.7, -1.1};
  EXPECT_NEAR(char_eval(c, z).real(), std::exp(-(0.49 + 1.21)), 1e-13);
}

TEST(CharEvalAdaptive, GaussianExampleAtSpecifiedDegree) {
  const auto s = gaussian_cf_sequence(1, 80);
  const double z[] = {3.0};
  // Degree 80 truncates e^{-9} with ~4e-11 absolute (~3e-7 relative) error and
  // the last shells are ~1e-9..1e-10, so a 1e-10 relative rule cannot fire.
  try {
    char_eval_adaptive(s, z, 1e-10);
    FAIL() << "expected NotConverged";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotConverged);
  }
  const CharSeries c(s);
  EXPECT_NEAR(char_eval(c, z).real(), std::exp(-9.0), 1e-10);
}

TEST(CharEvalAdaptive, GaussianRelativeAccuracyWithMoreDegrees) {
  const double z[] = {3.0};
  const auto v = char_eval_adaptive(gaussian_cf_sequence(1, 120), z, 1e-10);
  EXPECT_TRUE(v.achieved);
  EXPECT_LT(v.diag.degree_used, 120);
  EXPECT_NEAR(v.value.real() / std::exp(-9.0), 1.0, 1e-10);
}

TEST(CharEvalAdaptive, ZeroReturnsMassImmediately) {
  const double z[] = {0.0};
  const auto v = char_eval_adaptive(chi01(5), z, 1e-12);
  EXPECT_EQ(v.value, std::complex<double>(1.0, 0.0));
  EXPECT_EQ(v.diag.degree_used, 0);
}

TEST(CharEvalAdaptive, TruncatedDiracDoesNotConverge) {
  const double z[] = {20.0};
  try {
    char_eval_adaptive(dirac1(10), z, 1e-10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotConverged);
  }
  EXPECT_THROW(char_eval_adaptive(dirac1(10), z, 0.0), Error);
}

TEST(CharEvalAdaptive, FiniteSeriesTerminates) {
  // s = (1, 0, ..., 0): f == 1, every later shell is structurally zero.
  std::vector<Rational> v(11);
  v[0] = 1;
  const auto s = MomentSequence::from_exact_values(1, 10, v);
  const double z[] = {5.0};
  EXPECT_EQ(char_eval_adaptive(s, z, 1e-12).value, std::complex<double>(1.0, 0.0));
}

TEST(OddEvenSplit, Examples) {
  const CharSeries c(dirac1(60));
  const double zero[] = {0.0};
  const auto a = odd_even_split(c, zero);
  EXPECT_EQ(a.f1, std::complex<double>(0.0, 0.0));
  EXPECT_EQ(a.f2, std::complex<double>(1.0, 0.0));
  const double z[] = {pi / 2};
  const auto b = odd_even_split(c, z);
  EXPECT_NEAR(std::abs(b.f1 - std::complex<double>(0.0, 1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b.f2), 0.0, 1e-12);
}

TEST(OddEvenSplit, EvenSequenceHasNoOddPart) {
  const CharSeries c(gaussian_cf_sequence(1, 80));
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const double z[] = {u(g)};
    EXPECT_EQ(odd_even_split(c, z).f1, std::complex<double>(0.0, 0.0));
  }
}

TEST(OddEvenSplit, RecombinesExactlyAndHasParityTypes) {
  const CharSeries c(chi01(100));
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int t = 0; t < 100; ++t) {
    const double z[] = {u(g)};
    const auto p = odd_even_split(c, z);
    EXPECT_EQ(p.f1 + p.f2, char_eval(c, z));
    EXPECT_LE(std::abs(p.f1.real()), 1e-13);
    EXPECT_LE(std::abs(p.f2.imag()), 1e-13);
  }
}

TEST(CharEval, FiniteDifferencesRecoverMoments) {
  const double h = 0.05;
  std::vector<double> nodes;
  for (int i = -6; i <= 6; ++i) nodes.push_back(i * h);
  for (const auto& s : {dirac1(80), gaussian_cf_sequence(1, 80)}) {
    const CharSeries c(s);
    std::vector<std::complex<double>> f;
    for (double x : nodes) {
      const double z[] = {x};
      f.push_back(char_eval(c, z));
    }
    for (int k = 0; k <= 4; ++k) {
      const auto w = fd_weights(nodes, k);
      std::complex<double> deriv = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) deriv += w[i] * f[i];
      const std::complex<double> mk = std::pow(std::complex<double>(0, -1), k) * deriv;
      EXPECT_NEAR(mk.real(), s[k].real(), 1e-6) << "k=" << k;
      EXPECT_NEAR(mk.imag(), 0.0, 1e-6) << "k=" << k;
    }
  }
}

TEST(RadiusEstimate, Indicator) {
  const auto r = radius_estimate(chi01(100), 1, 50);
  EXPECT_NEAR(r.c_hat, std::pow(101.0, -1.0 / 100.0), 1e-14);
  EXPECT_GE(r.c_hat, 0.90);
  EXPECT_LE(r.c_hat, 1.00);
  EXPECT_EQ(r.trend[0], Trend::kConverging);
  EXPECT_EQ(r.values[0].size(), 50u);
}

TEST(RadiusEstimate, DiracIsExactlyOne) {
  const auto r = radius_estimate(dirac1(40));
  for (double v : r.values[0]) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(r.c_hat, 1.0);
  EXPECT_EQ(r.trend[0], Trend::kConverging);
}

TEST(RadiusEstimate, GaussianDiverges) {
  const auto r = radius_estimate(gaussian_cf_sequence(1, 100));
  EXPECT_EQ(r.trend[0], Trend::kDiverging);
  EXPECT_GT(r.tail_slope[0], 0.4);
}

TEST(RadiusEstimate, ErrorsAndMultiDim) {
  try {
    radius_estimate(quartic_cf_sequence(1, 40));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativeEvenMoment);
  }
  EXPECT_THROW(radius_estimate(chi01(10), 1, 6), Error);
  const auto s2 = moments_from_density(DensitySpec::indicator(Box{{0, -2}, {1, 2}}), 40);
  const auto r = radius_estimate(s2, 1, 20);
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_GT(r.values[1].back(), r.values[0].back());
}

TEST(Bochner, SinglePointAtZero) {
  const auto rep = bochner_test(chi01(10), {{0.0}});
  EXPECT_DOUBLE_EQ(rep.min_eigenvalue_full, 1.0);
  EXPECT_TRUE(rep.psd_full);
}

TEST(Bochner, DiracTwoPoints) {
  const auto rep = bochner_test(dirac1(80), {{0.0}, {pi}});
  EXPECT_NEAR(rep.min_eigenvalue_full, 0.0, 1e-12);
  EXPECT_TRUE(rep.psd_full);
  EXPECT_LE(rep.hermitian_defect, 1e-13);
}

TEST(Bochner, QuarticWitnessIsViolated) {
  // Frozen witness from the randomized search below; eigenvalues of
  // (exp(-(z_j - z_k)^4)) at {-1/2, 0, 1/2} are -0.15726408, 0.63212056, 2.52514352.
  const auto rep = bochner_test(quartic_cf_sequence(1, 120), {{-0.5}, {0.0}, {0.5}});
  EXPECT_NEAR(rep.min_eigenvalue_full, -0.15726408, 1e-8);
  EXPECT_LE(rep.min_eigenvalue_full, -1e-6);
  EXPECT_FALSE(rep.psd_full);
}

TEST(Bochner, QuarticSeededSearchFindsViolation) {
  const auto s = quartic_cf_sequence(1, 400);
  double best = INFINITY;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pts = random_points(8, 1, -1.0, 1.0, seed);
    best = std::min(best, bochner_test(s, pts).min_eigenvalue_full);
  }
  EXPECT_LE(best, -1e-6);
}

TEST(Bochner, GaussianIsPositiveDefinite) {
  const auto s = gaussian_cf_sequence(1, 300);
  double worst = INFINITY;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto rep = bochner_test(s, random_points(6, 1, -3.0, 3.0, seed));
    worst = std::min(worst, rep.min_eigenvalue_full);
    EXPECT_LE(rep.hermitian_defect, 1e-13);
    EXPECT_TRUE(rep.psd_even);
  }
  EXPECT_GE(worst, -1e-8);
}

TEST(Bochner, EvenMatrixIsRealSymmetric) {
  const auto rep = bochner_test(chi01(120), {{-1.0}, {0.3}, {2.0}});
  EXPECT_TRUE(rep.psd_full);
  EXPECT_LE(rep.hermitian_defect, 1e-13);
}

TEST(Bochner, Normalization) {
  const auto s = chi01(40).scale(Rational(2));
  try {
    bochner_test(s, {{0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotNormalized);
  }
  BochnerOptions o;
  o.rescale = true;
  const auto rep = bochner_test(s, {{0.0}, {1.0}}, o);
  EXPECT_TRUE(rep.rescaled);
  EXPECT_TRUE(rep.psd_full);
}

TEST(Bochner, NotConvergedPropagates) {
  try {
    bochner_test(dirac1(10), {{0.0}, {20.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotConverged);
  }
}

TEST(Bochner, TwoDimensionalSmoke) {
  const auto rep = bochner_test(gaussian_cf_sequence(2, 80), random_points(4, 2, -1.0, 1.0, 9));
  EXPECT_TRUE(rep.psd_full);
  EXPECT_EQ(rep.points.size(), 4u);
}

TEST(RandomPoints, Deterministic) {
  EXPECT_EQ(random_points(5, 2, -1, 1, 42), random_points(5, 2, -1, 1, 42));
  EXPECT_NE(random_points(5, 2, -1, 1, 42), random_points(5, 2, -1, 1, 43));
  for (const auto& p : random_points(50, 3, -4, 4, 1)) {
    for (double v : p) {
      EXPECT_GE(v, -4.0);
      EXPECT_LT(v, 4.0);
    }
  }
}
