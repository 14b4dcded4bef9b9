#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "momentkit/error.hpp"
#include "momentkit/linear_solvers.hpp"
#include "momentkit/quadrature.hpp"
#include "momentkit/richter.hpp"
#include "test_support.hpp"

using namespace momentkit;

namespace {

TruncatedFunctional quadratic_functional(std::vector<double> values) {
  TruncatedFunctional L;
  L.domain = Domain::interval(0.0, 1.0);
  for (int k = 0; k <= 2; ++k) {
    std::vector<Rational> c(static_cast<std::size_t>(k) + 1, 0);
    c.back() = 1;
    L.basis.push_back(BasisFunction::polynomial(Polynomial::univariate(c)));
  }
  L.values = std::move(values);
  return L;
}

TruncatedFunctional lebesgue01() { return quadratic_functional({1.0, 0.5, 1.0 / 3.0}); }

// Independent residual: max_j |L(f_j) - sum_i c_i f_j(x_i)|.
double recompute_residual(const TruncatedFunctional& L, const AtomicRepresentation& r) {
  double worst = 0.0;
  for (std::size_t j = 0; j < L.size(); ++j) {
    double s = 0.0;
    for (const auto& a : r.atoms) s += a.weight * L.basis[j].evaluate(a.x);
    worst = std::max(worst, std::abs(L.values[j] - s));
  }
  return worst;
}

AtomicRepresentation gauss_atoms() {
  const double h = 1.0 / (2.0 * std::sqrt(3.0));
  AtomicRepresentation r;
  r.atoms = {{{0.5 - h}, 0.5}, {{0.5 + h}, 0.5}};
  r.residual = atomic_residual(lebesgue01(), r.atoms);
  return r;
}

}  // namespace

TEST(Simplex, SmallLp) {
  // min -x1 - x2 s.t. x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
  const auto r = simplex_solve({{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {-1, -1, 0, 0});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[0], 1.6, 1e-12);
  EXPECT_NEAR(r.x[1], 1.2, 1e-12);
  EXPECT_NEAR(r.objective, -2.8, 1e-12);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  EXPECT_EQ(simplex_solve({{1, 1}}, {-1}, {1, 1}).status, LpStatus::kInfeasible);
  EXPECT_EQ(simplex_solve({{1, -1}}, {1}, {-1, 0}).status, LpStatus::kUnbounded);
}

TEST(Simplex, DegenerateRedundantRows) {
  const auto r = simplex_solve({{1, 1, 1}, {2, 2, 2}}, {1, 2}, {3, 1, 2});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.x[1], 1.0, 1e-12);
}

TEST(Nnls, MatchesKnownSolution) {
  const auto r = nnls({{1, 0}, {0, 1}, {1, 1}}, {2, -1, 1});
  EXPECT_NEAR(r.x[0], 1.5, 1e-12);
  EXPECT_EQ(r.x[1], 0.0);
}

TEST(LeastSquares, RidgeOnSingular) {
  const auto r = least_squares({{1, 1}, {1, 1}}, {2, 2});
  EXPECT_TRUE(r.ridge);
  EXPECT_NEAR(r.x[0] + r.x[1], 2.0, 1e-9);
}

TEST(Atomic, LebesgueMomentsFromGrid) {
  const auto L = lebesgue01();
  const auto r = atomic_decompose(L, make_candidate_grid(L));
  EXPECT_LE(r.atoms.size(), 3u);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_NEAR(recompute_residual(L, r), r.residual, 1e-15);
  for (const auto& a : r.atoms) {
    EXPECT_GT(a.weight, 0.0);
    EXPECT_TRUE(L.domain.contains(a.x));
  }
}

TEST(Atomic, GaussQuadratureIsValidAnswer) {
  EXPECT_LE(gauss_atoms().residual, 1e-15);
}

TEST(Atomic, RankOneGivesSingleAtom) {
  const auto L = quadratic_functional({1.0, 0.3, 0.09});
  const auto r = atomic_decompose(L, make_candidate_grid(L));
  ASSERT_EQ(r.atoms.size(), 1u);
  EXPECT_NEAR(r.atoms[0].x[0], 0.3, 1e-12);
  EXPECT_NEAR(r.atoms[0].weight, 1.0, 1e-12);
}

TEST(Atomic, OffGridAtomIsRefined) {
  const auto L = quadratic_functional({2.0, 2 * 0.3141, 2 * 0.3141 * 0.3141});
  const auto r = atomic_decompose(L, make_candidate_grid(L));
  EXPECT_TRUE(r.refined);
  EXPECT_FALSE(r.lp_feasible);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_LE(r.atoms.size(), 3u);
  double mass = 0.0;
  for (const auto& a : r.atoms) mass += a.weight;
  EXPECT_NEAR(mass, 2.0, 1e-10);
}

TEST(Atomic, ScaledGridPointIsExact) {
  const auto L0 = lebesgue01();
  const auto grid = make_candidate_grid(L0);
  const auto& p = grid[37];
  std::vector<double> v;
  for (const auto& f : L0.basis) v.push_back(2.5 * f.evaluate(p));
  const auto L = quadratic_functional(v);
  const auto r = atomic_decompose(L, grid);
  ASSERT_EQ(r.atoms.size(), 1u);
  EXPECT_EQ(r.atoms[0].x, p);
  EXPECT_NEAR(r.atoms[0].weight, 2.5, 1e-13);
  EXPECT_LE(r.residual, 1e-14);
}

TEST(Atomic, OutsideConeIsInfeasible) {
  const auto L = quadratic_functional({1.0, 0.5, 0.2});  // variance < 0
  try {
    atomic_decompose(L, make_candidate_grid(L));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
}

TEST(Atomic, RandomConeInteriorRoundTrips) {
  auto& g = momentkit::testing::rng();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(3, 0.0);
    for (int a = 0; a < 4; ++a) {
      const double x = u(g), w = 0.1 + u(g);
      v[0] += w;
      v[1] += w * x;
      v[2] += w * x * x;
    }
    const auto L = quadratic_functional(v);
    const auto r = atomic_decompose(L, make_candidate_grid(L));
    EXPECT_LE(r.atoms.size(), 3u);
    EXPECT_LE(recompute_residual(L, r), 1e-10);
    for (const auto& a : r.atoms) EXPECT_GT(a.weight, 0.0);
  }
}

TEST(Counterexample, AtomicSucceedsUsingOverridePoint) {
  const auto L = discontinuous_example();
  const auto grid = make_candidate_grid(L);
  const auto r = atomic_decompose(L, grid);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_LE(r.atoms.size(), 3u);
  bool uses_one = false;
  for (const auto& a : r.atoms) {
    EXPECT_GT(a.weight, 0.0);
    if (a.x[0] == 1.0) uses_one = true;
  }
  EXPECT_TRUE(uses_one);
  EXPECT_NEAR(recompute_residual(L, r), r.residual, 1e-14);
}

TEST(Counterexample, ExactSplitOnZeroOneTwo) {
  const auto L = discontinuous_example();
  const std::vector<Atom> atoms{{{0.0}, 7.0 / 9.0}, {{1.0}, 28.0 / 9.0}, {{2.0}, 7.0 / 9.0}};
  EXPECT_LE(atomic_residual(L, atoms), 1e-14);
}

TEST(Counterexample, SmoothingFailsForEveryFamily) {
  const auto L = discontinuous_example();
  const auto atomic = atomic_decompose(L, make_candidate_grid(L));
  for (FamilyKind kind : {FamilyKind::kGaussian, FamilyKind::kMollifier, FamilyKind::kBox}) {
    DiracFamily fam{kind, DiracFamily::default_sigmas()};
    try {
      smooth_representation(atomic, L, fam);
      ADD_FAILURE() << family_name(kind) << " smoothing unexpectedly succeeded";
    } catch (const SmoothingFailedError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSmoothingFailed);
      ASSERT_EQ(e.sweep().size(), fam.sigmas.size());
      for (const auto& s : e.sweep()) EXPECT_FALSE(s.accepted);
    }
  }
}

TEST(Counterexample, OverrideInvisibleToIntegrals) {
  const auto f2 = discontinuous_f2();
  const double one[] = {1.0};
  EXPECT_EQ(f2.evaluate(one), -1.0);
  EXPECT_EQ(f2.evaluate_ae(one), 1.0);
  EXPECT_NEAR(family_integral(FamilyKind::kGaussian, f2, one, 0.1), 1.01, 1e-14);
}

TEST(Smooth, GaussAtomsGaussianFamily) {
  const auto L = lebesgue01();
  const auto r = smooth_representation(gauss_atoms(), L, DiracFamily{FamilyKind::kGaussian, {0.1, 0.05, 0.01}});
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_GE(r.sweep.back().sigma, 0.01);
  EXPECT_TRUE(r.sweep.back().accepted);
  for (const auto& a : r.atoms) EXPECT_GT(a.weight, 0.0);
  EXPECT_LE(r.atoms.size(), 3u);
}

TEST(Smooth, GaussAtomsAtSmallSigmaStayNearHalf) {
  const auto L = lebesgue01();
  const auto r = smooth_representation(gauss_atoms(), L, DiracFamily{FamilyKind::kGaussian, {0.01}});
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_NEAR(r.atoms[0].weight, 0.5, 0.05);
  EXPECT_NEAR(r.atoms[1].weight, 0.5, 0.05);
}

TEST(Smooth, AllFamiliesOnLebesgue) {
  const auto L = lebesgue01();
  const auto atomic = atomic_decompose(L, make_candidate_grid(L));
  for (FamilyKind kind : {FamilyKind::kGaussian, FamilyKind::kMollifier, FamilyKind::kBox}) {
    const auto r = smooth_representation(atomic, L, DiracFamily{kind, DiracFamily::default_sigmas()});
    EXPECT_LE(r.residual, 1e-8) << family_name(kind);
    for (const auto& a : r.atoms) EXPECT_GE(a.weight, 1e-10);
  }
}

TEST(Smooth, SigmaContinuity) {
  const auto L = lebesgue01();
  const auto atomic = atomic_decompose(L, make_candidate_grid(L));
  std::vector<std::vector<double>> centers;
  for (const auto& a : atomic.atoms) centers.push_back(a.x);
  double prev = INFINITY;
  for (double sigma : {0.1, 0.05, 0.01}) {
    const auto s = smoothed_weights(L, centers, FamilyKind::kGaussian, sigma);
    double dist = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) dist = std::max(dist, std::abs(s.weights[i] - atomic.atoms[i].weight));
    EXPECT_LT(dist, prev);
    prev = dist;
  }
}

TEST(Smooth, OversmoothingFails) {
  const auto L = lebesgue01();
  const auto atomic = atomic_decompose(L, make_candidate_grid(L));
  EXPECT_THROW(smooth_representation(atomic, L, DiracFamily{FamilyKind::kGaussian, {10.0, 20.0}}),
               SmoothingFailedError);
}

TEST(Smooth, EmptySigmaGridRejected) {
  const auto L = lebesgue01();
  EXPECT_THROW(smooth_representation(gauss_atoms(), L, DiracFamily{FamilyKind::kGaussian, {}}), Error);
}

TEST(Smooth, NonPolynomialBasisUsesQuadrature) {
  const auto f = BasisFunction::function(1, [](std::span<const double> x) { return std::cos(x[0]); }, "cos");
  const double c[] = {0.4};
  // E cos(X) for X ~ N(0.4, 0.2^2) is cos(0.4) e^{-0.02}.
  EXPECT_NEAR(family_integral(FamilyKind::kGaussian, f, c, 0.2), std::cos(0.4) * std::exp(-0.02), 1e-13);
  // Uniform on [0.3, 0.5].
  EXPECT_NEAR(family_integral(FamilyKind::kBox, f, c, 0.1), (std::sin(0.5) - std::sin(0.3)) / 0.2, 1e-13);
  const auto p = BasisFunction::polynomial(Polynomial::univariate({0, 0, 0, 0, 1}));
  const auto q = BasisFunction::function(1, [](std::span<const double> x) { return std::pow(x[0], 4); }, "x4");
  EXPECT_NEAR(family_integral(FamilyKind::kMollifier, p, c, 0.3), family_integral(FamilyKind::kMollifier, q, c, 0.3),
              1e-12);
}

TEST(Emit, StandardNormalPeak) {
  SmoothedRepresentation r;
  r.atoms = {{{0.0}, 1.0, 1.0}};
  EXPECT_NEAR(emit_density(r, {{0.0}})[0], 1.0 / std::sqrt(2 * std::numbers::pi), 1e-15);
}

TEST(Emit, SymmetricAtoms) {
  SmoothedRepresentation r;
  r.atoms = {{{-1.0}, 0.3, 0.5}, {{1.0}, 0.3, 0.5}};
  const auto v = emit_density(r, {{-0.7}, {0.7}, {-2.0}, {2.0}});
  EXPECT_DOUBLE_EQ(v[0], v[1]);
  EXPECT_DOUBLE_EQ(v[2], v[3]);
}

TEST(Emit, MomentRoundTrip) {
  const auto L = lebesgue01();
  const auto atomic = atomic_decompose(L, make_candidate_grid(L));
  for (FamilyKind kind : {FamilyKind::kGaussian, FamilyKind::kMollifier, FamilyKind::kBox}) {
    const auto r = smooth_representation(atomic, L, DiracFamily{kind, {0.01}});
    const auto m = integrate_adaptive(-1.0, 2.0, 3, [&](double x, std::span<double> out) {
      const double d = emit_density(r, {{x}})[0];
      out[0] = d;
      out[1] = x * d;
      out[2] = x * x * d;
    }, 1e-12);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(m[static_cast<std::size_t>(j)], L.values[static_cast<std::size_t>(j)], 1e-6);
  }
}
