#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "momentkit/density.hpp"
#include "momentkit/error.hpp"
#include "momentkit/json_io.hpp"
#include "momentkit/named_sequences.hpp"
#include "test_support.hpp"

using namespace momentkit;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(MOMENTKIT_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parse_error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "expected ParseError";
  return "";
}

}  // namespace

TEST(SequenceJson, ExactRoundTrip) {
  auto& g = momentkit::testing::rng();
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = momentkit::testing::random_exact_sequence(g, 1 + trial % 3, 6);
    const auto back = sequence_from_json(sequence_to_json(s));
    ASSERT_TRUE(back.is_exact());
    EXPECT_EQ(back.exact_values(), s.exact_values());
  }
}

TEST(SequenceJson, BigRationalsUseStrings) {
  const auto s = gaussian_cf_sequence(1, 60);  // s_60 = 60!/30! exceeds int64
  const std::string text = sequence_to_json(s);
  EXPECT_NE(text.find("\"num\": \""), std::string::npos);
  EXPECT_EQ(sequence_from_json(text).exact_values(), s.exact_values());
}

TEST(SequenceJson, FloatingRoundTripWithImaginaryParts) {
  const auto s = MomentSequence::floating(2, 3, [](const MultiIndex& a) {
    return std::complex<double>(0.1 * a[0] + 1.0 / 3.0, a[1] == 1 ? -2.5e-7 : 0.0);
  });
  const auto back = sequence_from_json(sequence_to_json(s));
  EXPECT_FALSE(back.is_exact());
  EXPECT_EQ(back.values(), s.values());
}

TEST(SequenceJson, FieldPathDiagnostics) {
  EXPECT_NE(parse_error_of([] { sequence_from_json("{\"max_degree\": 1}"); }).find("$.dimension"), std::string::npos);
  EXPECT_NE(parse_error_of([] {
              sequence_from_json(R"({"dimension":1,"max_degree":1,"exact":true,
                 "rationals":[{"alpha":[0],"num":1,"den":1},{"alpha":[1],"num":1,"den":0}]})");
            }).find("$.rationals[1].den"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] {
              sequence_from_json(R"({"dimension":1,"max_degree":2,"entries":[{"alpha":[0],"re":1},{"alpha":[1],"re":0}]})");
            }).find("missing multi-index"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] {
              sequence_from_json(R"({"dimension":1,"max_degree":1,"entries":[{"alpha":[0],"re":1},{"alpha":[0],"re":1}]})");
            }).find("duplicate"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] {
              sequence_from_json(R"({"dimension":2,"max_degree":1,"entries":[{"alpha":[0],"re":1}]})");
            }).find("$.entries[0].alpha"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { sequence_from_json("{not json"); }).find("invalid JSON"), std::string::npos);
}

TEST(DensityJson, PiecewiseFixtureMatchesDirectSpec) {
  const auto spec = density_from_json(fixture("quartic_bump_density.json"));
  const auto s = moments_from_density(spec, 10);
  const auto t = moments_from_density(momentkit::testing::quartic_bump_density(), 10);
  EXPECT_EQ(s.exact_values(), t.exact_values());
}

TEST(DensityJson, DecimalsAreExact) {
  const auto spec = density_from_json(R"({"kind":"indicator","box":{"lower":[0.1],"upper":["3/10"]}})");
  const auto s = moments_from_density(spec, 1);
  EXPECT_EQ(s.exact_value(MultiIndex{0}), Rational(1, 5));
}

TEST(DensityJson, MixtureAndGaussianAndClosedForm) {
  const auto hat = moments_from_density(density_from_json(fixture("hat_mixture_density.json")), 4);
  EXPECT_EQ(hat.exact_value(MultiIndex{0}), Rational(1, 4));
  EXPECT_EQ(hat.exact_value(MultiIndex{1}), Rational(0));
  const auto g = density_from_json(R"({"kind":"gaussian","mean":[0],"variance":[2],"truncation":{"lower":[-40],"upper":[40]}})");
  EXPECT_NEAR(moments_from_density(g, 2)[2].real(), 2.0, 1e-10);
  const auto sc = density_from_json(R"({"kind":"closed-form","id":"semicircle"})");
  EXPECT_EQ(moments_from_density(sc, 2).exact_value(MultiIndex{2}), Rational(1, 4));
}

TEST(DensityJson, Diagnostics) {
  EXPECT_NE(parse_error_of([] { density_from_json(R"({"kind":"blob"})"); }).find("$.kind"), std::string::npos);
  EXPECT_NE(parse_error_of([] {
              density_from_json(R"({"kind":"piecewise","pieces":[{"box":{"lower":[0],"upper":[1]},"polynomial":[1,"x"]}]})");
            }).find("$.pieces[0].polynomial[1]"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] { density_from_json(R"({"kind":"indicator","box":{"lower":[1],"upper":[0]}})"); })
                .find("$.box.lower"),
            std::string::npos);
}

TEST(DensityShorthand, Forms) {
  const auto s = moments_from_density(density_from_shorthand("indicator:0,1"), 10);
  for (int k = 0; k <= 10; ++k) EXPECT_EQ(s.exact_value(MultiIndex{k}), Rational(1, k + 1));
  const auto p = moments_from_density(density_from_shorthand("polynomial:0,0,1,-2,1@0,1"), 6);
  EXPECT_EQ(p.exact_values(), moments_from_density(momentkit::testing::quartic_bump_density(), 6).exact_values());
  EXPECT_NO_THROW(density_from_shorthand("bump"));
  EXPECT_NO_THROW(density_from_shorthand("gaussian:0,2"));
  EXPECT_THROW(density_from_shorthand("indicator:1,0"), Error);
  EXPECT_THROW(density_from_shorthand("mystery"), Error);
}

TEST(FunctionalJson, DiscontinuousFixtureMatchesBuiltin) {
  const auto L = functional_from_json(fixture("discontinuous_functional.json"));
  const auto ref = discontinuous_example();
  ASSERT_EQ(L.size(), ref.size());
  for (double x : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double p[] = {x};
    for (std::size_t j = 0; j < L.size(); ++j) EXPECT_EQ(L.basis[j].evaluate(p), ref.basis[j].evaluate(p));
  }
  for (std::size_t j = 0; j < L.size(); ++j) EXPECT_NEAR(L.values[j], ref.values[j], 1e-15);
}

TEST(FunctionalJson, BuiltinAndDiagnostics) {
  const auto L = functional_from_json(
      R"({"domain":{"lower":[0],"upper":[2]},"basis":[{"polynomial":[1]},{"builtin":"discontinuous_f2"}],"values":[1,1]})");
  const double one[] = {1.0};
  EXPECT_EQ(L.basis[1].evaluate(one), -1.0);
  EXPECT_NE(parse_error_of([] {
              functional_from_json(R"({"domain":{"lower":[0],"upper":[1]},"basis":[{"polynomial":[1]}],"values":[1,2]})");
            }).find("$.values"),
            std::string::npos);
  EXPECT_NE(parse_error_of([] {
              functional_from_json(R"({"domain":{"lower":[0],"upper":[1]},"basis":[{"spline":[1]}],"values":[1]})");
            }).find("$.basis[0]"),
            std::string::npos);
}

TEST(AtomicJson, RoundTrip) {
  AtomicRepresentation r;
  r.atoms = {{{0.25}, 0.5}, {{0.75}, 1.0 / 3.0}};
  r.residual = 1e-17;
  const auto back = atomic_from_json(atomic_to_json(r));
  ASSERT_EQ(back.atoms.size(), 2u);
  EXPECT_EQ(back.atoms[1].weight, 1.0 / 3.0);
  EXPECT_EQ(back.atoms[0].x, r.atoms[0].x);
}

TEST(PointsJson, BothForms) {
  EXPECT_EQ(points_from_json(fixture("quartic_witness_points.json")).size(), 3u);
  EXPECT_EQ(points_from_json("[[0,1],[2,3]]")[1][1], 3.0);
  EXPECT_NE(parse_error_of([] { points_from_json("[[0,1],[2]]"); }).find("$[1]"), std::string::npos);
}
