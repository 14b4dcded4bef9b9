#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "momentkit/moment_sequence.hpp"

namespace momentkit {

enum class Classification { kBounded, kGrowing, kInconclusive };

std::string_view classification_name(Classification c) noexcept;

struct HausdorffSum {
  double value = 0.0;
  std::optional<Rational> exact;
  // sum_k C(d,k) sum_j |expansion term| / result; 1 on the rational path.
  double condition = 1.0;
};

// sum over k <= d of prod_j C(d_j, k_j) |L_s(prod_j x_j^k_j (1 - x_j)^(d_j - k_j))|
HausdorffSum hausdorff_sum(const MomentSequence& s, const MultiIndex& d);
// Diagonal degree d * (1, ..., 1).
HausdorffSum hausdorff_sum(const MomentSequence& s, int d);

// Model sums(d) ~ coefficient * d^exponent over the last half of the degrees.
struct GrowthFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double early_exponent = 0.0;  // first half of the fitted range
  double late_exponent = 0.0;   // second half of the fitted range
};

struct HausdorffReport {
  std::vector<MultiIndex> degrees;
  std::vector<int> levels;  // diagonal degree (or max entry in full-orthant mode) per sum
  std::vector<double> sums;
  std::vector<std::optional<Rational>> exact_sums;
  Classification classification = Classification::kInconclusive;
  std::optional<GrowthFit> growth_fit;
  double condition = 1.0;
  double last_quartile_variation = 0.0;
  std::string note;

  double sup() const;
  bool bounded() const { return classification == Classification::kBounded; }
};

struct HausdorffOptions {
  bool full_orthant = false;  // all degree vectors with entries <= d_max instead of the diagonal
  unsigned threads = 0;
};

HausdorffReport signed_hausdorff_test(const MomentSequence& s, int d_max, const HausdorffOptions& opts = {});

// Classifier used by signed_hausdorff_test; levels ascending, one sum per level.
// In order: inconclusive if condition > 1e8; bounded if the last quartile
// varies by < 1%; growing if the last-half log-log slope p >= 0.25 and the
// last half is non-decreasing; bounded if |p| < 0.1, or if |p| < 0.25 and the
// slope decelerates (late <= 0.85 early); inconclusive otherwise.
struct ClassifierResult {
  Classification classification = Classification::kInconclusive;
  std::optional<GrowthFit> fit;
  double last_quartile_variation = 0.0;
};
ClassifierResult classify_sums(const std::vector<int>& levels, const std::vector<double>& sums, double condition);

inline constexpr double kInconclusiveCondition = 1e8;

struct RegularityVerdict {
  HausdorffReport first;   // abs_cont: s;     cr: d^(r+1) s
  HausdorffReport second;  // abs_cont: d s;   cr: d^(r+2) s
  bool positive = false;
};

RegularityVerdict abs_cont_test(const MomentSequence& s, int d_max, const HausdorffOptions& opts = {});
RegularityVerdict cr_test(const MomentSequence& s, int r, int d_max, const HausdorffOptions& opts = {});

struct PositivityResult {
  bool nonnegative = true;
  // (k, l) of the first L_s(x^k (1-x)^l) below tolerance, with its value.
  std::optional<std::pair<MultiIndex, MultiIndex>> first_violation;
  std::optional<double> violation_value;
};

// Exact comparison with 0 on the rational path, -1e-10 on the floating path.
PositivityResult positivity_test(const MomentSequence& s, int k_max, int l_max);

struct MirrorReport {
  double defect = 0.0;  // max_alpha |sum_sigma s^sigma_alpha - s_alpha|
  std::optional<Rational> exact_defect;
  std::map<std::vector<int>, RegularityVerdict> per_sigma;
  bool positive = false;
};

// Components keyed by sign vector; missing sign vectors count as zero.
MirrorReport verify_mirror_decomposition(const std::map<std::vector<int>, MomentSequence>& components,
                                         const MomentSequence& s, int r, int d_max,
                                         const HausdorffOptions& opts = {});

// All 2^n sign vectors in a fixed order.
std::vector<std::vector<int>> all_sign_vectors(std::size_t n);

}  // namespace momentkit
