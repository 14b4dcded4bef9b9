#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "momentkit/moment_sequence.hpp"

namespace momentkit {

struct MpCoefficients;

// Truncated series f(z) = sum_{|alpha| <= D} i^|alpha| s_alpha z^alpha / alpha!.
class CharSeries {
 public:
  explicit CharSeries(MomentSequence s);

  const MomentSequence& source() const noexcept { return s_; }
  std::size_t dimension() const noexcept { return s_.dimension(); }
  int degree() const noexcept { return s_.max_degree(); }

  // s_alpha / alpha! in double (may be 0 or inf outside double range).
  std::complex<double> scaled(std::size_t pos) const { return scaled_[pos]; }
  // log |s_alpha / alpha!| (-inf for zero).
  double log_scaled(std::size_t pos) const { return log_scaled_[pos]; }
  // i^|alpha| s_alpha / alpha!
  std::complex<double> coefficient(const MultiIndex& alpha) const;
  // Shell k has no nonzero coefficient.
  bool shell_is_zero(int k) const { return zero_shell_[static_cast<std::size_t>(k)]; }

  // log of sum_alpha |s_alpha/alpha!| prod_j zmax_j^alpha_j, the size of the largest partial sum.
  double log_term_bound(std::span<const double> zmax) const;

  // s_alpha / alpha! (real and imaginary parts) at the given precision; cached.
  std::shared_ptr<const MpCoefficients> mp_coefficients(int bits) const;

 private:
  MomentSequence s_;
  std::vector<std::complex<double>> scaled_;
  std::vector<double> log_scaled_;
  std::vector<bool> zero_shell_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct EvalDiagnostics {
  double cancellation = 1.0;      // max |term| / |result|
  double truncation_proxy = 0.0;  // |last nonzero shell| evaluated
  double max_term = 0.0;
  int degree_used = 0;
  int precision_bits = 53;
  bool reliable = true;   // false on the double path with cancellation > 1e12
  bool converged = true;  // stopping rule fired (or the series terminates)
};

inline constexpr double kUnreliableCancellation = 1e12;

struct SeriesOptions {
  double tol = 1e-12;
  // Stop at the first degree where three consecutive nonzero shells are small.
  bool adaptive = false;
  // 0 = choose from the term bound; 53 forces double; larger forces that many bits.
  int precision_bits = 0;
  // Absolute scale for the stopping rule and precision choice; 0 = max(|s_0|, tiny).
  double scale_hint = 0.0;
  // Small shell means |shell| < tol * |partial| (relative) instead of
  // tol * max(|partial|, scale). The scaled form suits integration, where
  // f(z) itself decays far below the mass.
  bool relative_stop = false;
};

struct SeriesValue {
  std::complex<double> odd;   // f_1: |alpha| odd
  std::complex<double> even;  // f_2: |alpha| even
  EvalDiagnostics diag;
  std::complex<double> total() const { return odd + even; }
};

// Evaluates one series at many points with a precision fixed once from the
// largest |z_j| expected. Thread-safe.
class SeriesEvaluator {
 public:
  SeriesEvaluator(const CharSeries& c, std::span<const double> zmax, const SeriesOptions& opts);

  SeriesValue evaluate(std::span<const double> z) const;
  int precision_bits() const noexcept { return bits_; }
  double scale() const noexcept { return scale_; }

 private:
  SeriesValue evaluate_double(std::span<const double> z) const;
  SeriesValue evaluate_mp(std::span<const double> z) const;

  const CharSeries& c_;
  SeriesOptions opts_;
  double scale_;
  int bits_;
  std::shared_ptr<const MpCoefficients> mp_;
};

// Degree-D partial sum with compensated summation (multiprecision when the
// term bound demands it).
std::complex<double> char_eval(const CharSeries& c, std::span<const double> z, EvalDiagnostics* out = nullptr,
                               double tol = 1e-12);

struct AdaptiveValue {
  std::complex<double> value;
  EvalDiagnostics diag;
  bool achieved = false;
};

// Raises the degree until three consecutive nonzero shells fall below
// tol * |partial sum|. Throws NotConverged when max degree is reached first.
AdaptiveValue char_eval_adaptive(const MomentSequence& s, std::span<const double> z, double tol);

struct OddEven {
  std::complex<double> f1;
  std::complex<double> f2;
};

OddEven odd_even_split(const CharSeries& c, std::span<const double> z, double tol = 1e-12);

enum class Trend { kConverging, kDiverging };

std::string_view trend_name(Trend t) noexcept;

struct RadiusEstimate {
  std::vector<int> ks;
  std::vector<std::vector<double>> values;  // per coordinate, (s_{2k e_j})^(1/2k) over ks
  std::vector<double> max_value;            // per coordinate
  std::vector<double> tail_slope;           // log-log slope over the last half of ks
  std::vector<Trend> trend;                 // per coordinate
  double c_hat = 0.0;                       // max over j of the last value
  std::string note;
};

// ks = k_min..k_max; k_max = 0 means floor(D / 2).
RadiusEstimate radius_estimate(const MomentSequence& s, int k_min = 1, int k_max = 0);

struct BochnerOptions {
  double tol = 1e-8;  // threshold is -tol * (number of points)
  bool rescale = false;
  double series_tol = 1e-12;
  unsigned threads = 0;
};

struct BochnerReport {
  std::vector<std::vector<double>> points;
  double min_eigenvalue_full = 0.0;  // (f(z_j - z_k))
  double min_eigenvalue_even = 0.0;  // (f_2(z_j - z_k))
  double min_eigenvalue_diff = 0.0;  // (f_2 - f_1)(z_j - z_k)
  bool psd_full = true;
  bool psd_even = true;
  bool psd_diff = true;
  double threshold = 0.0;
  double hermitian_defect = 0.0;  // max entrywise |M_jk - conj(M_kj)| before symmetrizing
  double s0 = 1.0;
  bool rescaled = false;
  int max_degree_used = 0;
  int precision_bits = 53;
};

BochnerReport bochner_test(const MomentSequence& s, const std::vector<std::vector<double>>& points,
                           const BochnerOptions& opts = {});

// Smallest eigenvalue of a Hermitian matrix given as real and imaginary parts
// (row-major, d x d), via the real-symmetric 2d x 2d embedding.
double hermitian_min_eigenvalue(std::size_t d, const std::vector<double>& re, const std::vector<double>& im);

// Seeded uniform point sets in [lo, hi]^n.
std::vector<std::vector<double>> random_points(std::size_t count, std::size_t n, double lo, double hi,
                                               std::uint64_t seed);

}  // namespace momentkit
