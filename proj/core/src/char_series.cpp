#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "momentkit/charfn.hpp"
#include "momentkit/error.hpp"
#include "momentkit/summation.hpp"

namespace momentkit {

struct MpCoefficients {
  int bits = 0;
  std::vector<mpf_class> re;
  std::vector<mpf_class> im;
};

struct CharSeries::Cache {
  std::mutex mu;
  std::map<int, std::shared_ptr<const MpCoefficients>> by_bits;
  std::vector<BigInt> index_factorial;
};

namespace {

constexpr double kLogMax = 700.0;

double log_factorial(const MultiIndex& a) {
  double l = 0.0;
  for (int e : a.entries()) l += std::lgamma(e + 1.0);
  return l;
}

std::complex<double> rotate(std::complex<double> v, int k) {
  switch (k % 4) {
    case 0: return v;
    case 1: return {-v.imag(), v.real()};
    case 2: return -v;
    default: return {v.imag(), -v.real()};
  }
}

double log_sum_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

CharSeries::CharSeries(MomentSequence s) : s_(std::move(s)), cache_(std::make_shared<Cache>()) {
  const IndexSet& set = s_.indices();
  scaled_.resize(set.size());
  log_scaled_.resize(set.size());
  zero_shell_.assign(static_cast<std::size_t>(s_.max_degree()) + 1, true);
  cache_->index_factorial.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const MultiIndex& a = set.at(i);
    BigInt fac = 1;
    for (int e : a.entries()) fac *= factorial(static_cast<unsigned long>(e));
    cache_->index_factorial[i] = fac;
    if (s_.is_exact()) {
      const Rational q = s_.exact_at(i) / fac;
      scaled_[i] = {to_double(q), 0.0};
      log_scaled_[i] = log_abs(q);
    } else {
      const std::complex<double> v = s_.value_at(i);
      const double lf = log_factorial(a);
      log_scaled_[i] = v == 0.0 ? -INFINITY : std::log(std::abs(v)) - lf;
      scaled_[i] = lf < kLogMax ? v / std::exp(lf) : std::polar(std::exp(log_scaled_[i]), std::arg(v));
    }
    if (log_scaled_[i] != -INFINITY) zero_shell_[static_cast<std::size_t>(a.total())] = false;
  }
}

std::complex<double> CharSeries::coefficient(const MultiIndex& alpha) const {
  return rotate(scaled_[s_.indices().position(alpha)], alpha.total());
}

double CharSeries::log_term_bound(std::span<const double> zmax) const {
  if (zmax.size() != dimension()) raise(ErrorCode::kDimensionMismatch, "z has wrong dimension");
  std::vector<double> lz;
  for (double z : zmax) lz.push_back(z == 0.0 ? -INFINITY : std::log(std::abs(z)));
  double acc = -INFINITY;
  const IndexSet& set = s_.indices();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (log_scaled_[i] == -INFINITY) continue;
    double t = log_scaled_[i];
    const MultiIndex& a = set.at(i);
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] > 0) t += a[j] * lz[j];
    }
    acc = log_sum_exp(acc, t);
  }
  return acc;
}

std::shared_ptr<const MpCoefficients> CharSeries::mp_coefficients(int bits) const {
  const std::lock_guard<std::mutex> lock(cache_->mu);
  auto& slot = cache_->by_bits[bits];
  if (slot) return slot;
  auto mp = std::make_shared<MpCoefficients>();
  mp->bits = bits;
  const auto prec = static_cast<mp_bitcnt_t>(bits);
  const std::size_t count = s_.size();
  mp->re.reserve(count);
  mp->im.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (s_.is_exact()) {
      mpf_class num(s_.exact_at(i), prec);
      mpf_class fac(cache_->index_factorial[i], prec);
      mp->re.emplace_back(num / fac, prec);
      mp->im.emplace_back(0, prec);
    } else {
      const std::complex<double> v = s_.value_at(i);
      mpf_class fac(cache_->index_factorial[i], prec);
      mp->re.emplace_back(mpf_class(v.real(), prec) / fac, prec);
      mp->im.emplace_back(mpf_class(v.imag(), prec) / fac, prec);
    }
  }
  slot = mp;
  return slot;
}

SeriesEvaluator::SeriesEvaluator(const CharSeries& c, std::span<const double> zmax, const SeriesOptions& opts)
    : c_(c), opts_(opts) {
  if (!(opts.tol > 0.0)) raise(ErrorCode::kInvalidArgument, "series tolerance must be positive");
  if (zmax.size() != c.dimension()) raise(ErrorCode::kDimensionMismatch, "z has wrong dimension");
  const double s0 = std::abs(c.source().value_at(0));
  scale_ = opts.scale_hint > 0.0 ? opts.scale_hint : (s0 > 0.0 && std::isfinite(s0) ? s0 : 1.0);
  if (opts.precision_bits > 0) {
    bits_ = opts.precision_bits <= 53 ? 53 : opts.precision_bits;
  } else {
    const double log_b = c.log_term_bound(zmax);
    const double log_target = std::log(opts.tol * scale_);
    if (log_b + std::log(1.8e-15) <= log_target) {
      bits_ = 53;
    } else {
      const double need = (log_b - log_target) / std::log(2.0) + 64.0;
      bits_ = std::max(128, static_cast<int>(std::ceil(need)));
    }
  }
  if (bits_ > 53) mp_ = c.mp_coefficients(bits_);
}

namespace {

// Shared shell loop bookkeeping for both precisions.
struct StopRule {
  double tol;
  double scale;
  bool adaptive;
  int streak = 0;
  int trailing_zero = 0;

  // Returns true when evaluation may stop.
  bool after_shell(double shell_abs, double partial_abs) {
    trailing_zero = 0;
    if (shell_abs < tol * std::max(partial_abs, scale)) {
      ++streak;
    } else {
      streak = 0;
    }
    return adaptive && streak >= 3;
  }
  void zero_shell() { ++trailing_zero; }
  bool converged(int degree) const { return streak >= 3 || trailing_zero >= std::max(3, (degree + 1) / 2); }
};

}  // namespace

SeriesValue SeriesEvaluator::evaluate(std::span<const double> z) const {
  if (z.size() != c_.dimension()) raise(ErrorCode::kDimensionMismatch, "z has wrong dimension");
  if (std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; })) {
    SeriesValue v;
    v.even = c_.source().value_at(0);
    v.diag.max_term = std::abs(v.even);
    v.diag.precision_bits = bits_;
    return v;
  }
  return bits_ > 53 ? evaluate_mp(z) : evaluate_double(z);
}

SeriesValue SeriesEvaluator::evaluate_double(std::span<const double> z) const {
  const IndexSet& set = c_.source().indices();
  const int D = c_.degree();
  const std::size_t n = z.size();
  std::vector<double> lz(n);
  for (std::size_t j = 0; j < n; ++j) lz[j] = z[j] == 0.0 ? -INFINITY : std::log(std::abs(z[j]));

  ComplexNeumaierSum odd, even;
  StopRule rule{opts_.tol, opts_.relative_stop ? 0.0 : scale_, opts_.adaptive};
  SeriesValue out;
  out.diag.precision_bits = 53;
  int used = 0;
  for (int k = 0; k <= D; ++k) {
    if (c_.shell_is_zero(k)) {
      rule.zero_shell();
      used = k;
      continue;
    }
    ComplexNeumaierSum shell;
    for (std::size_t i = set.shell_begin(k); i < set.shell_begin(k + 1); ++i) {
      const double lc = c_.log_scaled(i);
      if (lc == -INFINITY) continue;
      const MultiIndex& a = set.at(i);
      double lt = lc;
      int sign = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (a[j] == 0) continue;
        lt += a[j] * lz[j];
        if (z[j] < 0 && a[j] % 2) sign = -sign;
      }
      if (lt == -INFINITY) continue;
      const std::complex<double> unit = c_.scaled(i) / std::abs(c_.scaled(i));
      std::complex<double> t;
      if (std::abs(lc) < kLogMax && std::isfinite(std::abs(c_.scaled(i)))) {
        double p = 1.0;
        for (std::size_t j = 0; j < n; ++j) p *= std::pow(z[j], a[j]);
        t = c_.scaled(i) * p;
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) t = unit * (sign * std::exp(lt));
      } else {
        t = unit * (sign * std::exp(lt));
      }
      shell.add(t);
      out.diag.max_term = std::max(out.diag.max_term, std::abs(t));
    }
    const std::complex<double> sv = rotate(shell.value(), k);
    if (k % 2) {
      odd.add(sv);
    } else {
      even.add(sv);
    }
    out.diag.truncation_proxy = std::abs(sv);
    used = k;
    if (rule.after_shell(std::abs(sv), std::abs(odd.value() + even.value()))) break;
  }
  out.odd = odd.value();
  out.even = even.value();
  out.diag.degree_used = used;
  out.diag.converged = rule.converged(D);
  out.diag.cancellation = cancellation_ratio(out.diag.max_term, std::abs(out.total()));
  out.diag.reliable = out.diag.cancellation <= kUnreliableCancellation;
  return out;
}

SeriesValue SeriesEvaluator::evaluate_mp(std::span<const double> z) const {
  const IndexSet& set = c_.source().indices();
  const int D = c_.degree();
  const std::size_t n = z.size();
  const auto prec = static_cast<mp_bitcnt_t>(bits_);

  std::vector<std::vector<mpf_class>> pw(n);
  for (std::size_t j = 0; j < n; ++j) {
    pw[j].reserve(static_cast<std::size_t>(D) + 1);
    pw[j].emplace_back(1, prec);
    const mpf_class zj(z[j], prec);
    for (int k = 1; k <= D; ++k) pw[j].emplace_back(pw[j].back() * zj, prec);
  }

  mpf_class odd_re(0, prec), odd_im(0, prec), even_re(0, prec), even_im(0, prec);
  mpf_class sre(0, prec), sim(0, prec), p(0, prec), t(0, prec);
  StopRule rule{opts_.tol, opts_.relative_stop ? 0.0 : scale_, opts_.adaptive};
  SeriesValue out;
  out.diag.precision_bits = bits_;
  int used = 0;
  for (int k = 0; k <= D; ++k) {
    if (c_.shell_is_zero(k)) {
      rule.zero_shell();
      used = k;
      continue;
    }
    sre = 0;
    sim = 0;
    for (std::size_t i = set.shell_begin(k); i < set.shell_begin(k + 1); ++i) {
      if (c_.log_scaled(i) == -INFINITY) continue;
      const MultiIndex& a = set.at(i);
      p = pw[0][static_cast<std::size_t>(a[0])];
      for (std::size_t j = 1; j < n; ++j) p *= pw[j][static_cast<std::size_t>(a[j])];
      t = mp_->re[i] * p;
      sre += t;
      double mag = std::abs(t.get_d());
      if (mp_->im[i] != 0) {
        t = mp_->im[i] * p;
        sim += t;
        mag = std::hypot(mag, t.get_d());
      }
      out.diag.max_term = std::max(out.diag.max_term, mag);
    }
    // multiply by i^k
    switch (k % 4) {
      case 0: break;
      case 1: sre.swap(sim); sre = -sre; break;
      case 2: sre = -sre; sim = -sim; break;
      default: sre.swap(sim); sim = -sim; break;
    }
    if (k % 2) {
      odd_re += sre;
      odd_im += sim;
    } else {
      even_re += sre;
      even_im += sim;
    }
    const double shell_abs = std::hypot(sre.get_d(), sim.get_d());
    out.diag.truncation_proxy = shell_abs;
    used = k;
    const double partial = std::hypot(mpf_class(odd_re + even_re).get_d(), mpf_class(odd_im + even_im).get_d());
    if (rule.after_shell(shell_abs, partial)) break;
  }
  out.odd = {odd_re.get_d(), odd_im.get_d()};
  out.even = {even_re.get_d(), even_im.get_d()};
  out.diag.degree_used = used;
  out.diag.converged = rule.converged(D);
  out.diag.cancellation = cancellation_ratio(out.diag.max_term, std::abs(out.total()));
  out.diag.reliable = true;
  return out;
}

namespace {

std::vector<double> abs_vector(std::span<const double> z) {
  std::vector<double> a;
  for (double v : z) a.push_back(std::abs(v));
  return a;
}

}  // namespace

std::complex<double> char_eval(const CharSeries& c, std::span<const double> z, EvalDiagnostics* out, double tol) {
  SeriesOptions opts;
  opts.tol = tol;
  const SeriesEvaluator ev(c, abs_vector(z), opts);
  const SeriesValue v = ev.evaluate(z);
  if (out) *out = v.diag;
  return v.odd + v.even;
}

OddEven odd_even_split(const CharSeries& c, std::span<const double> z, double tol) {
  SeriesOptions opts;
  opts.tol = tol;
  const SeriesEvaluator ev(c, abs_vector(z), opts);
  const SeriesValue v = ev.evaluate(z);
  return {v.odd, v.even};
}

AdaptiveValue char_eval_adaptive(const MomentSequence& s, std::span<const double> z, double tol) {
  if (!(tol > 0.0)) raise(ErrorCode::kInvalidArgument, "tolerance must be positive");
  const CharSeries c(s);
  SeriesOptions opts;
  opts.tol = tol;
  opts.adaptive = true;
  opts.relative_stop = true;
  const SeriesEvaluator ev(c, abs_vector(z), opts);
  SeriesValue v = ev.evaluate(z);
  // The precision choice above targets tol * |s_0|; a relative target on a
  // small value may need more bits once the cancellation ratio is known.
  const double rounding = v.diag.cancellation * std::ldexp(1.0, -v.diag.precision_bits);
  if (v.diag.converged && std::isfinite(v.diag.cancellation) && rounding > 0.1 * tol) {
    opts.precision_bits =
        static_cast<int>(std::ceil(std::log2(v.diag.cancellation / tol))) + 64;
    const SeriesEvaluator precise(c, abs_vector(z), opts);
    v = precise.evaluate(z);
  }
  AdaptiveValue out{v.odd + v.even, v.diag, v.diag.converged};
  if (!out.achieved) {
    raise(ErrorCode::kNotConverged, "series did not meet tolerance " + format_number(tol) + " by max degree " +
                                        std::to_string(s.max_degree()) +
                                        " (last shell magnitude " + format_number(v.diag.truncation_proxy) + ")");
  }
  return out;
}

}  // namespace momentkit
