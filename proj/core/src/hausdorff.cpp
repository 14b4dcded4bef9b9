#include "momentkit/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "momentkit/error.hpp"
#include "momentkit/parallel.hpp"
#include "momentkit/sequence_ops.hpp"
#include "momentkit/summation.hpp"

namespace momentkit {

namespace {

constexpr double kFloatPositivityTol = -1e-10;

struct Grid {
  std::vector<int> extent;  // d_j + 1
  std::vector<std::size_t> stride;
  std::size_t size = 1;

  explicit Grid(const MultiIndex& d) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      extent.push_back(d[j] + 1);
      stride.push_back(size);
      size *= static_cast<std::size_t>(d[j] + 1);
    }
  }

  MultiIndex unflatten(std::size_t flat) const {
    MultiIndex k(extent.size());
    for (std::size_t j = 0; j < extent.size(); ++j) {
      k[j] = static_cast<int>(flat % static_cast<std::size_t>(extent[j]));
      flat /= static_cast<std::size_t>(extent[j]);
    }
    return k;
  }
};

// Replaces A[k] = s_k by A[k] = L_s(prod x_j^k_j (1 - x_j)^(d_j - k_j)) one axis at a time.
// `Abs` receives the matching sums of |terms| when tracked.
template <typename T, typename Coef>
void bernstein_transform(const Grid& g, std::vector<T>& a, Coef coef, std::vector<double>* abs) {
  for (std::size_t j = 0; j < g.extent.size(); ++j) {
    const int m = g.extent[j] - 1;
    const std::size_t st = g.stride[j];
    std::vector<T> line(static_cast<std::size_t>(m) + 1), out(static_cast<std::size_t>(m) + 1);
    std::vector<double> aline, aout;
    if (abs) {
      aline.resize(line.size());
      aout.resize(line.size());
    }
    for (std::size_t base = 0; base < g.size; ++base) {
      if ((base / st) % static_cast<std::size_t>(g.extent[j]) != 0) continue;
      for (int k = 0; k <= m; ++k) {
        line[k] = a[base + static_cast<std::size_t>(k) * st];
        if (abs) aline[k] = (*abs)[base + static_cast<std::size_t>(k) * st];
      }
      for (int k = 0; k <= m; ++k) {
        const int len = m - k;
        T acc = T(0);
        double aacc = 0.0;
        for (int i = 0; i <= len; ++i) {
          const T c = coef(len, i);
          if (i % 2) {
            acc -= c * line[k + i];
          } else {
            acc += c * line[k + i];
          }
          if constexpr (std::is_same_v<T, double>) {
            if (abs) aacc += std::abs(c) * aline[k + i];
          }
        }
        out[k] = acc;
        if (abs) aout[k] = aacc;
      }
      for (int k = 0; k <= m; ++k) {
        a[base + static_cast<std::size_t>(k) * st] = out[k];
        if (abs) (*abs)[base + static_cast<std::size_t>(k) * st] = aout[k];
      }
    }
  }
}

void check_sum_degree(const MomentSequence& s, const MultiIndex& d) {
  if (d.size() != s.dimension()) raise(ErrorCode::kDimensionMismatch, "degree vector has wrong dimension");
  if (d.total() > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "degree " + d.to_string() + " exceeds max degree " + std::to_string(s.max_degree()));
  }
}

std::vector<std::vector<BigInt>> pascal(int D) {
  std::vector<std::vector<BigInt>> c(static_cast<std::size_t>(D) + 1);
  for (int m = 0; m <= D; ++m) {
    for (int k = 0; k <= m; ++k) c[m].push_back(binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(k)));
  }
  return c;
}

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly, double* intercept) {
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = n * sxx - sx * sx;
  const double slope = den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
  if (intercept) *intercept = (sy - slope * sx) / n;
  return slope;
}

}  // namespace

std::string_view classification_name(Classification c) noexcept {
  switch (c) {
    case Classification::kBounded: return "bounded";
    case Classification::kGrowing: return "growing";
    case Classification::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

HausdorffSum hausdorff_sum(const MomentSequence& s, const MultiIndex& d) {
  check_sum_degree(s, d);
  s.require_real("hausdorff_sum");
  const Grid g(d);
  const IndexSet& set = s.indices();
  int dmax = 0;
  for (int v : d.entries()) dmax = std::max(dmax, v);
  HausdorffSum out;

  if (s.is_exact()) {
    const auto binom = pascal(dmax);
    std::vector<Rational> a(g.size);
    for (std::size_t f = 0; f < g.size; ++f) a[f] = s.exact_at(set.position(g.unflatten(f)));
    bernstein_transform<Rational>(
        g, a, [&](int m, int i) { return Rational(binom[m][i]); }, nullptr);
    Rational total = 0;
    for (std::size_t f = 0; f < g.size; ++f) {
      const MultiIndex k = g.unflatten(f);
      BigInt c = 1;
      for (std::size_t j = 0; j < k.size(); ++j) c *= binom[d[j]][k[j]];
      total += c * abs(a[f]);
    }
    out.value = to_double(total);
    out.exact = std::move(total);
    return out;
  }

  std::vector<std::vector<double>> binom(static_cast<std::size_t>(dmax) + 1);
  for (int m = 0; m <= dmax; ++m) {
    for (int k = 0; k <= m; ++k) binom[m].push_back(binomial(m, k).get_d());
  }
  std::vector<double> a(g.size), abs_terms(g.size);
  for (std::size_t f = 0; f < g.size; ++f) {
    a[f] = s.value_at(set.position(g.unflatten(f))).real();
    abs_terms[f] = std::abs(a[f]);
  }
  bernstein_transform<double>(g, a, [&](int m, int i) { return binom[m][i]; }, &abs_terms);
  NeumaierSum total, terms;
  for (std::size_t f = 0; f < g.size; ++f) {
    const MultiIndex k = g.unflatten(f);
    double c = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) c *= binom[d[j]][k[j]];
    total.add(c * std::abs(a[f]));
    terms.add(c * abs_terms[f]);
  }
  out.value = total.value();
  out.condition = cancellation_ratio(terms.value(), out.value);
  return out;
}

HausdorffSum hausdorff_sum(const MomentSequence& s, int d) {
  if (d < 0) raise(ErrorCode::kInvalidArgument, "degree must be non-negative");
  return hausdorff_sum(s, MultiIndex::constant(s.dimension(), d));
}

double HausdorffReport::sup() const {
  double m = 0.0;
  for (double v : sums) m = std::max(m, v);
  return m;
}

ClassifierResult classify_sums(const std::vector<int>& levels, const std::vector<double>& sums, double condition) {
  ClassifierResult r;
  if (sums.empty()) return r;
  const int last = levels.back();

  double qmax = 0.0, qmin = INFINITY;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (4 * levels[i] >= 3 * last) {
      qmax = std::max(qmax, sums[i]);
      qmin = std::min(qmin, sums[i]);
    }
  }
  r.last_quartile_variation = qmax == 0.0 ? 0.0 : (qmax - qmin) / qmax;

  std::vector<double> lx, ly;
  bool nondecreasing = true;
  double prev = -INFINITY;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (2 * levels[i] < last || levels[i] < 1) continue;
    if (sums[i] < prev * (1.0 - 1e-12)) nondecreasing = false;
    prev = sums[i];
    if (sums[i] > 0.0) {
      lx.push_back(std::log(static_cast<double>(levels[i])));
      ly.push_back(std::log(sums[i]));
    }
  }
  if (lx.size() >= 3) {
    GrowthFit fit;
    double intercept = 0.0;
    fit.exponent = fit_slope(lx, ly, &intercept);
    fit.coefficient = std::exp(intercept);
    const std::size_t h = lx.size() / 2;
    fit.early_exponent = fit_slope({lx.begin(), lx.begin() + static_cast<long>(h + 1)},
                                   {ly.begin(), ly.begin() + static_cast<long>(h + 1)}, nullptr);
    fit.late_exponent = fit_slope({lx.begin() + static_cast<long>(h), lx.end()},
                                  {ly.begin() + static_cast<long>(h), ly.end()}, nullptr);
    r.fit = fit;
  }

  if (condition > kInconclusiveCondition) {
    r.classification = Classification::kInconclusive;
  } else if (r.last_quartile_variation < 0.01) {
    r.classification = Classification::kBounded;
  } else if (r.fit && r.fit->exponent >= 0.25 && nondecreasing) {
    r.classification = Classification::kGrowing;
  } else if (r.fit && std::abs(r.fit->exponent) < 0.1) {
    r.classification = Classification::kBounded;
  } else if (r.fit && std::abs(r.fit->exponent) < 0.25 &&
             std::abs(r.fit->late_exponent) <= 0.85 * std::abs(r.fit->early_exponent)) {
    r.classification = Classification::kBounded;
  } else {
    r.classification = Classification::kInconclusive;
  }
  return r;
}

HausdorffReport signed_hausdorff_test(const MomentSequence& s, int d_max, const HausdorffOptions& opts) {
  if (d_max < 0) raise(ErrorCode::kInvalidArgument, "d_max must be non-negative");
  const std::size_t n = s.dimension();
  if (static_cast<long>(n) * d_max > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "d_max " + std::to_string(d_max) + " needs max degree " +
                                          std::to_string(static_cast<long>(n) * d_max) + ", sequence has " +
                                          std::to_string(s.max_degree()));
  }
  s.require_real("signed_hausdorff_test");

  HausdorffReport rep;
  if (opts.full_orthant && n > 1) {
    const Grid g(MultiIndex::constant(n, d_max));
    for (std::size_t f = 0; f < g.size; ++f) rep.degrees.push_back(g.unflatten(f));
    std::stable_sort(rep.degrees.begin(), rep.degrees.end(), [](const MultiIndex& a, const MultiIndex& b) {
      return *std::max_element(a.entries().begin(), a.entries().end()) <
             *std::max_element(b.entries().begin(), b.entries().end());
    });
  } else {
    for (int d = 0; d <= d_max; ++d) rep.degrees.push_back(MultiIndex::constant(n, d));
  }

  std::vector<HausdorffSum> results(rep.degrees.size());
  parallel_for(
      rep.degrees.size(), [&](std::size_t i) { results[i] = hausdorff_sum(s, rep.degrees[i]); }, opts.threads);

  std::vector<int> levels;
  std::vector<double> level_sums;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const int level = *std::max_element(rep.degrees[i].entries().begin(), rep.degrees[i].entries().end());
    rep.levels.push_back(level);
    rep.sums.push_back(results[i].value);
    rep.exact_sums.push_back(results[i].exact);
    rep.condition = std::max(rep.condition, results[i].condition);
    if (levels.empty() || levels.back() != level) {
      levels.push_back(level);
      level_sums.push_back(results[i].value);
    } else {
      level_sums.back() = std::max(level_sums.back(), results[i].value);
    }
  }
  const ClassifierResult c = classify_sums(levels, level_sums, s.is_exact() ? 1.0 : rep.condition);
  rep.classification = c.classification;
  rep.growth_fit = c.fit;
  rep.last_quartile_variation = c.last_quartile_variation;
  rep.note = "finite-degree growth heuristic: boundedness of the full sequence of sums is not decidable from " +
             std::to_string(d_max + 1) + " degrees";
  if (!s.is_exact() && rep.condition > kInconclusiveCondition) {
    rep.note += "; floating-path cancellation condition exceeds 1e8";
  }
  return rep;
}

RegularityVerdict abs_cont_test(const MomentSequence& s, int d_max, const HausdorffOptions& opts) {
  const long n = static_cast<long>(s.dimension());
  if (d_max < 0) raise(ErrorCode::kInvalidArgument, "d_max must be non-negative");
  if (n * (d_max + 1) > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "abs_cont_test needs max degree >= " + std::to_string(n * (d_max + 1)));
  }
  RegularityVerdict v;
  v.first = signed_hausdorff_test(s, d_max, opts);
  v.second = signed_hausdorff_test(derivative_seq(s, MultiIndex::constant(s.dimension(), 1)), d_max, opts);
  v.positive = v.first.bounded() && v.second.bounded();
  return v;
}

RegularityVerdict cr_test(const MomentSequence& s, int r, int d_max, const HausdorffOptions& opts) {
  if (r < 0) raise(ErrorCode::kInvalidArgument, "cr_test requires r >= 0");
  if (d_max < 0) raise(ErrorCode::kInvalidArgument, "d_max must be non-negative");
  const long n = static_cast<long>(s.dimension());
  if (n * (d_max + r + 2) > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "cr_test needs max degree >= " + std::to_string(n * (d_max + r + 2)));
  }
  RegularityVerdict v;
  const MultiIndex b1 = MultiIndex::constant(s.dimension(), r + 1);
  const MultiIndex b2 = MultiIndex::constant(s.dimension(), r + 2);
  v.first = signed_hausdorff_test(derivative_seq(s, b1), d_max, opts);
  v.second = signed_hausdorff_test(derivative_seq(s, b2), d_max, opts);
  v.positive = v.first.bounded() && v.second.bounded();
  return v;
}

PositivityResult positivity_test(const MomentSequence& s, int k_max, int l_max) {
  if (k_max < 0 || l_max < 0) raise(ErrorCode::kInvalidArgument, "k_max and l_max must be non-negative");
  const std::size_t n = s.dimension();
  if (static_cast<long>(n) * (k_max + l_max) > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "positivity_test needs max degree >= " +
                                          std::to_string(static_cast<long>(n) * (k_max + l_max)));
  }
  s.require_real("positivity_test");
  const Grid kg(MultiIndex::constant(n, k_max));
  const Grid lg(MultiIndex::constant(n, l_max));
  PositivityResult res;
  for (std::size_t kf = 0; kf < kg.size; ++kf) {
    const MultiIndex k = kg.unflatten(kf);
    for (std::size_t lf = 0; lf < lg.size; ++lf) {
      const MultiIndex l = lg.unflatten(lf);
      // L(x^k (1-x)^l) = sum_{i <= l} prod C(l_j, i_j) (-1)^|i| s_{k+i}
      const Grid ig(l);
      bool bad = false;
      double val = 0.0;
      if (s.is_exact()) {
        Rational acc = 0;
        for (std::size_t f = 0; f < ig.size; ++f) {
          const MultiIndex i = ig.unflatten(f);
          BigInt c = 1;
          for (std::size_t j = 0; j < n; ++j) c *= binomial(l[j], i[j]);
          const Rational t = c * s.exact_value(k + i);
          if (i.total() % 2) {
            acc -= t;
          } else {
            acc += t;
          }
        }
        bad = acc < 0;
        val = to_double(acc);
      } else {
        NeumaierSum acc;
        for (std::size_t f = 0; f < ig.size; ++f) {
          const MultiIndex i = ig.unflatten(f);
          double c = 1.0;
          for (std::size_t j = 0; j < n; ++j) c *= binomial(l[j], i[j]).get_d();
          const double t = c * s.value(k + i).real();
          acc.add(i.total() % 2 ? -t : t);
        }
        val = acc.value();
        bad = val < kFloatPositivityTol;
      }
      if (bad) {
        res.nonnegative = false;
        res.first_violation = std::make_pair(k, l);
        res.violation_value = val;
        return res;
      }
    }
  }
  return res;
}

std::vector<std::vector<int>> all_sign_vectors(std::size_t n) {
  std::vector<std::vector<int>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = (mask >> j) & 1 ? -1 : 1;
    out.push_back(sigma);
  }
  return out;
}

MirrorReport verify_mirror_decomposition(const std::map<std::vector<int>, MomentSequence>& components,
                                         const MomentSequence& s, int r, int d_max, const HausdorffOptions& opts) {
  const std::size_t n = s.dimension();
  for (const auto& [sigma, c] : components) {
    if (sigma.size() != n || c.dimension() != n) raise(ErrorCode::kDimensionMismatch, "component dimension differs");
    if (c.max_degree() != s.max_degree()) raise(ErrorCode::kDimensionMismatch, "component max degree differs");
    for (int v : sigma) {
      if (v != 1 && v != -1) raise(ErrorCode::kInvalidArgument, "sign vector entries must be +1 or -1");
    }
  }

  MirrorReport rep;
  bool all_exact = s.is_exact();
  for (const auto& [sigma, c] : components) all_exact = all_exact && c.is_exact();
  if (all_exact) {
    Rational worst = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Rational acc = -s.exact_at(i);
      for (const auto& [sigma, c] : components) acc += c.exact_at(i);
      if (abs(acc) > worst) worst = abs(acc);
    }
    rep.defect = to_double(worst);
    rep.exact_defect = worst;
  } else {
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::complex<double> acc = -s.value_at(i);
      for (const auto& [sigma, c] : components) acc += c.value_at(i);
      rep.defect = std::max(rep.defect, std::abs(acc));
    }
  }

  const std::vector<Rational> shift(n, Rational(1, 2)), unit(n, Rational(1));
  bool positive = all_exact ? rep.defect == 0.0 : rep.defect <= 1e-12;
  for (const auto& sigma : all_sign_vectors(n)) {
    const auto it = components.find(sigma);
    const MomentSequence comp = it != components.end()
                                    ? it->second
                                    : MomentSequence::zero(n, s.max_degree(),
                                                           s.is_exact() ? ValueKind::kExactRational : ValueKind::kFloating);
    // (1/2 + x)^k (1/2 - x)^(d-k) on [-1/2, 1/2] is the Bernstein basis after x -> x + 1/2.
    const MomentSequence shifted = affine_pushforward(mirror_seq(comp, sigma), std::span<const Rational>(shift),
                                                      std::span<const Rational>(unit));
    RegularityVerdict v = cr_test(shifted, r, d_max, opts);
    positive = positive && v.positive;
    rep.per_sigma.emplace(sigma, std::move(v));
  }
  rep.positive = positive;
  return rep;
}

}  // namespace momentkit
