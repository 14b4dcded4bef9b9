#include "momentkit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const long double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(x);
    r.nodes[static_cast<std::size_t>(i)] = -static_cast<double>(x);
    r.weights[static_cast<std::size_t>(i)] = static_cast<double>(w);
    r.weights[static_cast<std::size_t>(n - 1 - i)] = static_cast<double>(w);
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) raise(ErrorCode::kInvalidArgument, "Gauss-Legendre order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(n));
  return *slot;
}

QuadratureNodes composite_gauss_legendre(double a, double b, std::size_t panels, int order) {
  if (panels == 0) raise(ErrorCode::kInvalidArgument, "need at least one panel");
  const GaussLegendreRule& g = gauss_legendre(order);
  QuadratureNodes q;
  q.x.reserve(panels * g.nodes.size());
  q.w.reserve(panels * g.nodes.size());
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      q.x.push_back(mid + 0.5 * h * g.nodes[i]);
      q.w.push_back(0.5 * h * g.weights[i]);
    }
  }
  return q;
}

namespace {

struct Adaptive {
  const VectorIntegrand& f;
  std::size_t m;
  const GaussLegendreRule& rule;
  std::vector<double> budget;  // tolerated error per unit length, per component
  int max_depth;
  std::vector<double> scratch;

  void panel(double lo, double hi, std::vector<double>& out) {
    out.assign(m, 0.0);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      f(mid + half * rule.nodes[i], scratch);
      for (std::size_t j = 0; j < m; ++j) out[j] += half * rule.weights[i] * scratch[j];
    }
  }

  void run(double lo, double hi, const std::vector<double>& whole, int depth, std::vector<double>& acc) {
    const double mid = 0.5 * (lo + hi);
    std::vector<double> left, right;
    panel(lo, mid, left);
    panel(mid, hi, right);
    bool ok = true;
    for (std::size_t j = 0; j < m && ok; ++j) {
      const double err = std::abs(left[j] + right[j] - whole[j]);
      if (err > budget[j] * (hi - lo)) ok = false;
    }
    if (ok || depth >= max_depth) {
      for (std::size_t j = 0; j < m; ++j) acc[j] += left[j] + right[j];
      return;
    }
    run(lo, mid, left, depth + 1, acc);
    run(mid, hi, right, depth + 1, acc);
  }
};

}  // namespace

std::vector<double> integrate_adaptive(double a, double b, std::size_t m, const VectorIntegrand& f, double tol,
                                       int max_depth) {
  std::vector<double> acc(m, 0.0);
  if (a == b || m == 0) return acc;
  const GaussLegendreRule& rule = gauss_legendre(16);

  // Scale pass: integral of |f_j| on a fixed composite rule.
  std::vector<double> scale(m, 0.0), buf(m);
  const QuadratureNodes coarse = composite_gauss_legendre(a, b, 64, 16);
  for (std::size_t i = 0; i < coarse.x.size(); ++i) {
    f(coarse.x[i], buf);
    for (std::size_t j = 0; j < m; ++j) scale[j] += coarse.w[i] * std::abs(buf[j]);
  }
  Adaptive ad{f, m, rule, std::vector<double>(m), max_depth, std::vector<double>(m)};
  const double len = b - a;
  for (std::size_t j = 0; j < m; ++j) {
    ad.budget[j] = tol * std::max(scale[j], std::numeric_limits<double>::min()) / std::abs(len);
  }
  const std::size_t start = 8;
  const double h = len / start;
  for (std::size_t p = 0; p < start; ++p) {
    const double lo = a + h * static_cast<double>(p), hi = lo + h;
    std::vector<double> whole;
    ad.panel(lo, hi, whole);
    ad.run(lo, hi, whole, 0, acc);
  }
  return acc;
}

double integrate_adaptive(double a, double b, const std::function<double(double)>& f, double tol) {
  const VectorIntegrand vf = [&](double x, std::span<double> out) { out[0] = f(x); };
  return integrate_adaptive(a, b, 1, vf, tol)[0];
}

}  // namespace momentkit
