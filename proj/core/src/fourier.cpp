#include "momentkit/fourier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "momentkit/charfn.hpp"
#include "momentkit/error.hpp"
#include "momentkit/parallel.hpp"
#include "momentkit/quadrature.hpp"

namespace momentkit {

namespace {

using cd = std::complex<double>;

constexpr int kPanelOrder = 16;

// Panels of 16-point Gauss-Legendre on [-L, L] with at least ppu points per unit.
QuadratureNodes symmetric_nodes(double L, double ppu) {
  const double points = std::ceil(2.0 * L * ppu);
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(points / kPanelOrder)));
  return composite_gauss_legendre(-L, L, panels, kPanelOrder);
}

struct NodeValues {
  std::vector<std::vector<double>> z;  // tensor nodes
  std::vector<double> w;
  std::vector<cd> f;
  int degree_used = 0;
  int precision_bits = 53;
  double max_cancellation = 1.0;
  double tail_proxy = 0.0;
  bool reliable = true;
};

// Evaluates f at every node of the n-fold tensor product of `axis`, stopping
// each series adaptively; throws NotConverged if any node fails.
NodeValues evaluate_tensor(const MomentSequence& s, const QuadratureNodes& axis, double zmax, double tol,
                           std::size_t budget, unsigned threads) {
  const std::size_t n = s.dimension();
  const std::size_t m = axis.x.size();
  double total = 1.0;
  for (std::size_t j = 0; j < n; ++j) total *= static_cast<double>(m);
  if (total > static_cast<double>(budget)) {
    raise(ErrorCode::kOscillationUnderresolved,
          "quadrature needs " + std::to_string(static_cast<long long>(total)) + " nodes, budget is " +
              std::to_string(budget));
  }
  const auto count = static_cast<std::size_t>(total);

  NodeValues out;
  out.z.resize(count, std::vector<double>(n));
  out.w.resize(count);
  out.f.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = rest % m;
      rest /= m;
      out.z[i][j] = axis.x[k];
      w *= axis.w[k];
    }
    out.w[i] = w;
  }

  const CharSeries c(s);
  SeriesOptions so;
  so.tol = tol;
  so.adaptive = true;
  const std::vector<double> zm(n, zmax);
  const SeriesEvaluator ev(c, zm, so);
  out.precision_bits = ev.precision_bits();

  std::vector<EvalDiagnostics> diags(count);
  parallel_for(
      count,
      [&](std::size_t i) {
        const SeriesValue v = ev.evaluate(out.z[i]);
        out.f[i] = v.total();
        diags[i] = v.diag;
      },
      threads);

  for (std::size_t i = 0; i < count; ++i) {
    const EvalDiagnostics& d = diags[i];
    if (!d.converged) {
      std::string at;
      for (double v : out.z[i]) at += (at.empty() ? "" : ",") + format_number(v);
      raise(ErrorCode::kNotConverged, "characteristic series did not converge at z = (" + at + ") by degree " +
                                          std::to_string(s.max_degree()) + " (last shell " +
                                          format_number(d.truncation_proxy) + ")");
    }
    out.degree_used = std::max(out.degree_used, d.degree_used);
    if (std::isfinite(d.cancellation)) out.max_cancellation = std::max(out.max_cancellation, d.cancellation);
    out.tail_proxy = std::max(out.tail_proxy, d.truncation_proxy);
    out.reliable = out.reliable && d.reliable;
  }
  return out;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) raise(ErrorCode::kInvalidArgument, std::string(what) + " must be positive");
}

// Bound on the support radius from even moment growth; 0 when unavailable.
double support_proxy(const MomentSequence& s) {
  if (s.max_degree() < 2) return 0.0;
  try {
    return radius_estimate(s).c_hat;
  } catch (const Error&) {
    return 0.0;
  }
}

// (e^w - 1) / w, continuous at w = 0.
cd exprel(cd w) {
  if (std::abs(w) < 0.5) {
    cd term = 1.0, sum = 1.0;
    for (int k = 2; k < 30; ++k) {
      term *= w / static_cast<double>(k);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return (std::exp(w) - 1.0) / w;
}

}  // namespace

std::string_view damping_name(Damping d) noexcept { return d == Damping::kFejer ? "fejer" : "none"; }

Damping parse_damping(std::string_view name) {
  if (name == "none") return Damping::kNone;
  if (name == "fejer") return Damping::kFejer;
  raise(ErrorCode::kInvalidArgument, "unknown damping '" + std::string(name) + "' (expected none or fejer)");
}

ReconstructionResult reconstruct_density(const MomentSequence& s, const std::vector<std::vector<double>>& grid,
                                         const ReconstructionOptions& opts) {
  require_positive(opts.R, "R");
  require_positive(opts.tol, "tol");
  const std::size_t n = s.dimension();
  double xmax = 0.0;
  for (const auto& x : grid) {
    if (x.size() != n) raise(ErrorCode::kDimensionMismatch, "grid point has wrong dimension");
    for (double v : x) xmax = std::max(xmax, std::abs(v));
  }

  ReconstructionResult r;
  r.grid = grid;
  r.R = opts.R;
  r.damping = opts.damping;
  r.degree_used = s.max_degree();
  r.values.assign(grid.size(), 0.0);
  r.imag_residue.assign(grid.size(), 0.0);

  const double ppu = std::max(8.0, std::ceil(4.0 * opts.R * (1.0 + xmax) / std::numbers::pi));
  r.quadrature_points_per_unit = static_cast<int>(ppu);
  const QuadratureNodes axis = symmetric_nodes(opts.R, ppu);
  NodeValues nv = evaluate_tensor(s, axis, opts.R, opts.tol, opts.node_budget, opts.threads);

  if (opts.damping == Damping::kFejer) {
    for (std::size_t i = 0; i < nv.f.size(); ++i) {
      double d = 1.0;
      for (double z : nv.z[i]) d *= std::max(0.0, 1.0 - std::abs(z) / opts.R);
      nv.f[i] *= d;
    }
  }

  const double norm = std::pow(2.0 * std::numbers::pi, -static_cast<double>(n));
  parallel_for(
      grid.size(),
      [&](std::size_t g) {
        const auto& x = grid[g];
        cd sum = 0.0;
        for (std::size_t i = 0; i < nv.f.size(); ++i) {
          double phase = 0.0;
          for (std::size_t j = 0; j < n; ++j) phase += x[j] * nv.z[i][j];
          sum += nv.w[i] * std::polar(1.0, -phase) * nv.f[i];
        }
        sum *= norm;
        r.values[g] = sum.real();
        r.imag_residue[g] = sum.imag();
      },
      opts.threads);

  auto& d = r.diagnostics;
  d.nodes = nv.f.size();
  d.precision_bits = nv.precision_bits;
  d.max_cancellation = nv.max_cancellation;
  d.tail_proxy = nv.tail_proxy;
  d.reliable = nv.reliable;
  for (double v : r.imag_residue) d.max_imag_residue = std::max(d.max_imag_residue, std::abs(v));
  r.degree_used = nv.degree_used;
  r.clean = d.reliable && d.max_imag_residue <= opts.imag_threshold;
  return r;
}

std::vector<std::vector<double>> linear_grid(double lo, double hi, double step) {
  require_positive(step, "step");
  if (hi < lo) raise(ErrorCode::kInvalidArgument, "grid upper end below lower end");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<std::vector<double>> g;
  g.reserve(count);
  for (std::size_t i = 0; i < count; ++i) g.push_back({lo + step * static_cast<double>(i)});
  return g;
}

NonnegativityVerdict nonnegativity_check(const ReconstructionResult& r, double tol) {
  NonnegativityVerdict v;
  if (r.values.empty()) return v;
  const auto it = std::min_element(r.values.begin(), r.values.end());
  v.index = static_cast<std::size_t>(it - r.values.begin());
  v.min_value = *it;
  v.argmin = r.grid[v.index];
  v.nonnegative = v.min_value >= -tol;
  return v;
}

MassResult levy_interval_mass(const MomentSequence& s, double a, double b, double T, const LevyOptions& opts) {
  if (s.dimension() != 1) raise(ErrorCode::kDimensionMismatch, "Levy inversion is implemented for n = 1 only");
  if (!(a < b)) raise(ErrorCode::kInvalidArgument, "need a < b");
  require_positive(T, "T");
  require_positive(opts.tol, "tol");

  MassResult out;
  out.frequency = std::max(std::abs(a), std::abs(b)) + support_proxy(s);
  const double ppu = std::max(8.0, std::ceil(4.0 * out.frequency));
  const QuadratureNodes axis = symmetric_nodes(T, ppu);
  const NodeValues nv = evaluate_tensor(s, axis, T, opts.tol, static_cast<std::size_t>(-1), opts.threads);

  // (e^{-ita} - e^{-itb}) / (it) = (b - a) e^{-ita} (e^w - 1) / w with w = -it(b - a);
  // the t -> 0 limit (b - a) f(0) is built into the series branch of exprel.
  cd sum = 0.0;
  for (std::size_t i = 0; i < nv.f.size(); ++i) {
    const double t = nv.z[i][0];
    const cd kernel = (b - a) * std::polar(1.0, -t * a) * exprel(cd(0.0, -t * (b - a)));
    sum += nv.w[i] * kernel * nv.f[i];
  }
  sum /= 2.0 * std::numbers::pi;
  out.value = sum.real();
  out.imag_residue = sum.imag();
  out.nodes = nv.f.size();
  out.degree_used = nv.degree_used;
  out.precision_bits = nv.precision_bits;
  return out;
}

MassResult gaussian_test_mass(const MomentSequence& s, const std::vector<double>& x0, double sigma, double R,
                              const TestMassOptions& opts) {
  const std::size_t n = s.dimension();
  if (x0.size() != n) raise(ErrorCode::kDimensionMismatch, "x0 has wrong dimension");
  require_positive(sigma, "sigma");
  require_positive(R, "R");
  require_positive(opts.tol, "tol");

  MassResult out;
  double xmax = 0.0;
  for (double v : x0) xmax = std::max(xmax, std::abs(v));
  out.frequency = xmax + support_proxy(s);
  const double ppu = std::max(8.0, std::ceil(4.0 * out.frequency));
  const QuadratureNodes axis = symmetric_nodes(R, ppu);
  const NodeValues nv = evaluate_tensor(s, axis, R, opts.tol, opts.node_budget, opts.threads);

  cd sum = 0.0;
  for (std::size_t i = 0; i < nv.f.size(); ++i) {
    double phase = 0.0, r2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      phase += x0[j] * nv.z[i][j];
      r2 += nv.z[i][j] * nv.z[i][j];
    }
    sum += nv.w[i] * std::exp(-0.5 * sigma * sigma * r2) * std::polar(1.0, -phase) * nv.f[i];
  }
  sum *= std::pow(2.0 * std::numbers::pi, -static_cast<double>(n));
  out.value = sum.real();
  out.imag_residue = sum.imag();
  out.nodes = nv.f.size();
  out.degree_used = nv.degree_used;
  out.precision_bits = nv.precision_bits;
  return out;
}

}  // namespace momentkit
