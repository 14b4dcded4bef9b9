#include "momentkit/richter.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "momentkit/linear_solvers.hpp"
#include "momentkit/quadrature.hpp"
#include "momentkit/rational.hpp"

namespace momentkit {

namespace {

bool same_point(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) > 1e-12 * std::max(1.0, std::abs(b[j]))) return false;
  }
  return true;
}

double max_abs_residual(const DenseRows& A, const std::vector<double>& c, const std::vector<double>& v) {
  double r = 0.0;
  for (std::size_t j = 0; j < A.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += A[j][i] * c[i];
    r = std::max(r, std::abs(s - v[j]));
  }
  return r;
}

// Rows j = basis function, columns i = point.
DenseRows pointwise_matrix(const TruncatedFunctional& L, const std::vector<std::vector<double>>& points) {
  DenseRows A(L.size(), std::vector<double>(points.size()));
  for (std::size_t j = 0; j < L.size(); ++j) {
    for (std::size_t i = 0; i < points.size(); ++i) A[j][i] = L.basis[j].evaluate(points[i]);
  }
  return A;
}

bool is_override_point(const TruncatedFunctional& L, std::span<const double> x) {
  for (const auto& f : L.basis) {
    for (const auto& o : f.overrides()) {
      if (same_point(x, o.point)) return true;
    }
  }
  return false;
}

std::vector<double> clamp_to(const Domain& d, std::vector<double> x) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], d.lower[j], d.upper[j]);
  return x;
}

// NNLS weights for fixed positions; drops zero-weight atoms.
std::vector<Atom> resolve_weights(const TruncatedFunctional& L, const std::vector<std::vector<double>>& points) {
  const DenseRows A = pointwise_matrix(L, points);
  const NnlsResult r = nnls(A, L.values);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (r.x[i] > 0.0) atoms.push_back({points[i], r.x[i]});
  }
  return atoms;
}

std::vector<std::vector<double>> positions(const std::vector<Atom>& atoms) {
  std::vector<std::vector<double>> p;
  for (const auto& a : atoms) p.push_back(a.x);
  return p;
}

// Variable projection: parameters are the free atom positions, weights are
// the NNLS solution for those positions.
struct PositionFunctor : Eigen::DenseFunctor<double> {
  PositionFunctor(const TruncatedFunctional& L, std::vector<std::vector<double>> fixed, std::size_t free_atoms)
      : Eigen::DenseFunctor<double>(static_cast<int>(free_atoms * L.domain.dimension()),
                                    static_cast<int>(std::max(L.size(), free_atoms * L.domain.dimension()))),
        L_(L),
        fixed_(std::move(fixed)),
        free_(free_atoms) {}

  std::vector<std::vector<double>> points(const Eigen::VectorXd& p) const {
    const std::size_t n = L_.domain.dimension();
    std::vector<std::vector<double>> pts = fixed_;
    for (std::size_t a = 0; a < free_; ++a) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = p(static_cast<Eigen::Index>(a * n + j));
      pts.push_back(clamp_to(L_.domain, std::move(x)));
    }
    return pts;
  }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& fvec) const {
    const auto pts = points(p);
    const DenseRows A = pointwise_matrix(L_, pts);
    const NnlsResult r = nnls(A, L_.values);
    fvec.setZero();
    for (std::size_t j = 0; j < L_.size(); ++j) {
      double s = -L_.values[j];
      for (std::size_t i = 0; i < pts.size(); ++i) s += A[j][i] * r.x[i];
      fvec(static_cast<Eigen::Index>(j)) = s;
    }
    return 0;
  }

  const TruncatedFunctional& L_;
  std::vector<std::vector<double>> fixed_;
  std::size_t free_;
};

std::vector<Atom> refine_positions(const TruncatedFunctional& L, const std::vector<Atom>& atoms, int max_evals) {
  std::vector<std::vector<double>> fixed, moving;
  for (const auto& a : atoms) (is_override_point(L, a.x) ? fixed : moving).push_back(a.x);
  if (moving.empty()) return atoms;
  const std::size_t n = L.domain.dimension();
  Eigen::VectorXd p(static_cast<Eigen::Index>(moving.size() * n));
  for (std::size_t a = 0; a < moving.size(); ++a) {
    for (std::size_t j = 0; j < n; ++j) p(static_cast<Eigen::Index>(a * n + j)) = moving[a][j];
  }
  PositionFunctor f(L, fixed, moving.size());
  Eigen::NumericalDiff<PositionFunctor> diff(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<PositionFunctor>> lm(diff);
  lm.setMaxfev(max_evals);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.minimize(p);
  return resolve_weights(L, f.points(p));
}

// Merges atoms closer than `radius` (weighted mean position).
std::vector<std::vector<double>> merge_close(const std::vector<Atom>& atoms, double radius) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    bool merged = false;
    for (auto& b : out) {
      double d = 0.0;
      for (std::size_t j = 0; j < a.x.size(); ++j) d = std::max(d, std::abs(a.x[j] - b.x[j]));
      if (d < radius) {
        const double w = a.weight + b.weight;
        for (std::size_t j = 0; j < a.x.size(); ++j) b.x[j] = (a.weight * a.x[j] + b.weight * b.x[j]) / w;
        b.weight = w;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(a);
  }
  return positions(out);
}

// Moment j of the standard bump exp(-1/(1-u^2)) on (-1,1), normalized to mass 1.
double bump_moment(int k) {
  static std::mutex mu;
  static std::vector<double> moments;
  std::lock_guard lock(mu);
  if (static_cast<int>(moments.size()) <= k) {
    const std::size_t count = static_cast<std::size_t>(std::max(k + 1, 64));
    const auto raw = integrate_adaptive(
        -1.0, 1.0, count,
        [count](double u, std::span<double> out) {
          const double b = std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
          double p = b;
          for (std::size_t j = 0; j < count; ++j, p *= u) out[j] = p;
        },
        1e-14);
    moments.resize(count);
    for (std::size_t j = 0; j < count; ++j) moments[j] = raw[j] / raw[0];
  }
  return moments[static_cast<std::size_t>(k)];
}

// int y^k d(member centered at c) in one coordinate.
double member_moment_1d(FamilyKind kind, int k, double c, double sigma) {
  if (kind == FamilyKind::kGaussian) {
    double m0 = 1.0, m1 = c;
    if (k == 0) return m0;
    for (int j = 2; j <= k; ++j) {
      const double m2 = c * m1 + (j - 1) * sigma * sigma * m0;
      m0 = m1;
      m1 = m2;
    }
    return m1;
  }
  double sum = 0.0;
  for (int j = 0; j <= k; j += 2) {
    const double mj = kind == FamilyKind::kMollifier ? bump_moment(j) : 1.0 / (j + 1);
    sum += to_double(Rational(binomial(k, j))) * std::pow(c, k - j) * std::pow(sigma, j) * mj;
  }
  return sum;
}

double bump_normalizer() {
  static const double z = integrate_adaptive(
      -1.0, 1.0, [](double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }, 1e-15);
  return z;
}

double family_density_1d(FamilyKind kind, double y, double c, double sigma) {
  const double u = (y - c) / sigma;
  switch (kind) {
    case FamilyKind::kGaussian: return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    case FamilyKind::kMollifier:
      return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) / (bump_normalizer() * sigma) : 0.0;
    case FamilyKind::kBox: return std::abs(u) <= 1.0 ? 0.5 / sigma : 0.0;
  }
  return 0.0;
}

std::vector<double> member_column(const TruncatedFunctional& L, FamilyKind kind, std::span<const double> center,
                                  double sigma) {
  std::vector<double> col(L.size());
  for (std::size_t j = 0; j < L.size(); ++j) col[j] = family_integral(kind, L.basis[j], center, sigma);
  return col;
}

SmoothedSolve solve_columns(const TruncatedFunctional& L, const std::vector<std::vector<double>>& columns) {
  DenseRows M(L.size(), std::vector<double>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (std::size_t j = 0; j < L.size(); ++j) M[j][i] = columns[i][j];
  }
  const LeastSquaresResult ls = least_squares(M, L.values);
  SmoothedSolve out;
  out.weights = ls.x;
  out.condition = ls.condition;
  out.ridge = ls.ridge;
  out.residual = max_abs_residual(M, ls.x, L.values);
  return out;
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace

bool Domain::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  }
  return true;
}

BasisFunction BasisFunction::polynomial(Polynomial p, std::string label) {
  BasisFunction f;
  f.n_ = p.dimension();
  f.label_ = label.empty() ? p.to_string() : std::move(label);
  f.poly_ = std::move(p);
  return f;
}

BasisFunction BasisFunction::function(std::size_t n, Callable fn, std::string label) {
  if (!fn) raise(ErrorCode::kInvalidArgument, "basis function callable is empty");
  BasisFunction f;
  f.n_ = n;
  f.label_ = std::move(label);
  f.f_ = std::move(fn);
  return f;
}

BasisFunction& BasisFunction::with_override(std::vector<double> point, double value) {
  if (point.size() != n_) raise(ErrorCode::kDimensionMismatch, "override point has wrong dimension");
  overrides_.push_back({std::move(point), value});
  return *this;
}

double BasisFunction::evaluate(std::span<const double> x) const {
  for (const auto& o : overrides_) {
    if (same_point(x, o.point)) return o.value;
  }
  return evaluate_ae(x);
}

double BasisFunction::evaluate_ae(std::span<const double> x) const {
  if (x.size() != n_) raise(ErrorCode::kDimensionMismatch, "basis function evaluated at wrong dimension");
  return poly_ ? poly_->evaluate(x) : f_(x);
}

BasisFunction discontinuous_f2() {
  return BasisFunction::polynomial(Polynomial::univariate({0, 0, 1}), "f2").with_override({1.0}, -1.0);
}

void TruncatedFunctional::validate() const {
  const std::size_t n = domain.dimension();
  if (n == 0 || domain.upper.size() != n) raise(ErrorCode::kInvalidArgument, "domain needs matching corners");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(domain.lower[j] < domain.upper[j])) raise(ErrorCode::kInvalidArgument, "domain lower corner must be below upper");
  }
  if (basis.empty()) raise(ErrorCode::kInvalidArgument, "functional needs at least one basis function");
  if (values.size() != basis.size()) {
    raise(ErrorCode::kDimensionMismatch, "functional has " + std::to_string(basis.size()) + " basis functions but " +
                                             std::to_string(values.size()) + " values");
  }
  for (const auto& f : basis) {
    if (f.dimension() != n) raise(ErrorCode::kDimensionMismatch, "basis function dimension differs from domain");
  }
}

TruncatedFunctional discontinuous_example() {
  TruncatedFunctional L;
  L.domain = Domain::interval(0.0, 2.0);
  L.basis = {BasisFunction::polynomial(Polynomial::constant(1, 1), "1"),
             BasisFunction::polynomial(Polynomial::variable(1, 0), "x"), discontinuous_f2()};
  L.values = {2.0 + 8.0 / 3.0, 2.0 + 8.0 / 3.0, 0.0};
  return L;
}

std::vector<std::vector<double>> make_candidate_grid(const TruncatedFunctional& L, std::size_t points_per_axis) {
  L.validate();
  const std::size_t n = L.domain.dimension();
  const std::size_t N = points_per_axis ? points_per_axis : (n == 1 ? 201 : 21);
  if (N < 2) raise(ErrorCode::kInvalidArgument, "candidate grid needs at least 2 points per axis");
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) total *= N;
  std::vector<std::vector<double>> grid;
  grid.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<double> x(n);
    std::size_t rest = i;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = static_cast<double>(rest % N) / static_cast<double>(N - 1);
      rest /= N;
      x[j] = L.domain.lower[j] + (L.domain.upper[j] - L.domain.lower[j]) * t;
    }
    grid.push_back(std::move(x));
  }
  for (const auto& f : L.basis) {
    for (const auto& o : f.overrides()) {
      const bool present = std::any_of(grid.begin(), grid.end(), [&](const auto& g) { return same_point(g, o.point); });
      if (!present && L.domain.contains(o.point)) grid.push_back(o.point);
    }
  }
  return grid;
}

double atomic_residual(const TruncatedFunctional& L, const std::vector<Atom>& atoms) {
  double r = 0.0;
  for (std::size_t j = 0; j < L.size(); ++j) {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * L.basis[j].evaluate(a.x);
    r = std::max(r, std::abs(s - L.values[j]));
  }
  return r;
}

AtomicRepresentation atomic_decompose(const TruncatedFunctional& L, const std::vector<std::vector<double>>& grid,
                                      const AtomicOptions& opts) {
  L.validate();
  if (grid.empty()) raise(ErrorCode::kInvalidArgument, "candidate grid is empty");
  for (const auto& g : grid) {
    if (g.size() != L.domain.dimension()) raise(ErrorCode::kDimensionMismatch, "candidate point has wrong dimension");
  }

  const DenseRows A = pointwise_matrix(L, grid);
  const LpResult lp = simplex_solve(A, L.values, std::vector<double>(grid.size(), 1.0));
  AtomicRepresentation rep;
  rep.lp_iterations = lp.iterations;
  rep.lp_feasible = lp.status == LpStatus::kOptimal;
  std::vector<std::vector<double>> support;
  const std::vector<double> start = rep.lp_feasible ? lp.x : nnls(A, L.values).x;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (start[i] > 0.0) support.push_back(grid[i]);
  }

  std::vector<Atom> atoms = resolve_weights(L, support);
  double residual = atomic_residual(L, atoms);
  double width = 0.0;
  for (std::size_t j = 0; j < L.domain.dimension(); ++j) width = std::max(width, L.domain.upper[j] - L.domain.lower[j]);
  for (int round = 0; round < 4 && residual > opts.tol && !atoms.empty(); ++round) {
    rep.refined = true;
    atoms = refine_positions(L, atoms, opts.max_refine_evaluations);
    residual = atomic_residual(L, atoms);
    if (residual <= opts.tol) break;
    atoms = resolve_weights(L, merge_close(atoms, 1e-2 * width));
    residual = atomic_residual(L, atoms);
  }
  if (residual > opts.tol) {
    std::ostringstream os;
    os << "no nonnegative combination of " << atoms.size() << " atoms reaches residual " << opts.tol
       << " (best " << residual << ", LP " << lp_status_name(lp.status)
       << "); the functional is outside or on the boundary of the moment cone of the grid";
    raise(ErrorCode::kInfeasible, os.str());
  }
  rep.atoms = std::move(atoms);
  rep.residual = residual;
  return rep;
}

std::string_view family_name(FamilyKind k) noexcept {
  switch (k) {
    case FamilyKind::kGaussian: return "gaussian";
    case FamilyKind::kMollifier: return "mollifier";
    case FamilyKind::kBox: return "box";
  }
  return "unknown";
}

FamilyKind parse_family(std::string_view name) {
  if (name == "gaussian") return FamilyKind::kGaussian;
  if (name == "mollifier") return FamilyKind::kMollifier;
  if (name == "box") return FamilyKind::kBox;
  raise(ErrorCode::kInvalidArgument, "unknown family '" + std::string(name) + "' (expected gaussian, mollifier or box)");
}

std::vector<double> DiracFamily::default_sigmas() { return {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}; }

double family_density(FamilyKind kind, std::span<const double> y, std::span<const double> center, double sigma) {
  if (y.size() != center.size()) raise(ErrorCode::kDimensionMismatch, "density point has wrong dimension");
  double d = 1.0;
  for (std::size_t j = 0; j < y.size() && d != 0.0; ++j) d *= family_density_1d(kind, y[j], center[j], sigma);
  return d;
}

double family_integral(FamilyKind kind, const BasisFunction& f, std::span<const double> center, double sigma) {
  if (!(sigma > 0.0)) raise(ErrorCode::kInvalidArgument, "sigma must be positive");
  const std::size_t n = center.size();
  if (n != f.dimension()) raise(ErrorCode::kDimensionMismatch, "center has wrong dimension");
  if (const auto& p = f.as_polynomial()) {
    double sum = 0.0;
    for (const auto& [alpha, c] : p->coefficients()) {
      double term = to_double(c);
      for (std::size_t j = 0; j < n; ++j) term *= member_moment_1d(kind, alpha[j], center[j], sigma);
      sum += term;
    }
    return sum;
  }
  // Tensor Gauss-Legendre over the member's support (12 sigma for the Gaussian).
  const double half = kind == FamilyKind::kGaussian ? 12.0 * sigma : sigma;
  std::vector<QuadratureNodes> axes;
  const std::size_t panels = kind == FamilyKind::kMollifier ? 32 : 8;
  for (std::size_t j = 0; j < n; ++j) {
    axes.push_back(composite_gauss_legendre(center[j] - half, center[j] + half, panels));
  }
  const std::size_t m = axes[0].x.size();
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) total *= m;
  double sum = 0.0;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = rest % m;
      rest /= m;
      y[j] = axes[j].x[k];
      w *= axes[j].w[k];
    }
    sum += w * f.evaluate_ae(y) * family_density(kind, y, center, sigma);
  }
  return sum;
}

SmoothedSolve smoothed_weights(const TruncatedFunctional& L, const std::vector<std::vector<double>>& centers,
                               FamilyKind kind, double sigma) {
  L.validate();
  std::vector<std::vector<double>> columns;
  for (const auto& c : centers) columns.push_back(member_column(L, kind, c, sigma));
  return solve_columns(L, columns);
}

SmoothingFailedError::SmoothingFailedError(const std::string& message, std::vector<SweepEntry> sweep)
    : Error(ErrorCode::kSmoothingFailed, message), sweep_(std::move(sweep)) {}

SmoothedRepresentation smooth_representation(const AtomicRepresentation& atomic, const TruncatedFunctional& L,
                                             const DiracFamily& family, const SmoothOptions& opts) {
  L.validate();
  if (family.sigmas.empty()) raise(ErrorCode::kInvalidArgument, "sigma grid is empty");
  if (atomic.atoms.empty()) raise(ErrorCode::kInvalidArgument, "atomic representation has no atoms");
  if (atomic.residual > opts.tol) {
    raise(ErrorCode::kInvalidArgument, "atomic residual exceeds the smoothing tolerance");
  }
  std::vector<double> sigmas = family.sigmas;
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) raise(ErrorCode::kInvalidArgument, "sigma values must be positive");
  }
  std::sort(sigmas.begin(), sigmas.end(), std::greater<>());

  const std::vector<std::vector<double>> candidates =
      opts.candidates.empty() ? make_candidate_grid(L) : opts.candidates;
  const auto passes = [&](const SmoothedSolve& s) {
    return s.residual <= opts.tol && min_of(s.weights) >= opts.weight_floor;
  };

  std::vector<SweepEntry> sweep;
  for (double sigma : sigmas) {
    std::vector<std::vector<double>> centers = positions(atomic.atoms);
    std::vector<std::vector<double>> columns;
    for (const auto& c : centers) columns.push_back(member_column(L, family.kind, c, sigma));
    SmoothedSolve best = solve_columns(L, columns);

    std::vector<std::vector<double>> cand_columns;
    if (!passes(best) && opts.complete && centers.size() < L.size()) {
      for (const auto& c : candidates) cand_columns.push_back(member_column(L, family.kind, c, sigma));
    }
    while (!passes(best) && !cand_columns.empty() && centers.size() < L.size()) {
      std::size_t pick = candidates.size();
      SmoothedSolve pick_solve;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (std::any_of(centers.begin(), centers.end(), [&](const auto& c) { return same_point(c, candidates[i]); })) {
          continue;
        }
        columns.push_back(cand_columns[i]);
        SmoothedSolve s = solve_columns(L, columns);
        columns.pop_back();
        const bool ok = passes(s), pick_ok = pick < candidates.size() && passes(pick_solve);
        bool better;
        if (pick == candidates.size()) {
          better = true;
        } else if (ok != pick_ok) {
          better = ok;
        } else if (ok) {
          better = min_of(s.weights) > min_of(pick_solve.weights);
        } else {
          better = s.residual < pick_solve.residual;
        }
        if (better) {
          pick = i;
          pick_solve = std::move(s);
        }
      }
      if (pick == candidates.size()) break;
      centers.push_back(candidates[pick]);
      columns.push_back(cand_columns[pick]);
      best = std::move(pick_solve);
    }

    SweepEntry entry{sigma, best.residual, min_of(best.weights), centers.size(), passes(best)};
    sweep.push_back(entry);
    if (entry.accepted) {
      SmoothedRepresentation r;
      r.family = family.kind;
      for (std::size_t i = 0; i < centers.size(); ++i) r.atoms.push_back({centers[i], sigma, best.weights[i]});
      r.residual = best.residual;
      r.condition = best.condition;
      r.min_weight = entry.min_weight;
      r.ridge = best.ridge;
      r.added_atoms = centers.size() - atomic.atoms.size();
      r.sweep = std::move(sweep);
      return r;
    }
  }

  std::ostringstream os;
  os << "no sigma in the " << family_name(family.kind) << " grid gives weights >= " << opts.weight_floor
     << " with residual <= " << opts.tol << ";";
  for (const auto& e : sweep) os << " sigma=" << e.sigma << " residual=" << e.residual << " min_weight=" << e.min_weight << ";";
  throw SmoothingFailedError(os.str(), std::move(sweep));
}

std::vector<double> emit_density(const SmoothedRepresentation& r, const std::vector<std::vector<double>>& grid) {
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (const auto& a : r.atoms) values[g] += a.weight * family_density(r.family, grid[g], a.x, a.sigma);
  }
  return values;
}

}  // namespace momentkit
