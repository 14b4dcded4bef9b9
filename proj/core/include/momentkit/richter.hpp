#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "momentkit/error.hpp"
#include "momentkit/polynomial.hpp"

namespace momentkit {

struct Domain {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const;
  static Domain interval(double lo, double hi) { return Domain{{lo}, {hi}}; }
};

struct PointOverride {
  std::vector<double> point;
  double value = 0.0;
};

// A basis function: a polynomial or an arbitrary callable, plus finitely many
// point overrides. Overrides are seen by pointwise evaluation only; integrals
// against densities ignore them (Lebesgue-null set).
class BasisFunction {
 public:
  using Callable = std::function<double(std::span<const double>)>;

  static BasisFunction polynomial(Polynomial p, std::string label = "");
  static BasisFunction function(std::size_t n, Callable f, std::string label);

  BasisFunction& with_override(std::vector<double> point, double value);

  std::size_t dimension() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<Polynomial>& as_polynomial() const noexcept { return poly_; }
  const std::vector<PointOverride>& overrides() const noexcept { return overrides_; }

  // Pointwise value, honoring overrides.
  double evaluate(std::span<const double> x) const;
  // Value ignoring overrides.
  double evaluate_ae(std::span<const double> x) const;

 private:
  std::size_t n_ = 1;
  std::string label_;
  std::optional<Polynomial> poly_;
  Callable f_;
  std::vector<PointOverride> overrides_;
};

// x^2 on the line except f(1) = -1.
BasisFunction discontinuous_f2();

struct TruncatedFunctional {
  Domain domain;
  std::vector<BasisFunction> basis;
  std::vector<double> values;

  std::size_t size() const noexcept { return basis.size(); }
  void validate() const;
};

// Domain [0,2], basis {1, x, f2}, values of lambda + (8/3) delta_1.
TruncatedFunctional discontinuous_example();

struct Atom {
  std::vector<double> x;
  double weight = 0.0;
};

struct AtomicRepresentation {
  std::vector<Atom> atoms;
  double residual = 0.0;  // max_j |L(f_j) - sum_i c_i f_j(x_i)|
  bool lp_feasible = true;
  bool refined = false;
  int lp_iterations = 0;
};

// Per-axis points lower + (upper - lower) i / (N - 1), tensorized, plus all
// override points. N = 0 picks 201 in 1-d and 21 otherwise.
std::vector<std::vector<double>> make_candidate_grid(const TruncatedFunctional& L, std::size_t points_per_axis = 0);

struct AtomicOptions {
  double tol = 1e-10;
  int max_refine_evaluations = 4000;
};

// Basic feasible point of min sum c, A c = L, c >= 0 over the grid, then
// position refinement with weights re-solved by NNLS. Throws Infeasible.
AtomicRepresentation atomic_decompose(const TruncatedFunctional& L, const std::vector<std::vector<double>>& grid,
                                      const AtomicOptions& opts = {});

double atomic_residual(const TruncatedFunctional& L, const std::vector<Atom>& atoms);

enum class FamilyKind { kGaussian, kMollifier, kBox };

std::string_view family_name(FamilyKind k) noexcept;
FamilyKind parse_family(std::string_view name);

// Probability densities centered at x with scale sigma: the N(x, sigma^2 I)
// density, the normalized bump exp(-1/(1-|u|^2)) per coordinate with u = (y-x)/sigma,
// or the uniform density on the cube x +- sigma.
struct DiracFamily {
  FamilyKind kind = FamilyKind::kGaussian;
  std::vector<double> sigmas;  // tried in decreasing order

  static std::vector<double> default_sigmas();
};

double family_density(FamilyKind kind, std::span<const double> y, std::span<const double> center, double sigma);

// int f d(delta_{sigma, center}); closed form for polynomials, quadrature otherwise.
double family_integral(FamilyKind kind, const BasisFunction& f, std::span<const double> center, double sigma);

struct SmoothedAtom {
  std::vector<double> x;
  double sigma = 0.0;
  double weight = 0.0;
};

struct SweepEntry {
  double sigma = 0.0;
  double residual = 0.0;
  double min_weight = 0.0;
  std::size_t atoms = 0;
  bool accepted = false;
};

struct SmoothedRepresentation {
  FamilyKind family = FamilyKind::kGaussian;
  std::vector<SmoothedAtom> atoms;
  double residual = 0.0;
  double condition = 1.0;  // of the final normal matrix (cone-interior proxy)
  double min_weight = 0.0;
  bool ridge = false;
  std::size_t added_atoms = 0;
  std::vector<SweepEntry> sweep;
};

struct SmoothOptions {
  double tol = 1e-8;
  double weight_floor = 1e-10;
  // Add candidate points until there are as many atoms as basis functions.
  bool complete = true;
  std::vector<std::vector<double>> candidates;  // empty = make_candidate_grid(L)
};

struct SmoothedSolve {
  std::vector<double> weights;
  double residual = 0.0;
  double condition = 1.0;
  bool ridge = false;
};

// Least-squares weights for fixed centers at one sigma.
SmoothedSolve smoothed_weights(const TruncatedFunctional& L, const std::vector<std::vector<double>>& centers,
                               FamilyKind kind, double sigma);

class SmoothingFailedError : public Error {
 public:
  SmoothingFailedError(const std::string& message, std::vector<SweepEntry> sweep);
  const std::vector<SweepEntry>& sweep() const noexcept { return sweep_; }

 private:
  std::vector<SweepEntry> sweep_;
};

// Sweeps sigma from largest to smallest and returns the first passing fit.
// Throws SmoothingFailedError (code SmoothingFailed) carrying the sweep.
SmoothedRepresentation smooth_representation(const AtomicRepresentation& atomic, const TruncatedFunctional& L,
                                             const DiracFamily& family, const SmoothOptions& opts = {});

std::vector<double> emit_density(const SmoothedRepresentation& r, const std::vector<std::vector<double>>& grid);

}  // namespace momentkit
