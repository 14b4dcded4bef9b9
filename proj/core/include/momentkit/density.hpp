#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "momentkit/moment_sequence.hpp"
#include "momentkit/polynomial.hpp"
#include "momentkit/rational.hpp"

namespace momentkit {

struct Box {
  std::vector<Rational> lower;
  std::vector<Rational> upper;

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const;
  static Box cube(std::size_t n, const Rational& lo, const Rational& hi);
};

struct Indicator {
  Box box;
};

struct PolynomialPiece {
  Box box;
  Polynomial poly;
};

struct PiecewisePolynomial {
  std::vector<PolynomialPiece> pieces;
};

// Product of independent normals; `truncation` bounds the quadrature box.
struct Gaussian {
  std::vector<double> mean;
  std::vector<double> variance;
  std::optional<Box> truncation;
};

enum class ClosedFormId {
  kBump,        // exp(-1/(1-x^2)) normalized on [-1, 1]
  kSemicircle,  // (2/pi) sqrt(1-x^2) on [-1, 1]
};

// Separable product of the 1-D closed form in every coordinate.
struct ClosedForm {
  ClosedFormId id;
  std::size_t dimension = 1;
};

class DensitySpec;

struct MixtureComponent {
  Rational weight;
  std::shared_ptr<const DensitySpec> spec;
};

struct Mixture {
  std::vector<MixtureComponent> components;
};

class DensitySpec {
 public:
  using Kind = std::variant<Indicator, PiecewisePolynomial, Gaussian, ClosedForm, Mixture>;

  static DensitySpec indicator(Box box);
  static DensitySpec piecewise(std::vector<PolynomialPiece> pieces);
  // 1-D shorthand: one polynomial on [lo, hi].
  static DensitySpec polynomial_on(const Polynomial& p, const Rational& lo, const Rational& hi);
  static DensitySpec gaussian(std::vector<double> mean, std::vector<double> variance,
                              std::optional<Box> truncation = std::nullopt);
  static DensitySpec closed_form(ClosedFormId id, std::size_t n = 1);
  static DensitySpec mixture(std::vector<MixtureComponent> components);

  std::size_t dimension() const noexcept { return n_; }
  const Kind& kind() const noexcept { return kind_; }
  // Throws UnboundedSupport if some component has no bounding box.
  Box support_box() const;
  // True if the rational path applies (indicator, piecewise, semicircle, mixtures of these).
  bool has_exact_moments() const;

  double density(std::span<const double> x) const;

 private:
  DensitySpec(std::size_t n, Kind kind) : n_(n), kind_(std::move(kind)) {}
  std::size_t n_;
  Kind kind_;
};

enum class MomentPath { kAuto, kFloating };

// s_alpha = integral of x^alpha g(x) dx. kAuto uses exact rationals when the
// density has_exact_moments(); kFloating forces Gauss-Legendre quadrature.
MomentSequence moments_from_density(const DensitySpec& spec, int max_degree, MomentPath path = MomentPath::kAuto);

}  // namespace momentkit
