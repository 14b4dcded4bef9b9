#include "momentkit/density.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "momentkit/error.hpp"
#include "momentkit/quadrature.hpp"

namespace momentkit {

namespace {

constexpr double kBumpMass = 0.4439938161680794;  // integral of exp(-1/(1-u^2)) over (-1, 1)

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_box(const Box& b, std::size_t n) {
  if (b.lower.size() != n || b.upper.size() != n) raise(ErrorCode::kDimensionMismatch, "box has wrong dimension");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(b.lower[j] <= b.upper[j])) raise(ErrorCode::kInvalidArgument, "box lower corner exceeds upper corner");
  }
}

double bump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u)) / kBumpMass;
}

// Catalan(k) / 4^k: even moments of the unit semicircle law.
Rational semicircle_moment(int k) {
  if (k % 2 == 1) return 0;
  const int h = k / 2;
  Rational c(binomial(2 * static_cast<unsigned long>(h), static_cast<unsigned long>(h)), BigInt(h + 1));
  BigInt p4;
  mpz_ui_pow_ui(p4.get_mpz_t(), 4, static_cast<unsigned long>(h));
  c /= p4;
  c.canonicalize();
  return c;
}

// 1-D tables of integral x^k over [lo, hi], k <= K.
std::vector<Rational> exact_power_integrals(const Rational& lo, const Rational& hi, int K) {
  std::vector<Rational> t(static_cast<std::size_t>(K) + 1);
  Rational pl = lo, ph = hi;
  for (int k = 0; k <= K; ++k) {
    t[k] = (ph - pl) / (k + 1);
    pl *= lo;
    ph *= hi;
  }
  return t;
}

std::vector<double> float_power_integrals(double lo, double hi, int K) {
  const int order = K / 2 + 2;
  const QuadratureNodes q = composite_gauss_legendre(lo, hi, 1, order);
  std::vector<double> t(static_cast<std::size_t>(K) + 1, 0.0);
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    double p = q.w[i];
    for (int k = 0; k <= K; ++k) {
      t[k] += p;
      p *= q.x[i];
    }
  }
  return t;
}

// s_alpha = sum_beta c_beta prod_j T_j[alpha_j + beta_j]
template <typename T, typename Coef>
void accumulate_piece(const IndexSet& set, const Polynomial& p, const std::vector<std::vector<T>>& tables,
                      Coef coef, std::vector<T>& out) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    const MultiIndex& a = set.at(i);
    T acc = T(0);
    for (const auto& [b, c] : p.coefficients()) {
      T term = coef(c);
      for (std::size_t j = 0; j < a.size(); ++j) term *= tables[j][static_cast<std::size_t>(a[j] + b[j])];
      acc += term;
    }
    out[i] += acc;
  }
}

std::vector<Rational> exact_moments(const DensitySpec& spec, const IndexSet& set);
std::vector<double> float_moments(const DensitySpec& spec, const IndexSet& set);

std::vector<Rational> exact_piecewise(const std::vector<PolynomialPiece>& pieces, const IndexSet& set) {
  std::vector<Rational> out(set.size());
  for (const auto& piece : pieces) {
    const int K = set.max_degree() + std::max(0, piece.poly.degree());
    std::vector<std::vector<Rational>> tables;
    for (std::size_t j = 0; j < set.dimension(); ++j) {
      tables.push_back(exact_power_integrals(piece.box.lower[j], piece.box.upper[j], K));
    }
    accumulate_piece<Rational>(set, piece.poly, tables, [](const Rational& c) { return c; }, out);
  }
  return out;
}

std::vector<double> float_piecewise(const std::vector<PolynomialPiece>& pieces, const IndexSet& set) {
  std::vector<double> out(set.size(), 0.0);
  for (const auto& piece : pieces) {
    const int K = set.max_degree() + std::max(0, piece.poly.degree());
    std::vector<std::vector<double>> tables;
    for (std::size_t j = 0; j < set.dimension(); ++j) {
      tables.push_back(float_power_integrals(piece.box.lower[j].get_d(), piece.box.upper[j].get_d(), K));
    }
    accumulate_piece<double>(set, piece.poly, tables, [](const Rational& c) { return c.get_d(); }, out);
  }
  return out;
}

std::vector<double> product_moments(const IndexSet& set, const std::vector<std::vector<double>>& tables) {
  std::vector<double> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const MultiIndex& a = set.at(i);
    double v = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) v *= tables[j][static_cast<std::size_t>(a[j])];
    out[i] = v;
  }
  return out;
}

std::vector<double> adaptive_power_moments(double lo, double hi, int K, const std::function<double(double)>& g) {
  const auto m = static_cast<std::size_t>(K) + 1;
  return integrate_adaptive(lo, hi, m, [&](double x, std::span<double> out) {
    double p = g(x);
    for (std::size_t k = 0; k < m; ++k) {
      out[k] = p;
      p *= x;
    }
  });
}

std::vector<Rational> exact_moments(const DensitySpec& spec, const IndexSet& set) {
  return std::visit(
      Overloaded{
          [&](const Indicator& ind) {
            return exact_piecewise({PolynomialPiece{ind.box, Polynomial::constant(spec.dimension(), 1)}}, set);
          },
          [&](const PiecewisePolynomial& pw) { return exact_piecewise(pw.pieces, set); },
          [&](const Gaussian&) -> std::vector<Rational> {
            raise(ErrorCode::kInvalidArgument, "gaussian density has no exact moments");
          },
          [&](const ClosedForm& cf) -> std::vector<Rational> {
            if (cf.id != ClosedFormId::kSemicircle) raise(ErrorCode::kInvalidArgument, "closed form has no exact moments");
            std::vector<Rational> out(set.size());
            for (std::size_t i = 0; i < set.size(); ++i) {
              Rational v = 1;
              for (int e : set.at(i).entries()) v *= semicircle_moment(e);
              out[i] = v;
            }
            return out;
          },
          [&](const Mixture& mx) {
            std::vector<Rational> out(set.size());
            for (const auto& c : mx.components) {
              const auto part = exact_moments(*c.spec, set);
              for (std::size_t i = 0; i < out.size(); ++i) out[i] += c.weight * part[i];
            }
            return out;
          },
      },
      spec.kind());
}

std::vector<double> float_moments(const DensitySpec& spec, const IndexSet& set) {
  const int D = set.max_degree();
  return std::visit(
      Overloaded{
          [&](const Indicator& ind) {
            return float_piecewise({PolynomialPiece{ind.box, Polynomial::constant(spec.dimension(), 1)}}, set);
          },
          [&](const PiecewisePolynomial& pw) { return float_piecewise(pw.pieces, set); },
          [&](const Gaussian& g) {
            if (!g.truncation) raise(ErrorCode::kUnboundedSupport, "gaussian density needs a truncation box");
            std::vector<std::vector<double>> tables;
            for (std::size_t j = 0; j < spec.dimension(); ++j) {
              const double mu = g.mean[j], var = g.variance[j];
              const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
              tables.push_back(adaptive_power_moments(
                  g.truncation->lower[j].get_d(), g.truncation->upper[j].get_d(), D,
                  [=](double x) { return norm * std::exp(-(x - mu) * (x - mu) / (2.0 * var)); }));
            }
            return product_moments(set, tables);
          },
          [&](const ClosedForm& cf) {
            std::vector<double> one;
            if (cf.id == ClosedFormId::kBump) {
              one = adaptive_power_moments(-1.0, 1.0, D, bump);
            } else {
              for (int k = 0; k <= D; ++k) one.push_back(semicircle_moment(k).get_d());
            }
            return product_moments(set, std::vector<std::vector<double>>(spec.dimension(), one));
          },
          [&](const Mixture& mx) {
            std::vector<double> out(set.size(), 0.0);
            for (const auto& c : mx.components) {
              const auto part = float_moments(*c.spec, set);
              const double w = c.weight.get_d();
              for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * part[i];
            }
            return out;
          },
      },
      spec.kind());
}

}  // namespace

bool Box::contains(std::span<const double> x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower[j].get_d() || x[j] > upper[j].get_d()) return false;
  }
  return true;
}

Box Box::cube(std::size_t n, const Rational& lo, const Rational& hi) {
  return Box{std::vector<Rational>(n, lo), std::vector<Rational>(n, hi)};
}

DensitySpec DensitySpec::indicator(Box box) {
  const std::size_t n = box.dimension();
  check_box(box, n);
  return DensitySpec(n, Indicator{std::move(box)});
}

DensitySpec DensitySpec::piecewise(std::vector<PolynomialPiece> pieces) {
  if (pieces.empty()) raise(ErrorCode::kInvalidArgument, "piecewise density needs at least one piece");
  const std::size_t n = pieces.front().box.dimension();
  for (const auto& p : pieces) {
    check_box(p.box, n);
    if (p.poly.dimension() != n) raise(ErrorCode::kDimensionMismatch, "piece polynomial has wrong dimension");
  }
  return DensitySpec(n, PiecewisePolynomial{std::move(pieces)});
}

DensitySpec DensitySpec::polynomial_on(const Polynomial& p, const Rational& lo, const Rational& hi) {
  return piecewise({PolynomialPiece{Box::cube(1, lo, hi), p}});
}

DensitySpec DensitySpec::gaussian(std::vector<double> mean, std::vector<double> variance, std::optional<Box> truncation) {
  const std::size_t n = mean.size();
  if (n == 0 || variance.size() != n) raise(ErrorCode::kDimensionMismatch, "gaussian mean/variance sizes differ");
  for (double v : variance) {
    if (!(v > 0.0) || !std::isfinite(v)) raise(ErrorCode::kInvalidArgument, "gaussian variance must be positive");
  }
  if (truncation) check_box(*truncation, n);
  return DensitySpec(n, Gaussian{std::move(mean), std::move(variance), std::move(truncation)});
}

DensitySpec DensitySpec::closed_form(ClosedFormId id, std::size_t n) {
  if (n == 0) raise(ErrorCode::kInvalidArgument, "dimension must be positive");
  return DensitySpec(n, ClosedForm{id, n});
}

DensitySpec DensitySpec::mixture(std::vector<MixtureComponent> components) {
  if (components.empty()) raise(ErrorCode::kInvalidArgument, "mixture needs at least one component");
  const std::size_t n = components.front().spec->dimension();
  for (const auto& c : components) {
    if (c.spec->dimension() != n) raise(ErrorCode::kDimensionMismatch, "mixture components differ in dimension");
  }
  return DensitySpec(n, Mixture{std::move(components)});
}

Box DensitySpec::support_box() const {
  return std::visit(
      Overloaded{
          [&](const Indicator& ind) { return ind.box; },
          [&](const PiecewisePolynomial& pw) {
            Box b = pw.pieces.front().box;
            for (const auto& p : pw.pieces) {
              for (std::size_t j = 0; j < n_; ++j) {
                if (p.box.lower[j] < b.lower[j]) b.lower[j] = p.box.lower[j];
                if (p.box.upper[j] > b.upper[j]) b.upper[j] = p.box.upper[j];
              }
            }
            return b;
          },
          [&](const Gaussian& g) {
            if (!g.truncation) raise(ErrorCode::kUnboundedSupport, "gaussian density needs a truncation box");
            return *g.truncation;
          },
          [&](const ClosedForm&) { return Box::cube(n_, -1, 1); },
          [&](const Mixture& mx) {
            Box b = mx.components.front().spec->support_box();
            for (const auto& c : mx.components) {
              const Box cb = c.spec->support_box();
              for (std::size_t j = 0; j < n_; ++j) {
                if (cb.lower[j] < b.lower[j]) b.lower[j] = cb.lower[j];
                if (cb.upper[j] > b.upper[j]) b.upper[j] = cb.upper[j];
              }
            }
            return b;
          },
      },
      kind_);
}

bool DensitySpec::has_exact_moments() const {
  return std::visit(Overloaded{
                        [](const Indicator&) { return true; },
                        [](const PiecewisePolynomial&) { return true; },
                        [](const Gaussian&) { return false; },
                        [](const ClosedForm& cf) { return cf.id == ClosedFormId::kSemicircle; },
                        [](const Mixture& mx) {
                          for (const auto& c : mx.components) {
                            if (!c.spec->has_exact_moments()) return false;
                          }
                          return true;
                        },
                    },
                    kind_);
}

double DensitySpec::density(std::span<const double> x) const {
  if (x.size() != n_) raise(ErrorCode::kDimensionMismatch, "point has wrong dimension");
  return std::visit(
      Overloaded{
          [&](const Indicator& ind) { return ind.box.contains(x) ? 1.0 : 0.0; },
          [&](const PiecewisePolynomial& pw) {
            double v = 0.0;
            for (const auto& p : pw.pieces) {
              if (p.box.contains(x)) v += p.poly.evaluate(x);
            }
            return v;
          },
          [&](const Gaussian& g) {
            if (g.truncation && !g.truncation->contains(x)) return 0.0;
            double v = 1.0;
            for (std::size_t j = 0; j < n_; ++j) {
              const double d = x[j] - g.mean[j];
              v *= std::exp(-d * d / (2.0 * g.variance[j])) / std::sqrt(2.0 * std::numbers::pi * g.variance[j]);
            }
            return v;
          },
          [&](const ClosedForm& cf) {
            double v = 1.0;
            for (double u : x) {
              if (cf.id == ClosedFormId::kBump) {
                v *= bump(u);
              } else {
                v *= std::abs(u) < 1.0 ? (2.0 / std::numbers::pi) * std::sqrt(1.0 - u * u) : 0.0;
              }
            }
            return v;
          },
          [&](const Mixture& mx) {
            double v = 0.0;
            for (const auto& c : mx.components) v += c.weight.get_d() * c.spec->density(x);
            return v;
          },
      },
      kind_);
}

MomentSequence moments_from_density(const DensitySpec& spec, int max_degree, MomentPath path) {
  if (max_degree < 0) raise(ErrorCode::kInvalidArgument, "max degree must be non-negative");
  (void)spec.support_box();  // UnboundedSupport check
  const auto set = index_set(spec.dimension(), max_degree);
  if (path == MomentPath::kAuto && spec.has_exact_moments()) {
    return MomentSequence::from_exact_values(spec.dimension(), max_degree, exact_moments(spec, *set));
  }
  const auto v = float_moments(spec, *set);
  std::vector<std::complex<double>> c(v.begin(), v.end());
  return MomentSequence::from_values(spec.dimension(), max_degree, std::move(c));
}

}  // namespace momentkit
