#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "momentkit/multi_index.hpp"
#include "momentkit/rational.hpp"

namespace momentkit {

// Multivariate polynomial with exact rational coefficients, kept canonical
// (no stored zeros).
class Polynomial {
 public:
  explicit Polynomial(std::size_t n) : n_(n) {}

  static Polynomial constant(std::size_t n, const Rational& c);
  static Polynomial monomial(const MultiIndex& alpha, const Rational& c = 1);
  static Polynomial variable(std::size_t n, std::size_t j);
  // 1-D polynomial c[0] + c[1] x + ...
  static Polynomial univariate(const std::vector<Rational>& coeffs);

  std::size_t dimension() const noexcept { return n_; }
  // -1 for the zero polynomial.
  int degree() const noexcept;
  bool is_zero() const noexcept { return c_.empty(); }
  const std::map<MultiIndex, Rational>& coefficients() const noexcept { return c_; }
  Rational coefficient(const MultiIndex& alpha) const;

  void add_term(const MultiIndex& alpha, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial pow(unsigned k) const;
  Polynomial derivative(std::size_t j) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  double evaluate(std::span<const double> x) const;
  Rational evaluate(std::span<const Rational> x) const;

  std::string to_string() const;

 private:
  std::size_t n_;
  std::map<MultiIndex, Rational> c_;
};

}  // namespace momentkit
