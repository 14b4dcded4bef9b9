#include "momentkit/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "momentkit/error.hpp"

namespace momentkit {

Polynomial Polynomial::constant(std::size_t n, const Rational& c) {
  Polynomial p(n);
  p.add_term(MultiIndex::zero(n), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const Rational& c) {
  Polynomial p(alpha.size());
  p.add_term(alpha, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t j) {
  return monomial(MultiIndex::unit(n, j));
}

Polynomial Polynomial::univariate(const std::vector<Rational>& coeffs) {
  Polynomial p(1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term(MultiIndex{static_cast<int>(k)}, coeffs[k]);
  return p;
}

int Polynomial::degree() const noexcept {
  int d = -1;
  for (const auto& [a, c] : c_) d = std::max(d, a.total());
  return d;
}

Rational Polynomial::coefficient(const MultiIndex& alpha) const {
  const auto it = c_.find(alpha);
  return it == c_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
  if (alpha.size() != n_) raise(ErrorCode::kDimensionMismatch, "term dimension differs from polynomial");
  if (c == 0) return;
  auto [it, inserted] = c_.emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) c_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.n_ != n_) raise(ErrorCode::kDimensionMismatch, "polynomial dimensions differ");
  Polynomial r(*this);
  for (const auto& [a, c] : o.c_) r.add_term(a, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.n_ != n_) raise(ErrorCode::kDimensionMismatch, "polynomial dimensions differ");
  Polynomial r(n_);
  for (const auto& [a, c] : c_) {
    for (const auto& [b, d] : o.c_) r.add_term(a + b, c * d);
  }
  return r;
}

Polynomial Polynomial::operator*(const Rational& k) const {
  Polynomial r(n_);
  for (const auto& [a, c] : c_) r.add_term(a, c * k);
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(n_, 1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::derivative(std::size_t j) const {
  Polynomial r(n_);
  for (const auto& [a, c] : c_) {
    if (a[j] == 0) continue;
    MultiIndex b = a;
    b[j] -= 1;
    r.add_term(b, c * a[j]);
  }
  return r;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != n_) raise(ErrorCode::kDimensionMismatch, "point dimension differs from polynomial");
  double s = 0.0;
  for (const auto& [a, c] : c_) {
    double t = c.get_d();
    for (std::size_t j = 0; j < n_; ++j) t *= std::pow(x[j], a[j]);
    s += t;
  }
  return s;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (x.size() != n_) raise(ErrorCode::kDimensionMismatch, "point dimension differs from polynomial");
  Rational s = 0;
  for (const auto& [a, c] : c_) {
    Rational t = c;
    for (std::size_t j = 0; j < n_; ++j) {
      for (int e = 0; e < a[j]; ++e) t *= x[j];
    }
    s += t;
  }
  return s;
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (const auto& [a, c] : c_) {
    if (!s.empty()) s += " + ";
    s += c.get_str();
    for (std::size_t j = 0; j < n_; ++j) {
      if (a[j] == 0) continue;
      s += "*x" + std::to_string(j + 1);
      if (a[j] > 1) s += "^" + std::to_string(a[j]);
    }
  }
  return s;
}

}  // namespace momentkit
