#include "momentkit/moment_sequence.hpp"

#include <cmath>
#include <string>

#include "momentkit/error.hpp"
#include "momentkit/summation.hpp"

namespace momentkit {

MomentSequence MomentSequence::exact(std::size_t n, int max_degree, const ExactFn& gen) {
  const auto set = index_set(n, max_degree);
  std::vector<Rational> v;
  v.reserve(set->size());
  for (const auto& a : set->indices()) v.push_back(gen(a));
  return from_exact_values(n, max_degree, std::move(v));
}

MomentSequence MomentSequence::floating(std::size_t n, int max_degree, const FloatFn& gen) {
  const auto set = index_set(n, max_degree);
  std::vector<std::complex<double>> v;
  v.reserve(set->size());
  for (const auto& a : set->indices()) v.push_back(gen(a));
  return from_values(n, max_degree, std::move(v));
}

MomentSequence MomentSequence::from_exact_values(std::size_t n, int max_degree, std::vector<Rational> values) {
  MomentSequence s;
  s.set_ = index_set(n, max_degree);
  if (values.size() != s.set_->size()) {
    raise(ErrorCode::kInvalidArgument, "expected " + std::to_string(s.set_->size()) + " values, got " +
                                           std::to_string(values.size()));
  }
  s.kind_ = ValueKind::kExactRational;
  s.exact_ = std::move(values);
  s.values_.reserve(s.exact_.size());
  for (const auto& q : s.exact_) s.values_.emplace_back(to_double(q), 0.0);
  return s;
}

MomentSequence MomentSequence::from_values(std::size_t n, int max_degree, std::vector<std::complex<double>> values) {
  MomentSequence s;
  s.set_ = index_set(n, max_degree);
  if (values.size() != s.set_->size()) {
    raise(ErrorCode::kInvalidArgument, "expected " + std::to_string(s.set_->size()) + " values, got " +
                                           std::to_string(values.size()));
  }
  s.kind_ = ValueKind::kFloating;
  s.values_ = std::move(values);
  return s;
}

MomentSequence MomentSequence::zero(std::size_t n, int max_degree, ValueKind kind) {
  const std::size_t count = index_set(n, max_degree)->size();
  if (kind == ValueKind::kExactRational) return from_exact_values(n, max_degree, std::vector<Rational>(count));
  return from_values(n, max_degree, std::vector<std::complex<double>>(count));
}

const Rational& MomentSequence::exact_value(const MultiIndex& alpha) const {
  return exact_at(set_->position(alpha));
}

const Rational& MomentSequence::exact_at(std::size_t pos) const {
  if (!is_exact()) raise(ErrorCode::kInvalidArgument, "sequence has no exact values");
  return exact_[pos];
}

const std::vector<Rational>& MomentSequence::exact_values() const {
  if (!is_exact()) raise(ErrorCode::kInvalidArgument, "sequence has no exact values");
  return exact_;
}

bool MomentSequence::is_real(double tol) const {
  if (is_exact()) return true;
  for (const auto& v : values_) {
    if (std::abs(v.imag()) > tol) return false;
  }
  return true;
}

void MomentSequence::require_real(const char* what, double tol) const {
  if (!is_real(tol)) raise(ErrorCode::kInvalidArgument, std::string(what) + " requires a real sequence");
}

MomentSequence MomentSequence::truncate(int max_degree) const {
  if (max_degree > this->max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "cannot truncate to a higher degree");
  }
  const std::size_t count = index_set(dimension(), max_degree)->size();
  // Graded order makes the lower-degree index set a prefix.
  if (is_exact()) {
    return from_exact_values(dimension(), max_degree, std::vector<Rational>(exact_.begin(), exact_.begin() + count));
  }
  return from_values(dimension(), max_degree,
                     std::vector<std::complex<double>>(values_.begin(), values_.begin() + count));
}

MomentSequence MomentSequence::to_floating() const {
  return from_values(dimension(), max_degree(), values_);
}

void MomentSequence::check_compatible(const MomentSequence& o) const {
  if (o.dimension() != dimension()) raise(ErrorCode::kDimensionMismatch, "sequence dimensions differ");
  if (o.max_degree() != max_degree()) raise(ErrorCode::kInvalidArgument, "sequence max degrees differ");
}

MomentSequence MomentSequence::operator+(const MomentSequence& o) const {
  check_compatible(o);
  if (is_exact() && o.is_exact()) {
    std::vector<Rational> v(exact_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = exact_[i] + o.exact_[i];
    return from_exact_values(dimension(), max_degree(), std::move(v));
  }
  std::vector<std::complex<double>> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
  return from_values(dimension(), max_degree(), std::move(v));
}

MomentSequence MomentSequence::operator-(const MomentSequence& o) const {
  return *this + o.scale(Rational(-1));
}

MomentSequence MomentSequence::scale(const Rational& c) const {
  if (is_exact()) {
    std::vector<Rational> v(exact_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = exact_[i] * c;
    return from_exact_values(dimension(), max_degree(), std::move(v));
  }
  return scale(c.get_d());
}

MomentSequence MomentSequence::scale(double c) const {
  if (is_exact() && std::isfinite(c)) return scale(exact_from_double(c));
  std::vector<std::complex<double>> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * c;
  return from_values(dimension(), max_degree(), std::move(v));
}

RieszValue riesz_eval(const MomentSequence& s, const Polynomial& p) {
  if (p.dimension() != s.dimension()) raise(ErrorCode::kDimensionMismatch, "polynomial and sequence dimensions differ");
  if (p.degree() > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "polynomial degree " + std::to_string(p.degree()) + " exceeds max degree " +
                                          std::to_string(s.max_degree()));
  }
  RieszValue out;
  if (s.is_exact()) {
    Rational total = 0;
    Rational abs_total = 0;
    for (const auto& [a, c] : p.coefficients()) {
      const Rational t = c * s.exact_value(a);
      total += t;
      abs_total += abs(t);
    }
    out.value = {to_double(total), 0.0};
    out.condition = total == 0 ? (abs_total == 0 ? 1.0 : INFINITY) : to_double(abs_total / abs(total));
    out.exact = std::move(total);
    return out;
  }
  ComplexNeumaierSum sum;
  for (const auto& [a, c] : p.coefficients()) sum.add(c.get_d() * s.value(a));
  out.value = sum.value();
  out.condition = cancellation_ratio(sum.abs_sum(), std::abs(out.value));
  return out;
}

}  // namespace momentkit
