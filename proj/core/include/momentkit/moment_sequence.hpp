#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "momentkit/multi_index.hpp"
#include "momentkit/polynomial.hpp"
#include "momentkit/rational.hpp"

namespace momentkit {

enum class ValueKind { kExactRational, kFloating };

// Truncated multi-indexed sequence s_alpha, |alpha| <= D. Immutable.
//
// Exact sequences keep the rationals plus a double mirror (which may hold
// +-inf for values beyond double range); floating sequences hold complex
// doubles only.
class MomentSequence {
 public:
  using ExactFn = std::function<Rational(const MultiIndex&)>;
  using FloatFn = std::function<std::complex<double>(const MultiIndex&)>;

  static MomentSequence exact(std::size_t n, int max_degree, const ExactFn& gen);
  static MomentSequence floating(std::size_t n, int max_degree, const FloatFn& gen);
  // Values in IndexSet order.
  static MomentSequence from_exact_values(std::size_t n, int max_degree, std::vector<Rational> values);
  static MomentSequence from_values(std::size_t n, int max_degree, std::vector<std::complex<double>> values);
  static MomentSequence zero(std::size_t n, int max_degree, ValueKind kind = ValueKind::kExactRational);

  std::size_t dimension() const noexcept { return set_->dimension(); }
  int max_degree() const noexcept { return set_->max_degree(); }
  ValueKind kind() const noexcept { return kind_; }
  bool is_exact() const noexcept { return kind_ == ValueKind::kExactRational; }
  const IndexSet& indices() const noexcept { return *set_; }
  std::size_t size() const noexcept { return set_->size(); }

  std::complex<double> value(const MultiIndex& alpha) const { return values_[set_->position(alpha)]; }
  std::complex<double> value_at(std::size_t pos) const { return values_[pos]; }
  const Rational& exact_value(const MultiIndex& alpha) const;
  const Rational& exact_at(std::size_t pos) const;
  // 1-D shorthand for s_k.
  std::complex<double> operator[](int k) const { return value(MultiIndex{k}); }

  const std::vector<std::complex<double>>& values() const noexcept { return values_; }
  const std::vector<Rational>& exact_values() const;

  // True when every imaginary part is within tol (exact sequences are real).
  bool is_real(double tol = 1e-12) const;
  // Throws InvalidArgument if some imaginary part exceeds tol.
  void require_real(const char* what, double tol = 1e-12) const;

  MomentSequence truncate(int max_degree) const;
  MomentSequence to_floating() const;

  MomentSequence operator+(const MomentSequence& o) const;
  MomentSequence operator-(const MomentSequence& o) const;
  MomentSequence scale(const Rational& c) const;
  MomentSequence scale(double c) const;

 private:
  MomentSequence() = default;
  void check_compatible(const MomentSequence& o) const;

  std::shared_ptr<const IndexSet> set_;
  ValueKind kind_ = ValueKind::kFloating;
  std::vector<std::complex<double>> values_;
  std::vector<Rational> exact_;
};

struct RieszValue {
  std::complex<double> value;
  std::optional<Rational> exact;
  // sum |coeff * s_alpha| / |result|
  double condition = 1.0;
};

RieszValue riesz_eval(const MomentSequence& s, const Polynomial& p);

}  // namespace momentkit
