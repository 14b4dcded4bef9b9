#include "momentkit/named_sequences.hpp"

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

template <typename OneD>
MomentSequence separable(std::size_t n, int max_degree, OneD one) {
  std::vector<Rational> table;
  for (int k = 0; k <= max_degree; ++k) table.push_back(one(k));
  return MomentSequence::exact(n, max_degree, [&](const MultiIndex& a) {
    Rational v = 1;
    for (int e : a.entries()) {
      if (table[static_cast<std::size_t>(e)] == 0) return Rational(0);
      v *= table[static_cast<std::size_t>(e)];
    }
    return v;
  });
}

}  // namespace

MomentSequence dirac_sequence(const std::vector<Rational>& c, int max_degree) {
  if (c.empty()) raise(ErrorCode::kInvalidArgument, "dirac point must be non-empty");
  return MomentSequence::exact(c.size(), max_degree, [&](const MultiIndex& a) {
    Rational v = 1;
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (int e = 0; e < a[j]; ++e) v *= c[j];
    }
    return v;
  });
}

MomentSequence gaussian_cf_sequence(std::size_t n, int max_degree) {
  return separable(n, max_degree, [](int k) -> Rational {
    if (k % 2) return 0;
    return Rational(factorial(static_cast<unsigned long>(k)) / factorial(static_cast<unsigned long>(k / 2)));
  });
}

MomentSequence quartic_cf_sequence(std::size_t n, int max_degree) {
  return separable(n, max_degree, [](int k) -> Rational {
    if (k % 4) return 0;
    const BigInt v = factorial(static_cast<unsigned long>(k)) / factorial(static_cast<unsigned long>(k / 4));
    return Rational((k / 4) % 2 ? BigInt(-v) : v);
  });
}

MomentSequence cosine_sequence(int max_degree) {
  return separable(1, max_degree, [](int k) { return Rational(k % 2 ? 0 : 1); });
}

}  // namespace momentkit
