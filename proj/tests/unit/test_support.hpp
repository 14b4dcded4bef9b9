#pragma once

#include <cstdint>
#include <random>

#include "momentkit/density.hpp"
#include "momentkit/moment_sequence.hpp"
#include "momentkit/rational.hpp"

namespace momentkit::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline Rational random_rational(std::mt19937_64& g, int range = 20, int den = 12) {
  std::uniform_int_distribution<int> num(-range, range), d(1, den);
  Rational q(num(g), d(g));
  q.canonicalize();
  return q;
}

inline MomentSequence random_exact_sequence(std::mt19937_64& g, std::size_t n, int D) {
  return MomentSequence::exact(n, D, [&](const MultiIndex&) { return random_rational(g); });
}

inline Polynomial random_polynomial(std::mt19937_64& g, std::size_t n, int D, int terms = 4) {
  Polynomial p(n);
  std::uniform_int_distribution<int> e(0, D);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> a(n, 0);
    int left = e(g);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      std::uniform_int_distribution<int> part(0, left);
      a[j] = part(g);
      left -= a[j];
    }
    a[n - 1] = left;
    p.add_term(MultiIndex(a), random_rational(g));
  }
  return p;
}

// x^2 (1-x)^2 on [0, 1]
inline DensitySpec quartic_bump_density() {
  return DensitySpec::polynomial_on(Polynomial::univariate({0, 0, 1, -2, 1}), 0, 1);
}

inline DensitySpec unit_indicator() { return DensitySpec::indicator(Box::cube(1, 0, 1)); }

}  // namespace momentkit::testing
