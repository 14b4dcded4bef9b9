#include "momentkit/sequence_ops.hpp"

#include <string>
#include <type_traits>

#include "momentkit/error.hpp"

namespace momentkit {

MomentSequence derivative_seq(const MomentSequence& s, const MultiIndex& beta) {
  if (beta.size() != s.dimension()) raise(ErrorCode::kDimensionMismatch, "derivative order has wrong dimension");
  if (beta.total() > s.max_degree()) {
    raise(ErrorCode::kDegreeExceeded, "derivative order " + std::to_string(beta.total()) + " exceeds max degree");
  }
  const IndexSet& set = s.indices();
  const bool odd = beta.total() % 2 == 1;
  if (s.is_exact()) {
    std::vector<Rational> out(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      const MultiIndex& a = set.at(i);
      if (!beta.dominated_by(a)) continue;
      BigInt f = 1;
      for (std::size_t j = 0; j < a.size(); ++j) {
        for (int m = a[j]; m > a[j] - beta[j]; --m) f *= m;
      }
      Rational v = s.exact_value(a - beta) * f;
      out[i] = odd ? Rational(-v) : v;
    }
    return MomentSequence::from_exact_values(s.dimension(), s.max_degree(), std::move(out));
  }
  std::vector<std::complex<double>> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const MultiIndex& a = set.at(i);
    if (!beta.dominated_by(a)) continue;
    double f = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (int m = a[j]; m > a[j] - beta[j]; --m) f *= m;
    }
    out[i] = (odd ? -f : f) * s.value(a - beta);
  }
  return MomentSequence::from_values(s.dimension(), s.max_degree(), std::move(out));
}

namespace {

// One coordinate at a time: t_alpha = sum_g C(alpha_j, g) a^(alpha_j-g) b^g s_{alpha with alpha_j = g}.
template <typename T, typename Get, typename Make>
MomentSequence pushforward_impl(const MomentSequence& s, const std::vector<T>& a, const std::vector<T>& b, Get get,
                                Make make) {
  const IndexSet& set = s.indices();
  const int D = s.max_degree();
  std::vector<T> cur(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) cur[i] = get(i);

  std::vector<std::vector<T>> binom(static_cast<std::size_t>(D) + 1);
  for (int m = 0; m <= D; ++m) {
    binom[m].resize(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
      if constexpr (std::is_same_v<T, Rational>) {
        binom[m][k] = Rational(binomial(m, k));
      } else {
        binom[m][k] = T(binomial(m, k).get_d());
      }
    }
  }

  for (std::size_t j = 0; j < s.dimension(); ++j) {
    std::vector<T> apow(static_cast<std::size_t>(D) + 1), bpow(static_cast<std::size_t>(D) + 1);
    apow[0] = T(1);
    bpow[0] = T(1);
    for (int k = 1; k <= D; ++k) {
      apow[k] = apow[k - 1] * a[j];
      bpow[k] = bpow[k - 1] * b[j];
    }
    std::vector<T> next(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      MultiIndex g = set.at(i);
      const int m = g[j];
      T acc = T(0);
      for (int k = 0; k <= m; ++k) {
        g[j] = k;
        acc += binom[m][k] * apow[m - k] * bpow[k] * cur[set.position(g)];
      }
      next[i] = acc;
    }
    cur = std::move(next);
  }
  return make(std::move(cur));
}

void check_affine_args(const MomentSequence& s, std::size_t na, std::size_t nb) {
  if (na != s.dimension() || nb != s.dimension()) {
    raise(ErrorCode::kDimensionMismatch, "shift/scale vectors must match the sequence dimension");
  }
}

}  // namespace

MomentSequence affine_pushforward(const MomentSequence& s, std::span<const Rational> a, std::span<const Rational> b) {
  check_affine_args(s, a.size(), b.size());
  for (const auto& bj : b) {
    if (bj == 0) raise(ErrorCode::kDegenerateScale, "scale entries must be nonzero");
  }
  if (s.is_exact()) {
    std::vector<Rational> av(a.begin(), a.end()), bv(b.begin(), b.end());
    return pushforward_impl<Rational>(
        s, av, bv, [&](std::size_t i) { return s.exact_at(i); },
        [&](std::vector<Rational> v) {
          return MomentSequence::from_exact_values(s.dimension(), s.max_degree(), std::move(v));
        });
  }
  std::vector<double> ad, bd;
  for (const auto& q : a) ad.push_back(q.get_d());
  for (const auto& q : b) bd.push_back(q.get_d());
  return affine_pushforward(s, ad, bd);
}

MomentSequence affine_pushforward(const MomentSequence& s, std::span<const double> a, std::span<const double> b) {
  check_affine_args(s, a.size(), b.size());
  for (double bj : b) {
    if (bj == 0.0) raise(ErrorCode::kDegenerateScale, "scale entries must be nonzero");
  }
  if (s.is_exact()) {
    std::vector<Rational> aq, bq;
    for (double v : a) aq.push_back(exact_from_double(v));
    for (double v : b) bq.push_back(exact_from_double(v));
    return affine_pushforward(s, std::span<const Rational>(aq), std::span<const Rational>(bq));
  }
  using C = std::complex<double>;
  std::vector<C> ac(a.begin(), a.end()), bc(b.begin(), b.end());
  return pushforward_impl<C>(
      s, ac, bc, [&](std::size_t i) { return s.value_at(i); },
      [&](std::vector<C> v) { return MomentSequence::from_values(s.dimension(), s.max_degree(), std::move(v)); });
}

MomentSequence mirror_seq(const MomentSequence& s, std::span<const int> sigma) {
  if (sigma.size() != s.dimension()) raise(ErrorCode::kDimensionMismatch, "sign vector has wrong dimension");
  for (int v : sigma) {
    if (v != 1 && v != -1) raise(ErrorCode::kInvalidArgument, "sign vector entries must be +1 or -1");
  }
  const IndexSet& set = s.indices();
  auto flips = [&](const MultiIndex& a) {
    int odd = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (sigma[j] == -1) odd += a[j];
    }
    return odd % 2 == 1;
  };
  if (s.is_exact()) {
    std::vector<Rational> out(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) out[i] = flips(set.at(i)) ? Rational(-s.exact_at(i)) : s.exact_at(i);
    return MomentSequence::from_exact_values(s.dimension(), s.max_degree(), std::move(out));
  }
  std::vector<std::complex<double>> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = flips(set.at(i)) ? -s.value_at(i) : s.value_at(i);
  return MomentSequence::from_values(s.dimension(), s.max_degree(), std::move(out));
}

}  // namespace momentkit
