#include "momentkit/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "momentkit/error.hpp"

namespace momentkit {

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) raise(ErrorCode::kInvalidArgument, "non-finite value cannot be made exact");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

double log_abs(const BigInt& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(std::abs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const Rational& q) {
  if (q == 0) return -std::numeric_limits<double>::infinity();
  return log_abs(BigInt(q.get_num())) - log_abs(BigInt(q.get_den()));
}

double to_double(const Rational& q) {
  if (q == 0) return 0.0;
  const double la = log_abs(q);
  if (la > 709.0) {
    return q > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  if (la < -740.0) return 0.0;
  return q.get_d();
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  if (k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

BigInt parse_integer(std::string_view t, std::string_view whole) {
  std::string s(t);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (s.size() == start) raise(ErrorCode::kParseError, "bad rational '" + std::string(whole) + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      raise(ErrorCode::kParseError, "bad rational '" + std::string(whole) + "'");
    }
  }
  return BigInt(s, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) raise(ErrorCode::kParseError, "empty rational");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(text.substr(0, slash), text);
    const BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) raise(ErrorCode::kParseError, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  // Decimal with optional exponent, converted exactly (0.1 -> 1/10).
  std::string_view mant = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mant = text.substr(0, e);
    const std::string ex(text.substr(e + 1));
    try {
      std::size_t used = 0;
      exponent = std::stol(ex, &used);
      if (used != ex.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      raise(ErrorCode::kParseError, "bad exponent in '" + std::string(text) + "'");
    }
  }
  std::string digits;
  bool neg = false;
  long frac_digits = 0;
  bool seen_point = false;
  for (std::size_t i = 0; i < mant.size(); ++i) {
    const char c = mant[i];
    if (i == 0 && (c == '-' || c == '+')) {
      neg = c == '-';
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      raise(ErrorCode::kParseError, "bad number '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) raise(ErrorCode::kParseError, "bad number '" + std::string(text) + "'");
  Rational q(BigInt(digits, 10));
  const long shift = exponent - frac_digits;
  BigInt p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  if (shift >= 0) {
    q *= p10;
  } else {
    q /= p10;
  }
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace momentkit
