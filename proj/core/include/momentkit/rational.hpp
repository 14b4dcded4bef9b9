#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace momentkit {

using Rational = mpq_class;
using BigInt = mpz_class;

// Exact binary value of a finite double.
Rational exact_from_double(double x);

// Nearest double; +-inf when the magnitude overflows.
double to_double(const Rational& q);

// log|q| without overflowing; -inf for zero.
double log_abs(const Rational& q);
double log_abs(const BigInt& z);

BigInt binomial(unsigned long n, unsigned long k);
BigInt factorial(unsigned long n);

std::string to_string(const Rational& q);

// Accepts "p", "p/q" and decimal literals such as "-0.125" or "1e-3".
Rational parse_rational(std::string_view text);

}  // namespace momentkit
