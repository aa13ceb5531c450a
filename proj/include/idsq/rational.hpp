#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace idsq {

/// Exact arbitrary-precision rational; always kept in canonical (lowest-terms) form.
using Rational = mpq_class;

/// Rejected user input (malformed numbers, invalid covariance, bad shift ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Internal numerical failure that must never be papered over.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "p/q", "p", or a plain decimal ("0.5", "-1.25e-3") into an exact rational.
Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q" (or "p" for integers), sign on the numerator.
std::string to_string(const Rational& q);

/// Shortest decimal that round-trips to the same double.
std::string shortest_decimal(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }

/// Natural binomial coefficient as an exact integer.
mpz_class binomial(unsigned long n, unsigned long k);

/// q^e for e >= 0.
Rational pow(const Rational& q, unsigned long e);

}  // namespace idsq
