#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "idsq/rational.hpp"

namespace idsq {

/// Smallest working precision accepted for multiprecision evaluations.
inline constexpr long kMinPrecisionBits = 32;
inline constexpr long kDefaultPrecisionBits = 128;

/// Reads IDSQ_PRECISION_BITS, falling back to kDefaultPrecisionBits.
long default_precision_bits();

/// Owning wrapper around an mpfr_t with a fixed precision.
class BigFloat {
public:
    explicit BigFloat(long precision_bits);
    BigFloat(const Rational& q, long precision_bits);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(BigFloat other) noexcept;
    ~BigFloat();

    friend void swap(BigFloat& a, BigFloat& b) noexcept { mpfr_swap(a.value_, b.value_); }

    long precision() const { return static_cast<long>(mpfr_get_prec(value_)); }
    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    /// Scientific notation with enough digits to represent the working precision.
    std::string to_string() const;

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

private:
    mpfr_t value_;
};

}  // namespace idsq
