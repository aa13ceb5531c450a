#include "idsq/bigfloat.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace idsq {

long default_precision_bits() {
    if (const char* env = std::getenv("IDSQ_PRECISION_BITS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end == env || *end != '\0') throw InvalidInput("IDSQ_PRECISION_BITS is not an integer");
        return bits;
    }
    return kDefaultPrecisionBits;
}

BigFloat::BigFloat(long precision_bits) {
    if (precision_bits < kMinPrecisionBits)
        throw InvalidInput("precision " + std::to_string(precision_bits) + " bits is below the minimum of " +
                           std::to_string(kMinPrecisionBits));
    mpfr_init2(value_, precision_bits);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const Rational& q, long precision_bits) : BigFloat(precision_bits) {
    mpfr_set_q(value_, q.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(BigFloat other) noexcept {
    swap(*this, other);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string() const {
    auto digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30103)) + 1;
    int needed = mpfr_snprintf(nullptr, 0, "%.*Re", digits, value_);
    std::vector<char> buf(static_cast<std::size_t>(needed) + 1);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits, value_);
    return std::string(buf.data());
}

}  // namespace idsq
