#pragma once

#include <cstdint>
#include <random>

#include "idsq/model.hpp"
#include "idsq/rational.hpp"

namespace idsq::testing {

/// Random rational num/den with |num| in [lo, hi] and den in [1, max_den].
inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long max_den) {
    std::uniform_int_distribution<long> num(lo, hi);
    std::uniform_int_distribution<long> den(1, max_den);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

/// Random (a, b) with ab > 1, both positive.
inline std::pair<Rational, Rational> random_ab(std::mt19937_64& rng) {
    for (;;) {
        Rational a = random_rational(rng, 1, 60, 12);
        Rational b = random_rational(rng, 1, 60, 12);
        if (a * b > 1) return {a, b};
    }
}

inline Rational q(const char* text) { return parse_rational(text); }

}  // namespace idsq::testing
