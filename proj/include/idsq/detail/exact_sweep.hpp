#pragma once

// Implementation of for_each_exact_interior; included from coefficients.hpp.

#include <vector>

namespace idsq {

template <typename Visit>
void for_each_exact_interior(const ScaledEvaluator& ev, std::uint64_t max_product, Visit&& visit) {
    const SeriesParams& sp = ev.series_params();
    const NumeratorCoeffs& nc = ev.numerator();
    const Rational alpha_beta = sp.alpha * sp.beta;
    const Rational neg_inv_tbar = -1 / sp.tbar_sq;
    const Rational q00 = nc.n00 * alpha_beta;
    const Rational q10 = nc.n10 * sp.beta;
    const Rational q01 = nc.n01 * sp.alpha;

    // prev holds D_{j-1, k}; row 0 is identically 1.
    std::vector<Rational> prev(max_product + 1, Rational(1));
    std::vector<Rational> cur;
    Rational tmp;
    ScaledPQ cell;
    for (std::uint64_t j = 1; j <= max_product; ++j) {
        const std::uint64_t kmax = max_product / j;
        cur.assign(kmax + 1, Rational(0));
        cur[0] = 1;
        for (std::uint64_t k = 1; k <= kmax; ++k) {
            // θ D_{j-1,k-1}
            mpq_mul(tmp.get_mpq_t(), sp.theta.get_mpq_t(), prev[k - 1].get_mpq_t());
            cur[k] = prev[k] + cur[k - 1] - tmp;
            cell.p = alpha_beta * (prev[k] - tmp) / Rational(static_cast<unsigned long>(j));
            cell.q = neg_inv_tbar * (q00 * cur[k] + q10 * prev[k] + q01 * cur[k - 1] + nc.n11 * prev[k - 1]);
            visit(j, k, static_cast<const ScaledPQ&>(cell));
        }
        prev.swap(cur);
    }
}

}  // namespace idsq
