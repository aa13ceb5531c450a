#pragma once

#include <iosfwd>
#include <vector>

#include "idsq/model.hpp"
#include "idsq/rational.hpp"

namespace idsq {

/// Truncated power series in two variables with exact rational coefficients:
/// Σ x_{j,k} u1^j u2^k for 0 <= j <= max_deg1, 0 <= k <= max_deg2.
class BivariateSeries {
public:
    BivariateSeries(std::size_t max_deg1, std::size_t max_deg2);

    /// Polynomial given by (j, k, coefficient) triples; terms beyond the truncation are dropped.
    static BivariateSeries polynomial(std::size_t max_deg1, std::size_t max_deg2,
                                      const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& terms);
    static BivariateSeries one(std::size_t max_deg1, std::size_t max_deg2);

    std::size_t max_deg1() const { return deg1_; }
    std::size_t max_deg2() const { return deg2_; }

    Rational& operator()(std::size_t j, std::size_t k) { return coeffs_[j * (deg2_ + 1) + k]; }
    const Rational& operator()(std::size_t j, std::size_t k) const { return coeffs_[j * (deg2_ + 1) + k]; }

    bool operator==(const BivariateSeries& other) const = default;

    BivariateSeries operator+(const BivariateSeries& other) const;
    BivariateSeries operator-(const BivariateSeries& other) const;
    BivariateSeries scaled(const Rational& factor) const;

    /// Writes "j,k,p/q" rows for every coefficient.
    void write_csv(std::ostream& out) const;

private:
    std::size_t deg1_, deg2_;
    std::vector<Rational> coeffs_;
};

/// Cauchy product truncated to the smaller orders.
BivariateSeries mul(const BivariateSeries& x, const BivariateSeries& y);

/// y with x·y = 1 to truncation order. Throws InvalidInput if x(0,0) == 0.
BivariateSeries reciprocal(const BivariateSeries& x);

/// -log(x) for x(0,0) == 1, by integrating the logarithmic derivative:
/// j·L_{j,k} = -[(u1 ∂x/∂u1) · x⁻¹]_{j,k}, and the analogous u2 recurrence on row j = 0.
BivariateSeries log_neg(const BivariateSeries& x);

struct OraclePQ {
    /// Coefficients of P = -log H in s1, s2 with the irrational constant term stored as 0.
    BivariateSeries p;
    /// Coefficients of Q = -(exponent numerator)/H in s1, s2 (per unit c²).
    BivariateSeries q;
};

/// Brute-force expansion of P and Q at λi = t(1 - si) to orders (J, K).
OraclePQ oracle_pq(const CanonicalProblem& canon, const Rational& t, std::size_t max_j, std::size_t max_k);

}  // namespace idsq
