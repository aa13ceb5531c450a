#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idsq/model.hpp"
#include "idsq/rational.hpp"

namespace idsq {

/// Substitution-level quantities at a fixed t. Only t̃² = 1/(1-θ) and t̄² enter, so
/// everything is rational.
struct SeriesParams {
    Rational t;
    Rational alpha;            ///< (at + dt²)/t̄²
    Rational beta;             ///< (bt + dt²)/t̄²
    Rational p_param;          ///< dt²/t̄²
    Rational theta;            ///< p/(αβ)
    Rational one_minus_theta;  ///< d⁻¹/(1 + d⁻¹ + at + bt + dt²)
    Rational tbar_sq;          ///< 1 + at + bt + dt²
};

SeriesParams params(const CanonicalProblem& canon, const Rational& t);

/// Coefficients of 1, s1, s2, s1s2 in the exponent numerator (per unit c²).
struct NumeratorCoeffs {
    Rational n00, n10, n01, n11;
};

NumeratorCoeffs numerator_coeffs(const CanonicalProblem& canon, const Rational& t);

/// [u1^j u2^k] 1/(1 - u1 - u2 + θ u1 u2) = Σ_p (1-θ)^p C(j,p) C(k,p).
Rational D_jk(const Rational& one_minus_theta, std::uint64_t j, std::uint64_t k);
/// [u1^j u2^k] -log(1 - u1 - u2 + θ u1 u2), (j, k) != (0, 0).
Rational C_jk(const Rational& one_minus_theta, std::uint64_t j, std::uint64_t k);

Rational P_jk(const SeriesParams& sp, std::uint64_t j, std::uint64_t k);
/// Q_{j,k} by D-recombination of the four numerator monomials; valid for every (j, k) != (0, 0).
Rational Q_jk(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k);
Rational R_jk(const SeriesParams& sp, const NumeratorCoeffs& nc, const Rational& c_sq, std::uint64_t j,
              std::uint64_t k);

/// Interior Q_{j,k} as a single p-sum with the p²/(jk) pieces folded into the preceding term;
/// reduces to the j <= k closed forms for the three shift cases. Kept as a cross-check.
Rational Q_jk_folded(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k);

/// Boundary-row closed forms written in terms of α, β and the case constants.
Rational Q_row_closed_form(const CanonicalProblem& canon, const SeriesParams& sp, std::uint64_t j);
Rational Q_column_closed_form(const CanonicalProblem& canon, const SeriesParams& sp, std::uint64_t k);

/// R_{j,k,p}, p = 0..min(j,k), summing exactly to R_{j,k}. Interior indices only.
std::vector<Rational> decompose_R(const SeriesParams& sp, const NumeratorCoeffs& nc, const Rational& c_sq,
                                  std::uint64_t j, std::uint64_t k);

/// Positive factor removed by the scaled quantities: α^{j-1}β^{k-1} inside,
/// α^{j-1} on row (j, 0), β^{k-1} on column (0, k).
Rational scale_factor(const SeriesParams& sp, std::uint64_t j, std::uint64_t k);

/// Exact scaled P and Q (P/scale, Q/scale) computed without materializing α^j or β^k.
struct ScaledPQ {
    Rational p, q;
};
ScaledPQ scaled_pq_exact(const SeriesParams& sp, const NumeratorCoeffs& nc, std::uint64_t j, std::uint64_t k);

/// Double-precision scaled P and Q with running reference magnitudes.
///
/// p_mag, q_mag bound the sums of absolute values of every rounded quantity entering p and q,
/// so |error(p + c² q)| <= ~ (terms + 10) · eps · (p_mag + c² q_mag).
struct FloatCell {
    double p = 0.0, q = 0.0;
    double p_mag = 0.0, q_mag = 0.0;

    double r(double c_sq) const { return p + c_sq * q; }
    double r_mag(double c_sq) const { return p_mag + c_sq * q_mag; }
};

/// Precomputed evaluator for scaled coefficients at one (canon, t).
class ScaledEvaluator {
public:
    ScaledEvaluator(const CanonicalProblem& canon, const Rational& t);

    const SeriesParams& series_params() const { return sp_; }
    const NumeratorCoeffs& numerator() const { return nc_; }

    /// Stable term recurrence T_{p+1} = T_p (1-θ)(j-p)(k-p)/(p+1)²; no binomials are formed.
    FloatCell evaluate(std::uint64_t j, std::uint64_t k) const;
    ScaledPQ exact(std::uint64_t j, std::uint64_t k) const { return scaled_pq_exact(sp_, nc_, j, k); }

    double log_alpha() const { return log_alpha_; }
    double log_beta() const { return log_beta_; }
    /// t̄², the factor turning a scaled value into the normalization t̄² R/(α^{j-1}β^{k-1}).
    double tbar_sq() const { return tbar_sq_; }

private:
    SeriesParams sp_;
    NumeratorCoeffs nc_;
    double alpha_, beta_, u_, v_, w_, tbar_sq_;
    double n11_, e10_, e01_;
    double row_q_, col_q_;
    double log_alpha_, log_beta_;
};

/// Exact scaled P and Q for every interior cell of {j, k >= 1, jk <= max_product} by the
/// Pascal-type recurrence D_{j,k} = D_{j-1,k} + D_{j,k-1} - θ D_{j-1,k-1}, with
/// j C_{j,k} = D_{j-1,k} - θ D_{j-1,k-1}. Calls visit(j, k, ScaledPQ) row by row.
template <typename Visit>
void for_each_exact_interior(const ScaledEvaluator& ev, std::uint64_t max_product, Visit&& visit);

enum class GridMode { Exact, Float };

std::string_view to_string(GridMode m);

struct GridCell {
    std::uint64_t j = 0, k = 0;
    // Exact mode fills the rationals; float mode fills the doubles (with exact sign confirmation).
    Rational p_exact, q_exact, r_exact;
    double p = 0.0, q = 0.0, r = 0.0;
};

/// Unscaled P, Q, R over the given indices (exact rationals, or doubles in float mode).
struct CoefficientGrid {
    GridMode mode = GridMode::Exact;
    std::vector<GridCell> cells;

    /// CSV rows "j,k,P,Q,R,mode"; rationals as p/q, doubles as shortest round-trip decimals.
    std::string to_csv() const;
};

CoefficientGrid coefficient_grid(const CanonicalProblem& canon, const Rational& t, const Rational& c_sq,
                                 const std::vector<std::pair<std::uint64_t, std::uint64_t>>& indices, GridMode mode);

/// Exact residuals of the large-t expansions and the algebraic identities behind them.
struct AsymptoticDiagnostics {
    Rational residual_one_minus_alpha;  ///< (1-α) - [b/(dt) - (1+b²)/(dt)²]
    Rational residual_one_minus_beta;   ///< (1-β) - [a/(dt) - (1+a²)/(dt)²]
    Rational residual_product;          ///< (1-α)(1-β) - [(d+1)/(dt)² - (a(1+b²) + b(1+a²))/(dt)³]
    Rational residual_one_minus_theta;  ///< (1-θ) - [1/(dt)² - (a+b)/(dt)³]
    bool zeta_identity = false;         ///< -(d+2)γ + d(a+b) = -2ζ
    bool a_gamma_identity = false;      ///< aγ - d = (a-1)²
    bool b_gamma_identity = false;      ///< bγ - d = (b-1)²
    bool zeta_tilde_identity = false;   ///< -3ρ + a + b = -2ζ̃
    bool a_rho_identity = false;        ///< aρ - d = (a+1)²
    bool b_rho_identity = false;        ///< bρ - d = (b+1)²
    bool factorization = false;         ///< a + b - (d+2) = (a-(d+1))(a-1)/a
    bool theta_product = false;         ///< αβθ = p

    bool identities_hold() const;
};

AsymptoticDiagnostics asymptotic_check(const CanonicalProblem& canon, const Rational& t);

}  // namespace idsq

#include "idsq/detail/exact_sweep.hpp"
