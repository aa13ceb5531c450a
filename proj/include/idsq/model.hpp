#pragma once

#include <cstdint>
#include <string_view>

#include "idsq/bigfloat.hpp"
#include "idsq/rational.hpp"

namespace idsq {

/// Mean-zero Gaussian pair (G1, G2) with covariance Γ and shift direction (c1, c2).
/// The object of study is ((G1 + α c1)², (G2 + α c2)²) as α varies.
struct GaussianProblem {
    Rational gamma11, gamma12, gamma22;
    Rational c1, c2;

    /// Throws InvalidInput unless Γ is PSD with Γ12 != 0 and (c1, c2) != (0, 0).
    void validate() const;
};

enum class ShiftCase { EqualShift, OppositeShift, SingleShift };

std::string_view to_string(ShiftCase c);
ShiftCase parse_shift_case(std::string_view name);

/// Covariance ((a, 1), (1, b)), ab = d + 1, with canonical shift (c, c), (c, -c) or (c, 0).
///
/// A user shift multiplier α corresponds to the canonical c with c² = kappa_sq · α².
/// kappa_sq is kept instead of κ since κ is usually irrational.
struct CanonicalProblem {
    Rational a, b, d;
    ShiftCase shift_case = ShiftCase::EqualShift;
    Rational kappa_sq{1};
    bool degenerate = false;

    /// Builds a canonical problem directly; d is derived as ab - 1.
    static CanonicalProblem from_ab(Rational a, Rational b, ShiftCase c);

    double kappa() const;
    /// Canonical c² for the user multiplier α.
    Rational c_sq_for_alpha(const Rational& alpha) const { return kappa_sq * alpha * alpha; }
};

struct CaseConstants {
    Rational gamma_const;  ///< a + b - 2
    Rational rho_const;    ///< a + b + 2
    Rational zeta;         ///< a + b - (d + 2)
    Rational zeta_tilde;   ///< a + b + 3
    /// zeta == (a - (d+1))(a - 1)/a, checked exactly.
    bool factorization_holds = false;
};

/// Laplace argument λ = (λ1, λ2) >= 0; also reachable as λi = t(1 - si).
struct EvaluationPoint {
    Rational lambda1, lambda2;

    static EvaluationPoint from_lambda(Rational l1, Rational l2);
    static EvaluationPoint from_t_s(const Rational& t, const Rational& s1, const Rational& s2);
};

CanonicalProblem normalize(const GaussianProblem& problem);

CaseConstants case_constants(const CanonicalProblem& canon);

/// The shift-independent "ID for all α" test against covariance ((a,1),(1,b)):
/// a >= c1/c2 > 0 and b >= c2/c1 > 0. False whenever either shift is zero.
bool all_alpha_condition(const CanonicalProblem& canon, const Rational& c1, const Rational& c2);

/// Same test for the problem's own canonical shift direction.
bool all_alpha_condition(const CanonicalProblem& canon);

/// Canonical shift vector (c1, c2) per case for unit c.
std::pair<Rational, Rational> canonical_direction(ShiftCase c);

/// H = 1 + aλ1 + bλ2 + dλ1λ2.
Rational laplace_denominator(const CanonicalProblem& canon, const EvaluationPoint& pt);

/// Numerator of the exponent for the canonical shift, divided by c².
Rational laplace_exponent_numerator(const CanonicalProblem& canon, const EvaluationPoint& pt);

/// E exp(-(λ1 (G1 + c1)² + λ2 (G2 + c2)²)/2) in closed form, for the canonical shift with
/// squared size c_sq, evaluated with `precision_bits` of working precision.
BigFloat laplace_squared_shifted(const CanonicalProblem& canon, const Rational& c_sq, const EvaluationPoint& pt,
                                 long precision_bits = kDefaultPrecisionBits);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Sample-mean estimate of the same Laplace transform from n draws of the Gaussian pair.
///
/// Draw i uses Philox4x32-10 block (key = seed, counter = i): two Box-Muller normals
/// z1, z2 mapped through the Cholesky factor of ((a,1),(1,b)). Partial sums are taken over
/// fixed 65536-sample blocks and combined in block order, so the result depends only on
/// (inputs, seed, n) and not on `threads`.
MonteCarloEstimate mc_laplace_estimate(const CanonicalProblem& canon, const Rational& c_sq, const EvaluationPoint& pt,
                                       std::uint64_t n, std::uint64_t seed, unsigned threads = 1);

}  // namespace idsq
