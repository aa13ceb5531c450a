#include "idsq/model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "idsq/parallel.hpp"
#include "idsq/philox.hpp"

namespace idsq {

void GaussianProblem::validate() const {
    if (gamma11 <= 0 || gamma22 <= 0) throw InvalidInput("covariance diagonal must be positive");
    if (gamma11 * gamma22 - gamma12 * gamma12 < 0) throw InvalidInput("covariance is not positive semidefinite");
    if (gamma12 == 0) throw InvalidInput("off-diagonal covariance must be nonzero");
    if (c1 == 0 && c2 == 0) throw InvalidInput("shift direction (c1, c2) must be nonzero");
}

std::string_view to_string(ShiftCase c) {
    switch (c) {
        case ShiftCase::EqualShift: return "EqualShift";
        case ShiftCase::OppositeShift: return "OppositeShift";
        case ShiftCase::SingleShift: return "SingleShift";
    }
    return "?";
}

ShiftCase parse_shift_case(std::string_view name) {
    if (name == "EqualShift" || name == "equal") return ShiftCase::EqualShift;
    if (name == "OppositeShift" || name == "opposite") return ShiftCase::OppositeShift;
    if (name == "SingleShift" || name == "single") return ShiftCase::SingleShift;
    throw InvalidInput("unknown shift case '" + std::string(name) + "'");
}

CanonicalProblem CanonicalProblem::from_ab(Rational a, Rational b, ShiftCase c) {
    if (a <= 0 || b <= 0) throw InvalidInput("a and b must be positive");
    CanonicalProblem canon;
    canon.d = a * b - 1;
    if (canon.d < 0) throw InvalidInput("ab < 1: covariance ((a,1),(1,b)) is not positive semidefinite");
    canon.a = std::move(a);
    canon.b = std::move(b);
    canon.shift_case = c;
    canon.degenerate = canon.d == 0;
    return canon;
}

double CanonicalProblem::kappa() const { return std::sqrt(kappa_sq.get_d()); }

EvaluationPoint EvaluationPoint::from_lambda(Rational l1, Rational l2) {
    if (l1 < 0 || l2 < 0) throw InvalidInput("Laplace arguments must be nonnegative");
    return {std::move(l1), std::move(l2)};
}

EvaluationPoint EvaluationPoint::from_t_s(const Rational& t, const Rational& s1, const Rational& s2) {
    if (t <= 0) throw InvalidInput("t must be positive");
    if (s1 < 0 || s1 > 1 || s2 < 0 || s2 > 1) throw InvalidInput("s1, s2 must lie in [0, 1]");
    return {t * (1 - s1), t * (1 - s2)};
}

CanonicalProblem normalize(const GaussianProblem& problem) {
    problem.validate();
    Rational g11 = problem.gamma11, g12 = problem.gamma12, g22 = problem.gamma22;
    Rational c1 = problem.c1, c2 = problem.c2;
    if (c1 == 0) {
        std::swap(g11, g22);
        std::swap(c1, c2);
    }
    // Rescale each shifted coordinate to a unit shift.
    Rational abs_c1 = abs(c1);
    g11 /= abs_c1 * abs_c1;
    g12 /= abs_c1;
    int s1 = sgn(c1), s2 = sgn(c2);
    if (c2 != 0) {
        Rational abs_c2 = abs(c2);
        g22 /= abs_c2 * abs_c2;
        g12 /= abs_c2;
    }
    // (G1 + α, G2 + α s) and (-G1 - α, -G2 - α s) have the same squares.
    if (s1 < 0) s2 = -s2;
    // Flipping G2 makes the covariance positive; it flips the second shift sign too.
    if (g12 < 0) {
        g12 = -g12;
        s2 = -s2;
    }
    CanonicalProblem canon;
    canon.a = g11 / g12;
    canon.b = g22 / g12;
    canon.d = canon.a * canon.b - 1;
    canon.kappa_sq = 1 / g12;
    canon.degenerate = canon.d == 0;
    canon.shift_case = s2 == 0 ? ShiftCase::SingleShift : s2 > 0 ? ShiftCase::EqualShift : ShiftCase::OppositeShift;
    return canon;
}

CaseConstants case_constants(const CanonicalProblem& canon) {
    if (canon.degenerate) throw InvalidInput("case constants are undefined for a degenerate covariance");
    const Rational& a = canon.a;
    const Rational& b = canon.b;
    CaseConstants k;
    k.gamma_const = a + b - 2;
    k.rho_const = a + b + 2;
    k.zeta = a + b - (canon.d + 2);
    k.zeta_tilde = a + b + 3;
    k.factorization_holds = k.zeta == (a - (canon.d + 1)) * (a - 1) / a;
    return k;
}

bool all_alpha_condition(const CanonicalProblem& canon, const Rational& c1, const Rational& c2) {
    if (c1 == 0 || c2 == 0) return false;
    Rational r12 = c1 / c2, r21 = c2 / c1;
    return r12 > 0 && r21 > 0 && canon.a >= r12 && canon.b >= r21;
}

std::pair<Rational, Rational> canonical_direction(ShiftCase c) {
    switch (c) {
        case ShiftCase::EqualShift: return {Rational(1), Rational(1)};
        case ShiftCase::OppositeShift: return {Rational(1), Rational(-1)};
        case ShiftCase::SingleShift: return {Rational(1), Rational(0)};
    }
    return {Rational(1), Rational(1)};
}

bool all_alpha_condition(const CanonicalProblem& canon) {
    auto [c1, c2] = canonical_direction(canon.shift_case);
    return all_alpha_condition(canon, c1, c2);
}

Rational laplace_denominator(const CanonicalProblem& canon, const EvaluationPoint& pt) {
    return 1 + canon.a * pt.lambda1 + canon.b * pt.lambda2 + canon.d * pt.lambda1 * pt.lambda2;
}

Rational laplace_exponent_numerator(const CanonicalProblem& canon, const EvaluationPoint& pt) {
    auto [c1, c2] = canonical_direction(canon.shift_case);
    Rational cross = c1 * c1 * canon.b + c2 * c2 * canon.a - 2 * c1 * c2;
    return c1 * c1 * pt.lambda1 + c2 * c2 * pt.lambda2 + cross * pt.lambda1 * pt.lambda2;
}

BigFloat laplace_squared_shifted(const CanonicalProblem& canon, const Rational& c_sq, const EvaluationPoint& pt,
                                 long precision_bits) {
    if (c_sq < 0) throw InvalidInput("c² must be nonnegative");
    Rational h = laplace_denominator(canon, pt);
    Rational exponent = -c_sq * laplace_exponent_numerator(canon, pt) / (2 * h);
    BigFloat result(exponent, precision_bits);
    mpfr_exp(result.get(), result.get(), MPFR_RNDN);
    BigFloat root(h, precision_bits);
    mpfr_sqrt(root.get(), root.get(), MPFR_RNDN);
    mpfr_div(result.get(), result.get(), root.get(), MPFR_RNDN);
    return result;
}

MonteCarloEstimate mc_laplace_estimate(const CanonicalProblem& canon, const Rational& c_sq, const EvaluationPoint& pt,
                                       std::uint64_t n, std::uint64_t seed, unsigned threads) {
    if (n == 0) throw InvalidInput("sample count must be at least 1");
    if (canon.degenerate || canon.d <= 0) throw InvalidInput("Monte Carlo needs a positive definite covariance");
    if (c_sq < 0) throw InvalidInput("c² must be nonnegative");

    const double a = canon.a.get_d();
    const double l11 = std::sqrt(a);
    const double l21 = 1.0 / l11;
    const double l22 = std::sqrt(canon.d.get_d() / a);
    const double c = std::sqrt(c_sq.get_d());
    auto [dir1, dir2] = canonical_direction(canon.shift_case);
    const double m1 = c * dir1.get_d();
    const double m2 = c * dir2.get_d();
    const double lam1 = pt.lambda1.get_d();
    const double lam2 = pt.lambda2.get_d();
    const Philox4x32 rng(seed);

    constexpr std::uint64_t kBlock = 65536;
    const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::array<double, 2>> partial(blocks);
    parallel_for(blocks, Parallelism{threads}, [&](std::size_t blk) {
        double sum = 0.0, sum_sq = 0.0;
        const std::uint64_t begin = blk * kBlock;
        const std::uint64_t end = std::min(n, begin + kBlock);
        for (std::uint64_t i = begin; i < end; ++i) {
            auto bits = rng(i);
            double u1 = Philox4x32::to_unit_open_closed(bits[0], bits[1]);
            double u2 = Philox4x32::to_unit_open_closed(bits[2], bits[3]);
            double radius = std::sqrt(-2.0 * std::log(u1));
            double angle = 2.0 * std::numbers::pi * u2;
            double z1 = radius * std::cos(angle);
            double z2 = radius * std::sin(angle);
            double x1 = l11 * z1 + m1;
            double x2 = l21 * z1 + l22 * z2 + m2;
            double f = std::exp(-0.5 * (lam1 * x1 * x1 + lam2 * x2 * x2));
            sum += f;
            sum_sq += f * f;
        }
        partial[blk] = {sum, sum_sq};
    });

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : partial) {
        sum += p[0];
        sum_sq += p[1];
    }
    const double count = static_cast<double>(n);
    MonteCarloEstimate est;
    est.mean = sum / count;
    if (n > 1) {
        double var = (sum_sq - count * est.mean * est.mean) / (count - 1.0);
        est.stderr_ = var > 0.0 ? std::sqrt(var / count) : 0.0;
    }
    return est;
}

}  // namespace idsq
