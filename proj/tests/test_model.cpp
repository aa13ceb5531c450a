#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "idsq/model.hpp"
#include "support.hpp"

using namespace idsq;
using idsq::testing::q;

namespace {

GaussianProblem problem(const char* g11, const char* g12, const char* g22, const char* c1, const char* c2) {
    return {q(g11), q(g12), q(g22), q(c1), q(c2)};
}

/// E exp(-(λ1 (G1+m1)² + λ2 (G2+m2)²)/2) for a general 2×2 covariance, from
/// det(I + ΓΛ)^{-1/2} exp(-½ mᵀ (Λ - Λ (Γ⁻¹ + Λ)⁻¹ Λ) m), in long double.
long double general_laplace(long double g11, long double g12, long double g22, long double m1, long double m2,
                            long double l1, long double l2) {
    long double det_g = g11 * g22 - g12 * g12;
    // Γ⁻¹ + Λ
    long double p11 = g22 / det_g + l1, p12 = -g12 / det_g, p22 = g11 / det_g + l2;
    long double det_p = p11 * p22 - p12 * p12;
    long double i11 = p22 / det_p, i12 = -p12 / det_p, i22 = p11 / det_p;
    long double k11 = l1 - l1 * i11 * l1, k12 = -l1 * i12 * l2, k22 = l2 - l2 * i22 * l2;
    long double quad = k11 * m1 * m1 + 2 * k12 * m1 * m2 + k22 * m2 * m2;
    long double det_ig = (1 + g11 * l1) * (1 + g22 * l2) - g12 * g12 * l1 * l2;
    return std::exp(-0.5L * quad) / std::sqrt(det_ig);
}

}  // namespace

TEST_CASE("normalize: worked examples") {
    SUBCASE("already canonical") {
        auto canon = normalize(problem("4", "1", "1/2", "1", "1"));
        CHECK(canon.a == 4);
        CHECK(canon.b == q("1/2"));
        CHECK(canon.d == 1);
        CHECK(canon.shift_case == ShiftCase::EqualShift);
        CHECK(canon.kappa_sq == 1);
        CHECK_FALSE(canon.degenerate);
    }
    SUBCASE("opposite signs") {
        auto canon = normalize(problem("4", "1", "1/2", "1", "-1"));
        CHECK(canon.a == 4);
        CHECK(canon.b == q("1/2"));
        CHECK(canon.shift_case == ShiftCase::OppositeShift);
        CHECK(canon.kappa_sq == 1);
    }
    SUBCASE("negative covariance flips coordinate 2") {
        auto canon = normalize(problem("4", "-1", "1/2", "1", "1"));
        CHECK(canon.a == 4);
        CHECK(canon.b == q("1/2"));
        CHECK(canon.d == 1);
        CHECK(canon.shift_case == ShiftCase::OppositeShift);
        CHECK(canon.kappa_sq == 1);
    }
    SUBCASE("single shift in coordinate 2 swaps") {
        auto canon = normalize(problem("4", "1", "1/2", "0", "3"));
        CHECK(canon.shift_case == ShiftCase::SingleShift);
        // G2/3 carries the shift: variances (1/18, 4), covariance 1/3.
        CHECK(canon.a == q("1/6"));
        CHECK(canon.b == 12);
        CHECK(canon.kappa_sq == 3);
    }
    SUBCASE("degenerate covariance") {
        auto canon = normalize(problem("4", "2", "1", "1", "1"));
        CHECK(canon.degenerate);
        CHECK(canon.d == 0);
    }
}

TEST_CASE("normalize: input validation") {
    CHECK_THROWS_AS(normalize(problem("1", "2", "1", "1", "1")), InvalidInput);
    CHECK_THROWS_AS(normalize(problem("1", "0", "1", "1", "1")), InvalidInput);
    CHECK_THROWS_AS(normalize(problem("1", "1/2", "1", "0", "0")), InvalidInput);
    CHECK_THROWS_AS(normalize(problem("-1", "1/2", "1", "1", "1")), InvalidInput);
}

TEST_CASE("normalize is idempotent on canonical input") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto [a, b] = idsq::testing::random_ab(rng);
        for (auto [c2, label] : {std::pair{1, ShiftCase::EqualShift}, std::pair{-1, ShiftCase::OppositeShift},
                                 std::pair{0, ShiftCase::SingleShift}}) {
            auto canon = normalize({a, Rational(1), b, Rational(1), Rational(c2)});
            CHECK(canon.a == a);
            CHECK(canon.b == b);
            CHECK(canon.kappa_sq == 1);
            CHECK(canon.shift_case == label);
        }
    }
}

TEST_CASE("normalize preserves the law of the squares (Laplace transform check)") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int i = 0; i < 200; ++i) {
        Rational g11 = idsq::testing::random_rational(rng, 1, 40, 5);
        Rational g22 = idsq::testing::random_rational(rng, 1, 40, 5);
        Rational g12 = idsq::testing::random_rational(rng, 1, 20, 7);
        if (g12 * g12 >= g11 * g22) continue;
        if (sign(rng)) g12 = -g12;
        Rational c1 = idsq::testing::random_rational(rng, 1, 9, 4) * (sign(rng) ? 1 : -1);
        Rational c2 = (i % 4 == 0) ? Rational(0) : idsq::testing::random_rational(rng, 1, 9, 4) * (sign(rng) ? 1 : -1);
        Rational alpha = idsq::testing::random_rational(rng, 1, 6, 5);
        auto canon = normalize({g11, g12, g22, c1, c2});

        long double l1 = 0.3L + 0.1L * (i % 5), l2 = 0.7L + 0.05L * (i % 3);
        long double raw = general_laplace(g11.get_d(), g12.get_d(), g22.get_d(), Rational(alpha * c1).get_d(),
                                          Rational(alpha * c2).get_d(), l1, l2);
        // Canonical coordinate i is raw coordinate i divided by σi = |ci|·sqrt(g), g = |Γ12|/(|c1||c2|)
        // (|c2| replaced by 1 when c2 = 0), so λ'_i = λ_i σi².
        long double g = std::abs(g12.get_d()) / (std::abs(c1.get_d()) * (c2 == 0 ? 1.0 : std::abs(c2.get_d())));
        long double s1 = c1.get_d() * c1.get_d() * g;
        long double s2 = (c2 == 0 ? 1.0L : c2.get_d() * c2.get_d()) * g;
        Rational lc1(static_cast<double>(l1 * s1)), lc2(static_cast<double>(l2 * s2));
        auto canon_value = laplace_squared_shifted(canon, canon.c_sq_for_alpha(alpha),
                                                   EvaluationPoint::from_lambda(lc1, lc2), 96);
        CHECK(static_cast<double>(raw) == doctest::Approx(canon_value.to_double()).epsilon(1e-9));
    }
}

TEST_CASE("case constants") {
    auto c1 = case_constants(CanonicalProblem::from_ab(q("4"), q("1/2"), ShiftCase::EqualShift));
    CHECK(c1.zeta == q("3/2"));
    CHECK(c1.gamma_const == q("5/2"));
    CHECK(c1.rho_const == q("13/2"));
    CHECK(c1.zeta_tilde == q("15/2"));
    auto c2 = case_constants(CanonicalProblem::from_ab(q("2"), q("2"), ShiftCase::EqualShift));
    CHECK(c2.zeta == -1);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto [a, b] = idsq::testing::random_ab(rng);
        auto canon = CanonicalProblem::from_ab(a, b, ShiftCase::EqualShift);
        auto k = case_constants(canon);
        CHECK(k.factorization_holds);
        CHECK(k.rho_const == k.gamma_const + 4);
        CHECK(k.gamma_const > 0);
        // ζ <= 0 ⟺ 1 <= a <= d+1 ⟺ 1 <= b <= d+1
        bool z = k.zeta <= 0;
        CHECK(z == (1 <= a && a <= canon.d + 1));
        CHECK(z == (1 <= b && b <= canon.d + 1));
        // ...and that is exactly the EqualShift all-α condition.
        CHECK(z == all_alpha_condition(canon));
    }
}

TEST_CASE("all_alpha_condition") {
    auto c22 = CanonicalProblem::from_ab(q("2"), q("2"), ShiftCase::EqualShift);
    CHECK(all_alpha_condition(c22, q("1"), q("1")));
    auto c41 = CanonicalProblem::from_ab(q("4"), q("1/2"), ShiftCase::EqualShift);
    CHECK_FALSE(all_alpha_condition(c41, q("1"), q("1")));
    CHECK(all_alpha_condition(c41, q("2"), q("1")));
    CHECK_FALSE(all_alpha_condition(c41, q("1"), q("0")));
    CHECK_FALSE(all_alpha_condition(c41, q("1"), q("-1")));
    auto single = CanonicalProblem::from_ab(q("2"), q("2"), ShiftCase::SingleShift);
    CHECK_FALSE(all_alpha_condition(single));
}

TEST_CASE("laplace_squared_shifted") {
    auto canon = CanonicalProblem::from_ab(q("4"), q("1/2"), ShiftCase::EqualShift);
    auto origin = EvaluationPoint::from_lambda(0, 0);
    CHECK(laplace_squared_shifted(canon, q("9"), origin).to_double() == 1.0);

    auto pt = EvaluationPoint::from_lambda(1, 1);
    // H = 13/2, numerator γ + 2 = 9/2
    double expected = std::exp(-9.0 / 26.0) / std::sqrt(6.5);
    CHECK(laplace_squared_shifted(canon, q("1"), pt).to_double() == doctest::Approx(expected).epsilon(1e-15));
    // c = 0 gives H^{-1/2}
    CHECK(laplace_squared_shifted(canon, q("0"), pt).to_double() == doctest::Approx(1.0 / std::sqrt(6.5)));

    CHECK_THROWS_AS(laplace_squared_shifted(canon, q("1"), pt, 16), InvalidInput);
    CHECK_THROWS_AS(EvaluationPoint::from_lambda(-1, 0), InvalidInput);

    auto ts = EvaluationPoint::from_t_s(q("10"), q("1/4"), q("1"));
    CHECK(ts.lambda1 == q("15/2"));
    CHECK(ts.lambda2 == 0);
}

TEST_CASE("laplace transform is decreasing in λ and in c²") {
    for (auto sc : {ShiftCase::EqualShift, ShiftCase::OppositeShift, ShiftCase::SingleShift}) {
        auto canon = CanonicalProblem::from_ab(q("4"), q("1/2"), sc);
        double prev = 2.0;
        for (int i = 0; i < 6; ++i) {
            double v = laplace_squared_shifted(canon, q("1"), EvaluationPoint::from_lambda(Rational(i, 2), 1))
                           .to_double();
            CHECK(v < prev);
            prev = v;
        }
        prev = 2.0;
        for (int i = 0; i < 6; ++i) {
            double v = laplace_squared_shifted(canon, q("1"), EvaluationPoint::from_lambda(1, Rational(i, 2)))
                           .to_double();
            CHECK(v < prev);
            prev = v;
        }
        prev = 2.0;
        for (int i = 0; i < 6; ++i) {
            double v = laplace_squared_shifted(canon, Rational(i), EvaluationPoint::from_lambda(1, 1)).to_double();
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("mc_laplace_estimate") {
    auto canon = CanonicalProblem::from_ab(q("2"), q("2"), ShiftCase::EqualShift);
    auto origin = mc_laplace_estimate(canon, q("1"), EvaluationPoint::from_lambda(0, 0), 1000, 1);
    CHECK(origin.mean == 1.0);
    CHECK(origin.stderr_ == 0.0);

    auto pt = EvaluationPoint::from_lambda(1, 1);
    auto est = mc_laplace_estimate(canon, q("0"), pt, 200000, 42);
    CHECK(std::abs(est.mean - 1.0 / std::sqrt(8.0)) <= 4 * est.stderr_);

    SUBCASE("deterministic and thread-independent") {
        auto a = mc_laplace_estimate(canon, q("1"), pt, 150000, 9, 1);
        auto b = mc_laplace_estimate(canon, q("1"), pt, 150000, 9, 3);
        auto c = mc_laplace_estimate(canon, q("1"), pt, 150000, 9, 8);
        CHECK(a.mean == b.mean);
        CHECK(a.mean == c.mean);
        CHECK(a.stderr_ == c.stderr_);
        auto other_seed = mc_laplace_estimate(canon, q("1"), pt, 150000, 10, 1);
        CHECK(other_seed.mean != a.mean);
    }

    CHECK_THROWS_AS(mc_laplace_estimate(canon, q("1"), pt, 0, 1), InvalidInput);
    auto degenerate = CanonicalProblem::from_ab(q("1"), q("1"), ShiftCase::EqualShift);
    CHECK_THROWS_AS(mc_laplace_estimate(degenerate, q("1"), pt, 10, 1), InvalidInput);
}
