#include <doctest.h>

#include <cmath>
#include <random>

#include "idsq/coefficients.hpp"
#include "idsq/series.hpp"
#include "support.hpp"

using namespace idsq;
using idsq::testing::q;

namespace {

constexpr ShiftCase kCases[] = {ShiftCase::EqualShift, ShiftCase::OppositeShift, ShiftCase::SingleShift};

CanonicalProblem canon_of(const char* a, const char* b, ShiftCase sc) { return CanonicalProblem::from_ab(q(a), q(b), sc); }

}  // namespace

TEST_CASE("params at a=4, b=1/2, t=10") {
    auto sp = params(canon_of("4", "1/2", ShiftCase::EqualShift), q("10"));
    CHECK(sp.tbar_sq == 146);
    CHECK(sp.alpha == q("70/73"));
    CHECK(sp.beta == q("105/146"));
    CHECK(sp.p_param == q("50/73"));
    CHECK(sp.one_minus_theta == q("1/147"));
    CHECK(sp.alpha * sp.beta * sp.theta == sp.p_param);
    CHECK_THROWS_AS(params(canon_of("4", "1/2", ShiftCase::EqualShift), q("0")), InvalidInput);
    CHECK_THROWS_AS(params(canon_of("1", "1", ShiftCase::EqualShift), q("2")), InvalidInput);
}

TEST_CASE("params: alpha increases with t") {
    auto canon = canon_of("6/5", "5", ShiftCase::SingleShift);
    Rational prev = 0;
    for (unsigned long t = 1; t <= 4096; t *= 2) {
        auto sp = params(canon, Rational(t));
        CHECK(sp.alpha > prev);
        CHECK(sp.alpha < 1);
        CHECK(sp.beta < 1);
        CHECK(sp.theta < 1);
        CHECK(sp.theta > 0);
        CHECK(sp.one_minus_theta == 1 / canon.d / (1 + 1 / canon.d + canon.a * t + canon.b * t + canon.d * t * t));
        prev = sp.alpha;
    }
}

TEST_CASE("numerator_coeffs") {
    auto e = numerator_coeffs(canon_of("4", "1/2", ShiftCase::EqualShift), q("10"));
    CHECK(e.n00 == 270);
    CHECK(e.n10 == -260);
    CHECK(e.n01 == -260);
    CHECK(e.n11 == 250);
    auto o = numerator_coeffs(canon_of("4", "1/2", ShiftCase::OppositeShift), q("10"));
    CHECK(o.n00 == 670);
    CHECK(o.n10 == -660);
    CHECK(o.n01 == -660);
    CHECK(o.n11 == 650);
    auto s = numerator_coeffs(canon_of("4", "1/2", ShiftCase::SingleShift), q("10"));
    CHECK(s.n00 == 60);
    CHECK(s.n10 == -60);
    CHECK(s.n01 == -50);
    CHECK(s.n11 == 50);
}

TEST_CASE("C and D") {
    Rational w = q("2/9"), theta = 1 - w;
    CHECK(D_jk(w, 1, 1) == 2 - theta);
    CHECK(C_jk(w, 1, 1) == 1 - theta);
    for (std::uint64_t j = 0; j <= 6; ++j) {
        CHECK(D_jk(0, j, 5) == 1);
        CHECK(D_jk(w, 0, j) == 1);
        if (j > 0) {
            CHECK(C_jk(w, j, 0) == Rational(1, static_cast<unsigned long>(j)));
            CHECK(C_jk(w, 0, j) == Rational(1, static_cast<unsigned long>(j)));
            CHECK(C_jk(0, j, 3) == 0);
        }
        for (std::uint64_t k = 0; k <= 6; ++k) {
            CHECK(D_jk(w, j, k) == D_jk(w, k, j));
            CHECK(D_jk(w, j, k) >= 1);
            if (j + k > 0) {
                CHECK(C_jk(w, j, k) == C_jk(w, k, j));
                CHECK(C_jk(w, j, k) >= 0);
            }
        }
    }
    CHECK_THROWS_AS(C_jk(w, 0, 0), InvalidInput);
}

TEST_CASE("worked values at a=4, b=1/2, t=10") {
    auto canon = canon_of("4", "1/2", ShiftCase::EqualShift);
    auto sp = params(canon, q("10"));
    auto nc = numerator_coeffs(canon, q("10"));
    CHECK(P_jk(sp, 1, 1) == q("25/5329"));
    CHECK(sp.alpha * sp.beta * sp.one_minus_theta == q("25/5329"));
    CHECK(Q_jk(sp, nc, 1, 0) == q("40/5329"));
    auto k = case_constants(canon);
    Rational t = 10;
    CHECK(Q_jk(sp, nc, 1, 0) == -(k.gamma_const * t * t * (sp.alpha - 1) + t * (2 * sp.alpha - 1)) / sp.tbar_sq);
    CHECK(P_jk(sp, 2, 0) == sp.alpha * sp.alpha / 2);
    CHECK(R_jk(sp, nc, q("1"), 1, 0) == sp.alpha + q("40/5329"));
    CHECK(R_jk(sp, nc, 0, 3, 2) == P_jk(sp, 3, 2));
    CHECK_THROWS_AS(P_jk(sp, 0, 0), InvalidInput);
    CHECK_THROWS_AS(Q_jk(sp, nc, 0, 0), InvalidInput);
}

TEST_CASE("closed forms equal the series oracle") {
    const char* ab[][2] = {{"4", "1/2"}, {"2", "2"}, {"6/5", "5"}};
    for (auto sc : kCases)
        for (auto [a, b] : ab)
            for (const char* t : {"1/2", "3", "10"}) {
                auto canon = canon_of(a, b, sc);
                auto sp = params(canon, q(t));
                auto nc = numerator_coeffs(canon, q(t));
                auto o = oracle_pq(canon, q(t), 10, 10);
                for (std::uint64_t j = 0; j <= 10; ++j)
                    for (std::uint64_t k = 0; j + k <= 10; ++k) {
                        if (j + k == 0) continue;
                        CHECK(P_jk(sp, j, k) == o.p(j, k));
                        CHECK(Q_jk(sp, nc, j, k) == o.q(j, k));
                    }
            }
}

TEST_CASE("Q cross-checks: folded sum and boundary closed forms") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 12; ++i) {
        auto [a, b] = idsq::testing::random_ab(rng);
        Rational t = idsq::testing::random_rational(rng, 1, 40, 3);
        for (auto sc : kCases) {
            auto canon = CanonicalProblem::from_ab(a, b, sc);
            auto sp = params(canon, t);
            auto nc = numerator_coeffs(canon, t);
            for (std::uint64_t j = 1; j <= 7; ++j) {
                CHECK(Q_row_closed_form(canon, sp, j) == Q_jk(sp, nc, j, 0));
                CHECK(Q_column_closed_form(canon, sp, j) == Q_jk(sp, nc, 0, j));
                for (std::uint64_t k = 1; k <= 7; ++k) CHECK(Q_jk_folded(sp, nc, j, k) == Q_jk(sp, nc, j, k));
            }
            if (sc == ShiftCase::SingleShift)
                for (std::uint64_t j = 1; j <= 5; ++j)
                    CHECK(Q_jk(sp, nc, j, 0) ==
                          (canon.b * t * t + t) * (1 - sp.alpha) * pow(sp.alpha, j - 1) / sp.tbar_sq);
        }
    }
}

TEST_CASE("swap symmetry") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 8; ++i) {
        auto [a, b] = idsq::testing::random_ab(rng);
        Rational t = idsq::testing::random_rational(rng, 1, 30, 2);
        Rational c_sq = idsq::testing::random_rational(rng, 0, 20, 3);
        for (auto sc : {ShiftCase::EqualShift, ShiftCase::OppositeShift}) {
            auto x = CanonicalProblem::from_ab(a, b, sc);
            auto y = CanonicalProblem::from_ab(b, a, sc);
            auto spx = params(x, t), spy = params(y, t);
            auto ncx = numerator_coeffs(x, t), ncy = numerator_coeffs(y, t);
            for (std::uint64_t j = 0; j <= 6; ++j)
                for (std::uint64_t k = 0; k <= 6; ++k) {
                    if (j + k == 0) continue;
                    CHECK(P_jk(spx, j, k) == P_jk(spy, k, j));
                    CHECK(R_jk(spx, ncx, c_sq, j, k) == R_jk(spy, ncy, c_sq, k, j));
                }
        }
    }
}

TEST_CASE("R is affine in c squared") {
    auto canon = canon_of("6/5", "5", ShiftCase::OppositeShift);
    auto sp = params(canon, q("7"));
    auto nc = numerator_coeffs(canon, q("7"));
    for (std::uint64_t j = 0; j <= 5; ++j)
        for (std::uint64_t k = 1; k <= 5; ++k) {
            Rational r0 = R_jk(sp, nc, 0, j, k), r1 = R_jk(sp, nc, 1, j, k);
            Rational c_sq = q("13/4");
            CHECK(R_jk(sp, nc, c_sq, j, k) == r0 + c_sq * (r1 - r0));
        }
}

TEST_CASE("decompose_R") {
    std::mt19937_64 rng(47);
    for (auto sc : kCases) {
        auto canon = canon_of("4", "1/2", sc);
        Rational t = 9;
        auto sp = params(canon, t);
        auto nc = numerator_coeffs(canon, t);
        for (std::uint64_t j = 1; j <= 6; ++j)
            for (std::uint64_t k = 1; k <= 6; ++k) {
                Rational c_sq = idsq::testing::random_rational(rng, 0, 30, 4);
                auto terms = decompose_R(sp, nc, c_sq, j, k);
                CHECK(terms.size() == std::min(j, k) + 1);
                Rational sum = 0;
                for (const auto& x : terms) sum += x;
                CHECK(sum == R_jk(sp, nc, c_sq, j, k));

                // c = 0 gives the P summands αʲβᵏ (1-θ)^{p+1}/(p+1) C(j-1,p) C(k-1,p)
                auto p_terms = decompose_R(sp, nc, 0, j, k);
                for (std::uint64_t p = 0; p < std::min(j, k); ++p) {
                    Rational expect = pow(sp.alpha, j) * pow(sp.beta, k) * pow(sp.one_minus_theta, p + 1) /
                                      Rational(static_cast<unsigned long>(p + 1)) * binomial(j - 1, p) *
                                      binomial(k - 1, p);
                    CHECK(p_terms[p] == expect);
                }
                CHECK(p_terms.back() == 0);
            }
    }
    auto canon = canon_of("2", "2", ShiftCase::EqualShift);
    auto sp = params(canon, q("64"));
    auto nc = numerator_coeffs(canon, q("64"));
    for (const char* c_sq : {"0", "1", "100", "10000"})
        for (const auto& x : decompose_R(sp, nc, q(c_sq), 4, 4)) CHECK(x >= 0);
    CHECK_THROWS_AS(decompose_R(sp, nc, 1, 0, 3), InvalidInput);
}

TEST_CASE("scaled values: exact, float and the row sweep agree") {
    for (auto sc : kCases) {
        auto canon = canon_of("4", "1/2", sc);
        for (const char* t : {"3", "16", "100"}) {
            ScaledEvaluator ev(canon, q(t));
            const auto& sp = ev.series_params();
            const auto& nc = ev.numerator();
            for (std::uint64_t j = 0; j <= 9; ++j)
                for (std::uint64_t k = 0; k <= 9; ++k) {
                    if (j + k == 0) continue;
                    auto s = ev.exact(j, k);
                    Rational scale = scale_factor(sp, j, k);
                    CHECK(s.p * scale == P_jk(sp, j, k));
                    CHECK(s.q * scale == Q_jk(sp, nc, j, k));
                    auto f = ev.evaluate(j, k);
                    CHECK(std::abs(f.p - s.p.get_d()) <= 1e-13 * f.p_mag);
                    CHECK(std::abs(f.q - s.q.get_d()) <= 1e-13 * f.q_mag);
                }
            std::uint64_t visited = 0;
            for_each_exact_interior(ev, 60, [&](std::uint64_t j, std::uint64_t k, const ScaledPQ& cell) {
                auto s = ev.exact(j, k);
                CHECK(cell.p == s.p);
                CHECK(cell.q == s.q);
                ++visited;
            });
            // Σ_{j=1}^{60} ⌊60/j⌋
            CHECK(visited == 261);
        }
    }
}

TEST_CASE("float evaluation stays finite at large indices") {
    auto canon = canon_of("4", "1/2", ShiftCase::EqualShift);
    ScaledEvaluator ev(canon, q("128"));
    for (auto [j, k] : {std::pair<std::uint64_t, std::uint64_t>{17000, 1}, {1, 17000}, {400, 400}, {3000, 20}}) {
        auto f = ev.evaluate(j, k);
        CHECK(std::isfinite(f.p));
        CHECK(std::isfinite(f.q));
        CHECK(f.p > 0);
    }
    auto f = ev.evaluate(40, 30);
    auto s = ev.exact(40, 30);
    CHECK(f.p == doctest::Approx(s.p.get_d()).epsilon(1e-12));
}

TEST_CASE("coefficient_grid") {
    auto canon = canon_of("4", "1/2", ShiftCase::EqualShift);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> idx{{1, 0}, {0, 1}, {1, 1}, {3, 2}, {2, 7}};
    auto exact = coefficient_grid(canon, q("10"), q("9"), idx, GridMode::Exact);
    auto fl = coefficient_grid(canon, q("10"), q("9"), idx, GridMode::Float);
    REQUIRE(exact.cells.size() == idx.size());
    CHECK(exact.cells[2].p_exact == q("25/5329"));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        CHECK(sign(exact.cells[i].r_exact) == (fl.cells[i].r > 0) - (fl.cells[i].r < 0));
        CHECK(fl.cells[i].p == doctest::Approx(exact.cells[i].p_exact.get_d()).epsilon(1e-12));
    }
    auto csv = exact.to_csv();
    CHECK(csv.rfind("j,k,P,Q,R,mode\n1,0,70/73,40/5329,", 0) == 0);
    CHECK(csv.find("1,1,25/5329,") != std::string::npos);
    CHECK(fl.to_csv().find(",float\n") != std::string::npos);

    auto zero = coefficient_grid(canon, q("10"), 0, idx, GridMode::Exact);
    for (const auto& c : zero.cells) CHECK(c.r_exact == c.p_exact);
}

TEST_CASE("float and exact signs agree on a sweep near the feasibility boundary") {
    for (auto sc : kCases) {
        auto canon = canon_of("4", "1/2", sc);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> idx;
        for (std::uint64_t j = 0; j <= 12; ++j)
            for (std::uint64_t k = 0; k <= 12; ++k)
                if (j + k > 0) idx.emplace_back(j, k);
        // c² making R_{1,1} exactly zero exercises the confirmation path.
        ScaledEvaluator ev(canon, q("16"));
        auto s = ev.exact(1, 1);
        if (s.q >= 0) continue;
        Rational c_sq = -s.p / s.q;
        auto exact = coefficient_grid(canon, q("16"), c_sq, idx, GridMode::Exact);
        auto fl = coefficient_grid(canon, q("16"), c_sq, idx, GridMode::Float);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            int fs = (fl.cells[i].r > 0) - (fl.cells[i].r < 0);
            CHECK(sign(exact.cells[i].r_exact) == fs);
        }
    }
}

TEST_CASE("asymptotic_check") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 100; ++i) {
        auto [a, b] = idsq::testing::random_ab(rng);
        Rational t = idsq::testing::random_rational(rng, 1, 100, 7);
        auto diag = asymptotic_check(CanonicalProblem::from_ab(a, b, ShiftCase::EqualShift), t);
        CHECK(diag.identities_hold());
    }
    auto canon = canon_of("4", "1/2", ShiftCase::EqualShift);
    auto d10 = asymptotic_check(canon, q("10"));
    CHECK(d10.residual_one_minus_theta == q("1/147") - q("11/2000"));
    double prev3 = 0, prev4 = 0;
    for (unsigned long t = 16; t <= 4096; t *= 2) {
        auto diag = asymptotic_check(canon, Rational(t));
        double s3 = std::abs(diag.residual_one_minus_alpha.get_d()) * std::pow(double(t), 3);
        double s4 = std::abs(diag.residual_one_minus_theta.get_d()) * std::pow(double(t), 4);
        if (prev3 > 0) {
            CHECK(s3 <= 1.5 * prev3);
            CHECK(s4 <= 1.5 * prev4);
        }
        prev3 = s3;
        prev4 = s4;
    }
}
