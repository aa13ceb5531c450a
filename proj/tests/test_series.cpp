#include <doctest.h>

#include <random>
#include <sstream>

#include "idsq/series.hpp"
#include "support.hpp"

using namespace idsq;
using idsq::testing::q;

namespace {

BivariateSeries quadratic(std::size_t n, const Rational& theta) {
    return BivariateSeries::polynomial(n, n, {{0, 0, 1}, {1, 0, -1}, {0, 1, -1}, {1, 1, theta}});
}

BivariateSeries random_series(std::mt19937_64& rng, std::size_t n, bool unit_constant) {
    BivariateSeries s(n, n);
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t k = 0; k <= n; ++k) s(j, k) = idsq::testing::random_rational(rng, -5, 5, 4);
    s(0, 0) = unit_constant ? Rational(1) : idsq::testing::random_rational(rng, 1, 5, 4);
    return s;
}

}  // namespace

TEST_CASE("mul") {
    auto x = BivariateSeries::polynomial(3, 3, {{0, 0, 1}, {1, 0, 1}});
    auto y = BivariateSeries::polynomial(3, 3, {{0, 0, 1}, {0, 1, 1}});
    auto expect = BivariateSeries::polynomial(3, 3, {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    CHECK(mul(x, y) == expect);
    CHECK(mul(x, BivariateSeries::one(3, 3)) == x);

    BivariateSeries geo(5, 2);
    for (std::size_t j = 0; j <= 5; ++j) geo(j, 0) = 1;
    auto one_minus = BivariateSeries::polynomial(5, 2, {{0, 0, 1}, {1, 0, -1}});
    CHECK(mul(one_minus, geo) == BivariateSeries::one(5, 2));

    auto small = BivariateSeries::polynomial(2, 4, {{0, 0, 1}});
    auto product = mul(small, geo);
    CHECK(product.max_deg1() == 2);
    CHECK(product.max_deg2() == 2);
}

TEST_CASE("reciprocal") {
    auto one_minus = BivariateSeries::polynomial(6, 3, {{0, 0, 1}, {1, 0, -1}});
    auto r = reciprocal(one_minus);
    for (std::size_t j = 0; j <= 6; ++j) {
        CHECK(r(j, 0) == 1);
        for (std::size_t k = 1; k <= 3; ++k) CHECK(r(j, k) == 0);
    }
    auto r1 = reciprocal(quadratic(6, 1));
    for (std::size_t j = 0; j <= 6; ++j)
        for (std::size_t k = 0; k <= 6; ++k) CHECK(r1(j, k) == 1);
    Rational theta = q("3/7");
    CHECK(reciprocal(quadratic(3, theta))(1, 1) == 2 - theta);
    CHECK_THROWS_AS(reciprocal(BivariateSeries(2, 2)), InvalidInput);
}

TEST_CASE("log_neg") {
    auto one_minus = BivariateSeries::polynomial(8, 2, {{0, 0, 1}, {1, 0, -1}});
    auto l = log_neg(one_minus);
    CHECK(l(0, 0) == 0);
    for (std::size_t j = 1; j <= 8; ++j) CHECK(l(j, 0) == Rational(1, static_cast<unsigned long>(j)));
    auto split = log_neg(quadratic(6, 1));
    for (std::size_t j = 1; j <= 6; ++j)
        for (std::size_t k = 1; k <= 6; ++k) CHECK(split(j, k) == 0);
    Rational theta = q("5/11");
    CHECK(log_neg(quadratic(4, theta))(1, 1) == 1 - theta);
    CHECK_THROWS_AS(log_neg(BivariateSeries::polynomial(2, 2, {{0, 0, 2}})), InvalidInput);
}

TEST_CASE("algebraic laws up to truncation") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
        auto x = random_series(rng, 4, false);
        auto y = random_series(rng, 4, false);
        auto z = random_series(rng, 4, false);
        CHECK(mul(x, y) == mul(y, x));
        CHECK(mul(mul(x, y), z) == mul(x, mul(y, z)));
        CHECK(mul(x, reciprocal(x)) == BivariateSeries::one(4, 4));
        auto u = random_series(rng, 4, true);
        auto v = random_series(rng, 4, true);
        CHECK(log_neg(mul(u, v)) == log_neg(u) + log_neg(v));
    }
}

TEST_CASE("write_csv") {
    auto x = BivariateSeries::polynomial(1, 1, {{0, 0, 1}, {1, 1, q("-2/3")}});
    std::ostringstream out;
    x.write_csv(out);
    CHECK(out.str() == "j,k,value\n0,0,1\n0,1,0\n1,0,0\n1,1,-2/3\n");
}

TEST_CASE("oracle_pq") {
    auto canon = CanonicalProblem::from_ab(q("4"), q("1/2"), ShiftCase::EqualShift);
    auto o = oracle_pq(canon, q("10"), 4, 4);
    CHECK(o.p(0, 0) == 0);
    CHECK(o.p(1, 1) == q("25/5329"));
    CHECK(o.q(1, 0) == q("40/5329"));
    Rational alpha = q("70/73");
    for (unsigned long j = 1; j <= 4; ++j) CHECK(o.p(j, 0) == pow(alpha, j) / j);
    CHECK_THROWS_AS(oracle_pq(canon, q("0"), 2, 2), InvalidInput);

    SUBCASE("P coefficients are nonnegative") {
        for (auto sc : {ShiftCase::EqualShift, ShiftCase::OppositeShift, ShiftCase::SingleShift})
            for (const char* t : {"1/3", "3", "50"}) {
                auto oo = oracle_pq(CanonicalProblem::from_ab(q("6/5"), q("5"), sc), q(t), 8, 8);
                for (std::size_t j = 0; j <= 8; ++j)
                    for (std::size_t k = 0; k <= 8; ++k) CHECK(oo.p(j, k) >= 0);
            }
    }
}
