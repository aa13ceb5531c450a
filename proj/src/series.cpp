#include "idsq/series.hpp"

#include <algorithm>
#include <ostream>
#include <tuple>

namespace idsq {

namespace {

struct Term {
    std::size_t j, k;
    const Rational* value;
};

std::vector<Term> nonzero_terms(const BivariateSeries& x) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j <= x.max_deg1(); ++j)
        for (std::size_t k = 0; k <= x.max_deg2(); ++k)
            if (x(j, k) != 0) terms.push_back({j, k, &x(j, k)});
    return terms;
}

void require_same_shape(const BivariateSeries& x, const BivariateSeries& y) {
    if (x.max_deg1() != y.max_deg1() || x.max_deg2() != y.max_deg2())
        throw InvalidInput("series truncation orders differ");
}

}  // namespace

BivariateSeries::BivariateSeries(std::size_t max_deg1, std::size_t max_deg2)
    : deg1_(max_deg1), deg2_(max_deg2), coeffs_((max_deg1 + 1) * (max_deg2 + 1)) {}

BivariateSeries BivariateSeries::polynomial(std::size_t max_deg1, std::size_t max_deg2,
                                            const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& terms) {
    BivariateSeries s(max_deg1, max_deg2);
    for (const auto& [j, k, v] : terms)
        if (j <= max_deg1 && k <= max_deg2) s(j, k) += v;
    return s;
}

BivariateSeries BivariateSeries::one(std::size_t max_deg1, std::size_t max_deg2) {
    BivariateSeries s(max_deg1, max_deg2);
    s(0, 0) = 1;
    return s;
}

BivariateSeries BivariateSeries::operator+(const BivariateSeries& other) const {
    require_same_shape(*this, other);
    BivariateSeries out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] += other.coeffs_[i];
    return out;
}

BivariateSeries BivariateSeries::operator-(const BivariateSeries& other) const {
    require_same_shape(*this, other);
    BivariateSeries out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] -= other.coeffs_[i];
    return out;
}

BivariateSeries BivariateSeries::scaled(const Rational& factor) const {
    BivariateSeries out = *this;
    for (auto& c : out.coeffs_) c *= factor;
    return out;
}

void BivariateSeries::write_csv(std::ostream& out) const {
    out << "j,k,value\n";
    for (std::size_t j = 0; j <= deg1_; ++j)
        for (std::size_t k = 0; k <= deg2_; ++k) out << j << ',' << k << ',' << to_string((*this)(j, k)) << '\n';
}

BivariateSeries mul(const BivariateSeries& x, const BivariateSeries& y) {
    const std::size_t d1 = std::min(x.max_deg1(), y.max_deg1());
    const std::size_t d2 = std::min(x.max_deg2(), y.max_deg2());
    BivariateSeries out(d1, d2);
    auto tx = nonzero_terms(x);
    auto ty = nonzero_terms(y);
    const auto& outer = tx.size() <= ty.size() ? tx : ty;
    const auto& inner = tx.size() <= ty.size() ? ty : tx;
    Rational product;
    for (const auto& s : outer) {
        if (s.j > d1 || s.k > d2) continue;
        for (const auto& r : inner) {
            if (s.j + r.j > d1 || s.k + r.k > d2) continue;
            mpq_mul(product.get_mpq_t(), s.value->get_mpq_t(), r.value->get_mpq_t());
            out(s.j + r.j, s.k + r.k) += product;
        }
    }
    return out;
}

BivariateSeries reciprocal(const BivariateSeries& x) {
    if (x(0, 0) == 0) throw InvalidInput("reciprocal needs a nonzero constant term");
    BivariateSeries y(x.max_deg1(), x.max_deg2());
    const Rational inv_c = 1 / x(0, 0);
    std::vector<Term> rest;
    for (const auto& term : nonzero_terms(x))
        if (term.j != 0 || term.k != 0) rest.push_back(term);
    Rational acc, product;
    for (std::size_t j = 0; j <= x.max_deg1(); ++j)
        for (std::size_t k = 0; k <= x.max_deg2(); ++k) {
            acc = (j == 0 && k == 0) ? 1 : 0;
            for (const auto& term : rest) {
                if (term.j > j || term.k > k) continue;
                mpq_mul(product.get_mpq_t(), term.value->get_mpq_t(), y(j - term.j, k - term.k).get_mpq_t());
                acc -= product;
            }
            y(j, k) = acc * inv_c;
        }
    return y;
}

BivariateSeries log_neg(const BivariateSeries& x) {
    if (x(0, 0) != 1) throw InvalidInput("log_neg needs constant term 1");
    const std::size_t d1 = x.max_deg1(), d2 = x.max_deg2();
    BivariateSeries inv = reciprocal(x);
    BivariateSeries euler1(d1, d2), euler2(d1, d2);
    for (std::size_t j = 0; j <= d1; ++j)
        for (std::size_t k = 0; k <= d2; ++k) {
            euler1(j, k) = x(j, k) * static_cast<unsigned long>(j);
            euler2(j, k) = x(j, k) * static_cast<unsigned long>(k);
        }
    BivariateSeries d_log1 = mul(euler1, inv);
    BivariateSeries d_log2 = mul(euler2, inv);
    BivariateSeries out(d1, d2);
    for (std::size_t j = 0; j <= d1; ++j)
        for (std::size_t k = 0; k <= d2; ++k) {
            if (j > 0)
                out(j, k) = -d_log1(j, k) / static_cast<unsigned long>(j);
            else if (k > 0)
                out(j, k) = -d_log2(j, k) / static_cast<unsigned long>(k);
        }
    return out;
}

OraclePQ oracle_pq(const CanonicalProblem& canon, const Rational& t, std::size_t max_j, std::size_t max_k) {
    if (t <= 0) throw InvalidInput("t must be positive");
    // λ1 = t - t s1, λ2 = t - t s2 as series in (s1, s2).
    auto lambda1 = BivariateSeries::polynomial(max_j, max_k, {{0, 0, t}, {1, 0, -t}});
    auto lambda2 = BivariateSeries::polynomial(max_j, max_k, {{0, 0, t}, {0, 1, -t}});
    auto lambda12 = mul(lambda1, lambda2);
    auto one = BivariateSeries::one(max_j, max_k);

    BivariateSeries h = one + lambda1.scaled(canon.a) + lambda2.scaled(canon.b) + lambda12.scaled(canon.d);
    auto [c1, c2] = canonical_direction(canon.shift_case);
    Rational cross = c1 * c1 * canon.b + c2 * c2 * canon.a - 2 * c1 * c2;
    BivariateSeries numerator = lambda1.scaled(c1 * c1) + lambda2.scaled(c2 * c2) + lambda12.scaled(cross);

    OraclePQ out{BivariateSeries(max_j, max_k), BivariateSeries(max_j, max_k)};
    // P = -log H(0,0) - log(H / H(0,0)); the first part is the excluded constant.
    out.p = log_neg(h.scaled(1 / h(0, 0)));
    out.q = mul(numerator, reciprocal(h)).scaled(Rational(-1));
    return out;
}

}  // namespace idsq
