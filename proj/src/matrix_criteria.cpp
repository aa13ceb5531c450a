#include "idsq/matrix_criteria.hpp"

#include <utility>

namespace idsq {

namespace {

void check_dim(std::size_t n) {
    if (n < 2 || n > SquareMatrix::kMaxDim)
        throw InvalidInput("matrix dimension must be between 2 and " + std::to_string(SquareMatrix::kMaxDim));
}

void require_positive_definite(const SquareMatrix& gamma) {
    if (!gamma.is_symmetric() || !gamma.is_positive_definite())
        throw InvalidInput("covariance must be symmetric and strictly positive definite");
}

SquareMatrix conjugate_by_signature(const SquareMatrix& m, unsigned mask) {
    SquareMatrix out = m;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (((mask >> i) ^ (mask >> j)) & 1u) out(i, j) = -out(i, j);
    return out;
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t n) : n_(n), entries_(n * n) { check_dim(n); }

SquareMatrix::SquareMatrix(std::size_t n, std::vector<Rational> row_major) : n_(n), entries_(std::move(row_major)) {
    check_dim(n);
    if (entries_.size() != n * n) throw InvalidInput("matrix entry count does not match dimension");
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw InvalidInput("matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const Rational> diag) {
    SquareMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
    if (rhs.n_ != n_) throw InvalidInput("dimension mismatch");
    SquareMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            if ((*this)(i, k) == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) out(i, j) += (*this)(i, k) * rhs(k, j);
        }
    return out;
}

std::optional<SquareMatrix> SquareMatrix::inverse() const {
    SquareMatrix work = *this;
    SquareMatrix inv(n_);
    for (std::size_t i = 0; i < n_; ++i) inv(i, i) = 1;
    for (std::size_t col = 0; col < n_; ++col) {
        std::size_t pivot = col;
        while (pivot < n_ && work(pivot, col) == 0) ++pivot;
        if (pivot == n_) return std::nullopt;
        if (pivot != col)
            for (std::size_t j = 0; j < n_; ++j) {
                std::swap(work(pivot, j), work(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        Rational scale = 1 / work(col, col);
        for (std::size_t j = 0; j < n_; ++j) {
            work(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (std::size_t row = 0; row < n_; ++row) {
            if (row == col || work(row, col) == 0) continue;
            Rational factor = work(row, col);
            for (std::size_t j = 0; j < n_; ++j) {
                work(row, j) -= factor * work(col, j);
                inv(row, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

bool SquareMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

bool SquareMatrix::is_positive_definite() const {
    if (!is_symmetric()) return false;
    // Each elimination pivot is a ratio of consecutive leading principal minors.
    SquareMatrix work = *this;
    for (std::size_t k = 0; k < n_; ++k) {
        if (work(k, k) <= 0) return false;
        for (std::size_t i = k + 1; i < n_; ++i) {
            if (work(i, k) == 0) continue;
            Rational factor = work(i, k) / work(k, k);
            for (std::size_t j = k; j < n_; ++j) work(i, j) -= factor * work(k, j);
        }
    }
    return true;
}

bool SquareMatrix::is_irreducible() const {
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n_; ++j)
            if (!seen[j] && ((*this)(i, j) != 0 || (*this)(j, i) != 0)) {
                seen[j] = true;
                stack.push_back(j);
            }
    }
    for (bool s : seen)
        if (!s) return false;
    return true;
}

bool is_m_matrix(const SquareMatrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (i != j && a(i, j) > 0) return false;
    auto inv = a.inverse();
    if (!inv) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if ((*inv)(i, j) < 0) return false;
    return true;
}

BapatResult bapat_id_criterion(const SquareMatrix& gamma) {
    require_positive_definite(gamma);
    auto inv = gamma.inverse();
    if (!inv) throw InvalidInput("covariance is singular");
    const unsigned n = static_cast<unsigned>(gamma.size());
    // N and -N give the same conjugate, so fixing the first sign halves the search.
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        unsigned full = mask << 1;
        if (is_m_matrix(conjugate_by_signature(*inv, full))) {
            std::vector<int> witness(n);
            for (unsigned i = 0; i < n; ++i) witness[i] = ((full >> i) & 1u) ? -1 : 1;
            return {true, std::move(witness)};
        }
    }
    return {false, std::nullopt};
}

bool ek_criterion(const SquareMatrix& gamma, std::span<const Rational> c) {
    require_positive_definite(gamma);
    if (!gamma.is_irreducible()) throw InvalidInput("covariance must be irreducible");
    if (c.size() != gamma.size()) throw InvalidInput("shift vector length does not match covariance");
    bool all_zero = true;
    for (const auto& ci : c) all_zero = all_zero && ci == 0;
    if (all_zero) throw InvalidInput("shift vector must be nonzero");
    auto inv = gamma.inverse();
    if (!inv) throw InvalidInput("covariance is singular");
    SquareMatrix cmat = SquareMatrix::diagonal(c);
    SquareMatrix target = cmat * *inv * cmat;
    if (!is_m_matrix(target)) return false;
    for (std::size_t i = 0; i < target.size(); ++i) {
        Rational row_sum;
        for (std::size_t j = 0; j < target.size(); ++j) row_sum += target(i, j);
        if (row_sum < 0) return false;
    }
    return true;
}

}  // namespace idsq
