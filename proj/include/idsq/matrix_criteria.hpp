#pragma once

#include <optional>
#include <span>
#include <vector>

#include "idsq/rational.hpp"

namespace idsq {

/// Dense n×n rational matrix, 2 <= n <= 8 (the signature search is 2^n).
class SquareMatrix {
public:
    static constexpr std::size_t kMaxDim = 8;

    explicit SquareMatrix(std::size_t n);
    SquareMatrix(std::size_t n, std::vector<Rational> row_major);
    static SquareMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
    static SquareMatrix diagonal(std::span<const Rational> diag);

    std::size_t size() const { return n_; }
    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    SquareMatrix operator*(const SquareMatrix& rhs) const;
    bool operator==(const SquareMatrix& rhs) const = default;

    /// Exact inverse by Gauss-Jordan elimination; nullopt when singular.
    std::optional<SquareMatrix> inverse() const;
    /// All leading principal minors strictly positive (Sylvester); requires symmetry.
    bool is_positive_definite() const;
    bool is_symmetric() const;
    /// The graph on indices with an edge where the off-diagonal entry is nonzero is connected.
    bool is_irreducible() const;

private:
    std::size_t n_;
    std::vector<Rational> entries_;
};

bool is_m_matrix(const SquareMatrix& a);

struct BapatResult {
    bool verdict = false;
    /// Signature diagonal (+1/-1 entries) making N Γ⁻¹ N an M-matrix.
    std::optional<std::vector<int>> witness;
};

/// Exhaustive signature search: some N with N Γ⁻¹ N an M-matrix.
BapatResult bapat_id_criterion(const SquareMatrix& gamma);

/// C Γ⁻¹ C is an M-matrix with every row sum >= 0, C = diag(c).
bool ek_criterion(const SquareMatrix& gamma, std::span<const Rational> c);

}  // namespace idsq
