#include "birkhoff/exact_matrix.hpp"

#include <optional>

namespace birkhoff {

std::vector<std::size_t> ExactMatrix::rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
        // Pick the structurally simplest nonzero pivot: smallest |.|^2
        // denominator-weighted entries behave fine at this size; any
        // nonzero choice is exact, so take the first.
        std::size_t piv = rows_;
        for (std::size_t i = row; i < rows_; ++i)
            if (!at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv == rows_) continue;
        if (piv != row)
            for (std::size_t j = 0; j < cols_; ++j) std::swap(at(piv, j), at(row, j));
        GaussianRational inv = GaussianRational::one() / at(row, col);
        for (std::size_t j = col; j < cols_; ++j) at(row, j) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row || at(i, col).is_zero()) continue;
            GaussianRational f = at(i, col);
            for (std::size_t j = col; j < cols_; ++j) at(i, j) -= f * at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::optional<std::vector<GaussianRational>> ExactMatrix::solve(
    const std::vector<GaussianRational>& b) const {
    BIRKHOFF_ASSERT(is_square() && b.size() == rows_, "solve shape mismatch");
    ExactMatrix aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b[i];
    }
    auto pivots = aug.rref();
    if (pivots.size() != rows_ || (pivots.size() && pivots.back() >= cols_)) return std::nullopt;
    std::vector<GaussianRational> x(cols_);
    for (std::size_t i = 0; i < rows_; ++i) x[pivots[i]] = aug.at(i, cols_);
    return x;
}

std::optional<ExactMatrix> ExactMatrix::inverse() const {
    BIRKHOFF_ASSERT(is_square(), "inverse of non-square matrix");
    const std::size_t n = rows_;
    ExactMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, n + i) = GaussianRational::one();
    }
    auto pivots = aug.rref();
    if (pivots.size() != n || pivots.back() >= n) return std::nullopt;
    ExactMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

std::size_t ExactMatrix::rank() const {
    ExactMatrix c = *this;
    return c.rref().size();
}

std::vector<std::vector<GaussianRational>> ExactMatrix::nullspace() const {
    ExactMatrix c = *this;
    auto pivots = c.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<GaussianRational>> basis;
    for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<GaussianRational> v(cols_);
        v[free_col] = GaussianRational::one();
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -c.at(i, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace birkhoff
