#pragma once

#include <cstddef>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

// Dense matrix over Q(i) with exact elimination. Sized for the linear
// algebra of one quadratic part (2n x 2n, n small), not for bulk numerics.
class ExactMatrix {
public:
    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = GaussianRational::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    GaussianRational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const GaussianRational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!v.is_zero()) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    ExactMatrix transpose() const {
        ExactMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    GaussianRational trace() const {
        BIRKHOFF_ASSERT(is_square(), "trace of non-square matrix");
        GaussianRational s;
        for (std::size_t i = 0; i < rows_; ++i) s += at(i, i);
        return s;
    }

    ExactMatrix operator-() const {
        ExactMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
        return r;
    }

    ExactMatrix& operator+=(const ExactMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ExactMatrix& operator-=(const ExactMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }

    ExactMatrix& operator*=(const GaussianRational& s) {
        for (auto& v : data_) v *= s;
        return *this;
    }
    friend ExactMatrix operator*(ExactMatrix a, const GaussianRational& s) { return a *= s; }
    friend ExactMatrix operator*(const GaussianRational& s, ExactMatrix a) { return a *= s; }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw Error(errc::dimension, "matrix product shape mismatch");
        ExactMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const auto& bkj = b.at(k, j);
                    if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
                }
            }
        return r;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

    // Row-reduce in place to reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref();

    // Solve A x = b for square A; empty optional when A is singular.
    std::optional<std::vector<GaussianRational>> solve(const std::vector<GaussianRational>& b) const;

    std::optional<ExactMatrix> inverse() const;

    std::size_t rank() const;

    // Columns spanning ker(A).
    std::vector<std::vector<GaussianRational>> nullspace() const;

private:
    void check_same_shape(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error(errc::dimension, "matrix shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<GaussianRational> data_;
};

}  // namespace birkhoff
