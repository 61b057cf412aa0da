#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "birkhoff/exact_matrix.hpp"
#include "birkhoff/series.hpp"

namespace birkhoff {

// Small dense complex matrix for the float spectral path. Heavy numerics
// (Schur, eigenvectors) live in the implementation file.
class CMatrix {
public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Complex& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    CMatrix operator-() const;
    friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Complex> data_;
};

CMatrix to_cmatrix(const ExactMatrix& m);

// Matrix of the linear field X_{H2} in coordinates (x_1..x_n, y_1..y_n):
// xdot = -dH/dy, ydot = +dH/dx.
ExactMatrix hamiltonian_matrix(const ExactSeries& H2);
CMatrix hamiltonian_matrix(const FloatSeries& H2);

// Inverse of hamiltonian_matrix: H(z) = 1/2 z^T (Omega M) z.
ExactSeries quadratic_form(const ExactMatrix& M, std::size_t n, int order);
FloatSeries quadratic_form(const CMatrix& M, std::size_t n, int order);

// Omega M must be symmetric for M in sp(2n).
bool is_inf_symplectic(const ExactMatrix& M);
bool is_inf_symplectic(const CMatrix& M, double tol);

bool is_nilpotent(const ExactMatrix& M);
bool is_nilpotent(const CMatrix& M, double tol);

// M = S + N with S semisimple, N nilpotent, [S, N] = 0. Exact version via
// squarefree characteristic polynomial and a Bezout-corrected Newton
// iteration; float version via Schur eigenvalue clustering.
std::pair<ExactMatrix, ExactMatrix> jordan_chevalley(const ExactMatrix& M);
std::pair<CMatrix, CMatrix> jordan_chevalley(const CMatrix& M, double cluster_tol = 1e-9);

struct SymplecticFrame {
    CMatrix P;                    // z = P z', P^T Omega P = Omega
    std::vector<Complex> gamma;   // canonical order and signs
};
struct ExactSymplecticFrame {
    ExactMatrix P;
    std::vector<GaussianRational> gamma;
};

// Linear canonical coordinates in which the quadratic form of semisimple S
// reads sum gamma_j x_j y_j. Supported spectrum: pairwise distinct +-
// pairs (at most one zero pair). The exact variant succeeds only when the
// eigenvalues are Gaussian rationals; callers fall back to float.
SymplecticFrame eigen_symplectic_basis(const CMatrix& S);
std::optional<ExactSymplecticFrame> eigen_symplectic_basis_exact(const ExactMatrix& S);

// Substitution z -> P z, degree-preserving.
ExactSeries apply_linear(const ExactSeries& A, const ExactMatrix& P);
FloatSeries apply_linear(const FloatSeries& A, const CMatrix& P);

// Quadratic-part bundle used by the normalizer. `declared` marks splits
// supplied by the user (H_nil nilpotent but not necessarily commuting with
// H_ss); the Jordan-Chevalley commuting invariant is only asserted for
// splits this code derived itself.
struct QuadraticData {
    ExactSeries H2, Hss, Hnil;
    ExactMatrix M, S, Nn;
    bool declared = false;

    static QuadraticData analyze(const ExactSeries& H2);
    static QuadraticData from_declared(const ExactSeries& H2, const ExactSeries& Hss);
};

}  // namespace birkhoff
