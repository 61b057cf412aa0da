#include "birkhoff/lattice.hpp"

#include <algorithm>

namespace birkhoff {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BIRKHOFF_ASSERT(b > 0, "floor_div needs positive divisor");
    BigInt q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

void sub_scaled_row(IntVec& target, const IntVec& src, const BigInt& f) {
    for (std::size_t j = 0; j < target.size(); ++j) target[j] -= f * src[j];
}

// Fraction-free determinant (Bareiss).
BigInt int_det(IntMat M) {
    const std::size_t n = M.size();
    if (n == 0) return 1;
    BigInt sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            std::size_t sw = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (M[i][k] != 0) {
                    sw = i;
                    break;
                }
            if (sw == n) return 0;
            std::swap(M[k], M[sw]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

}  // namespace

IntMat hermite_normal_form(IntMat M) {
    if (M.empty()) return M;
    const std::size_t rows = M.size(), cols = M[0].size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        // Euclidean elimination below position r in this column.
        for (;;) {
            std::size_t best = rows;
            for (std::size_t i = r; i < rows; ++i) {
                if (M[i][col] == 0) continue;
                if (best == rows || abs(M[i][col]) < abs(M[best][col])) best = i;
            }
            if (best == rows) break;
            std::swap(M[r], M[best]);
            bool cleared = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (M[i][col] == 0) continue;
                BigInt f = M[i][col] / M[r][col];
                sub_scaled_row(M[i], M[r], f);
                if (M[i][col] != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (M[r][col] == 0) continue;
        if (M[r][col] < 0)
            for (auto& v : M[r]) v = -v;
        for (std::size_t i = 0; i < r; ++i) {
            BigInt f = floor_div(M[i][col], M[r][col]);
            if (f != 0) sub_scaled_row(M[i], M[r], f);
        }
        ++r;
    }
    M.resize(r);
    return M;
}

SmithResult smith_normal_form(const IntMat& M) {
    SmithResult res;
    const std::size_t rows = M.size();
    const std::size_t cols = rows ? M[0].size() : 0;
    res.D = M;
    res.U.assign(rows, IntVec(rows, 0));
    for (std::size_t i = 0; i < rows; ++i) res.U[i][i] = 1;
    res.V.assign(cols, IntVec(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) res.V[i][i] = 1;
    auto& D = res.D;
    auto& U = res.U;
    auto& V = res.V;

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        std::swap(D[a], D[b]);
        std::swap(U[a], U[b]);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (auto& row : D) std::swap(row[a], row[b]);
        for (auto& row : V) std::swap(row[a], row[b]);
    };
    auto row_op = [&](std::size_t i, std::size_t r, const BigInt& f) {
        sub_scaled_row(D[i], D[r], f);
        sub_scaled_row(U[i], U[r], f);
    };
    auto col_op = [&](std::size_t j, std::size_t c, const BigInt& f) {
        for (auto& row : D) row[j] -= f * row[c];
        for (auto& row : V) row[j] -= f * row[c];
    };

    std::size_t t = 0;
    while (t < std::min(rows, cols)) {
        // Smallest nonzero pivot in the trailing block.
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                if (D[i][j] == 0) continue;
                if (pi == rows || abs(D[i][j]) < abs(D[pi][pj])) {
                    pi = i;
                    pj = j;
                }
            }
        if (pi == rows) break;
        if (pi != t) swap_rows(t, pi);
        if (pj != t) swap_cols(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (D[i][t] == 0) continue;
                BigInt f = D[i][t] / D[t][t];
                row_op(i, t, f);
                if (D[i][t] != 0) {
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (D[t][j] == 0) continue;
                BigInt f = D[t][j] / D[t][t];
                col_op(j, t, f);
                if (D[t][j] != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
        }
        ++t;
    }
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) {
        if (D[i][i] < 0) {
            for (auto& v : D[i]) v = -v;
            for (auto& v : U[i]) v = -v;
        }
        if (D[i][i] != 0) res.rank = i + 1;
    }
    return res;
}

IntMat integer_kernel(const IntMat& M, std::size_t cols) {
    if (M.empty()) {
        // Zero map: kernel is all of Z^cols.
        IntMat k(cols, IntVec(cols, 0));
        for (std::size_t i = 0; i < cols; ++i) k[i][i] = 1;
        return k;
    }
    BIRKHOFF_ASSERT(M[0].size() == cols, "kernel column count mismatch");
    SmithResult s = smith_normal_form(M);
    IntMat kernel;
    for (std::size_t i = s.rank; i < cols; ++i) {
        IntVec v(cols);
        for (std::size_t j = 0; j < cols; ++j) v[j] = s.V[j][i];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

std::pair<std::size_t, IntMat> resonance_lattice(const FrequencyModel& F) {
    const std::size_t n = F.n, d = F.d;
    // k^T C = 0 over Q(i) becomes an integer system: one row per basis
    // coordinate and per real/imaginary part, denominators cleared.
    IntMat B;
    for (std::size_t l = 0; l < d; ++l) {
        for (int part = 0; part < 2; ++part) {
            BigInt lcm = 1;
            for (std::size_t j = 0; j < n; ++j) {
                const auto& e = F.C.at(j, l);
                const Rational& v = part ? e.im : e.re;
                lcm = boost::multiprecision::lcm(lcm, denominator(v));
            }
            IntVec row(n);
            bool nonzero = false;
            for (std::size_t j = 0; j < n; ++j) {
                const auto& e = F.C.at(j, l);
                const Rational& v = part ? e.im : e.re;
                row[j] = numerator(v) * (lcm / denominator(v));
                nonzero = nonzero || row[j] != 0;
            }
            if (nonzero) B.push_back(std::move(row));
        }
    }
    IntMat mu = hermite_normal_form(integer_kernel(B, n));
    return {mu.size(), std::move(mu)};
}

IntMat dual_basis(const IntMat& mu, std::size_t n) {
    const std::size_t q = mu.size();
    IntMat rho(n, IntVec(n, 0));
    if (q == 0) {
        for (std::size_t i = 0; i < n; ++i) rho[i][i] = 1;
        return rho;
    }
    BIRKHOFF_ASSERT(mu[0].size() == n, "lattice basis arity mismatch");
    SmithResult s = smith_normal_form(mu);
    if (s.rank != q) throw Error(errc::domain, "mu rows are not a lattice basis");
    for (std::size_t i = 0; i < q; ++i)
        if (s.D[i][i] != 1)
            throw Error(errc::domain, "resonance lattice basis is not saturated");

    // U mu V = [I_q | 0]  =>  mu V Q = [0 | I_q] with the block swap
    // Q = [[0, U], [I_{n-q}, 0]]; rows of P = (V Q)^T are the dual basis.
    IntMat Q(n, IntVec(n, 0));
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) Q[i][(n - q) + j] = s.U[i][j];
    for (std::size_t i = 0; i < n - q; ++i) Q[q + i][i] = 1;
    // P^T = V * Q, so P[k][j] = (V Q)[j][k].
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            BigInt acc = 0;
            for (std::size_t t = 0; t < n; ++t) acc += s.V[j][t] * Q[t][k];
            rho[k][j] = acc;
        }

    // Canonicalize: the first n-q rows span the orthogonal-complement
    // lattice of mu; replace them by their HNF basis.
    IntMat top(rho.begin(), rho.begin() + (n - q));
    top = hermite_normal_form(std::move(top));
    BIRKHOFF_ASSERT(top.size() == n - q, "orthogonal block lost rank in HNF");
    for (std::size_t i = 0; i < n - q; ++i) rho[i] = top[i];

    // Size-reduce the pairing rows against the HNF block (adding any
    // orthogonal-lattice vector preserves the pairing).
    for (std::size_t i = n - q; i < n; ++i) {
        for (std::size_t tr = 0; tr < n - q; ++tr) {
            std::size_t p = 0;
            while (p < n && top[tr][p] == 0) ++p;
            BIRKHOFF_ASSERT(p < n, "zero row in HNF block");
            BigInt f = floor_div(rho[i][p], top[tr][p]);
            if (f != 0) sub_scaled_row(rho[i], top[tr], f);
        }
    }

    // Paranoid checks: biorthogonality and unimodularity.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t h = 0; h < q; ++h) {
            BigInt dot = 0;
            for (std::size_t j = 0; j < n; ++j) dot += rho[k][j] * mu[h][j];
            BigInt want = (k >= n - q && k - (n - q) == h) ? 1 : 0;
            BIRKHOFF_ASSERT(dot == want, "dual basis pairing violated");
        }
    BigInt det = int_det(rho);
    BIRKHOFF_ASSERT(det == 1 || det == -1, "dual basis is not unimodular");
    return rho;
}

ExactMatrix alpha_coefficients(const FrequencyModel& F, const IntMat& rho) {
    const std::size_t n = F.n, d = F.d;
    BIRKHOFF_ASSERT(rho.size() == n, "dual basis has wrong row count");
    const std::size_t q = resonance_lattice(F).first;
    // gamma(coordinate-wise) = sum_k alpha_k rho^(k) means C = P^T X with
    // P the rho-row matrix; the trailing q rows of X pair with mu
    // directions and must vanish, leaving alpha on top.
    ExactMatrix Pt(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) Pt.at(j, k) = GaussianRational(Rational(rho[k][j]));
    auto inv = Pt.inverse();
    if (!inv) throw Error(errc::domain, "dual basis is singular");
    ExactMatrix X = *inv * F.C;
    for (std::size_t k = n - q; k < n; ++k)
        for (std::size_t l = 0; l < d; ++l)
            BIRKHOFF_ASSERT(X.at(k, l).is_zero(), "gamma has a component along the resonance lattice");
    ExactMatrix alpha(n - q, d);
    for (std::size_t k = 0; k < n - q; ++k)
        for (std::size_t l = 0; l < d; ++l) alpha.at(k, l) = X.at(k, l);
    return alpha;
}

ResonanceBasis analyze_resonance(const FrequencyModel& F) {
    ResonanceBasis rb;
    rb.n = F.n;
    auto [q, mu] = resonance_lattice(F);
    rb.q = q;
    rb.mu = std::move(mu);
    rb.rho = dual_basis(rb.mu, F.n);
    rb.alpha = alpha_coefficients(F, rb.rho);
    return rb;
}

std::vector<ExactSeries> torus_generators(const IntMat& rho, std::size_t q, std::size_t n,
                                          int order) {
    BIRKHOFF_ASSERT(rho.size() == n, "dual basis has wrong row count");
    std::vector<ExactSeries> out;
    for (std::size_t k = 0; k < n - q; ++k) {
        ExactSeries f(n, order);
        for (std::size_t j = 0; j < n; ++j) {
            if (rho[k][j] == 0) continue;
            Monomial m(2 * n);
            m.e[j] = 1;
            m.e[n + j] = 1;
            f.add_term(m, GaussianRational(Rational(rho[k][j])));
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace birkhoff
