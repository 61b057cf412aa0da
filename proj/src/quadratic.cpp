#include "birkhoff/quadratic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "birkhoff/unipoly.hpp"

namespace birkhoff {

namespace {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const CMatrix& m) {
    EMat e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(long(i), long(j)) = m.at(i, j);
    return e;
}

CMatrix from_eigen(const EMat& e) {
    CMatrix m(std::size_t(e.rows()), std::size_t(e.cols()));
    for (long i = 0; i < e.rows(); ++i)
        for (long j = 0; j < e.cols(); ++j) m.at(std::size_t(i), std::size_t(j)) = e(i, j);
    return m;
}

ExactMatrix omega_exact(std::size_t n) {
    ExactMatrix W(2 * n, 2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        W.at(j, n + j) = GaussianRational(1);
        W.at(n + j, j) = GaussianRational(-1);
    }
    return W;
}

template <class C, class MatAt>
Series<C> substitute_linear(const Series<C>& A, MatAt at, std::size_t dim) {
    const std::size_t v = A.vars();
    if (dim != v) throw Error(errc::dimension, "linear map has wrong size for series");
    // Linear form for each variable, then per-term products of powers with
    // a per-variable power cache.
    std::vector<Series<C>> lin(v);
    for (std::size_t i = 0; i < v; ++i) {
        Series<C> l(A.n(), A.order());
        for (std::size_t j = 0; j < v; ++j) {
            C c = at(i, j);
            if (CoeffTraits<C>::is_zero(c)) continue;
            Monomial m(v);
            m.e[j] = 1;
            l.add_term(m, c);
        }
        lin[i] = std::move(l);
    }
    std::vector<std::vector<Series<C>>> powers(v);
    auto power = [&](std::size_t i, std::uint16_t e) -> const Series<C>& {
        auto& cache = powers[i];
        if (cache.empty()) {
            Series<C> one(A.n(), A.order());
            one.add_term(Monomial(v), CoeffTraits<C>::weight(1));
            cache.push_back(std::move(one));
        }
        while (cache.size() <= e) cache.push_back(cache.back() * lin[i]);
        return cache[e];
    };
    Series<C> out(A.n(), A.order());
    for (const auto& [m, c] : A.terms()) {
        Series<C> term(A.n(), A.order());
        term.add_term(Monomial(v), c);
        for (std::size_t i = 0; i < v; ++i)
            if (m.e[i]) term = term * power(i, m.e[i]);
        out += term;
    }
    return out;
}

template <class C>
void check_quadratic(const Series<C>& H2) {
    for (const auto& [m, c] : H2.terms())
        if (m.degree() != 2) throw Error(errc::degree, "quadratic part has a term of degree != 2");
}

// Rows of the linearized field: xdot_j = -dH/dy_j, ydot_j = +dH/dx_j.
template <class C, class Mat, class Set>
void fill_hamiltonian_matrix(const Series<C>& H2, Mat& M, Set set) {
    const std::size_t n = H2.n();
    for (std::size_t j = 0; j < n; ++j) {
        Series<C> dy = H2.derivative(n + j);
        Series<C> dx = H2.derivative(j);
        for (const auto& [m, c] : dy.terms()) {
            std::size_t var = 0;
            while (m.e[var] == 0) ++var;
            set(M, j, var, -c);
        }
        for (const auto& [m, c] : dx.terms()) {
            std::size_t var = 0;
            while (m.e[var] == 0) ++var;
            set(M, n + j, var, c);
        }
    }
}

}  // namespace

CMatrix CMatrix::operator-() const {
    CMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
    return r;
}
CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    BIRKHOFF_ASSERT(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix shape mismatch");
    CMatrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
    return r;
}
CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    BIRKHOFF_ASSERT(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix shape mismatch");
    CMatrix r(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
    return r;
}
CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    BIRKHOFF_ASSERT(a.cols_ == b.rows_, "matrix product shape mismatch");
    return from_eigen(to_eigen(a) * to_eigen(b));
}

CMatrix to_cmatrix(const ExactMatrix& m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = m.at(i, j).to_complex();
    return r;
}

ExactMatrix hamiltonian_matrix(const ExactSeries& H2) {
    check_quadratic(H2);
    ExactMatrix M(2 * H2.n(), 2 * H2.n());
    fill_hamiltonian_matrix(H2, M,
                            [](ExactMatrix& m, std::size_t i, std::size_t j,
                               const GaussianRational& c) { m.at(i, j) += c; });
    return M;
}

CMatrix hamiltonian_matrix(const FloatSeries& H2) {
    check_quadratic(H2);
    CMatrix M(2 * H2.n(), 2 * H2.n());
    fill_hamiltonian_matrix(
        H2, M, [](CMatrix& m, std::size_t i, std::size_t j, const Complex& c) { m.at(i, j) += c; });
    return M;
}

ExactSeries quadratic_form(const ExactMatrix& M, std::size_t n, int order) {
    BIRKHOFF_ASSERT(M.rows() == 2 * n && M.cols() == 2 * n, "hamiltonian matrix has wrong size");
    ExactMatrix A = omega_exact(n) * M;
    ExactSeries H(n, order);
    const GaussianRational half(Rational(1, 2));
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = i; j < 2 * n; ++j) {
            GaussianRational c = (i == j) ? half * A.at(i, i) : half * (A.at(i, j) + A.at(j, i));
            if (c.is_zero()) continue;
            Monomial m(2 * n);
            m.e[i] += 1;
            m.e[j] += 1;
            H.add_term(m, c);
        }
    return H;
}

FloatSeries quadratic_form(const CMatrix& M, std::size_t n, int order) {
    BIRKHOFF_ASSERT(M.rows() == 2 * n && M.cols() == 2 * n, "hamiltonian matrix has wrong size");
    FloatSeries H(n, order);
    // (Omega M)_{ij}: row i of Omega picks row n+i (resp. -row i-n) of M.
    auto OM = [&](std::size_t i, std::size_t j) {
        return i < n ? M.at(n + i, j) : -M.at(i - n, j);
    };
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = i; j < 2 * n; ++j) {
            Complex c = (i == j) ? 0.5 * OM(i, i) : 0.5 * (OM(i, j) + OM(j, i));
            if (c == 0.0) continue;
            Monomial m(2 * n);
            m.e[i] += 1;
            m.e[j] += 1;
            H.add_term(m, c);
        }
    return H;
}

bool is_inf_symplectic(const ExactMatrix& M) {
    if (!M.is_square() || M.rows() % 2 != 0) return false;
    ExactMatrix A = omega_exact(M.rows() / 2) * M;
    return A == A.transpose();
}

bool is_inf_symplectic(const CMatrix& M, double tol) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0) return false;
    const std::size_t n = M.rows() / 2;
    auto OM = [&](std::size_t i, std::size_t j) {
        return i < n ? M.at(n + i, j) : -M.at(i - n, j);
    };
    double scale = std::max(1.0, M.max_abs());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = i + 1; j < M.cols(); ++j)
            if (std::abs(OM(i, j) - OM(j, i)) > tol * scale) return false;
    return true;
}

bool is_nilpotent(const ExactMatrix& M) {
    BIRKHOFF_ASSERT(M.is_square(), "nilpotency of non-square matrix");
    if (M.rows() == 0) return true;
    ExactMatrix P = M;
    for (std::size_t k = 1; k < M.rows(); k *= 2) {
        if (P.is_zero()) return true;
        P = P * P;
    }
    return P.is_zero();
}

bool is_nilpotent(const CMatrix& M, double tol) {
    BIRKHOFF_ASSERT(M.rows() == M.cols(), "nilpotency of non-square matrix");
    if (M.rows() == 0) return true;
    double scale = std::max(1.0, M.max_abs());
    CMatrix P = M;
    for (std::size_t k = 1; k < M.rows(); k *= 2) {
        if (P.max_abs() <= tol * scale) return true;
        P = P * P;
        scale = std::max(1.0, scale * scale);
    }
    return P.max_abs() <= tol * scale;
}

std::pair<ExactMatrix, ExactMatrix> jordan_chevalley(const ExactMatrix& M) {
    BIRKHOFF_ASSERT(M.is_square(), "decomposition of non-square matrix");
    const std::size_t s = M.rows();
    UniPoly chi = charpoly(M);
    UniPoly rad = UniPoly::gcd(chi, chi.derivative());
    ExactMatrix Nn(s, s);
    if (rad.degree() == 0) return {M, Nn};  // squarefree: already semisimple
    UniPoly g = chi.divmod(rad).first.monic();
    auto [gg, u, v] = UniPoly::extended_gcd(g, g.derivative());
    BIRKHOFF_ASSERT(gg.degree() == 0 && !gg.is_zero(), "squarefree part must be separable");
    // Newton step X <- X - v(X) g(X) with v g' = 1 mod g converges
    // quadratically in the nilpotent ideal.
    ExactMatrix X = M;
    std::size_t steps = 1;
    while ((std::size_t(1) << steps) < s) ++steps;
    for (std::size_t i = 0; i <= steps; ++i) {
        ExactMatrix gX = g.eval(X);
        if (gX.is_zero()) break;
        X -= v.eval(X) * gX;
    }
    BIRKHOFF_ASSERT(g.eval(X).is_zero(), "semisimple part must kill the squarefree polynomial");
    ExactMatrix S = X;
    Nn = M - S;
    BIRKHOFF_ASSERT(S * Nn == Nn * S, "parts of the decomposition must commute");
    BIRKHOFF_ASSERT(is_nilpotent(Nn), "nilpotent part must be nilpotent");
    return {S, Nn};
}

std::pair<CMatrix, CMatrix> jordan_chevalley(const CMatrix& M, double cluster_tol) {
    BIRKHOFF_ASSERT(M.rows() == M.cols(), "decomposition of non-square matrix");
    const std::size_t s = M.rows();
    EMat A = to_eigen(M);
    Eigen::ComplexSchur<EMat> schur(A);
    if (schur.info() != Eigen::Success) throw Error(errc::no_converge, "Schur iteration failed");
    std::vector<Complex> ev(s);
    for (std::size_t i = 0; i < s; ++i) ev[i] = schur.matrixT()(long(i), long(i));

    // Single-linkage clustering at cluster_tol.
    std::vector<std::size_t> parent(s);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (std::abs(ev[i] - ev[j]) < cluster_tol) parent[find(i)] = find(j);
    std::vector<Complex> sum(s, 0.0);
    std::vector<std::size_t> count(s, 0);
    bool multiple = false;
    for (std::size_t i = 0; i < s; ++i) {
        auto r = find(i);
        sum[r] += ev[i];
        if (++count[r] > 1) multiple = true;
    }
    std::vector<Complex> reps;
    for (std::size_t i = 0; i < s; ++i)
        if (count[i]) reps.push_back(sum[i] / double(count[i]));
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
            if (std::abs(reps[i] - reps[j]) < 10.0 * cluster_tol)
                throw Error(errc::cluster,
                            "eigenvalue clusters closer than 10x the clustering tolerance");
    CMatrix zero(s, s);
    if (!multiple) return {M, zero};  // distinct eigenvalues: semisimple

    // g(t) = prod over clusters (t - rep); Newton X <- X - g'(X)^{-1} g(X).
    std::vector<Complex> g{1.0};
    for (const auto& r : reps) {
        std::vector<Complex> next(g.size() + 1, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            next[i + 1] += g[i];
            next[i] -= r * g[i];
        }
        g = std::move(next);
    }
    std::vector<Complex> gp(g.size() - 1);
    for (std::size_t k = 1; k < g.size(); ++k) gp[k - 1] = double(k) * g[k];
    auto eval_poly = [s](const std::vector<Complex>& p, const EMat& X) {
        EMat acc = EMat::Zero(long(s), long(s));
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            acc = acc * X + *it * EMat::Identity(long(s), long(s));
        return acc;
    };
    EMat X = A;
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    for (int iter = 0; iter < 60; ++iter) {
        EMat gX = eval_poly(g, X);
        if (gX.cwiseAbs().maxCoeff() <= 1e-14 * scale) break;
        EMat step = eval_poly(gp, X).partialPivLu().solve(gX);
        X -= step;
        if (step.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
    }
    EMat Nn = A - X;
    EMat comm = X * Nn - Nn * X;
    if (comm.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale * scale))
        throw Error(errc::no_converge, "semisimple-nilpotent split did not converge");
    return {from_eigen(X), from_eigen(Nn)};
}

namespace {

template <class V>
Complex omega_pairing(const V& a, const V& b, std::size_t n) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a[j] * b[n + j] - a[n + j] * b[j];
    return s;
}

// Sign rule for the +- ambiguity: keep the representative whose argument
// lies in (-pi/2, pi/2]; real part snapped to zero below rounding scale.
bool preferred_sign(Complex g) {
    double re = g.real(), im = g.imag();
    if (std::abs(re) <= 1e-12 * std::abs(g)) re = 0.0;
    return re > 0.0 || (re == 0.0 && im >= 0.0);
}

}  // namespace

SymplecticFrame eigen_symplectic_basis(const CMatrix& S) {
    BIRKHOFF_ASSERT(S.rows() == S.cols() && S.rows() % 2 == 0, "spectral input must be 2n x 2n");
    const std::size_t n2 = S.rows(), n = n2 / 2;
    EMat A = to_eigen(S);
    Eigen::ComplexEigenSolver<EMat> ces(A);
    if (ces.info() != Eigen::Success) throw Error(errc::no_converge, "eigenvalue solver failed");
    std::vector<Complex> ev(n2);
    for (std::size_t i = 0; i < n2; ++i) ev[i] = ces.eigenvalues()(long(i));
    const double scale = std::max({1.0, std::abs(*std::max_element(
                                            ev.begin(), ev.end(),
                                            [](Complex a, Complex b) { return std::abs(a) < std::abs(b); }))});
    const double ztol = 1e-10 * scale;
    const double ptol = 1e-8 * scale;

    std::vector<std::size_t> zeros, live;
    for (std::size_t i = 0; i < n2; ++i)
        (std::abs(ev[i]) <= ztol ? zeros : live).push_back(i);
    if (zeros.size() % 2 != 0)
        throw Error(errc::domain, "spectrum is not symmetric about zero");
    if (zeros.size() > 2)
        throw Error(errc::unsupported,
                    "repeated zero frequency pair; supply canonical coordinates directly");

    // Pair +- eigenvalues greedily by |sum|.
    std::vector<bool> used(n2, false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t ii = 0; ii < live.size(); ++ii) {
        std::size_t i = live[ii];
        if (used[i]) continue;
        used[i] = true;
        std::size_t best = n2;
        double bestv = 0.0;
        for (std::size_t jj = ii + 1; jj < live.size(); ++jj) {
            std::size_t j = live[jj];
            if (used[j]) continue;
            double v = std::abs(ev[i] + ev[j]);
            if (best == n2 || v < bestv) {
                best = j;
                bestv = v;
            }
        }
        if (best == n2 || bestv > ptol)
            throw Error(errc::domain, "spectrum is not symmetric about zero");
        used[best] = true;
        pairs.emplace_back(i, best);
    }
    // Supported case: distinct pairs.
    for (std::size_t a = 0; a < pairs.size(); ++a)
        for (std::size_t b = a + 1; b < pairs.size(); ++b) {
            double da = std::min(std::abs(ev[pairs[a].first] - ev[pairs[b].first]),
                                 std::abs(ev[pairs[a].first] - ev[pairs[b].second]));
            if (da <= ptol)
                throw Error(errc::unsupported,
                            "repeated frequency pair; supply canonical coordinates directly");
        }

    struct Mode {
        Complex gamma;
        Eigen::VectorXcd u, w;  // eigenvectors for -gamma and +gamma
    };
    std::vector<Mode> modes;
    for (auto [i, j] : pairs) {
        Complex gi = ev[i];
        std::size_t plus = preferred_sign(gi) ? i : j;
        std::size_t minus = plus == i ? j : i;
        Mode md;
        md.gamma = ev[plus];
        md.u = ces.eigenvectors().col(long(minus));
        md.w = ces.eigenvectors().col(long(plus));
        modes.push_back(std::move(md));
    }
    if (!zeros.empty()) {
        Mode md;
        md.gamma = 0.0;
        md.u = ces.eigenvectors().col(long(zeros[0]));
        md.w = ces.eigenvectors().col(long(zeros[1]));
        modes.push_back(std::move(md));
    }
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        double ma = std::abs(a.gamma), mb = std::abs(b.gamma);
        if (std::abs(ma - mb) > 1e-14 * std::max(1.0, std::max(ma, mb)))
            return ma < mb;
        return std::arg(a.gamma) < std::arg(b.gamma);
    });

    SymplecticFrame fr;
    fr.P = CMatrix(n2, n2);
    fr.gamma.resize(n);
    BIRKHOFF_ASSERT(modes.size() == n, "mode count must equal n");
    for (std::size_t j = 0; j < n; ++j) {
        auto& md = modes[j];
        Complex s = omega_pairing(md.u, md.w, n);
        if (std::abs(s) < 1e-12)
            throw Error(errc::domain, "eigenvector pair is omega-degenerate");
        md.w /= s;
        fr.gamma[j] = md.gamma;
        for (std::size_t i = 0; i < n2; ++i) {
            fr.P.at(i, j) = md.u(long(i));
            fr.P.at(i, n + j) = md.w(long(i));
        }
    }
    return fr;
}

std::optional<ExactSymplecticFrame> eigen_symplectic_basis_exact(const ExactMatrix& S) {
    BIRKHOFF_ASSERT(S.is_square() && S.rows() % 2 == 0, "spectral input must be 2n x 2n");
    const std::size_t n2 = S.rows(), n = n2 / 2;
    SymplecticFrame hint;
    try {
        hint = eigen_symplectic_basis(to_cmatrix(S));
    } catch (const Error&) {
        return std::nullopt;
    }
    UniPoly chi = charpoly(S);
    const BigInt max_den = 1000000;
    std::vector<GaussianRational> gamma(n);
    for (std::size_t j = 0; j < n; ++j) {
        Complex g = hint.gamma[j];
        auto snap = [&](double v) {
            return std::abs(v) < 1e-9 ? Rational(0) : rational_reconstruct(v, max_den);
        };
        GaussianRational cand(snap(g.real()), snap(g.imag()));
        if (std::abs(cand.to_complex() - g) > 1e-6 * std::max(1.0, std::abs(g)))
            return std::nullopt;
        if (!chi.eval(cand).is_zero() || !chi.eval(-cand).is_zero()) return std::nullopt;
        gamma[j] = cand;
    }
    ExactSymplecticFrame fr;
    fr.P = ExactMatrix(n2, n2);
    fr.gamma = gamma;
    for (std::size_t j = 0; j < n; ++j) {
        ExactMatrix Mminus = S;
        ExactMatrix Mplus = S;
        for (std::size_t i = 0; i < n2; ++i) {
            Mminus.at(i, i) += gamma[j];   // S - (-gamma) I
            Mplus.at(i, i) -= gamma[j];    // S - (+gamma) I
        }
        auto ker_u = Mminus.nullspace();
        auto ker_w = Mplus.nullspace();
        if (gamma[j].is_zero()) {
            if (ker_u.size() != 2) return std::nullopt;
            ker_w = {ker_u[1]};
            ker_u = {ker_u[0]};
        } else if (ker_u.size() != 1 || ker_w.size() != 1) {
            return std::nullopt;
        }
        // omega-normalize: scale w so omega(u, w) = 1.
        GaussianRational s;
        for (std::size_t t = 0; t < n; ++t)
            s += ker_u[0][t] * ker_w[0][n + t] - ker_u[0][n + t] * ker_w[0][t];
        if (s.is_zero()) return std::nullopt;
        GaussianRational inv = GaussianRational::one() / s;
        for (std::size_t i = 0; i < n2; ++i) {
            fr.P.at(i, j) = ker_u[0][i];
            fr.P.at(i, n + j) = ker_w[0][i] * inv;
        }
    }
    // Exact symplectic verification.
    ExactMatrix W = omega_exact(n);
    if (!(fr.P.transpose() * W * fr.P == W)) return std::nullopt;
    return fr;
}

ExactSeries apply_linear(const ExactSeries& A, const ExactMatrix& P) {
    if (P.rows() != A.vars() || P.cols() != A.vars())
        throw Error(errc::dimension, "linear map has wrong size for series");
    return substitute_linear(A, [&](std::size_t i, std::size_t j) { return P.at(i, j); },
                             A.vars());
}

FloatSeries apply_linear(const FloatSeries& A, const CMatrix& P) {
    if (P.rows() != A.vars() || P.cols() != A.vars())
        throw Error(errc::dimension, "linear map has wrong size for series");
    return substitute_linear(A, [&](std::size_t i, std::size_t j) { return P.at(i, j); },
                             A.vars());
}

QuadraticData QuadraticData::analyze(const ExactSeries& H2) {
    QuadraticData q;
    q.H2 = H2;
    q.M = hamiltonian_matrix(H2);
    if (!is_inf_symplectic(q.M))
        throw Error(errc::internal, "hamiltonian matrix left sp(2n)");
    auto [S, Nn] = jordan_chevalley(q.M);
    q.S = std::move(S);
    q.Nn = std::move(Nn);
    q.Hss = quadratic_form(q.S, H2.n(), H2.order());
    q.Hnil = quadratic_form(q.Nn, H2.n(), H2.order());
    BIRKHOFF_ASSERT(poisson_bracket(q.Hss, q.Hnil).is_zero(),
                    "semisimple and nilpotent quadratic parts must commute");
    return q;
}

QuadraticData QuadraticData::from_declared(const ExactSeries& H2, const ExactSeries& Hss) {
    QuadraticData q;
    q.H2 = H2;
    q.Hss = Hss;
    q.Hnil = H2 - Hss;
    q.M = hamiltonian_matrix(H2);
    q.S = hamiltonian_matrix(Hss);
    q.Nn = hamiltonian_matrix(q.Hnil);
    q.declared = true;
    if (!is_nilpotent(q.Nn))
        throw Error(errc::validate,
                    "quadratic part minus declared semisimple part is not nilpotent");
    return q;
}

}  // namespace birkhoff
