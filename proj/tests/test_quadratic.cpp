#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "birkhoff/quadratic.hpp"
#include "support.hpp"

using namespace birkhoff;
using testsupport::from_terms;

namespace {
GaussianRational q(long num, long den = 1) {
    return GaussianRational(Rational(num, den), Rational(0));
}

ExactMatrix emat(std::size_t n, std::initializer_list<long> vals) {
    ExactMatrix m(n, n);
    auto it = vals.begin();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = q(*it++);
    return m;
}
}  // namespace

TEST_CASE("hamiltonian matrix of the basic quadratics") {
    // x1y1: xdot = -x, ydot = y.
    ExactSeries xy = from_terms(1, 2, {{{1, 1}, Rational(1)}});
    CHECK(hamiltonian_matrix(xy) == emat(2, {-1, 0, 0, 1}));

    CHECK(hamiltonian_matrix(ExactSeries(1, 2)) == ExactMatrix(2, 2));

    // x1^2: xdot = 0, ydot = 2x. Strictly triangular, nilpotent.
    ExactSeries x2 = from_terms(1, 2, {{{2, 0}, Rational(1)}});
    ExactMatrix Mx2 = hamiltonian_matrix(x2);
    CHECK(Mx2 == emat(2, {0, 0, 2, 0}));
    CHECK(is_nilpotent(Mx2));

    CHECK_THROWS_AS(hamiltonian_matrix(from_terms(1, 3, {{{3, 0}, Rational(1)}})), Error);
}

TEST_CASE("hamiltonian matrices live in sp(2n) and round trip") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> pick(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 1 + trial % 2;
        ExactSeries H2(n, 2);
        // Random full quadratic.
        std::vector<Monomial> quads;
        for (std::size_t u = 0; u < 2 * n; ++u)
            for (std::size_t v = u; v < 2 * n; ++v) {
                Monomial m(2 * n);
                m.e[u] += 1;
                m.e[v] += 1;
                H2.add_term(m, GaussianRational(Rational(pick(rng), 2), Rational(pick(rng), 3)));
            }
        ExactMatrix M = hamiltonian_matrix(H2);
        CHECK(is_inf_symplectic(M));
        CHECK(quadratic_form(M, n, 2) == H2);
    }
}

TEST_CASE("exact jordan-chevalley decomposition") {
    // Jordan block [[1,1],[0,1]] -> S = I, Nn = superdiagonal.
    ExactMatrix J = emat(2, {1, 1, 0, 1});
    auto [S, Nn] = jordan_chevalley(J);
    CHECK(S == ExactMatrix::identity(2));
    CHECK(Nn == emat(2, {0, 1, 0, 0}));

    // Semisimple input: (M, 0).
    ExactMatrix D = emat(2, {-1, 0, 0, 1});
    auto [S2, N2] = jordan_chevalley(D);
    CHECK(S2 == D);
    CHECK(N2 == ExactMatrix(2, 2));

    // Nilpotent input: (0, M).
    ExactMatrix Z = emat(2, {0, 2, 0, 0});
    auto [S3, N3] = jordan_chevalley(Z);
    CHECK(S3 == ExactMatrix(2, 2));
    CHECK(N3 == Z);

    // A non-diagonal mixed case: M = S + N with coupled blocks.
    // M = [[1,1,0],[0,1,0],[0,0,2]]: S has eigenvalues 1,1,2, N the corner.
    ExactMatrix M = emat(3, {1, 1, 0, 0, 1, 0, 0, 0, 2});
    auto [S4, N4] = jordan_chevalley(M);
    CHECK(S4 + N4 == M);
    CHECK(S4 * N4 == N4 * S4);
    CHECK(is_nilpotent(N4));
    CHECK(N4 == emat(3, {0, 1, 0, 0, 0, 0, 0, 0, 0}));
}

TEST_CASE("float jordan-chevalley matches the exact split") {
    ExactMatrix J = emat(4, {1, 1, 0, 0,
                             0, 1, 0, 0,
                             0, 0, -1, 2,
                             0, 0, 0, -1});
    auto [Se, Ne] = jordan_chevalley(J);
    auto [Sf, Nf] = jordan_chevalley(to_cmatrix(J));
    CHECK((Sf - to_cmatrix(Se)).max_abs() < 1e-8);
    CHECK((Nf - to_cmatrix(Ne)).max_abs() < 1e-8);

    // Distinct eigenvalues: float path returns (M, 0) directly.
    CMatrix D = to_cmatrix(emat(2, {3, 0, 0, 5}));
    auto [Sd, Nd] = jordan_chevalley(D);
    CHECK((Sd - D).max_abs() == 0.0);
    CHECK(Nd.max_abs() == 0.0);
}

TEST_CASE("symplectic eigenbasis for the harmonic oscillator") {
    // H2 = (x^2 + y^2)/2 has S with eigenvalues +-i and gamma = (i).
    ExactSeries H2 = from_terms(1, 2, {{{2, 0}, Rational(1, 2)}, {{0, 2}, Rational(1, 2)}});
    CMatrix S = hamiltonian_matrix(to_float(H2));
    SymplecticFrame fr = eigen_symplectic_basis(S);
    REQUIRE(fr.gamma.size() == 1);
    CHECK(std::abs(fr.gamma[0] - Complex(0, 1)) < 1e-12);

    // The conjugated quadratic must be gamma * x y exactly in structure.
    FloatSeries conj = apply_linear(to_float(H2), fr.P);
    CHECK(std::abs(conj.coefficient(Monomial({1, 1})) - Complex(0, 1)) < 1e-12);
    CHECK(std::abs(conj.coefficient(Monomial({2, 0}))) < 1e-12);
    CHECK(std::abs(conj.coefficient(Monomial({0, 2}))) < 1e-12);

    // Exact variant reproduces it with rational-reconstructed entries.
    auto exact = eigen_symplectic_basis_exact(hamiltonian_matrix(H2));
    REQUIRE(exact.has_value());
    CHECK(exact->gamma[0] == GaussianRational(Rational(0), Rational(1)));
    CHECK(apply_linear(H2, exact->P) ==
          ExactSeries::term(1, 2, Monomial({1, 1}), exact->gamma[0]));
}

TEST_CASE("diagonal input is already canonical") {
    // S = diag(-1, -2, 1, 2): gamma = (1, 2), P a permutation at most.
    ExactSeries H2(2, 2);
    H2.add_term(Monomial({1, 0, 1, 0}), q(1));
    H2.add_term(Monomial({0, 1, 0, 1}), q(2));
    SymplecticFrame fr = eigen_symplectic_basis(hamiltonian_matrix(to_float(H2)));
    REQUIRE(fr.gamma.size() == 2);
    CHECK(std::abs(fr.gamma[0] - Complex(1)) < 1e-12);
    CHECK(std::abs(fr.gamma[1] - Complex(2)) < 1e-12);
    FloatSeries conj = apply_linear(to_float(H2), fr.P);
    CHECK(std::abs(conj.coefficient(Monomial({1, 0, 1, 0})) - Complex(1)) < 1e-12);
    CHECK(std::abs(conj.coefficient(Monomial({0, 1, 0, 1})) - Complex(2)) < 1e-12);
}

TEST_CASE("gamma is stable across symplectic conjugation") {
    // Rotate (x, y) -> (y, -x): same gamma up to canonical choice.
    ExactSeries H2 = from_terms(1, 2, {{{1, 1}, Rational(3)}});
    ExactSeries H2r = from_terms(1, 2, {{{1, 1}, Rational(-3)}});  // x y under the swap
    auto g1 = eigen_symplectic_basis(hamiltonian_matrix(to_float(H2))).gamma;
    auto g2 = eigen_symplectic_basis(hamiltonian_matrix(to_float(H2r))).gamma;
    REQUIRE(g1.size() == 1);
    REQUIRE(g2.size() == 1);
    // Canonicalization picks the representative with argument in (-pi/2, pi/2].
    CHECK(std::abs(g1[0] - Complex(3)) < 1e-12);
    CHECK(std::abs(g2[0] - Complex(3)) < 1e-12);
}

TEST_CASE("apply_linear substitutes and preserves brackets") {
    ExactSeries A = from_terms(1, 4, {{{1, 1}, Rational(1)}});
    CHECK(apply_linear(A, ExactMatrix::identity(2)) == A);

    // (x, y) -> (y, -x) sends x y to -x y.
    ExactMatrix Sw(2, 2);
    Sw.at(0, 1) = q(1);
    Sw.at(1, 0) = q(-1);
    CHECK(apply_linear(A, Sw) == from_terms(1, 4, {{{1, 1}, Rational(-1)}}));

    // Bracket equivariance for a symplectic map.
    ExactSeries B = from_terms(1, 4, {{{2, 1}, Rational(1, 2)}, {{0, 2}, Rational(1)}});
    CHECK(poisson_bracket(apply_linear(A, Sw), apply_linear(B, Sw)) ==
          apply_linear(poisson_bracket(A, B), Sw));
}

TEST_CASE("quadratic data couples the split to the series layer") {
    // H2 = x1y1 + x1^2: semisimple part x1y1, nilpotent part x1^2.
    ExactSeries H2 = from_terms(1, 2, {{{1, 1}, Rational(1)}, {{2, 0}, Rational(1)}});
    QuadraticData qd = QuadraticData::from_declared(
        H2, from_terms(1, 2, {{{1, 1}, Rational(1)}}));
    CHECK(qd.Hss == from_terms(1, 2, {{{1, 1}, Rational(1)}}));
    CHECK(qd.Hnil == from_terms(1, 2, {{{2, 0}, Rational(1)}}));
    CHECK(is_nilpotent(qd.Nn));

    // Declared splits with a non-nilpotent remainder are rejected.
    CHECK_THROWS_AS(QuadraticData::from_declared(H2, ExactSeries(1, 2)), Error);

    // Automatic analysis of a semisimple quadratic.
    QuadraticData an = QuadraticData::analyze(from_terms(1, 2, {{{1, 1}, Rational(1)}}));
    CHECK(an.Hss == from_terms(1, 2, {{{1, 1}, Rational(1)}}));
    CHECK(an.Hnil.is_zero());

    // And of a purely nilpotent one.
    QuadraticData nil = QuadraticData::analyze(from_terms(1, 2, {{{2, 0}, Rational(1)}}));
    CHECK(nil.Hss.is_zero());
    CHECK(nil.Hnil == from_terms(1, 2, {{{2, 0}, Rational(1)}}));
}
