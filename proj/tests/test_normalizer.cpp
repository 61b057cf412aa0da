#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "birkhoff/normalizer.hpp"
#include "support.hpp"

using namespace birkhoff;
using testsupport::from_terms;
using testsupport::random_series;

namespace {

const GaussianRational one = GaussianRational::one();

ExactSeries real_random(std::mt19937& rng, std::size_t n, int order, int min_degree,
                        int nterms) {
    ExactSeries s = random_series(rng, n, order, min_degree, nterms);
    ExactSeries r(n, order);
    for (const auto& [m, c] : s.terms()) r.add_term(m, GaussianRational(c.re, Rational(0)));
    return r;
}

// All monomials of 2n variables with total degree k, canonical order.
std::vector<Monomial> degree_basis(std::size_t vars, int k) {
    std::vector<Monomial> out;
    Monomial m(vars);
    std::function<void(std::size_t, int)> rec = [&](std::size_t v, int left) {
        if (v + 1 == vars) {
            m.e[v] = std::uint16_t(left);
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m.e[v] = std::uint16_t(e);
            rec(v + 1, left - e);
        }
    };
    rec(0, k);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("homological split on the model monomial") {
    // gamma = (1), Hk = x^3: L = x^3/3, H' = 0.
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries Hss = from_terms(1, 3, {{{1, 1}, Rational(1)}});
    ExactSeries Hk = from_terms(1, 3, {{{3, 0}, Rational(1)}});
    auto [L, Hp] = homological_split(Hk, Hss, ExactSeries(1, 3), F);
    CHECK(L == from_terms(1, 3, {{{3, 0}, Rational(1, 3)}}));
    CHECK(Hp.is_zero());
    // -{H2, L} reproduces Hk.
    CHECK(-poisson_bracket(Hss, L) == Hk);
}

TEST_CASE("resonant input passes through untouched") {
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries Hss = from_terms(1, 4, {{{1, 1}, Rational(1)}});
    ExactSeries Hk = from_terms(1, 4, {{{2, 2}, Rational(1)}});  // (x y)^2
    auto [L, Hp] = homological_split(Hk, Hss, ExactSeries(1, 4), F);
    CHECK(L.is_zero());
    CHECK(Hp == Hk);
}

TEST_CASE("nilpotent-corrected split against a dense linear solve") {
    // H2 = xy + x^2 declared as Hss = xy, Hnil = x^2; gamma = (1).
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries Hss = from_terms(1, 3, {{{1, 1}, Rational(1)}});
    ExactSeries Hnil = from_terms(1, 3, {{{2, 0}, Rational(1)}});
    ExactSeries H2 = Hss + Hnil;
    ExactSeries Hk = from_terms(1, 3, {{{2, 1}, Rational(1)}});  // x^2 y

    auto [L, Hp] = homological_split(Hk, Hss, Hnil, F);
    // Identity and resonance of the remainder (degree 3 is odd, so H' = 0).
    CHECK(-poisson_bracket(H2, L) + Hp == Hk);
    CHECK(Hp.is_zero());

    // Oracle: -ad_{H2} on the degree-3 slice is invertible; the dense
    // solve must agree with the graded fixed point.
    auto basis = degree_basis(2, 3);
    ExactMatrix A(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        ExactSeries img = -poisson_bracket(H2, ExactSeries::term(1, 3, basis[j], one));
        for (std::size_t i = 0; i < basis.size(); ++i) A.at(i, j) = img.coefficient(basis[i]);
    }
    std::vector<GaussianRational> rhs(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) rhs[i] = Hk.coefficient(basis[i]);
    auto sol = A.solve(rhs);
    REQUIRE(sol.has_value());
    for (std::size_t j = 0; j < basis.size(); ++j)
        CHECK((*sol)[j] == L.coefficient(basis[j]));
}

TEST_CASE("nilpotent split keeps the canonical zero-kernel choice") {
    // Even degree has a resonant line; L must carry none of it.
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries Hss = from_terms(1, 4, {{{1, 1}, Rational(1)}});
    ExactSeries Hnil = from_terms(1, 4, {{{2, 0}, Rational(1)}});
    ExactSeries Hk = from_terms(1, 4, {{{3, 1}, Rational(1)}, {{2, 2}, Rational(1, 2)}});
    auto [L, Hp] = homological_split(Hk, Hss, Hnil, F);
    CHECK(-poisson_bracket(Hss + Hnil, L) + Hp == Hk);
    for (const auto& [m, c] : L.terms()) CHECK(!F.is_resonant(m));
    for (const auto& [m, c] : Hp.terms()) CHECK(F.is_resonant(m));
}

TEST_CASE("normalize solves the closed-form model") {
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries H = from_terms(1, 10, {{{1, 1}, Rational(1)}, {{3, 0}, Rational(1)}});
    ExactSeries Hss = from_terms(1, 10, {{{1, 1}, Rational(1)}});
    auto r = normalize(H, 10, Hss, ExactSeries(1, 10), F);
    CHECK(r.N == from_terms(1, 10, {{{1, 1}, Rational(1)}}));
    REQUIRE(r.gens.size() == 8);
    CHECK(r.gens[0] == from_terms(1, 10, {{{3, 0}, Rational(1, 3)}}));
    for (std::size_t i = 1; i < r.gens.size(); ++i) CHECK(r.gens[i].is_zero());
    CHECK(r.per_degree.size() == 8);
}

TEST_CASE("already-normal input is a fixed point") {
    auto F = FrequencyModel::from_rational_gammas(
        {one, GaussianRational(Rational(2), Rational(0))});
    ExactSeries H(2, 8);
    H.add_term(Monomial({1, 0, 1, 0}), one);
    H.add_term(Monomial({0, 1, 0, 1}), GaussianRational(Rational(2), Rational(0)));
    H.add_term(Monomial({2, 0, 2, 0}), one);  // (x1 y1)^2
    ExactSeries Hss = H.degree_part(2).with_order(8);
    auto r = normalize(H, 8, Hss, ExactSeries(2, 8), F);
    CHECK(r.N == H);
    for (const auto& g : r.gens) CHECK(g.is_zero());
}

TEST_CASE("gamma (1,-1) kills every cubic by parity") {
    auto F = FrequencyModel::from_rational_gammas(
        {one, GaussianRational(Rational(-1), Rational(0))});
    ExactSeries Hss(2, 8);
    Hss.add_term(Monomial({1, 0, 1, 0}), one);
    Hss.add_term(Monomial({0, 1, 0, 1}), GaussianRational(Rational(-1), Rational(0)));
    std::mt19937 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        ExactSeries H = Hss + real_random(rng, 2, 8, 3, 12).with_order(8);
        auto r = normalize(H, 8, Hss, ExactSeries(2, 8), F);
        CHECK(r.N.degree_part(3).is_zero());
        CHECK(poisson_bracket(Hss, r.N).is_zero());
    }
}

TEST_CASE("normal form commutes with Hss and reproduces H through the gens") {
    std::mt19937 rng(37);
    auto F = FrequencyModel::from_rational_gammas(
        {one, GaussianRational(Rational(2), Rational(0))});
    ExactSeries Hss(2, 8);
    Hss.add_term(Monomial({1, 0, 1, 0}), one);
    Hss.add_term(Monomial({0, 1, 0, 1}), GaussianRational(Rational(2), Rational(0)));
    for (int trial = 0; trial < 6; ++trial) {
        ExactSeries H = Hss + random_series(rng, 2, 8, 3, 10).with_order(8);
        auto r = normalize(H, 8, Hss, ExactSeries(2, 8), F);

        CHECK(poisson_bracket(Hss, r.N).is_zero());

        // Forward composition of the generators reproduces N...
        ExactSeries img = H;
        for (const auto& L : r.gens) img = lie_transform(img, L, LieDirection::forward, 8);
        CHECK(img == r.N);

        // ...and the reversed inverse composition recovers H.
        ExactSeries back = r.N;
        for (auto it = r.gens.rbegin(); it != r.gens.rend(); ++it)
            back = lie_transform(back, *it, LieDirection::inverse, 8);
        CHECK(back == H);
    }
}

TEST_CASE("reality is preserved for real frequencies and real input") {
    std::mt19937 rng(41);
    auto F = FrequencyModel::from_rational_gammas(
        {one, GaussianRational(Rational(3), Rational(0))});
    ExactSeries Hss(2, 7);
    Hss.add_term(Monomial({1, 0, 1, 0}), one);
    Hss.add_term(Monomial({0, 1, 0, 1}), GaussianRational(Rational(3), Rational(0)));
    ExactSeries H = Hss + real_random(rng, 2, 7, 3, 14).with_order(7);
    auto r = normalize(H, 7, Hss, ExactSeries(2, 7), F);
    CHECK(r.N.all_real());
    for (const auto& g : r.gens) CHECK(g.all_real());
}

TEST_CASE("near-resonant float frequencies abort instead of dividing") {
    // Exactly independent basis, numerically 5e-9 apart.
    ExactMatrix C(2, 2);
    C.at(0, 0) = one;
    C.at(1, 1) = one;
    FrequencyModel F(2, 2, C, {Complex(1.0), Complex(1.0 + 5e-9)});
    FloatSeries Hss(2, 4);
    Hss.add_term(Monomial({1, 0, 1, 0}), Complex(1.0));
    Hss.add_term(Monomial({0, 1, 0, 1}), Complex(1.0 + 5e-9));
    FloatSeries H = Hss;
    H.add_term(Monomial({1, 1, 2, 0}), Complex(1.0));  // lambda = gamma1 - gamma2
    CHECK_THROWS_AS(normalize(H, 4, Hss, FloatSeries(2, 4), F), Error);
}

TEST_CASE("transform_function co-normalizes first integrals") {
    // Integrable pair built by pushing a normal-form pair through a cubic
    // generator, then normalizing back.
    auto F = FrequencyModel::from_rational_gammas(
        {one, GaussianRational(Rational(2), Rational(0))});
    ExactSeries N0(2, 8);
    N0.add_term(Monomial({1, 0, 1, 0}), one);
    N0.add_term(Monomial({0, 1, 0, 1}), GaussianRational(Rational(2), Rational(0)));
    N0.add_term(Monomial({2, 0, 2, 0}), one);
    ExactSeries G0 = ExactSeries::term(2, 8, Monomial({0, 1, 0, 1}), one);
    ExactSeries Lc = ExactSeries::term(2, 8, Monomial({2, 1, 0, 0}), one);  // x1^2 x2

    ExactSeries H = lie_transform(N0, Lc, LieDirection::inverse, 8);
    ExactSeries G = lie_transform(G0, Lc, LieDirection::inverse, 8);
    CHECK(poisson_bracket(H, G).truncated(6).is_zero());

    ExactSeries Hss = N0.degree_part(2).with_order(8);
    auto r = normalize(H, 8, Hss, ExactSeries(2, 8), F);
    CHECK(poisson_bracket(Hss, r.N).is_zero());

    ExactSeries Gn = transform_function(G, r.gens, LieDirection::forward, 8);
    CHECK(poisson_bracket(Hss, Gn).is_zero());

    // Consistency: pushing H itself gives N.
    CHECK(transform_function(H, r.gens, LieDirection::forward, 8) == r.N);
}

TEST_CASE("check_normal_form reports the residual bracket") {
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries Hss = from_terms(1, 6, {{{1, 1}, Rational(1)}});
    ExactSeries good = from_terms(1, 6, {{{1, 1}, Rational(2)}, {{2, 2}, Rational(1, 3)}});
    auto ok = check_normal_form(good, Hss, 6);
    CHECK(ok.is_normal);
    CHECK(ok.residual.is_zero());

    ExactSeries bad = from_terms(1, 6, {{{3, 0}, Rational(1)}});
    auto no = check_normal_form(bad, Hss, 6);
    CHECK(!no.is_normal);
    // {xy, x^3} = lambda(x^3) x^3 = -3 x^3.
    CHECK(no.residual == from_terms(1, 6, {{{3, 0}, Rational(-3)}}));
}

TEST_CASE("torus average projects onto the resonant subspace") {
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries A = from_terms(1, 4, {{{1, 1}, Rational(1)}, {{3, 0}, Rational(1)}});
    ExactSeries avg = torus_average(A, F);
    CHECK(avg == from_terms(1, 4, {{{1, 1}, Rational(1)}}));
    CHECK(torus_average(avg, F) == avg);

    // Coboundaries average to zero.
    auto F12 = FrequencyModel::from_rational_gammas(
        {one, GaussianRational(Rational(2), Rational(0))});
    ExactSeries Fk(2, 6);
    Fk.add_term(Monomial({1, 0, 1, 0}), one);
    Fk.add_term(Monomial({0, 1, 0, 1}), GaussianRational(Rational(2), Rational(0)));
    std::mt19937 rng(43);
    ExactSeries B = random_series(rng, 2, 6, 0, 12);
    CHECK(torus_average(poisson_bracket(Fk, B), F12).is_zero());
}

TEST_CASE("convergence report shape and content") {
    auto F = FrequencyModel::from_rational_gammas({one});
    ExactSeries H = from_terms(1, 9, {{{1, 1}, Rational(1)}, {{3, 0}, Rational(1)}});
    ExactSeries Hss = from_terms(1, 9, {{{1, 1}, Rational(1)}});
    auto r = normalize(H, 9, Hss, ExactSeries(1, 9), F);
    auto rows = convergence_report(r);
    REQUIRE(rows.size() == 7);  // degrees 3..9
    CHECK(rows[0].k == 3);
    CHECK(rows[0].gen_max == doctest::Approx(1.0 / 3.0));
    for (const auto& row : rows) CHECK(row.nf_max == 0.0);
}
