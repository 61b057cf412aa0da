#pragma once

#include <random>

#include "birkhoff/series.hpp"

namespace birkhoff::testsupport {

// Deterministic random exact series: small Gaussian-rational coefficients
// on a bounded random monomial set.
inline ExactSeries random_series(std::mt19937& rng, std::size_t n, int order, int min_degree,
                                 int nterms) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> expo(0, 2);
    ExactSeries s(n, order);
    for (int t = 0; t < nterms; ++t) {
        Monomial m(2 * n);
        int deg = 0;
        for (std::size_t v = 0; v < 2 * n; ++v) {
            int e = expo(rng);
            m.e[v] = std::uint16_t(e);
            deg += e;
        }
        if (deg < min_degree || deg > order) continue;
        GaussianRational c(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        s.add_term(m, c);
    }
    return s;
}

inline Monomial mono(std::initializer_list<std::uint16_t> exps) { return Monomial(exps); }

inline ExactSeries from_terms(
    std::size_t n, int order,
    std::initializer_list<std::pair<std::initializer_list<std::uint16_t>, Rational>> terms) {
    ExactSeries s(n, order);
    for (const auto& [e, c] : terms) s.add_term(Monomial(e), GaussianRational(c, Rational(0)));
    return s;
}

}  // namespace birkhoff::testsupport
