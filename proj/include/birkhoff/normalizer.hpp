#pragma once

#include <utility>
#include <vector>

#include "birkhoff/frequency.hpp"
#include "birkhoff/quadratic.hpp"
#include "birkhoff/series.hpp"

namespace birkhoff {

inline constexpr double kNearResonanceFloor = 1e-8;

namespace detail {

// c / lambda(m). Exact mode stays in Q(i) and therefore needs a
// rational-valued model; float mode guards the near-resonance floor so a
// tiny numeric divisor can never fake a resonance decision.
inline GaussianRational divide_by_lambda(const GaussianRational& c, const FrequencyModel& F,
                                         const Monomial& m, double) {
    if (!F.rational_valued())
        throw Error(errc::unsupported,
                    "exact normalization needs rational frequency values; run in float mode");
    GaussianRational lam = F.lambda_exact(m);
    BIRKHOFF_ASSERT(!lam.is_zero(), "division requested on a resonant monomial");
    return c / lam;
}

inline Complex divide_by_lambda(const Complex& c, const FrequencyModel& F, const Monomial& m,
                                double floor) {
    Complex lam = F.lambda_numeric(m);
    if (std::abs(lam) < floor)
        throw Error(errc::near_resonance,
                    "non-resonant eigenvalue below the near-resonance floor; refine the "
                    "frequency model");
    return c / lam;
}

inline bool series_close(const ExactSeries& a, const ExactSeries& b, double) { return a == b; }
inline bool series_close(const FloatSeries& a, const FloatSeries& b, double tol) {
    double scale = 1.0 + std::max(a.max_abs_coeff(), b.max_abs_coeff());
    return (a - b).max_abs_coeff() <= tol * scale;
}

inline std::size_t homogeneous_dim(std::size_t vars, int k) {
    // C(k + vars - 1, vars - 1), saturating; only used as an iteration cap.
    double acc = 1.0;
    for (std::size_t i = 1; i < vars; ++i) acc *= double(k + i) / double(i);
    return acc > 1e6 ? std::size_t(1e6) : std::size_t(acc) + 1;
}

}  // namespace detail

// Decomposition H_k = -{H_2, L} + H' with H' in ker ad_{H_ss} and L
// supported off the kernel (canonical zero-kernel choice). With D = ad_Hss
// and U = ad_Hnil this is the fixed point L = -D^{-1}(nonres(Hk) +
// nonres(U L)), reached after finitely many passes whenever U is nilpotent
// on the degree-k slice (true Jordan-Chevalley data, and the supported
// declared splits).
template <class C>
std::pair<Series<C>, Series<C>> homological_split(const Series<C>& Hk, const Series<C>& Hss,
                                                  const Series<C>& Hnil, const FrequencyModel& F,
                                                  double floor = kNearResonanceFloor) {
    const std::size_t n = Hk.n();
    Series<C> L(n, Hk.order()), res(n, Hk.order()), nonres(n, Hk.order());
    if (Hk.is_zero()) return {L, res};
    const int k = Hk.max_degree();
    if (k < 3 || !Hk.homogeneous_of(k))
        throw Error(errc::degree, "homological input must be homogeneous of degree >= 3");

    for (const auto& [m, c] : Hk.terms()) (F.is_resonant(m) ? res : nonres).add_term(m, c);

    auto neg_div = [&](const Series<C>& A) {
        Series<C> out(n, A.order());
        for (const auto& [m, c] : A.terms())
            out.add_term(m, -detail::divide_by_lambda(c, F, m, floor));
        return out;
    };

    L = neg_div(nonres);
    Series<C> UL_res(n, Hk.order());
    if (!Hnil.is_zero()) {
        const std::size_t cap = detail::homogeneous_dim(2 * n, k) + 3;
        bool settled = false;
        for (std::size_t it = 0; it < cap; ++it) {
            Series<C> UL = poisson_bracket(Hnil, L);
            Series<C> UL_nonres(n, Hk.order());
            UL_res = Series<C>(n, Hk.order());
            for (const auto& [m, c] : UL.terms())
                (F.is_resonant(m) ? UL_res : UL_nonres).add_term(m, c);
            Series<C> Lnext = neg_div(nonres + UL_nonres);
            if (detail::series_close(Lnext, L, 1e-15)) {
                settled = true;
                break;
            }
            L = std::move(Lnext);
        }
        if (!settled)
            throw Error(errc::no_converge,
                        "nilpotent correction did not stabilize; the declared quadratic "
                        "split is outside the supported class");
        // Recompute the resonant leak of U L at the fixed point.
        UL_res = Series<C>(n, Hk.order());
        Series<C> leak = poisson_bracket(Hnil, L);
        for (const auto& [m, c] : leak.terms())
            if (F.is_resonant(m)) UL_res.add_term(m, c);
    }
    Series<C> Hp = res + UL_res;

    if constexpr (CoeffTraits<C>::exact) {
        BIRKHOFF_ASSERT(-poisson_bracket(Hss + Hnil, L) + Hp == Hk,
                        "homological identity violated");
    }
    for (const auto& [m, c] : Hp.terms())
        BIRKHOFF_ASSERT(F.is_resonant(m), "resonant remainder contains a non-resonant term");
    return {L, Hp};
}

template <class C>
std::pair<Series<C>, Series<C>> homological_split(const Series<C>& Hk, const QuadraticData& q,
                                                  const FrequencyModel& F,
                                                  double floor = kNearResonanceFloor) {
    if constexpr (CoeffTraits<C>::exact)
        return homological_split(Hk, q.Hss.truncated(Hk.order()).with_order(Hk.order()),
                                 q.Hnil.truncated(Hk.order()).with_order(Hk.order()), F, floor);
    else
        return homological_split(Hk, to_float(q.Hss).with_order(Hk.order()),
                                 to_float(q.Hnil).with_order(Hk.order()), F, floor);
}

template <class C>
struct NormalizationResult {
    int m = 0;
    Series<C> N;
    std::vector<Series<C>> gens;  // L_3 .. L_m

    struct DegreeDiag {
        int k;
        double gen_max;  // max coefficient magnitude of L_k
        double nf_max;   // max coefficient magnitude of the degree-k part of N
    };
    std::vector<DegreeDiag> per_degree;
};

// Order-by-order normalization. Degree-k step: split the current degree-k
// part and push the whole series through the L_k Lie transform; degrees
// below k are untouched (brackets with a degree-k generator only raise
// degree), which is asserted per step.
template <class C>
NormalizationResult<C> normalize(const Series<C>& H, int m, const Series<C>& Hss,
                                 const Series<C>& Hnil, const FrequencyModel& F,
                                 double floor = kNearResonanceFloor) {
    if (!H.degree_part(0).is_zero() || !H.degree_part(1).is_zero())
        throw Error(errc::validate, "Hamiltonian must vanish to second order at the origin");
    if (!detail::series_close(H.degree_part(2), (Hss + Hnil).truncated(H.order()).with_order(H.order()), 1e-9))
        throw Error(errc::validate, "quadratic part does not match the declared split");

    NormalizationResult<C> out;
    out.m = m;
    out.N = H.truncated(m).with_order(m);
    if (m < 3) return out;

    const Series<C> hss = Hss.truncated(m).with_order(m);
    const Series<C> hnil = Hnil.truncated(m).with_order(m);
    for (int k = 3; k <= m; ++k) {
        Series<C> Hk = out.N.degree_part(k);
        auto [L, Hp] = homological_split(Hk, hss, hnil, F, floor);
        if (!L.is_zero()) {
            Series<C> low = out.N.truncated(k - 1);
            out.N = lie_transform(out.N, L, LieDirection::forward, m);
            BIRKHOFF_ASSERT(out.N.truncated(k - 1) == low,
                            "degree-k step disturbed lower degrees");
            BIRKHOFF_ASSERT(detail::series_close(out.N.degree_part(k), Hp, 1e-9),
                            "degree-k part after the step must be the resonant remainder");
        }
        out.gens.push_back(L);
        out.per_degree.push_back({k, L.max_abs_coeff(), out.N.degree_part(k).max_abs_coeff()});
    }
    return out;
}

template <class C>
NormalizationResult<C> normalize(const Series<C>& H, int m, const QuadraticData& q,
                                 const FrequencyModel& F, double floor = kNearResonanceFloor) {
    if constexpr (CoeffTraits<C>::exact)
        return normalize(H, m, q.Hss.with_order(H.order()), q.Hnil.with_order(H.order()), F,
                         floor);
    else
        return normalize(H, m, to_float(q.Hss).with_order(H.order()),
                         to_float(q.Hnil).with_order(H.order()), F, floor);
}

// Same composed transform the normalization applied to H. Forward runs
// the generators low to high (matching normalize); inverse undoes them.
template <class C>
Series<C> transform_function(const Series<C>& G, const std::vector<Series<C>>& gens,
                             LieDirection dir, int m) {
    Series<C> out = G.truncated(m).with_order(m);
    if (dir == LieDirection::forward) {
        for (const auto& L : gens) out = lie_transform(out, L, LieDirection::forward, m);
    } else {
        for (auto it = gens.rbegin(); it != gens.rend(); ++it)
            out = lie_transform(out, *it, LieDirection::inverse, m);
    }
    return out;
}

template <class C>
struct NormalFormCheck {
    bool is_normal;
    Series<C> residual;
};

template <class C>
NormalFormCheck<C> check_normal_form(const Series<C>& A, const Series<C>& Hss, int m) {
    Series<C> r = poisson_bracket(Hss.truncated(m).with_order(m), A.truncated(m).with_order(m));
    return {r.is_zero(), std::move(r)};
}

// Projection onto ker ad_{H_ss}: keeps exactly the monomials commuting
// with every torus generator.
template <class C>
Series<C> torus_average(const Series<C>& A, const FrequencyModel& F) {
    Series<C> out(A.n(), A.order());
    for (const auto& [m, c] : A.terms())
        if (F.is_resonant(m)) out.add_term(m, c);
    return out;
}

struct ConvergenceRow {
    int k;
    double gen_max;
    double nf_max;
    double nf_root;  // nf_max^(1/k)
};

template <class C>
std::vector<ConvergenceRow> convergence_report(const NormalizationResult<C>& r) {
    std::vector<ConvergenceRow> rows;
    for (const auto& d : r.per_degree) {
        double root = d.nf_max > 0.0 ? std::pow(d.nf_max, 1.0 / double(d.k)) : 0.0;
        rows.push_back({d.k, d.gen_max, d.nf_max, root});
    }
    return rows;
}

}  // namespace birkhoff
