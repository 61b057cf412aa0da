#include "birkhoff/unipoly.hpp"

namespace birkhoff {

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
    if (d.is_zero()) throw Error(errc::domain, "polynomial division by zero");
    UniPoly r = *this;
    if (r.degree() < d.degree()) return {UniPoly{}, r};
    std::vector<GaussianRational> q(std::size_t(r.degree() - d.degree()) + 1);
    GaussianRational inv = GaussianRational::one() / d.lead();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        std::size_t shift = std::size_t(r.degree() - d.degree());
        GaussianRational f = r.lead() * inv;
        q[shift] = f;
        for (std::size_t i = 0; i < d.c_.size(); ++i) r.c_[shift + i] -= f * d.c_[i];
        r.trim();
    }
    return {UniPoly(std::move(q)), r};
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

std::tuple<UniPoly, UniPoly, UniPoly> UniPoly::extended_gcd(const UniPoly& a, const UniPoly& b) {
    UniPoly r0 = a, r1 = b;
    UniPoly u0 = UniPoly::constant(GaussianRational::one()), u1;
    UniPoly v0, v1 = UniPoly::constant(GaussianRational::one());
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        UniPoly u2 = u0 - q * u1;
        UniPoly v2 = v0 - q * v1;
        r0 = std::move(r1); r1 = std::move(r2);
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    if (r0.is_zero()) return {r0, u0, v0};
    GaussianRational inv = GaussianRational::one() / r0.lead();
    return {r0 * inv, u0 * inv, v0 * inv};
}

UniPoly charpoly(const ExactMatrix& A) {
    BIRKHOFF_ASSERT(A.is_square(), "characteristic polynomial of non-square matrix");
    const std::size_t n = A.rows();
    // p(t) = t^n + c_1 t^{n-1} + ... + c_n via M_1 = I,
    // c_k = -tr(A M_k)/k, M_{k+1} = A M_k + c_k I.
    std::vector<GaussianRational> coeffs(n + 1);
    coeffs[n] = GaussianRational::one();
    ExactMatrix M = ExactMatrix::identity(n);
    const ExactMatrix I = ExactMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        ExactMatrix AM = A * M;
        GaussianRational ck = -(AM.trace() / GaussianRational(long(k)));
        coeffs[n - k] = ck;
        if (k < n) M = AM + ck * I;
    }
    return UniPoly(std::move(coeffs));
}

}  // namespace birkhoff
