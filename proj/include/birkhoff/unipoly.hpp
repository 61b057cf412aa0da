#pragma once

#include <tuple>
#include <vector>

#include "birkhoff/exact_matrix.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

// Univariate polynomial over Q(i), coefficients low to high, no trailing
// zeros. Supports the exact squarefree/Bezout machinery behind the
// semisimple-nilpotent split.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(GaussianRational v) { return UniPoly({std::move(v)}); }
    static UniPoly x() { return UniPoly({GaussianRational(0), GaussianRational(1)}); }

    const std::vector<GaussianRational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return int(c_.size()) - 1; }

    GaussianRational lead() const {
        BIRKHOFF_ASSERT(!c_.empty(), "leading coefficient of zero polynomial");
        return c_.back();
    }

    GaussianRational operator[](std::size_t k) const {
        return k < c_.size() ? c_[k] : GaussianRational();
    }

    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<GaussianRational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
        return UniPoly(std::move(c));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<GaussianRational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(c));
    }
    friend UniPoly operator*(UniPoly a, const GaussianRational& s) {
        for (auto& v : a.c_) v *= s;
        a.trim();
        return a;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

    UniPoly derivative() const {
        if (c_.size() < 2) return {};
        std::vector<GaussianRational> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = mul_int(c_[k], long(k));
        return UniPoly(std::move(d));
    }

    UniPoly monic() const {
        if (is_zero()) return {};
        return *this * (GaussianRational::one() / lead());
    }

    GaussianRational eval(const GaussianRational& t) const {
        GaussianRational acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    ExactMatrix eval(const ExactMatrix& A) const {
        BIRKHOFF_ASSERT(A.is_square(), "polynomial of non-square matrix");
        ExactMatrix acc(A.rows(), A.rows());
        const ExactMatrix I = ExactMatrix::identity(A.rows());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * A + *it * I;
        return acc;
    }

    // Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;

    static UniPoly gcd(UniPoly a, UniPoly b);

    // Returns (g, u, v) monic with u*a + v*b = g.
    static std::tuple<UniPoly, UniPoly, UniPoly> extended_gcd(const UniPoly& a, const UniPoly& b);

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<GaussianRational> c_;
};

// Characteristic polynomial det(tI - A) by the Faddeev-LeVerrier
// recurrence, exact.
UniPoly charpoly(const ExactMatrix& A);

}  // namespace birkhoff
