#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "birkhoff/errors.hpp"

namespace birkhoff {

// Exponent vector (a_1..a_n, b_1..b_n) for x^a y^b in 2n variables.
// Ordered graded-lexicographically so series have one canonical layout.
struct Monomial {
    std::vector<std::uint16_t> e;

    Monomial() = default;
    explicit Monomial(std::size_t vars) : e(vars, 0) {}
    Monomial(std::initializer_list<std::uint16_t> init) : e(init) {}

    std::size_t vars() const { return e.size(); }
    std::size_t n() const { return e.size() / 2; }

    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    std::uint16_t a(std::size_t j) const { return e[j]; }
    std::uint16_t b(std::size_t j) const { return e[n() + j]; }

    bool is_action_monomial() const {
        for (std::size_t j = 0; j < n(); ++j)
            if (a(j) != b(j)) return false;
        return true;
    }

    friend bool operator==(const Monomial& p, const Monomial& q) { return p.e == q.e; }
    friend bool operator!=(const Monomial& p, const Monomial& q) { return p.e != q.e; }

    friend bool operator<(const Monomial& p, const Monomial& q) {
        BIRKHOFF_ASSERT(p.e.size() == q.e.size(), "monomial arity mismatch");
        int dp = p.degree(), dq = q.degree();
        if (dp != dq) return dp < dq;
        return p.e < q.e;
    }

    Monomial operator*(const Monomial& q) const {
        BIRKHOFF_ASSERT(e.size() == q.e.size(), "monomial arity mismatch");
        Monomial r(*this);
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += q.e[i];
        return r;
    }
};

}  // namespace birkhoff
