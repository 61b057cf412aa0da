#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/monomial.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

using Complex = std::complex<double>;

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<GaussianRational> {
    static constexpr bool exact = true;
    static bool is_zero(const GaussianRational& c) { return c.is_zero(); }
    static GaussianRational weight(long w) { return GaussianRational(w); }
    static GaussianRational inv_int(long k) { return GaussianRational(Rational(1, k)); }
    static Complex to_complex(const GaussianRational& c) { return c.to_complex(); }
    static double abs_val(const GaussianRational& c) { return std::sqrt(to_double(c.norm2())); }
    static bool is_real(const GaussianRational& c) { return c.im == 0; }
};

template <>
struct CoeffTraits<Complex> {
    static constexpr bool exact = false;
    static bool is_zero(const Complex& c) { return c.real() == 0.0 && c.imag() == 0.0; }
    static Complex weight(long w) { return Complex(double(w), 0.0); }
    static Complex inv_int(long k) { return Complex(1.0 / double(k), 0.0); }
    static Complex to_complex(const Complex& c) { return c; }
    static double abs_val(const Complex& c) { return std::abs(c); }
    static bool is_real(const Complex& c) { return c.imag() == 0.0; }
};

// Sparse polynomial in 2n variables truncated at a fixed total degree.
// Terms are kept in graded-lex order with no zero coefficients, so equal
// series have equal term maps.
template <class C>
class Series {
public:
    using Traits = CoeffTraits<C>;
    using TermMap = std::map<Monomial, C>;

    Series() : n_(0), order_(0) {}
    Series(std::size_t n, int order) : n_(n), order_(order) {
        if (order < 0) throw Error(errc::degree, "negative truncation order");
    }

    std::size_t n() const { return n_; }
    std::size_t vars() const { return 2 * n_; }
    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    static Series zero(std::size_t n, int order) { return Series(n, order); }

    static Series term(std::size_t n, int order, const Monomial& m, const C& c) {
        Series s(n, order);
        s.add_term(m, c);
        return s;
    }
    static Series term(std::size_t n, int order, std::initializer_list<std::uint16_t> exps, const C& c) {
        return term(n, order, Monomial(exps), c);
    }

    void add_term(const Monomial& m, const C& c) {
        BIRKHOFF_ASSERT(m.vars() == vars(), "term arity mismatch");
        if (Traits::is_zero(c) || m.degree() > order_) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    C coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C{} : it->second;
    }

    int min_degree() const {
        return terms_.empty() ? 0 : terms_.begin()->first.degree();
    }
    int max_degree() const {
        return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
    }

    bool homogeneous_of(int k) const {
        for (const auto& [m, c] : terms_)
            if (m.degree() != k) return false;
        return true;
    }

    Series operator-() const {
        Series r(n_, order_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Series& operator+=(const Series& o) {
        check_compatible(o);
        order_ = std::min(order_, o.order_);
        prune_above(order_);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Series& operator-=(const Series& o) {
        check_compatible(o);
        order_ = std::min(order_, o.order_);
        prune_above(order_);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }

    Series& operator*=(const C& s) {
        if (Traits::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= s;
            if (Traits::is_zero(it->second))
                it = terms_.erase(it);
            else
                ++it;
        }
        return *this;
    }
    friend Series operator*(Series a, const C& s) { return a *= s; }
    friend Series operator*(const C& s, Series a) { return a *= s; }

    friend Series operator*(const Series& a, const Series& b) {
        a.check_compatible(b);
        Series r(a.n_, std::min(a.order_, b.order_));
        for (const auto& [ma, ca] : a.terms_) {
            int da = ma.degree();
            if (da > r.order_) break;
            for (const auto& [mb, cb] : b.terms_) {
                if (da + mb.degree() > r.order_) break;
                r.add_term(ma * mb, ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    Series truncated(int m) const {
        if (m < 0) throw Error(errc::degree, "negative truncation order");
        Series r(n_, std::min(order_, m));
        for (const auto& [mo, c] : terms_) {
            if (mo.degree() > r.order_) break;
            r.terms_.emplace(mo, c);
        }
        return r;
    }

    Series degree_part(int k) const {
        Series r(n_, order_);
        for (const auto& [mo, c] : terms_) {
            int d = mo.degree();
            if (d > k) break;
            if (d == k) r.terms_.emplace(mo, c);
        }
        return r;
    }

    Series with_order(int m) const {
        Series r = truncated(m);
        r.order_ = m;
        return r;
    }

    // d/dv where v indexes the flat (x_1..x_n, y_1..y_n) variable list.
    Series derivative(std::size_t v) const {
        BIRKHOFF_ASSERT(v < vars(), "derivative variable out of range");
        Series r(n_, order_);
        for (const auto& [mo, c] : terms_) {
            if (mo.e[v] == 0) continue;
            Monomial m2 = mo;
            m2.e[v] -= 1;
            r.add_term(m2, c * Traits::weight(mo.e[v]));
        }
        return r;
    }

    Complex evaluate(const std::vector<Complex>& z) const {
        if (z.size() != vars()) throw Error(errc::dimension, "evaluation point has wrong arity");
        // Power tables per variable up to the max exponent seen.
        std::vector<std::vector<Complex>> pow(vars());
        for (std::size_t v = 0; v < vars(); ++v) {
            std::uint16_t mx = 0;
            for (const auto& [mo, c] : terms_) mx = std::max(mx, mo.e[v]);
            auto& p = pow[v];
            p.resize(std::size_t(mx) + 1);
            p[0] = Complex(1.0, 0.0);
            for (std::size_t k = 1; k < p.size(); ++k) p[k] = p[k - 1] * z[v];
        }
        Complex acc(0.0, 0.0);
        for (const auto& [mo, c] : terms_) {
            Complex t = Traits::to_complex(c);
            for (std::size_t v = 0; v < vars(); ++v) t *= pow[v][mo.e[v]];
            acc += t;
        }
        return acc;
    }

    double max_abs_coeff() const {
        double mx = 0.0;
        for (const auto& [mo, c] : terms_) mx = std::max(mx, Traits::abs_val(c));
        return mx;
    }

    bool all_real() const {
        for (const auto& [mo, c] : terms_)
            if (!Traits::is_real(c)) return false;
        return true;
    }

private:
    void check_compatible(const Series& o) const {
        if (n_ != o.n_) throw Error(errc::dimension, "series over different phase spaces");
    }
    void prune_above(int m) {
        while (!terms_.empty() && terms_.rbegin()->first.degree() > m)
            terms_.erase(std::prev(terms_.end()));
    }

    std::size_t n_;
    int order_;
    TermMap terms_;
};

using ExactSeries = Series<GaussianRational>;
using FloatSeries = Series<Complex>;

// {A, B} = sum_j dA/dx_j dB/dy_j - dA/dy_j dB/dx_j, truncated to the
// smaller order. Term-pair form: the j contribution of monomial pair
// (x^a1 y^b1, x^a2 y^b2) lands on x^{a1+a2-e_j} y^{b1+b2-e_j} with integer
// weight a1_j b2_j - b1_j a2_j.
template <class C>
Series<C> poisson_bracket(const Series<C>& A, const Series<C>& B) {
    if (A.n() != B.n()) throw Error(errc::dimension, "bracket of series over different phase spaces");
    const std::size_t n = A.n();
    Series<C> r(n, std::min(A.order(), B.order()));
    const int cap = r.order() + 2;
    for (const auto& [ma, ca] : A.terms()) {
        const int da = ma.degree();
        if (da > cap - 1) break;
        for (const auto& [mb, cb] : B.terms()) {
            if (da + mb.degree() > cap) break;
            C prod = ca * cb;
            for (std::size_t j = 0; j < n; ++j) {
                long w = long(ma.a(j)) * long(mb.b(j)) - long(ma.b(j)) * long(mb.a(j));
                if (w == 0) continue;
                Monomial mo = ma * mb;
                mo.e[j] -= 1;
                mo.e[n + j] -= 1;
                r.add_term(mo, prod * CoeffTraits<C>::weight(w));
            }
        }
    }
    return r;
}

enum class LieDirection { forward, inverse };

// Truncated exponential Lie series generated by L (lowest degree >= 3 so
// the sum terminates): forward is sum (-1)^i/i! ad_L^i A, inverse drops the
// sign. Accumulated Horner-style with B_i = ad_L B_{i-1} / i.
template <class C>
Series<C> lie_transform(const Series<C>& A, const Series<C>& L, LieDirection dir, int m) {
    Series<C> R = A.truncated(m).with_order(m);
    if (L.is_zero()) return R;
    const int dmin = L.min_degree();
    if (dmin <= 2)
        throw Error(errc::degree, "Lie generator has terms of degree <= 2");
    const Series<C> Lm = L.truncated(m).with_order(m);
    Series<C> B = R;
    const long imax = (m - 2) / (dmin - 2);
    for (long i = 1; i <= imax; ++i) {
        B = poisson_bracket(Lm, B) * CoeffTraits<C>::inv_int(i);
        if (B.is_zero()) break;
        if (dir == LieDirection::forward && (i % 2 != 0))
            R -= B;
        else
            R += B;
    }
    return R;
}

inline FloatSeries to_float(const ExactSeries& A) {
    FloatSeries r(A.n(), A.order());
    for (const auto& [m, c] : A.terms()) r.add_term(m, c.to_complex());
    return r;
}

inline FloatSeries to_float(const FloatSeries& A) { return A; }

}  // namespace birkhoff
