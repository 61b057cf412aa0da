#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "birkhoff/errors.hpp"

namespace birkhoff {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact integer square root test: returns r with r*r == v when v is a
// perfect square.
std::optional<BigInt> exact_isqrt(const BigInt& v);

// Exact square root of a rational, when it exists in Q.
std::optional<Rational> exact_sqrt(const Rational& q);

// Nearest rational with denominator <= max_den (continued fractions).
// Used to turn a floating-point hint into an exact candidate that is then
// verified exactly by the caller.
Rational rational_reconstruct(double x, const BigInt& max_den);

// Gaussian rational: re + im*i with exact rational components. This is the
// exact coefficient kind; all arithmetic is closed and never rounds.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(long r, long i) : re(r), im(i) {}

    static GaussianRational zero() { return {}; }
    static GaussianRational one() { return GaussianRational(1); }
    static GaussianRational i() { return GaussianRational(0, 1); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    // |z|^2, exact.
    Rational norm2() const { return Rational(re * re + im * im); }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        im = Rational(re * o.im + im * o.re);
        re = std::move(r);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw Error(errc::domain, "division by zero Gaussian rational");
        Rational n2 = o.norm2();
        Rational r = (re * o.re + im * o.im) / n2;
        im = Rational((im * o.re - re * o.im) / n2);
        re = std::move(r);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

GaussianRational mul_int(const GaussianRational& c, long k);

// Square root in Q(i), when it exists.
std::optional<GaussianRational> exact_sqrt(const GaussianRational& z);

// Canonical text form "p/q,p/q" with reduced fractions and positive
// denominators, e.g. "-1/3,0/1". parse_gaussian accepts the same grammar
// and also bare integers ("2" for "2/1").
std::string to_string(const GaussianRational& c);
GaussianRational parse_gaussian(const std::string& text);

std::ostream& operator<<(std::ostream& os, const GaussianRational& c);

}  // namespace birkhoff
