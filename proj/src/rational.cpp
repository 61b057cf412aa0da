#include "birkhoff/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace birkhoff {

std::optional<BigInt> exact_isqrt(const BigInt& v) {
    if (v < 0) return std::nullopt;
    if (v == 0) return BigInt(0);
    BigInt r = boost::multiprecision::sqrt(v);
    if (r * r == v) return r;
    return std::nullopt;
}

std::optional<Rational> exact_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    BigInt num = numerator(q), den = denominator(q);
    auto rn = exact_isqrt(num);
    if (!rn) return std::nullopt;
    auto rd = exact_isqrt(den);
    if (!rd) return std::nullopt;
    return Rational(*rn, *rd);
}

Rational rational_reconstruct(double x, const BigInt& max_den) {
    if (!std::isfinite(x)) throw Error(errc::domain, "cannot reconstruct non-finite value");
    bool neg = x < 0;
    double v = neg ? -x : x;

    // Continued-fraction convergents p/q of v with q capped by max_den.
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 9e18) break;
        BigInt a = static_cast<long long>(fl);
        BigInt p2 = a * p1 + p0;
        BigInt q2 = a * q1 + q0;
        if (q2 > max_den) {
            // Best convergent within the bound wins; also try a reduced
            // partial quotient (semiconvergent) for a tighter fit.
            if (q1 == 0) break;
            BigInt room = (max_den - q0) / q1;
            if (room > 0) {
                BigInt ps = room * p1 + p0;
                BigInt qs = room * q1 + q0;
                Rational conv(p1, q1), semi(ps, qs);
                double ec = std::abs(to_double(conv) - v);
                double es = std::abs(to_double(semi) - v);
                if (es < ec) {
                    p1 = ps;
                    q1 = qs;
                }
            }
            break;
        }
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-15 * std::max(1.0, v)) break;
        frac = 1.0 / rem;
    }
    if (q1 == 0) return Rational(0);
    Rational r(p1, q1);
    return neg ? Rational(-r) : r;
}

GaussianRational mul_int(const GaussianRational& c, long k) {
    return {Rational(c.re * k), Rational(c.im * k)};
}

std::optional<GaussianRational> exact_sqrt(const GaussianRational& z) {
    if (z.is_zero()) return GaussianRational::zero();
    if (z.im == 0) {
        if (z.re > 0) {
            auto r = exact_sqrt(z.re);
            if (!r) return std::nullopt;
            return GaussianRational(*r);
        }
        Rational neg = -z.re;
        auto r = exact_sqrt(neg);
        if (!r) return std::nullopt;
        return GaussianRational(Rational(0), *r);
    }
    // w = c + d i with w^2 = z needs |w|^2 = sqrt(|z|^2) rational.
    auto n = exact_sqrt(z.norm2());
    if (!n) return std::nullopt;
    Rational c2 = (z.re + *n) / 2;
    auto c = exact_sqrt(c2);
    if (!c || *c == 0) return std::nullopt;
    Rational d = z.im / (2 * (*c));
    GaussianRational w(*c, d);
    if (w * w == z) return w;
    return std::nullopt;
}

std::string to_string(const GaussianRational& c) {
    std::ostringstream os;
    os << numerator(c.re) << '/' << denominator(c.re) << ','
       << numerator(c.im) << '/' << denominator(c.im);
    return os.str();
}

namespace {

Rational parse_rational_token(const std::string& tok) {
    auto bad = [&]() -> Error {
        return Error(errc::parse, "bad rational token '" + tok + "'");
    };
    if (tok.empty()) throw bad();
    auto slash = tok.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(tok));
        BigInt num(tok.substr(0, slash));
        BigInt den(tok.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw bad();
    }
}

}  // namespace

GaussianRational parse_gaussian(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return GaussianRational(parse_rational_token(text));
    return {parse_rational_token(text.substr(0, comma)),
            parse_rational_token(text.substr(comma + 1))};
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& c) {
    return os << to_string(c);
}

}  // namespace birkhoff
