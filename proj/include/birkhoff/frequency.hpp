#pragma once

#include <complex>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/exact_matrix.hpp"
#include "birkhoff/monomial.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

// Frequencies gamma_j declared as exact rational coordinates over a basis
// omega_1..omega_d that the user asserts is Q-linearly independent. All
// resonance decisions reduce to exact kernel tests on the coordinate
// matrix C; the optional numeric omega values only feed float evaluation.
struct FrequencyModel {
    std::size_t n = 0;
    std::size_t d = 0;
    ExactMatrix C;                       // n x d, row j = coordinates of gamma_j
    std::vector<std::complex<double>> numeric;  // empty, or d values for omega

    FrequencyModel() = default;
    FrequencyModel(std::size_t n_, std::size_t d_, ExactMatrix C_,
                   std::vector<std::complex<double>> numeric_ = {})
        : n(n_), d(d_), C(std::move(C_)), numeric(std::move(numeric_)) {
        if (C.rows() != n || C.cols() != d)
            throw Error(errc::dimension, "frequency coordinate matrix has wrong shape");
        if (!numeric.empty() && numeric.size() != d)
            throw Error(errc::dimension, "numeric frequency list has wrong length");
        if (d == 0) throw Error(errc::validate, "frequency basis must have dimension >= 1");
    }

    // Rational-valued model: d = 1 with the single basis element read as
    // the number 1. This is the regime where homological divisions stay
    // in Q(i); anything else normalizes in float.
    bool rational_valued() const { return d == 1 && numeric.empty(); }

    // Exact coordinates of lambda(m) = sum_j (b_j - a_j) gamma_j over the
    // omega basis.
    std::vector<GaussianRational> lambda_coords(const Monomial& m) const {
        if (m.n() != n) throw Error(errc::dimension, "monomial arity does not match model");
        std::vector<GaussianRational> out(d);
        for (std::size_t j = 0; j < n; ++j) {
            long w = long(m.b(j)) - long(m.a(j));
            if (w == 0) continue;
            for (std::size_t l = 0; l < d; ++l) out[l] += mul_int(C.at(j, l), w);
        }
        return out;
    }

    bool is_resonant(const Monomial& m) const {
        for (const auto& c : lambda_coords(m))
            if (!c.is_zero()) return false;
        return true;
    }

    // Exact lambda for the rational-valued regime.
    GaussianRational lambda_exact(const Monomial& m) const {
        BIRKHOFF_ASSERT(rational_valued(), "exact eigenvalue needs a rational-valued model");
        return lambda_coords(m)[0];
    }

    std::vector<std::complex<double>> omega_numeric() const {
        if (!numeric.empty()) return numeric;
        if (d == 1) return {std::complex<double>(1.0, 0.0)};
        throw Error(errc::domain, "model has no numeric frequency values");
    }

    std::complex<double> lambda_numeric(const Monomial& m) const {
        auto w = omega_numeric();
        auto coords = lambda_coords(m);
        std::complex<double> s(0.0, 0.0);
        for (std::size_t l = 0; l < d; ++l) s += coords[l].to_complex() * w[l];
        return s;
    }

    GaussianRational gamma_exact(std::size_t j) const {
        BIRKHOFF_ASSERT(rational_valued(), "exact frequency needs a rational-valued model");
        return C.at(j, 0);
    }

    std::complex<double> gamma_numeric(std::size_t j) const {
        auto w = omega_numeric();
        std::complex<double> s(0.0, 0.0);
        for (std::size_t l = 0; l < d; ++l) s += C.at(j, l).to_complex() * w[l];
        return s;
    }

    // Convenience for rational gamma vectors (the common test shape).
    static FrequencyModel from_rational_gammas(const std::vector<GaussianRational>& gamma) {
        ExactMatrix C(gamma.size(), 1);
        for (std::size_t j = 0; j < gamma.size(); ++j) C.at(j, 0) = gamma[j];
        return FrequencyModel(gamma.size(), 1, std::move(C));
    }
};

}  // namespace birkhoff
