#pragma once

#include <vector>

#include "birkhoff/frequency.hpp"
#include "birkhoff/series.hpp"

namespace birkhoff {

using IntVec = std::vector<BigInt>;
using IntMat = std::vector<IntVec>;

// Row-style Hermite normal form with positive pivots; zero rows dropped.
// Canonical representative of the row lattice.
IntMat hermite_normal_form(IntMat M);

// U*M*V = D with U, V unimodular and D diagonal (no divisibility chain;
// signs normalized positive). Returns rank plus the three matrices.
struct SmithResult {
    IntMat U, D, V;
    std::size_t rank = 0;
};
SmithResult smith_normal_form(const IntMat& M);

// Basis of {v in Z^c : M v = 0}, as rows.
IntMat integer_kernel(const IntMat& M, std::size_t cols);

// Resonance lattice R = {k in Z^n : k^T C = 0} with q = rank R and mu a
// HNF-canonical row basis.
struct ResonanceBasis {
    std::size_t n = 0;
    std::size_t q = 0;
    IntMat mu;                 // q rows, basis of R
    IntMat rho;                // n rows, unimodular, rho[k].mu[h] = delta for k,h past n-q
    ExactMatrix alpha;         // (n-q) x d coordinates: gamma = sum alpha_k rho^(k)
};

std::pair<std::size_t, IntMat> resonance_lattice(const FrequencyModel& F);

// Unimodular basis rho of Z^n with rho^(k).mu^(h) = 0 for k <= n-q and the
// identity pairing on the last q rows; mu must be a saturated-lattice basis.
IntMat dual_basis(const IntMat& mu, std::size_t n);

ExactMatrix alpha_coefficients(const FrequencyModel& F, const IntMat& rho);

ResonanceBasis analyze_resonance(const FrequencyModel& F);

// F^(k) = sum_j rho^(k)_j x_j y_j for k = 1..n-q, exact degree-2 series.
std::vector<ExactSeries> torus_generators(const IntMat& rho, std::size_t q, std::size_t n,
                                          int order = 2);

}  // namespace birkhoff
