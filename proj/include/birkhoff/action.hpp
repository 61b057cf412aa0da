#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "birkhoff/lattice.hpp"
#include "birkhoff/series.hpp"

namespace birkhoff {

// One point of C^{2n}, coordinates (x_1..x_n, y_1..y_n).
using PhasePoint = std::vector<Complex>;

struct ActionConfig {
    int nsteps = 256;
    double proj_tol = 1e-12;
    int max_iter = 50;
    double regularity_floor = 1e-8;
    double svd_rcut = 1e-12;  // relative singular value cutoff for the pseudoinverse
};

// Uniformly sampled closed loop: samples[i] is z(2*pi*i/N), periodic.
struct ClosedCurve {
    std::size_t n = 0;
    std::vector<PhasePoint> samples;

    std::size_t steps() const { return samples.size(); }
    void validate() const;  // N >= 16 even, gaps bounded by 4x the mean
};

// Poisson-commuting first integrals G_1 = H, G_2, ..., G_n with their
// Jacobian series prepared for projection.
class MomentumMap {
public:
    MomentumMap(std::vector<FloatSeries> G, double commute_tol = 1e-9);

    std::size_t n() const { return G_.size(); }
    const std::vector<FloatSeries>& components() const { return G_; }

    std::vector<Complex> value(const PhasePoint& z) const;
    // Row-major n x 2n Jacobian.
    std::vector<std::vector<Complex>> jacobian(const PhasePoint& z) const;

private:
    std::vector<FloatSeries> G_;
    std::vector<std::vector<FloatSeries>> dG_;  // [i][v] = dG_i/dz_v
};

// Time-t flow of X_{iF^(k)}: x_j -> x_j e^{-i rho_j t}, y_j -> y_j e^{+i rho_j t}.
PhasePoint linear_circle_flow(std::size_t k, const IntMat& rho, double t, const PhasePoint& z);

// Truncated-polynomial realizations of the normalizing point map and its
// inverse, one coordinate series per variable per generator application.
struct TransformMaps {
    std::vector<std::vector<FloatSeries>> forward;  // apply low to high
    std::vector<std::vector<FloatSeries>> inverse;  // apply high to low
};
TransformMaps build_transform_maps(const std::vector<FloatSeries>& gens, std::size_t n, int m);

PhasePoint apply_point_map(const TransformMaps& maps, bool forward, const PhasePoint& z);

// Samples of Phi^{-1}(circle_flow(t, Phi(z))).
ClosedCurve normalized_circle_orbit(const PhasePoint& z, std::size_t k,
                                    const std::vector<FloatSeries>& gens, const IntMat& rho,
                                    int nsteps);

struct ProjectionResult {
    ClosedCurve curve;
    double max_residual = 0.0;      // final max ||G - target|| over samples
    double max_displacement = 0.0;  // max per-sample movement
    int max_iterations = 0;
};

// Per-sample least-squares Newton w <- w - DG(w)^+ (G(w) - target).
ProjectionResult project_to_fiber(const ClosedCurve& c, const MomentumMap& G,
                                  const std::vector<Complex>& target, const ActionConfig& cfg);

// (1/2pi) * contour integral of sum_j x_j dy_j over the sampled loop;
// spectral differentiation of the periodic samples (centered differences
// below 64 samples).
Complex period_integral(const ClosedCurve& c);

struct ActionResult {
    Complex P = 0.0;
    double projection_residual = 0.0;
    double projection_displacement = 0.0;
};

ActionResult action_function(const PhasePoint& z, std::size_t k,
                             const std::vector<FloatSeries>& gens, const IntMat& rho,
                             const MomentumMap& G, const ActionConfig& cfg);

// (smallest singular value of DG(z), product of all n singular values).
std::pair<double, double> regularity_diagnostic(const MomentumMap& G, const PhasePoint& z);

}  // namespace birkhoff
