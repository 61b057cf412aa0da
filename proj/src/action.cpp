#include "birkhoff/action.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "birkhoff/parallel.hpp"

namespace birkhoff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_finite(const PhasePoint& z) {
    for (const auto& c : z)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error(errc::domain, "phase point has non-finite coordinates");
}

double gap(const PhasePoint& a, const PhasePoint& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// Derivative of periodic samples by direct DFT: multiply mode k by
// i*freq(k) with the Nyquist mode dropped. O(N^2) is comfortable at the
// sample counts used here.
std::vector<Complex> spectral_derivative(const std::vector<Complex>& f) {
    const std::size_t N = f.size();
    const Complex I(0.0, 1.0);
    if (N < 64) {
        std::vector<Complex> d(N);
        const double dt = kTwoPi / double(N);
        for (std::size_t i = 0; i < N; ++i)
            d[i] = (f[(i + 1) % N] - f[(i + N - 1) % N]) / (2.0 * dt);
        return d;
    }
    std::vector<Complex> F(N, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t m = 0; m < N; ++m)
            F[k] += f[m] * std::polar(1.0, -kTwoPi * double(k * m % N) / double(N));
    std::vector<Complex> d(N, Complex(0.0, 0.0));
    for (std::size_t m = 0; m < N; ++m) {
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < N; ++k) {
            long freq = (k <= N / 2) ? long(k) : long(k) - long(N);
            if (std::size_t(2 * k) == N) freq = 0;  // Nyquist
            acc += I * double(freq) * F[k] * std::polar(1.0, kTwoPi * double(k * m % N) / double(N));
        }
        d[m] = acc / double(N);
    }
    return d;
}

}  // namespace

void ClosedCurve::validate() const {
    if (samples.size() < 16 || samples.size() % 2 != 0)
        throw Error(errc::validate, "closed curve needs at least 16 samples, evenly many");
    for (const auto& s : samples) {
        if (s.size() != 2 * n) throw Error(errc::dimension, "curve sample has wrong arity");
        check_finite(s);
    }
    double total = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double g = gap(samples[i], samples[(i + 1) % samples.size()]);
        total += g;
        mx = std::max(mx, g);
    }
    double mean = total / double(samples.size());
    if (mx > 4.0 * mean && mx > 0.0)
        throw Error(errc::validate, "curve sampling is too uneven (max gap over 4x mean)");
}

MomentumMap::MomentumMap(std::vector<FloatSeries> G, double commute_tol) : G_(std::move(G)) {
    if (G_.empty()) throw Error(errc::validate, "momentum map needs at least one component");
    const std::size_t n = G_[0].n();
    if (G_.size() != n)
        throw Error(errc::dimension, "momentum map needs exactly n components");
    for (const auto& g : G_)
        if (g.n() != n) throw Error(errc::dimension, "momentum map components disagree on n");
    double scale = 1.0;
    for (const auto& g : G_) scale = std::max(scale, g.max_abs_coeff());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double r = poisson_bracket(G_[i], G_[j]).max_abs_coeff();
            if (r > commute_tol * scale * scale)
                throw Error(errc::validate,
                            "momentum map components do not Poisson-commute to tolerance");
        }
    dG_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dG_[i].resize(2 * n);
        for (std::size_t v = 0; v < 2 * n; ++v) dG_[i][v] = G_[i].derivative(v);
    }
}

std::vector<Complex> MomentumMap::value(const PhasePoint& z) const {
    std::vector<Complex> out(G_.size());
    for (std::size_t i = 0; i < G_.size(); ++i) out[i] = G_[i].evaluate(z);
    return out;
}

std::vector<std::vector<Complex>> MomentumMap::jacobian(const PhasePoint& z) const {
    std::vector<std::vector<Complex>> J(G_.size(), std::vector<Complex>(2 * n()));
    for (std::size_t i = 0; i < G_.size(); ++i)
        for (std::size_t v = 0; v < 2 * n(); ++v) J[i][v] = dG_[i][v].evaluate(z);
    return J;
}

PhasePoint linear_circle_flow(std::size_t k, const IntMat& rho, double t, const PhasePoint& z) {
    const std::size_t n = z.size() / 2;
    if (z.size() != 2 * n || k >= rho.size())
        throw Error(errc::dimension, "flow index or point arity out of range");
    PhasePoint w(z.size());
    for (std::size_t j = 0; j < n; ++j) {
        double r = rho[k][j].convert_to<double>();
        Complex ph = std::polar(1.0, -r * t);
        w[j] = z[j] * ph;
        w[n + j] = z[n + j] * std::conj(ph);
    }
    return w;
}

TransformMaps build_transform_maps(const std::vector<FloatSeries>& gens, std::size_t n, int m) {
    TransformMaps maps;
    std::vector<FloatSeries> coords(2 * n);
    for (std::size_t v = 0; v < 2 * n; ++v) {
        FloatSeries c(n, m);
        Monomial mo(2 * n);
        mo.e[v] = 1;
        c.add_term(mo, Complex(1.0, 0.0));
        coords[v] = std::move(c);
    }
    for (const auto& L : gens) {
        std::vector<FloatSeries> fwd(2 * n), inv(2 * n);
        for (std::size_t v = 0; v < 2 * n; ++v) {
            // Coordinate functions of the time-one map of X_L and its
            // inverse: pi_v composed with the flow.
            inv[v] = lie_transform(coords[v], L, LieDirection::forward, m);
            fwd[v] = lie_transform(coords[v], L, LieDirection::inverse, m);
        }
        maps.forward.push_back(std::move(fwd));
        maps.inverse.push_back(std::move(inv));
    }
    return maps;
}

PhasePoint apply_point_map(const TransformMaps& maps, bool forward, const PhasePoint& z) {
    PhasePoint w = z;
    auto apply = [&](const std::vector<FloatSeries>& coords) {
        PhasePoint next(w.size());
        for (std::size_t v = 0; v < w.size(); ++v) next[v] = coords[v].evaluate(w);
        w = std::move(next);
    };
    if (forward) {
        for (const auto& step : maps.forward) apply(step);
    } else {
        for (auto it = maps.inverse.rbegin(); it != maps.inverse.rend(); ++it) apply(*it);
    }
    return w;
}

ClosedCurve normalized_circle_orbit(const PhasePoint& z, std::size_t k,
                                    const std::vector<FloatSeries>& gens, const IntMat& rho,
                                    int nsteps) {
    check_finite(z);
    const std::size_t n = z.size() / 2;
    if (nsteps < 16 || nsteps % 2 != 0)
        throw Error(errc::validate, "step count must be even and at least 16");
    int m = 3;
    for (const auto& g : gens) m = std::max(m, g.order());
    TransformMaps maps = build_transform_maps(gens, n, m);

    PhasePoint zn = apply_point_map(maps, true, z);
    ClosedCurve c;
    c.n = n;
    c.samples.resize(std::size_t(nsteps));
    parallel_for(std::size_t(nsteps), [&](std::size_t i) {
        double t = kTwoPi * double(i) / double(nsteps);
        c.samples[i] = apply_point_map(maps, false, linear_circle_flow(k, rho, t, zn));
    });
    // The t = 0 sample is Phi^{-1}(Phi(z)); pin it to z itself so the
    // curve starts exactly at the requested base point (the two agree to
    // truncation error).
    double drift = gap(c.samples[0], z);
    double scale = 0.0;
    for (const auto& v : z) scale = std::max(scale, std::abs(v));
    if (drift > 1e-3 * std::max(1e-12, scale))
        throw Error(errc::domain, "point map round trip drifted; point outside truncation radius");
    c.samples[0] = z;
    c.validate();
    return c;
}

ProjectionResult project_to_fiber(const ClosedCurve& c, const MomentumMap& G,
                                  const std::vector<Complex>& target, const ActionConfig& cfg) {
    c.validate();
    const std::size_t n = G.n();
    if (target.size() != n) throw Error(errc::dimension, "target has wrong arity");
    ProjectionResult out;
    out.curve = c;
    std::vector<double> residuals(c.steps(), 0.0), moved(c.steps(), 0.0);
    std::vector<int> iters(c.steps(), 0);

    parallel_for(c.steps(), [&](std::size_t s) {
        PhasePoint w = c.samples[s];
        const PhasePoint start = w;
        int it = 0;
        for (; it <= cfg.max_iter; ++it) {
            std::vector<Complex> r = G.value(w);
            double rn = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                r[i] -= target[i];
                rn += std::norm(r[i]);
            }
            rn = std::sqrt(rn);
            if (rn <= cfg.proj_tol) break;
            if (it == cfg.max_iter)
                throw Error(errc::no_converge,
                            "fiber projection did not converge; point may be near the "
                            "singular locus");
            auto Jrows = G.jacobian(w);
            Eigen::MatrixXcd J(n, 2 * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t v = 0; v < 2 * n; ++v) J(long(i), long(v)) = Jrows[i][v];
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J,
                                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& sv = svd.singularValues();
            if (sv(sv.size() - 1) < cfg.regularity_floor)
                throw Error(errc::singular,
                            "momentum map is nearly singular along the curve");
            Eigen::VectorXcd rv(n);
            for (std::size_t i = 0; i < n; ++i) rv(long(i)) = r[i];
            Eigen::VectorXcd tmp = svd.matrixU().adjoint() * rv;
            for (long i = 0; i < sv.size(); ++i)
                tmp(i) = (sv(i) > cfg.svd_rcut * sv(0)) ? tmp(i) / sv(i) : Complex(0.0, 0.0);
            Eigen::VectorXcd step = svd.matrixV() * tmp;
            for (std::size_t v = 0; v < 2 * n; ++v) w[v] -= step(long(v));
        }
        {
            std::vector<Complex> r = G.value(w);
            double rn = 0.0;
            for (std::size_t i = 0; i < n; ++i) rn += std::norm(r[i] - target[i]);
            residuals[s] = std::sqrt(rn);
        }
        moved[s] = gap(w, start);
        iters[s] = it;
        out.curve.samples[s] = std::move(w);
    });

    for (std::size_t s = 0; s < c.steps(); ++s) {
        out.max_residual = std::max(out.max_residual, residuals[s]);
        out.max_displacement = std::max(out.max_displacement, moved[s]);
        out.max_iterations = std::max(out.max_iterations, iters[s]);
    }
    out.curve.validate();
    return out;
}

Complex period_integral(const ClosedCurve& c) {
    c.validate();
    const std::size_t N = c.steps(), n = c.n;
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Complex> y(N);
        for (std::size_t i = 0; i < N; ++i) y[i] = c.samples[i][n + j];
        std::vector<Complex> dy = spectral_derivative(y);
        // Index-ordered reduction keeps the result schedule-independent.
        for (std::size_t i = 0; i < N; ++i) acc += c.samples[i][j] * dy[i];
    }
    return acc / double(N);
}

ActionResult action_function(const PhasePoint& z, std::size_t k,
                             const std::vector<FloatSeries>& gens, const IntMat& rho,
                             const MomentumMap& G, const ActionConfig& cfg) {
    ClosedCurve orbit = normalized_circle_orbit(z, k, gens, rho, cfg.nsteps);
    ProjectionResult proj = project_to_fiber(orbit, G, G.value(z), cfg);
    ActionResult out;
    out.P = period_integral(proj.curve);
    out.projection_residual = proj.max_residual;
    out.projection_displacement = proj.max_displacement;
    return out;
}

std::pair<double, double> regularity_diagnostic(const MomentumMap& G, const PhasePoint& z) {
    check_finite(z);
    const std::size_t n = G.n();
    auto Jrows = G.jacobian(z);
    Eigen::MatrixXcd J(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t v = 0; v < 2 * n; ++v) J(long(i), long(v)) = Jrows[i][v];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
    const auto& sv = svd.singularValues();
    double prod = 1.0;
    for (long i = 0; i < sv.size(); ++i) prod *= sv(i);
    return {sv(sv.size() - 1), prod};
}

}  // namespace birkhoff
