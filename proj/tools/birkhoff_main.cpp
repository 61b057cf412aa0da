#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "birkhoff/action.hpp"
#include "birkhoff/io.hpp"
#include "birkhoff/lattice.hpp"
#include "birkhoff/normalizer.hpp"
#include "birkhoff/quadratic.hpp"

namespace {

using namespace birkhoff;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(errc::io, "write failed for '" + path + "'");
}

std::string csv_report(const std::vector<ConvergenceRow>& rows) {
    std::ostringstream os;
    os << "degree,gen_maxcoef,nf_maxcoef,nf_root\n";
    for (const auto& r : rows)
        os << r.k << ',' << fmt(r.gen_max) << ',' << fmt(r.nf_max) << ',' << fmt(r.nf_root)
           << '\n';
    return os.str();
}

// Normalization in whichever arithmetic the model supports, reduced to the
// pieces every subcommand needs.
struct NormalizeRun {
    bool exact = false;
    int m = 0;
    ExactSeries N_exact;
    std::vector<ExactSeries> gens_exact;
    FloatSeries N_float;
    std::vector<FloatSeries> gens_float;
    std::vector<ConvergenceRow> rows;
};

NormalizeRun run_normalize(const SystemSpec& spec, int m) {
    NormalizeRun run;
    run.m = m;
    run.exact = spec.exact_mode();
    if (run.exact) {
        auto r = normalize(spec.H.with_order(m), m, spec.Hss_exact().with_order(m),
                           spec.Hnil_exact().with_order(m), spec.model);
        run.rows = convergence_report(r);
        run.N_exact = std::move(r.N);
        run.gens_exact = std::move(r.gens);
        run.gens_float.reserve(run.gens_exact.size());
        for (const auto& g : run.gens_exact) run.gens_float.push_back(to_float(g));
        run.N_float = to_float(run.N_exact);
    } else {
        auto r = normalize(to_float(spec.H.with_order(m)), m,
                           spec.Hss_float().with_order(m), spec.Hnil_float().with_order(m),
                           spec.model);
        run.rows = convergence_report(r);
        run.N_float = std::move(r.N);
        run.gens_float = std::move(r.gens);
    }
    return run;
}

ExactSeries series_for_output(const NormalizeRun& run, const ExactSeries& exact,
                              const FloatSeries& flt) {
    return run.exact ? exact : exactify(flt);
}

PhasePoint parse_point(const std::string& text, std::size_t n) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            vals.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(errc::parse, "bad --point value '" + tok + "'");
        }
    }
    // Per-dof pairs x_1,y_1,..,x_n,y_n; 2n reals or 4n re/im interleaved.
    PhasePoint z(2 * n, Complex(0.0, 0.0));
    if (vals.size() == 2 * n) {
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = Complex(vals[2 * j], 0.0);
            z[n + j] = Complex(vals[2 * j + 1], 0.0);
        }
    } else if (vals.size() == 4 * n) {
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = Complex(vals[4 * j], vals[4 * j + 1]);
            z[n + j] = Complex(vals[4 * j + 2], vals[4 * j + 3]);
        }
    } else {
        throw Error(errc::parse, "--point needs " + std::to_string(2 * n) + " reals or " +
                                     std::to_string(4 * n) + " re/im values");
    }
    return z;
}

// First n - q rows of rho: the coefficient vectors of the torus generators.
IntMat torus_rows(const ResonanceBasis& rb) {
    IntMat rows;
    for (std::size_t k = 0; k + rb.q < rb.n; ++k) rows.push_back(rb.rho[k]);
    return rows;
}

void print_int_rows(const char* label, const IntMat& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::cout << label << ' ' << (i + 1);
        for (const auto& v : rows[i]) std::cout << ' ' << v;
        std::cout << '\n';
    }
}

int cmd_resonance(const std::string& path) {
    SystemSpec spec = load_system_file(path);
    ResonanceBasis rb = analyze_resonance(spec.model);
    std::cout << "n " << rb.n << '\n';
    std::cout << "q " << rb.q << '\n';
    print_int_rows("mu", rb.mu);
    print_int_rows("rho", torus_rows(rb));
    for (std::size_t k = 0; k + rb.q < rb.n; ++k) {
        std::cout << "alpha " << (k + 1);
        for (std::size_t l = 0; l < rb.alpha.cols(); ++l)
            std::cout << ' ' << to_string(rb.alpha.at(k, l));
        std::cout << '\n';
    }
    auto F = torus_generators(rb.rho, rb.q, rb.n);
    for (std::size_t k = 0; k < F.size(); ++k) {
        std::cout << "F " << (k + 1) << '\n';
        std::cout << emit_series_lines(F[k]);
    }
    return 0;
}

int cmd_normalize(const std::string& path, int order, const std::string& out,
                  const std::string& diag, const std::string& gens_path) {
    SystemSpec spec = load_system_file(path);
    int m = order > 0 ? order : spec.order;
    NormalizeRun run = run_normalize(spec, m);

    SystemSpec nf;
    nf.n = spec.n;
    nf.order = m;
    nf.model = spec.model;
    nf.H = series_for_output(run, run.N_exact, run.N_float);
    for (const auto& [idx, g] : spec.integrals) {
        if (run.exact) {
            ExactSeries t = transform_function(g.with_order(m), run.gens_exact,
                                               LieDirection::forward, m);
            nf.integrals.emplace_back(idx, std::move(t));
        } else {
            FloatSeries t = transform_function(to_float(g.with_order(m)), run.gens_float,
                                               LieDirection::forward, m);
            nf.integrals.emplace_back(idx, exactify(t));
        }
    }

    std::cout << "mode " << (run.exact ? "exact" : "float") << '\n';
    std::cout << "order " << m << '\n';
    if (run.exact) {
        auto chk = check_normal_form(run.N_exact, spec.Hss_exact().with_order(m), m);
        std::cout << "normal " << (chk.is_normal ? "yes" : "no") << '\n';
        std::cout << "residual " << fmt(chk.residual.max_abs_coeff()) << '\n';
    } else {
        auto chk = check_normal_form(run.N_float, spec.Hss_float().with_order(m), m);
        double r = chk.residual.max_abs_coeff();
        std::cout << "normal " << (r <= 1e-9 ? "yes" : "no") << '\n';
        std::cout << "residual " << fmt(r) << '\n';
    }
    for (const auto& r : run.rows)
        std::cout << "degree " << r.k << " gen " << fmt(r.gen_max) << " nf " << fmt(r.nf_max)
                  << " root " << fmt(r.nf_root) << '\n';

    if (!out.empty()) write_file(out, emit_system(nf));
    if (!diag.empty()) write_file(diag, csv_report(run.rows));
    if (!gens_path.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < run.gens_float.size(); ++i) {
            os << "generator " << (i + 3) << '\n';
            os << emit_series_lines(run.exact ? run.gens_exact[i]
                                              : exactify(run.gens_float[i]));
        }
        write_file(gens_path, os.str());
    }
    return 0;
}

int cmd_transform(const std::string& path, int order, const std::string& direction,
                  const std::string& out) {
    if (direction != "forward" && direction != "inverse")
        throw Error(errc::validate, "--direction must be forward or inverse");
    LieDirection dir =
        direction == "forward" ? LieDirection::forward : LieDirection::inverse;
    SystemSpec spec = load_system_file(path);
    int m = order > 0 ? order : spec.order;
    NormalizeRun run = run_normalize(spec, m);

    SystemSpec res;
    res.n = spec.n;
    res.order = m;
    res.model = spec.model;
    if (run.exact) {
        res.H = transform_function(spec.H.with_order(m), run.gens_exact, dir, m);
        for (const auto& [idx, g] : spec.integrals)
            res.integrals.emplace_back(
                idx, transform_function(g.with_order(m), run.gens_exact, dir, m));
    } else {
        res.H = exactify(
            transform_function(to_float(spec.H.with_order(m)), run.gens_float, dir, m));
        for (const auto& [idx, g] : spec.integrals)
            res.integrals.emplace_back(
                idx, exactify(transform_function(to_float(g.with_order(m)), run.gens_float,
                                                 dir, m)));
    }
    std::string text = emit_system(res);
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return 0;
}

int cmd_check(const std::string& path, int order) {
    SystemSpec spec = load_system_file(path);
    int m = order > 0 ? order : spec.order;
    double residual = 0.0;
    bool normal = false;
    if (spec.exact_mode()) {
        auto chk = check_normal_form(spec.H.with_order(m), spec.Hss_exact().with_order(m), m);
        normal = chk.is_normal;
        residual = chk.residual.max_abs_coeff();
    } else {
        auto chk = check_normal_form(to_float(spec.H.with_order(m)),
                                     spec.Hss_float().with_order(m), m);
        residual = chk.residual.max_abs_coeff();
        normal = residual <= 1e-9;
    }
    std::cout << "normal " << (normal ? "yes" : "no") << '\n';
    std::cout << "residual " << fmt(residual) << '\n';
    return 0;
}

int cmd_actions(const std::string& path, int order, std::size_t k, const std::string& point,
                ActionConfig cfg) {
    SystemSpec spec = load_system_file(path);
    int m = order > 0 ? order : spec.order;
    PhasePoint z = parse_point(point, spec.n);

    ResonanceBasis rb = analyze_resonance(spec.model);
    IntMat rho = torus_rows(rb);
    if (k < 1 || k > rho.size())
        throw Error(errc::validate,
                    "--k out of range; this system has " + std::to_string(rho.size()) +
                        " torus generators");

    if (spec.integrals.size() + 1 != spec.n)
        throw Error(errc::validate, "actions needs first integrals G_2..G_n in the file");

    NormalizeRun run = run_normalize(spec, m);

    std::vector<FloatSeries> G;
    G.push_back(to_float(spec.H.with_order(m)));
    for (const auto& [idx, g] : spec.integrals) G.push_back(to_float(g.with_order(m)));
    MomentumMap mm(G);

    ActionResult ar = action_function(z, k - 1, run.gens_float, rho, mm, cfg);

    ExactSeries Fk = torus_generators(rb.rho, rb.q, rb.n, m)[k - 1];
    FloatSeries Fkm =
        transform_function(to_float(Fk.with_order(m)), run.gens_float, LieDirection::inverse, m);
    Complex predicted = Complex(0.0, 1.0) * Fkm.evaluate(z);

    auto [smin, wedge] = regularity_diagnostic(mm, z);

    std::cout << "P " << format_complex(ar.P) << '\n';
    std::cout << "predicted " << format_complex(predicted) << '\n';
    std::cout << "deviation " << fmt(std::abs(ar.P - predicted)) << '\n';
    std::cout << "projection_residual " << fmt(ar.projection_residual) << '\n';
    std::cout << "projection_displacement " << fmt(ar.projection_displacement) << '\n';
    std::cout << "sigma_min " << fmt(smin) << '\n';
    std::cout << "wedge " << fmt(wedge) << '\n';
    return 0;
}

int cmd_diagnose(const std::string& path, int order, const std::string& diag) {
    SystemSpec spec = load_system_file(path);
    int m = order > 0 ? order : spec.order;

    std::cout << "mode " << (spec.exact_mode() ? "exact" : "float") << '\n';
    std::cout << "dof " << spec.n << '\n';
    for (std::size_t j = 0; j < spec.n; ++j) {
        if (spec.exact_mode())
            std::cout << "gamma " << (j + 1) << ' ' << to_string(spec.model.gamma_exact(j))
                      << '\n';
        else
            std::cout << "gamma " << (j + 1) << ' '
                      << format_complex(spec.model.gamma_numeric(j)) << '\n';
    }
    ResonanceBasis rb = analyze_resonance(spec.model);
    std::cout << "q " << rb.q << '\n';

    bool nil_zero = spec.exact_mode() ? spec.Hnil_exact().is_zero()
                                      : spec.Hnil_float().is_zero();
    std::cout << "nilpotent_part " << (nil_zero ? "zero" : "nonzero") << '\n';

    NormalizeRun run = run_normalize(spec, m);
    std::string csv = csv_report(run.rows);
    if (diag.empty())
        std::cout << csv;
    else
        write_file(diag, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birkhoff normal forms, resonance lattices, and action integrals"};
    app.require_subcommand(1);

    std::string file, out, diag, gens_path, direction = "forward", point;
    int order = 0;
    std::size_t k = 1;
    ActionConfig cfg;

    auto add_file = [&](CLI::App* sub) {
        sub->add_option("file", file, "system file")->required();
        sub->add_option("--order", order, "truncation order (defaults to the file's)");
    };

    CLI::App* res = app.add_subcommand("resonance", "resonance lattice and torus generators");
    res->add_option("file", file, "system file")->required();

    CLI::App* nrm = app.add_subcommand("normalize", "compute the Birkhoff normal form");
    add_file(nrm);
    nrm->add_option("--out", out, "write the normal form system file here");
    nrm->add_option("--diag", diag, "write the convergence CSV here");
    nrm->add_option("--gens", gens_path, "write the Lie generators here");

    CLI::App* trf = app.add_subcommand("transform", "push the system through the Lie maps");
    add_file(trf);
    trf->add_option("--direction", direction, "forward or inverse");
    trf->add_option("--out", out, "output file (stdout if omitted)");

    CLI::App* chk = app.add_subcommand("check", "test whether H commutes with H_ss");
    add_file(chk);

    CLI::App* act = app.add_subcommand("actions", "evaluate an action function");
    add_file(act);
    act->add_option("--k", k, "torus generator index (1-based)");
    act->add_option("--point", point, "base point, per-dof pairs x1,y1,..")->required();
    act->add_option("--steps", cfg.nsteps, "orbit samples");
    act->add_option("--tol", cfg.proj_tol, "projection tolerance");
    act->add_option("--max-iter", cfg.max_iter, "projection iteration cap");
    act->add_option("--floor", cfg.regularity_floor, "regularity floor");

    CLI::App* dia = app.add_subcommand("diagnose", "spectral split and convergence report");
    add_file(dia);
    dia->add_option("--diag", diag, "write the convergence CSV here (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (res->parsed()) return cmd_resonance(file);
        if (nrm->parsed()) return cmd_normalize(file, order, out, diag, gens_path);
        if (trf->parsed()) return cmd_transform(file, order, direction, out);
        if (chk->parsed()) return cmd_check(file, order);
        if (act->parsed()) return cmd_actions(file, order, k, point, cfg);
        if (dia->parsed()) return cmd_diagnose(file, order, diag);
    } catch (const birkhoff::Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: E_INTERNAL: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
