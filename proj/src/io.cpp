#include "birkhoff/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace birkhoff {

namespace {

ExactSeries diagonal_quadratic(const FrequencyModel& model, int order) {
    BIRKHOFF_ASSERT(model.rational_valued(), "exact split needs a rational-valued model");
    ExactSeries s(model.n, order);
    for (std::size_t j = 0; j < model.n; ++j) {
        Monomial m(2 * model.n);
        m.e[j] = 1;
        m.e[model.n + j] = 1;
        s.add_term(m, model.gamma_exact(j));
    }
    return s;
}

struct LineTokens {
    std::size_t line_no;
    std::vector<std::string> tokens;
    std::vector<std::size_t> cols;  // 1-based column of each token
};

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << what;
    throw Error(errc::parse, os.str());
}

long parse_long(const LineTokens& lt, std::size_t idx, const char* what) {
    const std::string& t = lt.tokens[idx];
    try {
        std::size_t pos = 0;
        long v = std::stol(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        fail(lt.line_no, lt.cols[idx], std::string("expected ") + what + ", got '" + t + "'");
    }
}

double parse_double(const LineTokens& lt, std::size_t idx, const char* what) {
    const std::string& t = lt.tokens[idx];
    try {
        std::size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        fail(lt.line_no, lt.cols[idx], std::string("expected ") + what + ", got '" + t + "'");
    }
}

GaussianRational parse_coeff(const LineTokens& lt, std::size_t idx) {
    try {
        return parse_gaussian(lt.tokens[idx]);
    } catch (const Error& e) {
        fail(lt.line_no, lt.cols[idx], e.what());
    }
}

}  // namespace

ExactSeries SystemSpec::Hss_exact() const { return diagonal_quadratic(model, order); }

ExactSeries SystemSpec::Hnil_exact() const {
    return (H.degree_part(2) - Hss_exact()).with_order(order);
}

FloatSeries SystemSpec::Hss_float() const {
    FloatSeries s(n, order);
    for (std::size_t j = 0; j < n; ++j) {
        Monomial m(2 * n);
        m.e[j] = 1;
        m.e[n + j] = 1;
        s.add_term(m, model.gamma_numeric(j));
    }
    return s;
}

FloatSeries SystemSpec::Hnil_float() const {
    FloatSeries nil = (to_float(H.degree_part(2)) - Hss_float()).with_order(order);
    // Sub-tolerance diagonal residue is declaration rounding, not dynamics.
    double scale = std::max(1.0, to_float(H.degree_part(2)).max_abs_coeff());
    FloatSeries cleaned(n, order);
    for (const auto& [m, c] : nil.terms())
        if (std::abs(c) > 1e-9 * scale) cleaned.add_term(m, c);
    return cleaned;
}

SystemSpec parse_system(const std::string& text) {
    SystemSpec spec;
    bool have_dof = false, have_basis = false, have_order = false;
    std::size_t d = 0;
    std::vector<std::vector<GaussianRational>> freq_rows;   // row j, d entries
    std::vector<bool> freq_seen;
    std::vector<Complex> numeric;
    std::vector<bool> numeric_seen;
    struct RawTerm {
        GaussianRational c;
        Monomial m;
    };
    std::vector<RawTerm> h_terms;
    std::vector<std::pair<std::size_t, std::vector<RawTerm>>> integral_blocks;
    std::vector<RawTerm>* sink = &h_terms;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    auto tokenize = [&](const std::string& s) {
        LineTokens lt;
        lt.line_no = line_no;
        std::size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            if (i >= s.size() || s[i] == '#') break;
            std::size_t start = i;
            while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            lt.tokens.push_back(s.substr(start, i - start));
            lt.cols.push_back(start + 1);
        }
        return lt;
    };

    auto handle_freq = [&](const LineTokens& lt) {
        if (!have_dof) fail(lt.line_no, lt.cols[0], "freq before dof");
        if (!have_basis) fail(lt.line_no, lt.cols[0], "freq before freqbasis");
        long j = parse_long(lt, 1, "frequency index");
        if (j < 1 || std::size_t(j) > spec.n)
            fail(lt.line_no, lt.cols[1], "frequency index out of range");
        if (lt.tokens.size() != 2 + d)
            fail(lt.line_no, lt.cols[0], "freq needs one coordinate per basis element");
        std::vector<GaussianRational> row(d);
        for (std::size_t l = 0; l < d; ++l) row[l] = parse_coeff(lt, 2 + l);
        if (freq_seen[std::size_t(j) - 1])
            fail(lt.line_no, lt.cols[1], "duplicate freq line");
        freq_seen[std::size_t(j) - 1] = true;
        freq_rows[std::size_t(j) - 1] = std::move(row);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        LineTokens lt = tokenize(raw);
        if (lt.tokens.empty()) continue;
        const std::string& key = lt.tokens[0];
        auto need = [&](std::size_t count) {
            if (lt.tokens.size() != count)
                fail(lt.line_no, lt.cols[0], "'" + key + "' takes " + std::to_string(count - 1) +
                                                 " arguments");
        };
        if (key == "dof") {
            need(2);
            long v = parse_long(lt, 1, "degrees of freedom");
            if (v < 1 || v > 64) fail(lt.line_no, lt.cols[1], "dof out of range [1, 64]");
            if (have_dof) fail(lt.line_no, lt.cols[0], "duplicate dof line");
            spec.n = std::size_t(v);
            have_dof = true;
        } else if (key == "order") {
            need(2);
            long v = parse_long(lt, 1, "truncation order");
            if (v < 2 || v > 64) fail(lt.line_no, lt.cols[1], "order out of range [2, 64]");
            if (have_order) fail(lt.line_no, lt.cols[0], "duplicate order line");
            spec.order = int(v);
            have_order = true;
        } else if (key == "freqbasis") {
            need(2);
            long v = parse_long(lt, 1, "basis dimension");
            if (v < 1 || v > 16) fail(lt.line_no, lt.cols[1], "freqbasis out of range [1, 16]");
            if (have_basis) fail(lt.line_no, lt.cols[0], "duplicate freqbasis line");
            if (!have_dof) fail(lt.line_no, lt.cols[0], "freqbasis before dof");
            d = std::size_t(v);
            have_basis = true;
            freq_rows.assign(spec.n, std::vector<GaussianRational>(d));
            freq_seen.assign(spec.n, false);
            numeric.assign(d, Complex(0.0, 0.0));
            numeric_seen.assign(d, false);
        } else if (key == "freq") {
            if (lt.tokens.size() < 2) fail(lt.line_no, lt.cols[0], "freq needs an index");
            handle_freq(lt);
        } else if (key == "numericfreq") {
            need(4);
            if (!have_basis) fail(lt.line_no, lt.cols[0], "numericfreq before freqbasis");
            long l = parse_long(lt, 1, "basis index");
            if (l < 1 || std::size_t(l) > d)
                fail(lt.line_no, lt.cols[1], "basis index out of range");
            if (numeric_seen[std::size_t(l) - 1])
                fail(lt.line_no, lt.cols[1], "duplicate numericfreq line");
            numeric_seen[std::size_t(l) - 1] = true;
            numeric[std::size_t(l) - 1] =
                Complex(parse_double(lt, 2, "real part"), parse_double(lt, 3, "imaginary part"));
        } else if (key == "term") {
            if (!have_dof) fail(lt.line_no, lt.cols[0], "term before dof");
            // term <coeff> : e_1 .. e_2n
            if (lt.tokens.size() != 3 + 2 * spec.n || lt.tokens[2] != ":")
                fail(lt.line_no, lt.cols[0],
                     "term needs a coefficient, ':', and " + std::to_string(2 * spec.n) +
                         " exponents");
            RawTerm t;
            t.c = parse_coeff(lt, 1);
            t.m = Monomial(2 * spec.n);
            for (std::size_t e = 0; e < 2 * spec.n; ++e) {
                long v = parse_long(lt, 3 + e, "exponent");
                if (v < 0 || v > 60) fail(lt.line_no, lt.cols[3 + e], "exponent out of range");
                t.m.e[e] = std::uint16_t(v);
            }
            sink->push_back(std::move(t));
        } else if (key == "integral") {
            need(2);
            if (!have_dof) fail(lt.line_no, lt.cols[0], "integral before dof");
            long i = parse_long(lt, 1, "integral index");
            if (i < 2 || std::size_t(i) > spec.n)
                fail(lt.line_no, lt.cols[1], "integral index out of range [2, dof]");
            for (const auto& blk : integral_blocks)
                if (blk.first == std::size_t(i))
                    fail(lt.line_no, lt.cols[1], "duplicate integral index");
            integral_blocks.emplace_back(std::size_t(i), std::vector<RawTerm>{});
            sink = &integral_blocks.back().second;
        } else {
            fail(lt.line_no, lt.cols[0], "unknown directive '" + key + "'");
        }
    }

    if (!have_dof) throw Error(errc::parse, "missing dof line");
    if (!have_basis) throw Error(errc::parse, "missing freqbasis line");
    for (std::size_t j = 0; j < spec.n; ++j)
        if (!freq_seen[j])
            throw Error(errc::parse, "missing freq line for index " + std::to_string(j + 1));
    bool any_numeric = false, all_numeric = true;
    for (std::size_t l = 0; l < d; ++l) {
        any_numeric = any_numeric || numeric_seen[l];
        all_numeric = all_numeric && numeric_seen[l];
    }
    if (any_numeric && !all_numeric)
        throw Error(errc::parse, "numericfreq must cover every basis element or none");

    ExactMatrix C(spec.n, d);
    for (std::size_t j = 0; j < spec.n; ++j)
        for (std::size_t l = 0; l < d; ++l) C.at(j, l) = freq_rows[j][l];
    spec.model = FrequencyModel(spec.n, d, std::move(C),
                                any_numeric ? numeric : std::vector<Complex>{});

    // The order line is a floor; terms of higher degree raise the
    // truncation so nothing silently drops.
    for (const auto& t : h_terms) spec.order = std::max(spec.order, t.m.degree());
    for (const auto& blk : integral_blocks)
        for (const auto& t : blk.second) spec.order = std::max(spec.order, t.m.degree());

    spec.H = ExactSeries(spec.n, spec.order);
    for (const auto& t : h_terms) spec.H.add_term(t.m, t.c);
    for (auto& blk : integral_blocks) {
        ExactSeries g(spec.n, spec.order);
        for (const auto& t : blk.second) g.add_term(t.m, t.c);
        spec.integrals.emplace_back(blk.first, std::move(g));
    }

    // Semantic validation. A term-free file is a pure lattice description
    // and skips the quadratic checks.
    if (!spec.H.degree_part(0).is_zero() || !spec.H.degree_part(1).is_zero())
        throw Error(errc::validate, "Hamiltonian must vanish to second order at the origin");
    if (spec.H.is_zero() && spec.integrals.empty()) return spec;
    if (!spec.exact_mode() && spec.model.numeric.empty())
        throw Error(errc::validate,
                    "non-rational frequency models need numericfreq values");
    if (spec.exact_mode()) {
        // Declared split must leave a nilpotent linear part; from_declared
        // throws otherwise.
        QuadraticData::from_declared(spec.H.degree_part(2).with_order(2),
                                     spec.Hss_exact().with_order(2));
    } else {
        FloatSeries H2 = to_float(spec.H.degree_part(2));
        FloatSeries diff = H2 - spec.Hss_float();
        double scale = std::max(1.0, H2.max_abs_coeff());
        // Diagonal part must match the declared frequencies; the rest must
        // be nilpotent.
        for (std::size_t j = 0; j < spec.n; ++j) {
            Monomial m(2 * spec.n);
            m.e[j] = 1;
            m.e[spec.n + j] = 1;
            if (std::abs(diff.coefficient(m)) > 1e-9 * scale)
                throw Error(errc::validate,
                            "quadratic part disagrees with the declared frequencies");
        }
        if (!is_nilpotent(hamiltonian_matrix(spec.Hnil_float().with_order(2)), 1e-8))
            throw Error(errc::validate,
                        "quadratic part minus declared semisimple part is not nilpotent");
    }
    return spec;
}

SystemSpec load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::io, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

std::string emit_series_lines(const ExactSeries& A) {
    std::ostringstream os;
    for (const auto& [m, c] : A.terms()) {
        os << "term " << to_string(c) << " :";
        for (auto e : m.e) os << ' ' << e;
        os << '\n';
    }
    return os.str();
}

std::string emit_system(const SystemSpec& spec) {
    std::ostringstream os;
    os << "dof " << spec.n << '\n';
    os << "order " << spec.order << '\n';
    os << "freqbasis " << spec.model.d << '\n';
    for (std::size_t j = 0; j < spec.n; ++j) {
        os << "freq " << (j + 1);
        for (std::size_t l = 0; l < spec.model.d; ++l)
            os << ' ' << to_string(spec.model.C.at(j, l));
        os << '\n';
    }
    if (!spec.model.numeric.empty()) {
        os << std::setprecision(17);
        for (std::size_t l = 0; l < spec.model.d; ++l)
            os << "numericfreq " << (l + 1) << ' ' << spec.model.numeric[l].real() << ' '
               << spec.model.numeric[l].imag() << '\n';
    }
    os << emit_series_lines(spec.H);
    for (const auto& [idx, g] : spec.integrals) {
        os << "integral " << idx << '\n';
        os << emit_series_lines(g);
    }
    return os.str();
}

ExactSeries exactify(const FloatSeries& A) {
    ExactSeries out(A.n(), A.order());
    for (const auto& [m, c] : A.terms())
        out.add_term(m, GaussianRational(Rational(c.real()), Rational(c.imag())));
    return out;
}

std::string format_complex(const Complex& c) {
    std::ostringstream os;
    os << std::setprecision(17) << c.real();
    if (c.imag() >= 0 || std::isnan(c.imag()))
        os << " + " << c.imag() << "i";
    else
        os << " - " << -c.imag() << "i";
    return os.str();
}

}  // namespace birkhoff
