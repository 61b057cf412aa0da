#pragma once

#include <string>
#include <utility>
#include <vector>

#include "birkhoff/frequency.hpp"
#include "birkhoff/quadratic.hpp"
#include "birkhoff/series.hpp"

namespace birkhoff {

// A parsed and validated system file. The quadratic split is derived from
// the declared frequency model: H_ss = sum gamma_j x_j y_j, H_nil the
// rest, which must have a nilpotent linear part. Exact splits exist only
// for rational-valued models; float splits always.
struct SystemSpec {
    std::size_t n = 0;
    int order = 6;
    FrequencyModel model;
    ExactSeries H;
    std::vector<std::pair<std::size_t, ExactSeries>> integrals;  // (index, series)

    bool exact_mode() const { return model.rational_valued(); }

    // Exact split (only when exact_mode()).
    ExactSeries Hss_exact() const;
    ExactSeries Hnil_exact() const;

    // Float split (always; numeric frequencies required when not exact).
    FloatSeries Hss_float() const;
    FloatSeries Hnil_float() const;
};

// Line-oriented format:
//   dof <n>
//   order <m>
//   freqbasis <d>
//   freq <j> <re_p/re_q>,<im_p/im_q> ... (d entries)
//   numericfreq <l> <re> <im>
//   term <re_p/re_q>,<im_p/im_q> : a_1 .. a_n b_1 .. b_n
//   integral <i>    (term lines that follow belong to integral i)
//   # comment
SystemSpec parse_system(const std::string& text);
SystemSpec load_system_file(const std::string& path);

std::string emit_system(const SystemSpec& spec);

// Series emission used for normal-form output; terms in canonical order.
std::string emit_series_lines(const ExactSeries& A);

// Doubles are binary rationals, so a float series embeds exactly into the
// rational term grammar; parsing the result reproduces the doubles bit for
// bit.
ExactSeries exactify(const FloatSeries& A);

std::string format_complex(const Complex& c);

}  // namespace birkhoff
