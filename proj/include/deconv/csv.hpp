#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deconv/harness.hpp"

namespace deconv {

/// Shortest round-trip decimal representation of a double (17 significant
/// digits are always enough).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Plain-text observations, one real per line, '.' decimal separator.
inline void write_data(const std::vector<double>& values, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    for (double v : values) out << format_double(v) << '\n';
    if (!out) throw io_error("write failed on '" + path + "'");
}

/// Parse a data file. Blank lines are skipped; any other line that is not a
/// single real number is an error naming the line.
inline SampleBatch read_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open data file '" + path + "'");
    SampleBatch batch;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r") + 1;
        double value = 0.0;
        const char* first = line.data() + b;
        const char* last = line.data() + e;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last)
            throw io_error(path + ":" + std::to_string(lineno) + ": not a number: '" +
                           line.substr(b, e - b) + "'");
        batch.z.push_back(value);
    }
    if (batch.z.empty()) throw io_error(path + ": no observations");
    return batch;
}

inline constexpr const char* kResultsHeader =
    "density,noise,assumed_noise,n,s2n,reps,seed,mean_ise,median_ise,sd_ise,modal_m";

inline std::string results_row(const ExperimentSpec& spec, const SummaryStats& stats) {
    std::ostringstream os;
    os << to_string(spec.density) << ',' << to_string(spec.noise) << ','
       << to_string(spec.assumed_noise.value_or(spec.noise)) << ',' << spec.n << ','
       << format_double(spec.s2n) << ',' << spec.reps << ',' << spec.seed << ','
       << format_double(stats.mean_ise) << ',' << format_double(stats.median_ise) << ','
       << format_double(stats.sd_ise) << ',' << stats.modal_m();
    return os.str();
}

inline void write_results(const ExperimentSpec& spec, const SummaryStats& stats,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << kResultsHeader << '\n' << results_row(spec, stats) << '\n';
    if (!out) throw io_error("write failed on '" + path + "'");
}

inline constexpr const char* kScoreCurveHeader = "m,contrast,pen,crit";

inline void write_score_curve(const std::vector<ModelScore>& scores, std::ostream& out) {
    out << kScoreCurveHeader << '\n';
    for (const ModelScore& s : scores)
        out << s.m << ',' << format_double(s.contrast) << ',' << format_double(s.pen) << ','
            << format_double(s.crit) << '\n';
}

inline void write_estimate(const std::vector<double>& grid, const std::vector<double>& ghat,
                           std::ostream& out) {
    out << "x,ghat\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        out << format_double(grid[i]) << ',' << format_double(ghat[i]) << '\n';
}

} // namespace deconv
