// Command-line front end: adaptive deconvolution estimates, selection
// diagnostics and Monte Carlo experiments, all emitting CSV.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "deconv/deconv.hpp"

namespace {

constexpr int kExitBadFlags = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNumerical = 4;

deconv::NoiseKind parse_noise(const std::string& s) {
    if (s == "laplace") return deconv::NoiseKind::Laplace;
    if (s == "gaussian" || s == "gauss") return deconv::NoiseKind::Gaussian;
    if (s == "none") return deconv::NoiseKind::NoNoise;
    throw CLI::ValidationError("--noise", "unknown noise kind '" + s + "'");
}

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int pts = 0;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    char colon1 = 0, colon2 = 0;
    std::istringstream is(s);
    if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.pts) || colon1 != ':' || colon2 != ':' ||
        !is.eof() || g.pts < 2 || !(g.hi > g.lo))
        throw CLI::ValidationError("--grid", "expected lo:hi:pts with hi>lo, pts>=2, got '" + s + "'");
    return g;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw deconv::io_error("cannot open '" + path + "' for writing");
    return file;
}

int run_estimate(const std::string& data_path, const std::string& noise, double sigma, int kn,
                 std::optional<int> m_cap, const std::string& grid_str, const std::string& out_path,
                 double pen_scale) {
    const deconv::SampleBatch sample = deconv::read_data(data_path);
    const deconv::NoiseModel model = deconv::NoiseModel::make(parse_noise(noise), sigma);
    deconv::PenaltyConfig cfg = deconv::PenaltyConfig::calibrated();
    cfg.scale = pen_scale;
    const deconv::SelectionResult sel = deconv::select(sample, model, cfg, kn, m_cap);

    GridSpec grid;
    if (!grid_str.empty()) {
        grid = parse_grid(grid_str);
    } else {
        grid.lo = *std::min_element(sample.z.begin(), sample.z.end()) - 1.0;
        grid.hi = *std::max_element(sample.z.begin(), sample.z.end()) + 1.0;
        grid.pts = 512;
    }
    std::vector<double> xs(grid.pts);
    const double h = (grid.hi - grid.lo) / (grid.pts - 1);
    for (int i = 0; i < grid.pts; ++i) xs[i] = grid.lo + h * i;
    const std::vector<double> ghat = deconv::evaluate(sel.coefficients, xs);

    std::cout << "m_hat=" << sel.chosen.m << "\n";
    std::ofstream file;
    deconv::write_estimate(xs, ghat, open_out(file, out_path));
    return 0;
}

int run_simulate(deconv::ExperimentSpec spec, const std::string& out_path) {
    const deconv::SummaryStats stats = deconv::run_experiment(spec);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << deconv::kResultsHeader << '\n' << deconv::results_row(spec, stats) << '\n';
    if (stats.failed > 0)
        std::cerr << "warning: " << stats.failed << " replications failed\n";
    return 0;
}

int run_misspec(deconv::ExperimentSpec spec, const std::string& out_path) {
    const double ratio = deconv::misspecification_ratio(spec);
    std::cout << "ratio=" << deconv::format_double(ratio) << "\n";
    if (!out_path.empty()) {
        const deconv::SummaryStats wrong = deconv::run_experiment(spec);
        deconv::ExperimentSpec correct = spec;
        correct.assumed_noise = spec.noise;
        const deconv::SummaryStats right = deconv::run_experiment(correct);
        std::ofstream file(out_path);
        if (!file) throw deconv::io_error("cannot open '" + out_path + "' for writing");
        file << deconv::kResultsHeader << '\n'
             << deconv::results_row(spec, wrong) << '\n'
             << deconv::results_row(correct, right) << '\n';
    }
    return 0;
}

int run_score_curve(const std::string& data_path, const std::string& noise, double sigma, int kn,
                    std::optional<int> m_cap, const std::string& out_path, double pen_scale) {
    const deconv::SampleBatch sample = deconv::read_data(data_path);
    const deconv::NoiseModel model = deconv::NoiseModel::make(parse_noise(noise), sigma);
    deconv::PenaltyConfig cfg = deconv::PenaltyConfig::calibrated();
    cfg.scale = pen_scale;
    const deconv::SelectionResult sel = deconv::select(sample, model, cfg, kn, m_cap);
    std::cout << "m_hat=" << sel.chosen.m << "\n";
    std::ofstream file;
    deconv::write_score_curve(sel.scores, open_out(file, out_path));
    return 0;
}

int run_penalty_curve(const std::string& noise, double sigma, long n, std::optional<int> m_cap,
                      const std::string& mode, double a, double pen_scale,
                      const std::string& out_path) {
    const deconv::NoiseModel model = deconv::NoiseModel::make(parse_noise(noise), sigma);
    deconv::PenaltyConfig cfg;
    cfg.mode = (mode == "theoretical") ? deconv::PenaltyMode::TheoreticalEq3
                                       : deconv::PenaltyMode::PracticalSec51;
    cfg.a = a;
    cfg.scale = pen_scale;
    const int top = deconv::m_max(model, n, m_cap);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    out << "m,pen\n";
    for (int m = 1; m <= top; ++m) {
        double pen;
        try {
            pen = deconv::penalty(model, m, n, cfg);
        } catch (const deconv::numerical_error&) {
            break; // overflow: this and larger m are out of range
        }
        out << m << ',' << deconv::format_double(pen) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive density deconvolution: sinc-projection estimator with penalized "
                 "model selection"};
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate a density from a data file");
    std::string est_data, est_noise = "none", est_grid, est_out;
    double est_sigma = 0.0, est_pen_scale = deconv::kCalibratedPenaltyScale;
    int est_kn = 256;
    std::optional<int> est_cap;
    est->add_option("--data", est_data, "observations, one real per line")->required();
    est->add_option("--noise", est_noise, "laplace|gaussian|none");
    est->add_option("--sigma", est_sigma, "noise level sigma >= 0")
        ->check(CLI::NonNegativeNumber);
    est->add_option("--kn", est_kn, "coefficient truncation K_n")->check(CLI::PositiveNumber);
    est->add_option("--m-cap", est_cap, "upper cap on the model dimension");
    est->add_option("--grid", est_grid, "evaluation grid lo:hi:pts");
    est->add_option("--out", est_out, "estimate CSV path (default: stdout)");
    est->add_option("--pen-scale", est_pen_scale, "penalty scale factor")
        ->check(CLI::PositiveNumber);

    // shared experiment flags
    auto add_experiment_flags = [](CLI::App* cmd, std::string& density, std::string& noise,
                                   deconv::ExperimentSpec& spec, std::string& out) {
        cmd->add_option("--density", density, "a|b|c|d|e|f or name")->required();
        cmd->add_option("--noise", noise, "laplace|gaussian")->required();
        cmd->add_option("--n", spec.n, "sample size per replication")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--s2n", spec.s2n, "signal-to-noise ratio 1/sigma^2")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--reps", spec.reps, "number of replications")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", spec.seed, "experiment seed")->required();
        cmd->add_option("--kn", spec.k_n, "coefficient truncation K_n")->check(CLI::PositiveNumber);
        cmd->add_option("--grid-points", spec.grid_points, "ISE grid points")
            ->check(CLI::Range(2, 1 << 20));
        cmd->add_option("--m-cap", spec.m_cap, "upper cap on the model dimension");
        cmd->add_option("--pen-scale", spec.penalty.scale, "penalty scale factor")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", out, "results CSV path (default: stdout)");
    };

    auto* sim = app.add_subcommand("simulate", "Monte Carlo experiment, one results row");
    std::string sim_density, sim_noise, sim_out;
    deconv::ExperimentSpec sim_spec;
    add_experiment_flags(sim, sim_density, sim_noise, sim_spec, sim_out);

    auto* mis = app.add_subcommand("misspec", "MISE ratio under a misspecified noise family");
    std::string mis_density, mis_noise, mis_out, mis_assumed;
    deconv::ExperimentSpec mis_spec;
    add_experiment_flags(mis, mis_density, mis_noise, mis_spec, mis_out);
    mis->add_option("--assumed", mis_assumed, "noise family handed to the estimator")->required();

    auto* score = app.add_subcommand("score-curve", "Selection criterion per candidate dimension");
    std::string sc_data, sc_noise = "none", sc_out;
    double sc_sigma = 0.0, sc_pen_scale = deconv::kCalibratedPenaltyScale;
    int sc_kn = 256;
    std::optional<int> sc_cap;
    score->add_option("--data", sc_data, "observations, one real per line")->required();
    score->add_option("--noise", sc_noise, "laplace|gaussian|none");
    score->add_option("--sigma", sc_sigma, "noise level sigma >= 0")->check(CLI::NonNegativeNumber);
    score->add_option("--kn", sc_kn, "coefficient truncation K_n")->check(CLI::PositiveNumber);
    score->add_option("--m-cap", sc_cap, "upper cap on the model dimension");
    score->add_option("--out", sc_out, "score CSV path (default: stdout)");
    score->add_option("--pen-scale", sc_pen_scale, "penalty scale factor")->check(CLI::PositiveNumber);

    auto* penc = app.add_subcommand("penalty-curve", "Penalty values per candidate dimension");
    std::string pc_noise, pc_mode = "practical", pc_out;
    double pc_sigma = 0.0, pc_a = 1.5, pc_pen_scale = 1.0;
    long pc_n = 0;
    std::optional<int> pc_cap;
    penc->add_option("--noise", pc_noise, "laplace|gaussian|none")->required();
    penc->add_option("--sigma", pc_sigma, "noise level sigma >= 0")
        ->required()
        ->check(CLI::NonNegativeNumber);
    penc->add_option("--n", pc_n, "sample size")->required()->check(CLI::PositiveNumber);
    penc->add_option("--m-cap", pc_cap, "upper cap on the model dimension");
    penc->add_option("--mode", pc_mode, "practical|theoretical");
    penc->add_option("--a", pc_a, "constant of the theoretical penalty");
    penc->add_option("--pen-scale", pc_pen_scale, "penalty scale factor")->check(CLI::PositiveNumber);
    penc->add_option("--out", pc_out, "penalty CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitBadFlags;
    }

    try {
        if (*est) return run_estimate(est_data, est_noise, est_sigma, est_kn, est_cap, est_grid,
                                      est_out, est_pen_scale);
        if (*sim) {
            sim_spec.density = deconv::parse_density(sim_density);
            sim_spec.noise = parse_noise(sim_noise);
            return run_simulate(sim_spec, sim_out);
        }
        if (*mis) {
            mis_spec.density = deconv::parse_density(mis_density);
            mis_spec.noise = parse_noise(mis_noise);
            mis_spec.assumed_noise = parse_noise(mis_assumed);
            return run_misspec(mis_spec, mis_out);
        }
        if (*score) return run_score_curve(sc_data, sc_noise, sc_sigma, sc_kn, sc_cap, sc_out,
                                           sc_pen_scale);
        if (*penc) return run_penalty_curve(pc_noise, pc_sigma, pc_n, pc_cap, pc_mode, pc_a,
                                            pc_pen_scale, pc_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadFlags;
    } catch (const deconv::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const deconv::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::overflow_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadFlags;
    }
    return 0;
}
