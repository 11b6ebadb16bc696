#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "deconv/densities.hpp"
#include "deconv/selection.hpp"

namespace deconv {

/// Worker count: explicit argument wins, then DECONV_THREADS, then the
/// hardware concurrency.
inline unsigned worker_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DECONV_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace detail {

// Index-parallel loop; each index is processed exactly once, results must be
// written to per-index slots so the schedule cannot affect the outcome.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = std::min<std::size_t>(std::max(1u, workers), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace detail

/// Trapezoidal ISE of the estimate against the target over the target's
/// interval, measured in the target's source-variable frame: with
/// X = source/s, ISE = (1/s) * int_{I/s} (ghat - g)^2.
inline double ise(const CoefficientSet& coeffs, const TargetDensity& density, int grid_points = 512) {
    if (grid_points < 2) throw std::invalid_argument("ise: grid_points must be >= 2");
    const double s = density.source_scale;
    const double lo = density.lo / s, hi = density.hi / s;
    std::vector<double> grid(grid_points);
    const double h = (hi - lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) grid[i] = lo + h * i;
    const std::vector<double> ghat = evaluate(coeffs, grid);
    double acc = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double d = ghat[i] - pdf(density, grid[i]);
        const double w = (i == 0 || i == grid_points - 1) ? 0.5 : 1.0;
        acc += w * d * d;
    }
    return acc * h / s;
}

/// A Monte Carlo experiment: `reps` replications of estimating `density`
/// from n observations contaminated by `noise` at level sigma = 1/sqrt(s2n).
/// `assumed_noise`, when set, is the (possibly wrong) model handed to the
/// estimator; data generation always uses `noise`.
struct ExperimentSpec {
    DensityId density = DensityId::Chi2Type;
    NoiseKind noise = NoiseKind::Laplace;
    double s2n = 10.0;
    long n = 100;
    int reps = 500;
    std::uint64_t seed = 1;
    int k_n = 256;
    int grid_points = 512;
    PenaltyConfig penalty = PenaltyConfig::calibrated();
    std::optional<NoiseKind> assumed_noise;
    std::optional<int> m_cap;

    double sigma() const { return 1.0 / std::sqrt(s2n); }

    void validate() const {
        if (!(s2n > 0.0)) throw std::invalid_argument("ExperimentSpec: s2n must be > 0");
        if (n < 1 || reps < 1) throw std::invalid_argument("ExperimentSpec: n and reps must be >= 1");
        penalty.validate();
    }
};

struct SummaryStats {
    double mean_ise = 0.0;
    double median_ise = 0.0;
    double sd_ise = 0.0;
    std::map<int, int> selected_m_histogram;
    int failed = 0;

    int modal_m() const {
        int best = 0, cnt = -1;
        for (const auto& [m, c] : selected_m_histogram)
            if (c > cnt) { best = m; cnt = c; } // map order breaks ties by smallest m
        return best;
    }
};

namespace detail {

struct RepOutcome {
    double ise = 0.0;
    int m = 0;
    bool ok = false;
};

// One replication: derive the stream, draw X and eps, select with the
// assumed model, score the fit.
inline RepOutcome run_replication(const ExperimentSpec& spec, const TargetDensity& target,
                                  const NoiseModel& assumed, int rep) {
    RandomStream rng = RandomStream::for_replication(spec.seed, static_cast<std::uint64_t>(rep));
    SampleBatch sample;
    sample.z = sample_target(target, static_cast<std::size_t>(spec.n), rng);
    const std::vector<double> eps = sample_noise(spec.noise, static_cast<std::size_t>(spec.n), rng);
    const double sigma = spec.sigma();
    for (std::size_t i = 0; i < sample.z.size(); ++i) sample.z[i] += sigma * eps[i];
    RepOutcome out;
    const SelectionResult sel = select(sample, assumed, spec.penalty, spec.k_n, spec.m_cap);
    out.ise = ise(sel.coefficients, target, spec.grid_points);
    out.m = sel.chosen.m;
    out.ok = true;
    return out;
}

inline SummaryStats summarize(const std::vector<RepOutcome>& outcomes, int reps) {
    SummaryStats stats;
    std::vector<double> ises;
    ises.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++stats.failed;
            continue;
        }
        ises.push_back(o.ise);
        ++stats.selected_m_histogram[o.m];
    }
    if (stats.failed > 0 && stats.failed * 100 > reps)
        throw numerical_error("experiment: " + std::to_string(stats.failed) + " of " +
                              std::to_string(reps) + " replications failed (>1%)");
    if (ises.empty()) throw numerical_error("experiment: all replications failed");
    double sum = 0.0;
    for (double v : ises) sum += v;
    stats.mean_ise = sum / static_cast<double>(ises.size());
    double ss = 0.0;
    for (double v : ises) ss += (v - stats.mean_ise) * (v - stats.mean_ise);
    stats.sd_ise = ises.size() > 1 ? std::sqrt(ss / static_cast<double>(ises.size() - 1)) : 0.0;
    std::sort(ises.begin(), ises.end());
    const std::size_t h = ises.size() / 2;
    stats.median_ise = (ises.size() % 2 == 1) ? ises[h] : 0.5 * (ises[h - 1] + ises[h]);
    return stats;
}

} // namespace detail

/// Run the experiment; the result is independent of the worker count
/// (replication streams are keyed by (seed, rep), aggregation by rep index).
/// Fails if more than 1% of replications report numerical failures.
inline SummaryStats run_experiment(const ExperimentSpec& spec, unsigned workers = 0) {
    spec.validate();
    const TargetDensity target = TargetDensity::make(spec.density);
    const NoiseModel assumed = NoiseModel::make(spec.assumed_noise.value_or(spec.noise), spec.sigma());
    std::vector<detail::RepOutcome> outcomes(static_cast<std::size_t>(spec.reps));
    detail::parallel_for(outcomes.size(), worker_count(workers), [&](std::size_t r) {
        try {
            outcomes[r] = detail::run_replication(spec, target, assumed, static_cast<int>(r));
        } catch (const numerical_error&) {
            outcomes[r].ok = false;
        }
    });
    return detail::summarize(outcomes, spec.reps);
}

/// MISE(assumed wrong) / MISE(assumed correct), both over the same
/// replication streams. With assumed == true noise the ratio is exactly 1.
inline double misspecification_ratio(const ExperimentSpec& spec, unsigned workers = 0) {
    if (!spec.assumed_noise)
        throw std::invalid_argument("misspecification_ratio: assumed_noise must be set");
    ExperimentSpec correct = spec;
    correct.assumed_noise = spec.noise;
    const SummaryStats wrong = run_experiment(spec, workers);
    if (*spec.assumed_noise == spec.noise) return 1.0;
    const SummaryStats right = run_experiment(correct, workers);
    return wrong.mean_ise / right.mean_ise;
}

/// Per-fixed-m mean ISEs alongside the selected-m mean ISE, on shared
/// streams; used to check the selection against the best fixed dimension.
struct OracleReport {
    double selected_mise = 0.0;
    std::map<int, double> fixed_mise; // admissible m -> mean ISE
    double best_fixed_mise = 0.0;
    int best_fixed_m = 0;
};

inline OracleReport oracle_experiment(const ExperimentSpec& spec, unsigned workers = 0) {
    spec.validate();
    const TargetDensity target = TargetDensity::make(spec.density);
    const NoiseModel assumed = NoiseModel::make(spec.assumed_noise.value_or(spec.noise), spec.sigma());
    struct Row {
        double selected = 0.0;
        std::map<int, double> fixed;
    };
    std::vector<Row> rows(static_cast<std::size_t>(spec.reps));
    detail::parallel_for(rows.size(), worker_count(workers), [&](std::size_t r) {
        RandomStream rng = RandomStream::for_replication(spec.seed, r);
        SampleBatch sample;
        sample.z = sample_target(target, static_cast<std::size_t>(spec.n), rng);
        const std::vector<double> eps = sample_noise(spec.noise, static_cast<std::size_t>(spec.n), rng);
        for (std::size_t i = 0; i < sample.z.size(); ++i) sample.z[i] += spec.sigma() * eps[i];
        const SelectionResult sel = select(sample, assumed, spec.penalty, spec.k_n, spec.m_cap);
        rows[r].selected = ise(sel.coefficients, target, spec.grid_points);
        for (const ModelScore& score : sel.scores) {
            CoefficientSet c;
            switch (assumed.kind) {
                case NoiseKind::Laplace:
                    c = laplace_closed_form_coefficients(sample, assumed.sigma, score.m, spec.k_n);
                    break;
                case NoiseKind::NoNoise:
                    c = direct_projection_coefficients(sample, score.m, spec.k_n);
                    break;
                case NoiseKind::Gaussian:
                    c = compute_coefficients(sample, assumed, score.m, spec.k_n);
                    break;
            }
            rows[r].fixed[score.m] = ise(c, target, spec.grid_points);
        }
    });
    OracleReport rep;
    std::map<int, std::pair<double, int>> acc;
    for (const Row& row : rows) {
        rep.selected_mise += row.selected;
        for (const auto& [m, v] : row.fixed) {
            acc[m].first += v;
            acc[m].second += 1;
        }
    }
    rep.selected_mise /= static_cast<double>(rows.size());
    for (const auto& [m, pv] : acc) {
        if (pv.second != static_cast<int>(rows.size())) continue; // m not admissible in every rep
        const double mise = pv.first / pv.second;
        rep.fixed_mise[m] = mise;
        if (rep.best_fixed_m == 0 || mise < rep.best_fixed_mise) {
            rep.best_fixed_mise = mise;
            rep.best_fixed_m = m;
        }
    }
    return rep;
}

} // namespace deconv
