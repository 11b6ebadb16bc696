#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "deconv/estimator.hpp"
#include "deconv/noise.hpp"

namespace deconv {

enum class PenaltyMode { TheoreticalEq3, PracticalSec51 };

/// Experiment-pipeline default for PenaltyConfig::scale. The published
/// practical penalties are consistent with the -sum a^2 contrast only up to
/// an overall factor; 1/(2pi) reproduces the reference selection behaviour
/// (see README, "Penalty calibration").
inline constexpr double kCalibratedPenaltyScale = 1.0 / kTwoPi;

struct PenaltyConfig {
    PenaltyMode mode = PenaltyMode::PracticalSec51;
    double a = 1.5;      // universal constant of the theoretical penalty, > 1
    double scale = 1.0;  // overall multiplier; formulas at face value by default

    static PenaltyConfig calibrated() { return {PenaltyMode::PracticalSec51, 1.5, kCalibratedPenaltyScale}; }

    void validate() const {
        if (mode == PenaltyMode::TheoreticalEq3 && !(a > 1.0))
            throw std::invalid_argument("PenaltyConfig: theoretical penalty requires a > 1");
        if (!(scale > 0.0)) throw std::invalid_argument("PenaltyConfig: scale must be > 0");
    }
};

struct ModelScore {
    int m = 0;
    double contrast = 0.0;
    double pen = 0.0;
    double crit = 0.0; // contrast + pen
};

namespace detail {

// int_0^pi exp((sigma m x)^2) dx, memoized per (sigma, m).
inline double cached_gauss_integral(double sigma, int m) {
    struct Key {
        double sigma;
        int m;
        bool operator<(const Key& o) const {
            return sigma != o.sigma ? sigma < o.sigma : m < o.m;
        }
    };
    static std::map<Key, double> cache;
    static std::mutex mtx;
    const Key key{sigma, m};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double sl = sigma * m;
    const double val = gauss_cf_integral(sl * sl); // throws on overflow
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, val);
    return val;
}

} // namespace detail

/// Penalty for model dimension m with n observations.
///
/// PracticalSec51 uses the closed forms
///   Laplace : (6 pi L/n)(1 + ln(L)^2.5/L + pi^2 s^2 L^2/3 + pi^4 s^4 L^4/20)
///   Gaussian: (6 pi L/n)(1 + ln(L)^2.5/L + pi^2 s^2 L^2/3) * (int_0^pi e^{s^2L^2x^2}dx)/pi
/// both reducing to (6 pi L/n)(1 + ln(L)^2.5/L) at sigma = 0.
/// TheoreticalEq3 uses 2a(lambda1 + mu s^d pi^d lambda2) L^pe Gamma(m)/n.
/// Throws numerical_error when the Gaussian-mode integral overflows (such a
/// model is excluded from the candidate list).
inline double penalty(const NoiseModel& model, int m, long n, const PenaltyConfig& cfg) {
    if (m < 1 || n < 1) throw std::invalid_argument("penalty: m and n must be >= 1");
    cfg.validate();
    const double L = static_cast<double>(m);
    const double s = model.sigma;
    double pen = 0.0;
    if (cfg.mode == PenaltyMode::PracticalSec51) {
        const double log_term = std::pow(std::log(L), 2.5) / L;
        const double base = 6.0 * kPi * L / static_cast<double>(n);
        switch (model.kind) {
            case NoiseKind::NoNoise:
                pen = base * (1.0 + log_term);
                break;
            case NoiseKind::Laplace: {
                const double sl2 = s * s * L * L;
                pen = base * (1.0 + log_term + kPi * kPi * sl2 / 3.0 +
                              kPi * kPi * kPi * kPi * sl2 * sl2 / 20.0);
                break;
            }
            case NoiseKind::Gaussian: {
                double integral;
                try {
                    integral = detail::cached_gauss_integral(s, m);
                } catch (const std::overflow_error& e) {
                    throw numerical_error(std::string("penalty: ") + e.what() +
                                          " (m=" + std::to_string(m) + ")");
                }
                pen = base * (1.0 + log_term + kPi * kPi * s * s * L * L / 3.0) * (integral / kPi);
                break;
            }
        }
    } else {
        const SmoothnessConstants sc = smoothness_constants(model);
        const double d = model.delta;
        const double musd = model.mu * std::pow(s, d) * std::pow(kPi, d);
        // log of L^pe * Gamma(m) = L^{pe + 2 gamma + 1 - delta} exp(2 mu s^d pi^d L^d)
        const double log_gamma_m = (sc.penalty_exponent + 2.0 * model.gamma + 1.0 - d) * std::log(L) +
                                   2.0 * musd * std::pow(L, d);
        const double log_pen = std::log(2.0 * cfg.a * (sc.lambda1 + musd * sc.lambda2)) +
                               log_gamma_m - std::log(static_cast<double>(n));
        if (log_pen > 709.0)
            throw numerical_error("penalty: theoretical penalty overflows at m=" + std::to_string(m));
        pen = std::exp(log_pen);
    }
    return cfg.scale * pen;
}

/// Models with Delta1(m)/n above this are dropped from the candidate list:
/// their variance proxy is unbounded relative to n and the occasional
/// contrast excursion would dominate mean risk.
inline constexpr double kAdmissibleVarianceRatio = 0.5;

struct SelectionResult {
    ModelScore chosen;
    std::vector<ModelScore> scores; // evaluated candidates, ordered by m
    std::vector<int> skipped;       // candidates excluded (overflow / variance cap)
    CoefficientSet coefficients;    // of the chosen model
};

/// Minimize crit(m) = -sum_j a_{m,j}^2 + pen(m) over m = 1..m_max.
/// Ties break toward the smallest m. Laplace noise uses the closed-form
/// coefficient path, no noise the direct projection, otherwise quadrature.
inline SelectionResult select(const SampleBatch& sample, const NoiseModel& model,
                              const PenaltyConfig& cfg, int k_n = 256,
                              std::optional<int> m_cap = std::nullopt) {
    sample.validate();
    cfg.validate();
    const long n = static_cast<long>(sample.n());
    const int top = m_max(model, std::max(n, 2L), m_cap);
    const double max_abs = sample.max_abs();

    SelectionResult result;
    std::optional<CoefficientSet> best;
    for (int m = 1; m <= top; ++m) {
        double d1_log;
        try {
            d1_log = delta1_log(model, m);
        } catch (const std::invalid_argument&) {
            throw;
        }
        if (d1_log > std::log(kAdmissibleVarianceRatio * static_cast<double>(n))) {
            result.skipped.push_back(m);
            continue;
        }
        double pen;
        try {
            pen = penalty(model, m, n, cfg);
        } catch (const numerical_error&) {
            result.skipped.push_back(m);
            continue;
        }
        CoefficientSet coeffs;
        switch (model.kind) {
            case NoiseKind::Laplace:
                coeffs = laplace_closed_form_coefficients(sample, model.sigma, m, k_n);
                break;
            case NoiseKind::NoNoise:
                coeffs = direct_projection_coefficients(sample, m, k_n);
                break;
            case NoiseKind::Gaussian:
                coeffs = compute_coefficients(sample, model, m, k_n,
                                              make_coefficient_rule(k_n, m, max_abs));
                break;
        }
        ModelScore score{m, contrast(coeffs), pen, 0.0};
        score.crit = score.contrast + score.pen;
        result.scores.push_back(score);
        if (!best || score.crit < result.chosen.crit) {
            result.chosen = score;
            best = std::move(coeffs);
        }
    }
    if (!best)
        throw numerical_error("select: no admissible model dimension (all candidates excluded)");
    result.coefficients = std::move(*best);
    return result;
}

} // namespace deconv
