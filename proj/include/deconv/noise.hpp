#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "deconv/quadrature.hpp"

namespace deconv {

enum class NoiseKind { NoNoise, Laplace, Gaussian };

inline const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::NoNoise: return "none";
        case NoiseKind::Laplace: return "laplace";
        case NoiseKind::Gaussian: return "gaussian";
    }
    return "?";
}

/// Error-density model: kind, noise level sigma and the smoothness
/// parameters (gamma, mu, delta, kappa0) of its characteristic function,
///   kappa0 (x^2+1)^{-gamma/2} exp(-mu |x|^delta) <= |cf(x)|.
/// Conventions: delta=0 => mu=0; sigma=0 => direct observation and
/// gamma=mu=delta=0.
struct NoiseModel {
    NoiseKind kind = NoiseKind::NoNoise;
    double sigma = 0.0;
    double gamma = 0.0;
    double mu = 0.0;
    double delta = 0.0;
    double kappa0 = 1.0;

    static NoiseModel none() { return NoiseModel{NoiseKind::NoNoise, 0.0, 0.0, 0.0, 0.0, 1.0}; }

    static NoiseModel laplace(double sigma) {
        require_positive_sigma(sigma, "laplace");
        return NoiseModel{NoiseKind::Laplace, sigma, 2.0, 0.0, 0.0, 0.5};
    }

    static NoiseModel gaussian(double sigma) {
        require_positive_sigma(sigma, "gaussian");
        return NoiseModel{NoiseKind::Gaussian, sigma, 0.0, 0.5, 2.0, 1.0};
    }

    /// Preset by kind; sigma=0 always degrades to the no-noise model.
    static NoiseModel make(NoiseKind kind, double sigma) {
        if (kind == NoiseKind::NoNoise || sigma == 0.0) return none();
        return kind == NoiseKind::Laplace ? laplace(sigma) : gaussian(sigma);
    }

    void validate() const {
        if (sigma < 0.0) throw std::invalid_argument("NoiseModel: sigma < 0");
        if (kappa0 <= 0.0) throw std::invalid_argument("NoiseModel: kappa0 <= 0");
        if (kind == NoiseKind::NoNoise && (sigma != 0.0 || gamma != 0.0 || mu != 0.0 || delta != 0.0))
            throw std::invalid_argument("NoiseModel: no-noise model requires sigma=gamma=mu=delta=0");
        if (delta == 0.0 && mu != 0.0)
            throw std::invalid_argument("NoiseModel: delta=0 requires mu=0");
        if (delta > 0.0 && mu <= 0.0)
            throw std::invalid_argument("NoiseModel: delta>0 requires mu>0");
    }

private:
    static void require_positive_sigma(double sigma, const char* kind) {
        if (!(sigma > 0.0))
            throw std::invalid_argument(std::string(kind) + " noise model requires sigma > 0");
    }
};

/// Characteristic function of the (unit-variance) error density.
/// Real-valued for all built-in kinds.
inline double cf(const NoiseModel& model, double x) {
    switch (model.kind) {
        case NoiseKind::NoNoise: return 1.0;
        case NoiseKind::Laplace: return 1.0 / (1.0 + 0.5 * x * x);
        case NoiseKind::Gaussian: return std::exp(-0.5 * x * x);
    }
    return 1.0;
}

/// L2 norm of the unit-variance error density, used by the lambda2 branch
/// of the theoretical penalty. Exact values, unit-tested against quadrature.
inline double fe_l2_norm(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Laplace: return std::pow(2.0, -0.75);            // sqrt(1/(2 sqrt 2))
        case NoiseKind::Gaussian: return 1.0 / std::sqrt(2.0 * std::sqrt(kPi)); // sqrt(1/(2 sqrt pi))
        case NoiseKind::NoNoise: break;
    }
    throw std::invalid_argument("fe_l2_norm: no L2 density for this kind");
}

/// log Delta1(m), Delta1(m) = (L_m/2pi) int_{-pi}^{pi} |cf(L_m x sigma)|^{-2} dx,
/// L_m = m. Stable for parameter ranges where Delta1 itself overflows.
inline double delta1_log(const NoiseModel& model, int m) {
    if (m < 1) throw std::invalid_argument("delta1: m must be >= 1");
    const double L = static_cast<double>(m);
    const double sl = model.sigma * L;
    switch (model.kind) {
        case NoiseKind::NoNoise:
            return std::log(L);
        case NoiseKind::Laplace: {
            // |cf|^{-2} polynomial; the integral has the closed form
            // 2pi (1 + pi^2 (sL)^2/3 + pi^4 (sL)^4/20).
            const double s2 = sl * sl;
            return std::log(L * (1.0 + kPi * kPi * s2 / 3.0 + kPi * kPi * kPi * kPi * s2 * s2 / 20.0));
        }
        case NoiseKind::Gaussian:
            return std::log(L / kPi) + gauss_cf_integral_log(sl * sl);
    }
    return 0.0;
}

/// Delta1(m); throws overflow_error naming the offending m when the
/// Gaussian integrand exceeds the representable range.
inline double delta1(const NoiseModel& model, int m) {
    const double lg = delta1_log(model, m);
    if (lg > 709.0)
        throw std::overflow_error("delta1 overflows at m=" + std::to_string(m));
    return std::exp(lg);
}

/// Constants entering the theoretical penalty.
struct SmoothnessConstants {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double R = 0.0;
    double penalty_exponent = 0.0; // max(0, min(3 delta/2 - 1/2, delta))
};

inline SmoothnessConstants smoothness_constants(const NoiseModel& model) {
    model.validate();
    const double s = model.sigma, g = model.gamma, mu = model.mu, d = model.delta;
    SmoothnessConstants out;
    if (d == 0.0)
        out.R = 1.0;
    else if (d <= 1.0)
        out.R = 2.0 * mu * d * std::pow(s, d);
    else
        out.R = 2.0 * mu * std::pow(s, d);
    out.lambda1 = std::pow(s * s * kPi * kPi + 1.0, g) /
                  (std::pow(kPi, d) * model.kappa0 * model.kappa0 * out.R);
    if (d > 1.0) {
        out.lambda2 = out.lambda1;
    } else if (d >= 1.0 / 3.0) {
        out.lambda2 = std::sqrt(out.lambda1) * std::pow(1.0 + s * s * kPi * kPi, 0.5 * g) *
                      fe_l2_norm(model.kind) / (model.kappa0 * std::sqrt(kTwoPi));
    } else {
        out.lambda2 = 0.0;
    }
    out.penalty_exponent = std::max(0.0, std::min(1.5 * d - 0.5, d));
    return out;
}

/// Largest admissible model dimension: the theoretical cap, clamped into
/// [8, min(user_cap, 50)].
inline int m_max(const NoiseModel& model, long n, std::optional<int> user_cap = std::nullopt) {
    if (n < 2) throw std::invalid_argument("m_max: n must be >= 2");
    double theory;
    if (model.delta == 0.0) {
        theory = std::pow(static_cast<double>(n), 1.0 / (2.0 * model.gamma + 1.0)) / kPi;
    } else {
        const double ms = 2.0 * model.mu * std::pow(model.sigma, model.delta);
        const double lead = std::log(static_cast<double>(n)) / ms;
        const double loss = std::max(0.0, std::min(1.5 * model.delta - 0.5, model.delta));
        const double num = model.delta > 1.0 / 3.0
                               ? 2.0 * model.gamma + 1.0 - model.delta + loss
                               : 2.0 * model.gamma + 1.0 - model.delta;
        const double coef = num / (2.0 * model.delta * model.mu * std::pow(model.sigma, model.delta));
        double bracket = lead + (lead > 1.0 ? coef * std::log(lead) : 0.0);
        if (bracket < 0.0) bracket = 0.0;
        theory = std::pow(bracket, 1.0 / model.delta) / kPi;
    }
    int cap = 50;
    if (user_cap) cap = std::min(cap, *user_cap);
    int out = static_cast<int>(std::floor(theory));
    if (out < 8) out = 8;
    if (out > cap) out = cap;
    return out;
}

} // namespace deconv
