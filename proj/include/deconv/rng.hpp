#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace deconv {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Deterministic random stream. mt19937_64 supplies the bits (its output
/// sequence is fixed by the standard); all distribution transforms are
/// done here so results do not depend on library internals.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream for replication `rep` of experiment `seed`; independent streams
    /// for distinct (seed, rep) pairs.
    static RandomStream for_replication(std::uint64_t seed, std::uint64_t rep) {
        return RandomStream(detail::splitmix64(seed ^ detail::splitmix64(rep + 1)));
    }

    /// Uniform on (0,1), never exactly 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method (second variate discarded).
    double normal() {
        while (true) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s < 1.0 && s > 0.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    /// Gamma(shape, scale=1) via Marsaglia-Tsang, boosted for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Unit-variance Laplace (density exp(-sqrt(2)|x|)/sqrt(2)) by inverse CDF.
    double laplace_unit() {
        const double u = uniform();
        const double x = (u < 0.5) ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
        return x / std::sqrt(2.0);
    }

    /// Standard Cauchy via tan(pi*(U - 1/2)).
    double cauchy() { return std::tan(kPi * (uniform() - 0.5)); }

private:
    static constexpr double kPi = 3.14159265358979323846;
    std::mt19937_64 engine_;
};

} // namespace deconv
