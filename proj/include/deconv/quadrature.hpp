#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace deconv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// sin(pi*x)/(pi*x) with the removable singularity filled in.
inline double sinc(double x) {
    const double u = kPi * x;
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0);
    }
    return std::sin(u) / u;
}

namespace detail {

// 16-point Gauss-Legendre abscissae/weights on [-1,1] (positive half).
inline constexpr double kGlNode[8] = {
    9.50125098376374544e-02, 2.81603550779258915e-01, 4.58016777657227370e-01,
    6.17876244402643771e-01, 7.55404408355002999e-01, 8.65631202387831755e-01,
    9.44575023073232600e-01, 9.89400934991649939e-01};
inline constexpr double kGlWeight[8] = {
    1.89450610455068585e-01, 1.82603415044923612e-01, 1.69156519395002619e-01,
    1.49595988816576764e-01, 1.24628971255534030e-01, 9.51585116824925914e-02,
    6.22535239386477063e-02, 2.71524594117540374e-02};

} // namespace detail

inline constexpr int kNodesPerPanel = 16;

/// Composite Gauss-Legendre rule on [-pi, pi].
/// Nodes are symmetric about 0 and the weights sum to 2*pi.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0; // number of panels

    explicit QuadratureRule(int panels) : order(panels) {
        if (panels < 1) throw std::invalid_argument("QuadratureRule: panels must be >= 1");
        const std::size_t q = static_cast<std::size_t>(panels) * kNodesPerPanel;
        nodes.resize(q);
        weights.resize(q);
        const double width = kTwoPi / panels;
        const double half = 0.5 * width;
        for (int p = 0; p < panels; ++p) {
            const double center = -kPi + (p + 0.5) * width;
            for (int t = 0; t < 8; ++t) {
                const double dx = half * detail::kGlNode[t];
                const double w = half * detail::kGlWeight[t];
                const std::size_t base = static_cast<std::size_t>(p) * kNodesPerPanel;
                nodes[base + 2 * t] = center - dx;
                nodes[base + 2 * t + 1] = center + dx;
                weights[base + 2 * t] = w;
                weights[base + 2 * t + 1] = w;
            }
        }
    }

    std::size_t size() const { return nodes.size(); }
};

/// Panel count for the coefficient integrand: the frequency content is
/// bounded by k_n + m*max|Z|, one panel per ~pi of it.
inline int coefficient_panels(int k_n, int m, double max_abs_z) {
    const double freq = static_cast<double>(k_n) + static_cast<double>(m) * max_abs_z;
    const int p = static_cast<int>(std::ceil(freq / kPi));
    return p < 64 ? 64 : p;
}

inline QuadratureRule make_coefficient_rule(int k_n, int m, double max_abs_z) {
    return QuadratureRule(coefficient_panels(k_n, m, max_abs_z));
}

namespace detail {

// int_{lo}^{hi} f via composite GL16 with the given panel count.
template <typename F>
double gl_fixed(F&& f, double lo, double hi, int panels) {
    const double width = (hi - lo) / panels;
    const double half = 0.5 * width;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double center = lo + (p + 0.5) * width;
        for (int t = 0; t < 8; ++t) {
            const double dx = half * kGlNode[t];
            sum += half * kGlWeight[t] * (f(center - dx) + f(center + dx));
        }
    }
    return sum;
}

// Panel-doubling GL16 until the relative change drops below tol.
template <typename F>
double gl_adaptive(F&& f, double lo, double hi, double tol = 1e-10) {
    int panels = 8;
    double prev = gl_fixed(f, lo, hi, panels);
    while (true) {
        panels *= 2;
        const double cur = gl_fixed(f, lo, hi, panels);
        if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
        if (static_cast<long>(panels) * 2L * kNodesPerPanel > (1L << 20)) return cur;
        prev = cur;
    }
}

} // namespace detail

/// log of int_0^pi exp(a*x^2) dx, stable for large a.
/// For a beyond ~5 the integrand is boundary-dominated; peel off exp(a*pi^2)
/// and integrate the decaying remainder exp(-a*t*(2*pi - t)).
inline double gauss_cf_integral_log(double a) {
    if (a <= 5.0) {
        const double v = detail::gl_adaptive([a](double x) { return std::exp(a * x * x); }, 0.0, kPi);
        return std::log(v);
    }
    const double j = detail::gl_adaptive(
        [a](double t) { return std::exp(-a * t * (kTwoPi - t)); }, 0.0, kPi);
    return a * kPi * kPi + std::log(j);
}

/// int_0^pi exp(a*x^2) dx; throws on overflow.
inline double gauss_cf_integral(double a) {
    const double lg = gauss_cf_integral_log(a);
    if (lg > 709.0) {
        throw std::overflow_error("gauss_cf_integral: exp(" + std::to_string(a) +
                                  "*x^2) exceeds double range");
    }
    return std::exp(lg);
}

} // namespace deconv
