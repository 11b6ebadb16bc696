#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "deconv/noise.hpp"
#include "deconv/quadrature.hpp"

namespace deconv {

/// Thrown when a computation degrades numerically (imaginary residue,
/// overflowing integrals); the CLI maps it to its own exit code.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Observations Z_i = X_i + sigma*eps_i.
struct SampleBatch {
    std::vector<double> z;

    std::size_t n() const { return z.size(); }

    double max_abs() const {
        double m = 0.0;
        for (double v : z) m = std::max(m, std::abs(v));
        return m;
    }

    void validate() const {
        if (z.empty()) throw std::invalid_argument("SampleBatch: empty sample");
        for (double v : z)
            if (!std::isfinite(v)) throw std::invalid_argument("SampleBatch: non-finite observation");
    }
};

/// Projection coefficients a_{m,j}, j = -k_n..k_n, for model dimension m.
struct CoefficientSet {
    int m = 1;
    int k_n = 0;
    std::vector<double> a; // size 2*k_n + 1, index j + k_n

    double max_imag_residue = 0.0; // diagnostic from the quadrature path

    double operator[](int j) const { return a[static_cast<std::size_t>(j + k_n)]; }
};

/// Empirical characteristic function psi_n(t) = n^{-1} sum_i exp(-i t Z_i).
inline std::vector<std::complex<double>> empirical_cf(const SampleBatch& sample,
                                                      std::span<const double> t) {
    sample.validate();
    std::vector<std::complex<double>> out(t.size());
    const double inv_n = 1.0 / static_cast<double>(sample.n());
    for (std::size_t k = 0; k < t.size(); ++k) {
        double re = 0.0, im = 0.0;
        for (double z : sample.z) {
            const double th = t[k] * z;
            re += std::cos(th);
            im -= std::sin(th);
        }
        out[k] = {re * inv_n, im * inv_n};
    }
    return out;
}

namespace detail {

// psi_n(L * x_q) on the nodes of a composite rule. Exploits the equal
// spacing of panel centers: exp(-i L z x) = A_p * B_t with A_p advanced by
// a fixed rotation per panel (refreshed periodically against drift).
inline void empirical_cf_on_rule(const SampleBatch& sample, double L, const QuadratureRule& rule,
                                 std::vector<double>& re, std::vector<double>& im) {
    const std::size_t q = rule.size();
    const int panels = rule.order;
    const double width = kTwoPi / panels;
    re.assign(q, 0.0);
    im.assign(q, 0.0);
    double off[kNodesPerPanel]; // node offsets from the panel center
    for (int t = 0; t < kNodesPerPanel; ++t) off[t] = rule.nodes[t] - (-kPi + 0.5 * width);

    double bre[kNodesPerPanel], bim[kNodesPerPanel];
    for (double z : sample.z) {
        const double f = L * z;
        for (int t = 0; t < kNodesPerPanel; ++t) {
            bre[t] = std::cos(f * off[t]);
            bim[t] = -std::sin(f * off[t]);
        }
        const double rot_re = std::cos(f * width), rot_im = -std::sin(f * width);
        const double c0 = -kPi + 0.5 * width;
        double are = std::cos(f * c0), aim = -std::sin(f * c0);
        for (int p = 0; p < panels; ++p) {
            if (p > 0 && (p & 63) == 0) { // refresh against rotation drift
                const double cp = c0 + p * width;
                are = std::cos(f * cp);
                aim = -std::sin(f * cp);
            }
            double* rp = re.data() + static_cast<std::size_t>(p) * kNodesPerPanel;
            double* ip = im.data() + static_cast<std::size_t>(p) * kNodesPerPanel;
            for (int t = 0; t < kNodesPerPanel; ++t) {
                rp[t] += are * bre[t] - aim * bim[t];
                ip[t] += are * bim[t] + aim * bre[t];
            }
            const double nre = are * rot_re - aim * rot_im;
            aim = are * rot_im + aim * rot_re;
            are = nre;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(sample.n());
    for (std::size_t k = 0; k < q; ++k) {
        re[k] *= inv_n;
        im[k] *= inv_n;
    }
}

} // namespace detail

/// Coefficients by quadrature against the empirical CF:
///   a_{m,j} = (sqrt(L)/2pi) int_{-pi}^{pi} e^{ijx} psi_n(Lx) / cf(sigma L x) dx.
/// One empirical-CF pass over the nodes (O(nQ)), then all 2k_n+1
/// coefficients as weighted sums (O(k_n Q)). The integral is real for the
/// built-in (even, real-CF) noises; the imaginary residue is tracked and a
/// residue above 1e-6 raises numerical_error.
inline CoefficientSet compute_coefficients(const SampleBatch& sample, const NoiseModel& model,
                                           int m, int k_n, const QuadratureRule& rule) {
    sample.validate();
    if (m < 1) throw std::invalid_argument("compute_coefficients: m must be >= 1");
    if (k_n < 1) throw std::invalid_argument("compute_coefficients: k_n must be >= 1");

    const double L = static_cast<double>(m);
    const std::size_t q = rule.size();

    std::vector<double> fre, fim;
    detail::empirical_cf_on_rule(sample, L, rule, fre, fim);

    // G_q = w_q * psi_n(L x_q) / cf(sigma L x_q)
    for (std::size_t k = 0; k < q; ++k) {
        const double denom = cf(model, model.sigma * L * rule.nodes[k]);
        const double w = rule.weights[k] / denom;
        fre[k] *= w;
        fim[k] *= w;
    }

    CoefficientSet out;
    out.m = m;
    out.k_n = k_n;
    out.a.resize(2 * static_cast<std::size_t>(k_n) + 1);

    // e^{ijx_q} by rotation from j = -k_n upward, refreshed periodically.
    std::vector<double> cre(q), cim(q), rre(q), rim(q);
    for (std::size_t k = 0; k < q; ++k) {
        const double x = rule.nodes[k];
        cre[k] = std::cos(-k_n * x);
        cim[k] = std::sin(-k_n * x);
        rre[k] = std::cos(x);
        rim[k] = std::sin(x);
    }
    const double scale = std::sqrt(L) / kTwoPi;
    double worst_im = 0.0;
    for (int j = -k_n; j <= k_n; ++j) {
        if (j > -k_n && ((j + k_n) & 63) == 0) {
            for (std::size_t k = 0; k < q; ++k) {
                cre[k] = std::cos(j * rule.nodes[k]);
                cim[k] = std::sin(j * rule.nodes[k]);
            }
        }
        double acc_re = 0.0, acc_im = 0.0;
        for (std::size_t k = 0; k < q; ++k) {
            acc_re += cre[k] * fre[k] - cim[k] * fim[k];
            acc_im += cre[k] * fim[k] + cim[k] * fre[k];
        }
        out.a[static_cast<std::size_t>(j + k_n)] = scale * acc_re;
        worst_im = std::max(worst_im, std::abs(scale * acc_im));
        for (std::size_t k = 0; k < q; ++k) {
            const double nre = cre[k] * rre[k] - cim[k] * rim[k];
            cim[k] = cre[k] * rim[k] + cim[k] * rre[k];
            cre[k] = nre;
        }
    }
    out.max_imag_residue = worst_im;
    if (worst_im > 1e-6)
        throw numerical_error("compute_coefficients: imaginary residue " + std::to_string(worst_im) +
                              " at m=" + std::to_string(m));
    return out;
}

inline CoefficientSet compute_coefficients(const SampleBatch& sample, const NoiseModel& model,
                                           int m, int k_n) {
    return compute_coefficients(sample, model, m, k_n,
                                make_coefficient_rule(k_n, m, sample.max_abs()));
}

namespace detail {

// (pi nu cos(pi nu) - sin(pi nu)) / nu^3, series below |nu| = 0.5.
inline double sin_cos_cubic(double nu, double s, double c) {
    if (std::abs(nu) >= 0.5) return (kPi * nu * c - s) / (nu * nu * nu);
    const double z = kPi * nu;
    const double z2 = z * z;
    // sum_{k>=1} (-1)^k pi^{2k+1} nu^{2k-2} * 2k / (2k+1)!
    double term = -kPi * kPi * kPi / 3.0; // k = 1
    double sum = term;
    for (int k = 2; k <= 16; ++k) {
        term *= -z2 * (2.0 * k) / ((2.0 * k - 2.0) * (2.0 * k) * (2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace detail

/// Exact antiderivative path for Laplace noise, where 1/cf is the
/// polynomial 1 + (sigma L x)^2 / 2. Same contract as compute_coefficients;
/// agrees with the quadrature path to ~1e-12 per coefficient.
inline CoefficientSet laplace_closed_form_coefficients(const SampleBatch& sample, double sigma,
                                                       int m, int k_n) {
    sample.validate();
    if (!(sigma > 0.0))
        throw std::invalid_argument("laplace_closed_form_coefficients: requires sigma > 0");
    if (m < 1 || k_n < 1)
        throw std::invalid_argument("laplace_closed_form_coefficients: m and k_n must be >= 1");

    const double L = static_cast<double>(m);
    const double beta = 0.5 * sigma * sigma * L * L;
    const double c1 = 1.0 + beta * kPi * kPi;

    CoefficientSet out;
    out.m = m;
    out.k_n = k_n;
    out.a.assign(2 * static_cast<std::size_t>(k_n) + 1, 0.0);

    for (double z : sample.z) {
        const double u = L * z;
        const double su = std::sin(kPi * u), cu = std::cos(kPi * u);
        // sin(pi(j-u)) = -(-1)^j su, cos(pi(j-u)) = (-1)^j cu
        double sign = (k_n % 2 == 0) ? 1.0 : -1.0; // (-1)^j at j = -k_n
        for (int j = -k_n; j <= k_n; ++j, sign = -sign) {
            const double nu = j - u;
            const double s = -sign * su;
            const double c = sign * cu;
            const double sinc_part = (std::abs(nu) < 1e-6) ? kPi * (1.0 - kPi * kPi * nu * nu / 6.0)
                                                           : s / nu;
            const double val = 2.0 * (c1 * sinc_part + 2.0 * beta * detail::sin_cos_cubic(nu, s, c));
            out.a[static_cast<std::size_t>(j + k_n)] += val;
        }
    }
    const double scale = std::sqrt(L) / (kTwoPi * static_cast<double>(sample.n()));
    for (double& v : out.a) v *= scale;
    return out;
}

/// Direct empirical projection n^{-1} sum_i phi_{m,j}(Z_i); what the
/// quadrature path reduces to when there is no noise.
inline CoefficientSet direct_projection_coefficients(const SampleBatch& sample, int m, int k_n) {
    sample.validate();
    const double L = static_cast<double>(m);
    CoefficientSet out;
    out.m = m;
    out.k_n = k_n;
    out.a.assign(2 * static_cast<std::size_t>(k_n) + 1, 0.0);
    for (double z : sample.z) {
        const double u = L * z;
        const double su = std::sin(kPi * u);
        double sign = (k_n % 2 == 0) ? 1.0 : -1.0;
        for (int j = -k_n; j <= k_n; ++j, sign = -sign) {
            const double nu = u - j; // sin(pi(u-j)) = (-1)^j sin(pi u)
            out.a[static_cast<std::size_t>(j + k_n)] +=
                (std::abs(nu) < 1e-6) ? sinc(nu) : sign * su / (kPi * nu);
        }
    }
    const double scale = std::sqrt(L) / static_cast<double>(sample.n());
    for (double& v : out.a) v *= scale;
    return out;
}

/// gamma_n(g_m) = -sum_j a_{m,j}^2; always <= 0.
inline double contrast(const CoefficientSet& c) {
    double s = 0.0;
    for (double v : c.a) s += v * v;
    return -s;
}

/// g_hat(x) = sum_j a_{m,j} sqrt(m) sinc(m x - j). May be negative; no
/// positivity correction is applied.
inline std::vector<double> evaluate(const CoefficientSet& c, std::span<const double> grid) {
    std::vector<double> out(grid.size(), 0.0);
    const double L = static_cast<double>(c.m);
    const double root = std::sqrt(L);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double u = L * grid[g];
        const double su = std::sin(kPi * u);
        double sign = (c.k_n % 2 == 0) ? 1.0 : -1.0;
        double acc = 0.0;
        for (int j = -c.k_n; j <= c.k_n; ++j, sign = -sign) {
            const double nu = u - j;
            const double phi = (std::abs(nu) < 1e-6) ? sinc(nu) : sign * su / (kPi * nu);
            acc += c.a[static_cast<std::size_t>(j + c.k_n)] * phi;
        }
        out[g] = root * acc;
    }
    return out;
}

} // namespace deconv
