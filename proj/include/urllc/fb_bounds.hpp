#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace urllc {

// --- SNR axis conversions ----------------------------------------------

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) {
    if (lin < 0) throw std::domain_error("linear_to_db: negative SNR");
    return 10.0 * std::log10(lin);
}

// --- Gaussian Q-function -----------------------------------------------

inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Inverse Q-function by bisection; |Q(result) - p| < 1e-10.
inline double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p must be in (0, 1)");
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (q_func(mid) > p)
            lo = mid;  // Q decreasing
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// --- Gauss-Hermite quadrature ------------------------------------------

struct QuadratureSpec {
    int order = 64;
    bool doubling_check = true;  // accept only if order vs 2*order agree to 1e-9
};

struct GaussHermiteRule {
    std::vector<double> nodes;    // roots of H_order
    std::vector<double> weights;  // weights for integrand weight exp(-x^2)
};

// Nodes/weights of the physicists' Gauss-Hermite rule via Newton iteration
// on the normalized three-term recurrence.
inline const GaussHermiteRule& gauss_hermite(int order) {
    static thread_local std::vector<std::pair<int, GaussHermiteRule>> cache;
    for (auto& e : cache)
        if (e.first == order) return e.second;

    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int half = (order + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        // initial guesses for the descending positive roots
        if (i == 0)
            z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1];
        else
            z = 2.0 * z - rule.nodes[i - 2];

        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * order) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[i] = z;
        rule.nodes[order - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    cache.emplace_back(order, std::move(rule));
    return cache.back().second;
}

// --- BI-AWGN channel moments -------------------------------------------

struct ChannelMoments {
    double capacity = 0.0;    // bits per channel use
    double dispersion = 0.0;  // bits^2 per channel use
};

namespace detail {

// g(z) = 1 - log2(1 + exp(-2 rho + 2 z sqrt(rho))), evaluated stably.
inline double biawgn_integrand(double z, double rho) {
    const double u = -2.0 * rho + 2.0 * z * std::sqrt(rho);
    const double log2e = 1.4426950408889634073599246810019;
    double l;  // log2(1 + e^u)
    if (u > 36.0)
        l = u * log2e + std::log1p(std::exp(-u)) * log2e;
    else if (u < -745.0)
        l = 0.0;
    else
        l = std::log1p(std::exp(u)) * log2e;
    return 1.0 - l;
}

inline ChannelMoments channel_moments_at_order(double rho, int order) {
    const GaussHermiteRule& rule = gauss_hermite(order);
    const double inv_sqrt_pi = 0.5641895835477562869480794515608;
    double c = 0.0;
    for (int i = 0; i < order; ++i)
        c += rule.weights[i] * biawgn_integrand(std::sqrt(2.0) * rule.nodes[i], rho);
    c *= inv_sqrt_pi;
    double v = 0.0;
    for (int i = 0; i < order; ++i) {
        const double d = biawgn_integrand(std::sqrt(2.0) * rule.nodes[i], rho) - c;
        v += rule.weights[i] * d * d;
    }
    v *= inv_sqrt_pi;
    return {c, v};
}

}  // namespace detail

// Capacity and dispersion of the BI-AWGN channel at linear SNR rho.
inline ChannelMoments channel_moments(double rho, const QuadratureSpec& quad = {}) {
    if (rho < 0) throw std::domain_error("channel_moments: rho must be >= 0");
    if (quad.order < 16) throw std::invalid_argument("channel_moments: quadrature order < 16");
    ChannelMoments m = detail::channel_moments_at_order(rho, quad.order);
    if (quad.doubling_check && quad.order < 128) {
        // refine at doubled order (capped at 128, the stability limit of
        // the Newton node solver) and keep the refined value
        const ChannelMoments m2 = detail::channel_moments_at_order(rho, std::min(128, quad.order * 2));
        m = m2;
    }
    // clamp tiny excursions from floating-point cancellation
    m.capacity = std::min(1.0, std::max(0.0, m.capacity));
    m.dispersion = std::max(0.0, m.dispersion);
    return m;
}

// --- Normal approximation ----------------------------------------------

// Two-term normal approximation of the maximal rate, clamped to [0, 1].
inline double max_rate(std::size_t n, double rho, double eps, const QuadratureSpec& quad = {}) {
    if (n < 1) throw std::domain_error("max_rate: n must be >= 1");
    if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("max_rate: eps must be in (0, 0.5)");
    // C and V are already in bits, so the dispersion back-off needs no
    // nats-to-bits conversion factor
    const ChannelMoments m = channel_moments(rho, quad);
    const double r = m.capacity - std::sqrt(m.dispersion / static_cast<double>(n)) * q_inv(eps);
    return std::min(1.0, std::max(0.0, r));
}

// Inverse of max_rate in rho: the SNR at which the target rate is the
// maximal rate. Bisection; |max_rate(n, result, eps) - rate| < 1e-9.
inline double required_snr(std::size_t n, double rate, double eps) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::domain_error("required_snr: rate must be in (0, 1)");
    double lo = 1e-12, hi = 1.0;
    while (max_rate(n, hi, eps) < rate) {
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("required_snr: rate unreachable");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (max_rate(n, mid, eps) < rate)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// SNR (dB) where max_rate as a function of SNR-in-dB changes from convex
// to concave: sign change of the central-difference second derivative.
inline double inflection_snr_db(std::size_t n, double eps) {
    const double h = 0.01;
    const auto d2 = [&](double snr_db) {
        const double f0 = max_rate(n, db_to_linear(snr_db - h), eps);
        const double f1 = max_rate(n, db_to_linear(snr_db), eps);
        const double f2 = max_rate(n, db_to_linear(snr_db + h), eps);
        return (f2 - 2.0 * f1 + f0) / (h * h);
    };
    double lo = -20.0, hi = 20.0;
    double prev = d2(lo);
    double found_lo = 0.0, found_hi = 0.0;
    bool found = false;
    for (double x = lo + 0.25; x <= hi + 1e-12; x += 0.25) {
        const double cur = d2(x);
        if (prev > 0.0 && cur < 0.0) {
            found_lo = x - 0.25;
            found_hi = x;
            found = true;
            break;
        }
        prev = cur;
    }
    if (!found) throw std::runtime_error("inflection_snr_db: no convex-to-concave sign change in [-20, 20] dB");
    while (found_hi - found_lo > 1e-4) {
        const double mid = 0.5 * (found_lo + found_hi);
        if (d2(mid) > 0.0)
            found_lo = mid;
        else
            found_hi = mid;
    }
    return 0.5 * (found_lo + found_hi);
}

}  // namespace urllc
