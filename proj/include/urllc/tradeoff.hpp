#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "urllc/fb_bounds.hpp"
#include "urllc/os_decoder.hpp"

namespace urllc {

// URLLC constraint vector: latency deadline, target CEP, symbol and
// binary-operation durations, minimum rate, maximum SNR budget.
struct ConstraintSet {
    double L_m = 1e-3;       // s
    double eps_m = 1e-5;
    double T_s = 1e-6;       // s per channel symbol
    double T_b = 1e-9;       // s per binary operation
    double r_m = 0.0;        // minimum accepted rate
    double rho_m_db = 40.0;  // maximum SNR budget

    void validate() const {
        if (L_m <= 0 || T_s <= 0 || T_b <= 0) throw std::invalid_argument("ConstraintSet: times must be > 0");
        if (!(eps_m > 0 && eps_m < 0.5)) throw std::invalid_argument("ConstraintSet: eps_m must be in (0, 0.5)");
        if (!(r_m >= 0 && r_m < 1)) throw std::invalid_argument("ConstraintSet: r_m must be in [0, 1)");
    }
};

// Fitted constants of the complexity/power-gap law
// F(delta_rho) = (a sqrt(delta_rho) + b)^{-1}, delta_rho in dB.
struct TradeoffModel {
    double a = 0.0;
    double b = 0.0;
    double fit_residual = 0.0;
};

// Constants reported for eBCH(128, 64/71) at eps = 1e-5.
inline TradeoffModel paper_preset_model() { return {0.029, 0.03, 0.0}; }

struct GapPoint {
    double delta_rho_db = 0.0;
    double log2_K = 0.0;
};

// Per-information-bit complexity budget implied by the latency deadline:
// kappa = (k T_b)^{-1} [L_m - n T_s]^+.
inline double complexity_budget(const ConstraintSet& cs, std::size_t n, double k) {
    if (k < 1) throw std::domain_error("complexity_budget: k must be >= 1");
    const double slack = std::max(0.0, cs.L_m - static_cast<double>(n) * cs.T_s);
    return slack / (k * cs.T_b);
}

// delta_rho^min in dB: ((a log2 kappa)^{-1} [1 - b log2 kappa]^+)^2.
// kappa <= 1 means no decoder fits the deadline; reported as +infinity.
inline double min_power_penalty_db(const TradeoffModel& model, double kappa) {
    if (kappa < 0) throw std::domain_error("min_power_penalty_db: kappa must be >= 0");
    if (kappa <= 1.0) return std::numeric_limits<double>::infinity();
    const double lk = std::log2(kappa);
    const double num = std::max(0.0, 1.0 - model.b * lk);
    const double v = num / (model.a * lk);
    return v * v;
}

// T_b below which delta_rho^min = 0: [L_m - n T_s]^+ / (k 2^{1/b}).
inline double zero_gap_processor_threshold(double k, const TradeoffModel& model,
                                           const ConstraintSet& cs, std::size_t n) {
    const double slack = std::max(0.0, cs.L_m - static_cast<double>(n) * cs.T_s);
    return slack / (k * std::pow(2.0, 1.0 / model.b));
}

// Monte Carlo measurement of the power penalty of one decoder config:
// bisection over SNR on the (monotone) CEP until the bracket is < 0.05 dB.
struct GapMeasureOptions {
    std::uint64_t max_trials = 200000;
    std::uint64_t target_errors = 100;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double search_window_db = 12.0;
};

inline GapPoint measure_power_gap(const CodeSpec& code, const DecoderConfig& cfg, double eps_target,
                                  double reference_snr_db, const GapMeasureOptions& opt = {}) {
    const auto cep_at = [&](double snr_db) {
        return estimate_cep(code, cfg, db_to_linear(snr_db), opt.max_trials, opt.target_errors,
                            opt.seed, opt.threads)
            .cep;
    };
    double lo = reference_snr_db;
    double hi = reference_snr_db + opt.search_window_db;
    if (cep_at(hi) > eps_target)
        throw std::runtime_error("measure_power_gap: target CEP unreachable in search window");
    if (cep_at(lo) <= eps_target) {
        // already meets the target at the reference; gap is zero
        GapPoint p;
        p.delta_rho_db = 0.0;
        p.log2_K = std::log2(complexity_per_info_bit(code.n, code.k, cfg.s, cfg.q));
        return p;
    }
    while (hi - lo > 0.05) {
        const double mid = 0.5 * (lo + hi);
        if (cep_at(mid) > eps_target)
            lo = mid;
        else
            hi = mid;
    }
    GapPoint p;
    p.delta_rho_db = hi - reference_snr_db;
    p.log2_K = std::log2(complexity_per_info_bit(code.n, code.k, cfg.s, cfg.q));
    return p;
}

// Least-squares fit of 1/log2_K against a sqrt(delta_rho) + b.
inline TradeoffModel fit_model(const std::vector<GapPoint>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_model: need at least 3 points");
    double sxx = 0, sx = 0, sxy = 0, sy = 0;
    const double np = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = std::sqrt(p.delta_rho_db);
        const double y = 1.0 / p.log2_K;
        sxx += x * x;
        sx += x;
        sxy += x * y;
        sy += y;
    }
    const double det = sxx * np - sx * sx;
    if (std::abs(det) < 1e-12 * std::max(1.0, sxx * np))
        throw std::runtime_error("fit_model: degenerate design matrix (need distinct delta_rho values)");
    TradeoffModel m;
    m.a = (sxy * np - sx * sy) / det;
    m.b = (sxx * sy - sx * sxy) / det;
    if (m.a <= 0 || m.b <= 0) {
        // clamped refit: pin the offending constant just above zero and
        // re-solve the other by least squares
        if (m.a <= 0) {
            m.a = 1e-9;
            m.b = (sy - m.a * sx) / np;
        }
        if (m.b <= 0) {
            m.b = 1e-9;
            m.a = (sxy - m.b * sx) / sxx;
        }
    }
    double ss = 0;
    for (const auto& p : points) {
        const double pred = 1.0 / (m.a * std::sqrt(p.delta_rho_db) + m.b);
        const double rel = (pred - p.log2_K) / p.log2_K;
        ss += rel * rel;
    }
    m.fit_residual = std::sqrt(ss / np);
    return m;
}

// M(n, rho, eps): maximal rate under the latency/complexity budget.
// delta_rho^min depends on k = n r through kappa, so the fixed point
// r = max_rate(n, rho_db - delta_rho^min(n r), eps) is solved by
// bisection (the right-hand side is non-increasing in r).
inline double constrained_max_rate(std::size_t n, double rho_db, double eps,
                                   const TradeoffModel& model, const ConstraintSet& cs) {
    const auto rhs = [&](double r) {
        const double k = std::max(1.0, static_cast<double>(n) * r);
        const double dmin = min_power_penalty_db(model, complexity_budget(cs, n, k));
        if (!std::isfinite(dmin)) return 0.0;
        return max_rate(n, db_to_linear(rho_db - dmin), eps);
    };
    double lo = 0.0, hi = 1.0;
    if (rhs(lo) <= 0.0) return 0.0;   // no feasible rate
    if (rhs(hi) >= 1.0) return 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rhs(mid) > mid)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// delta_r^min = R(n, rho, eps) - M(n, rho, eps) >= 0.
inline double min_rate_gap(std::size_t n, double rho_db, double eps, const TradeoffModel& model,
                           const ConstraintSet& cs) {
    const double gap = max_rate(n, db_to_linear(rho_db), eps) - constrained_max_rate(n, rho_db, eps, model, cs);
    return std::max(0.0, gap);
}

}  // namespace urllc
