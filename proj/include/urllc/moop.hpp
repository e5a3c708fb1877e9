#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "urllc/fb_bounds.hpp"
#include "urllc/tradeoff.hpp"

namespace urllc {

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reference transmission pair {r_s, rho_s}, rho_s = R^{-1}(n, r_s, eps_m).
struct ReferencePair {
    std::size_t n = 0;
    double r_s = 0.0;
    double rho_s_db = 0.0;
};

inline ReferencePair make_reference(std::size_t n, double r_s, double eps_m) {
    ReferencePair ref;
    ref.n = n;
    ref.r_s = r_s;
    ref.rho_s_db = linear_to_db(required_snr(n, r_s, eps_m));
    return ref;
}

struct ParetoPoint {
    double delta_r = 0.0;
    double delta_rho_db = 0.0;
    double rate = 0.0;    // r_s - delta_r
    double snr_db = 0.0;  // rho_s + delta_rho
};

using TransmissionPair = ParetoPoint;

enum class PowerCostMode { shannon_log, raw_db_log };

struct ScalarizationSpec {
    double theta = 1.0;  // 1, finite >= 1, or infinity
    double alpha = 0.5;
    double A = 1.0;
    double B = 1.0;
    PowerCostMode power_cost_mode = PowerCostMode::shannon_log;
    double raw_floor_db = 1e-3;  // floor for the raw log cost at delta_rho = 0
    // objective normalization constants (1 = none); the battery case study
    // sets these to the boundary endpoint ranges
    double norm_r = 1.0;
    double norm_rho = 1.0;

    void validate() const {
        if (!(theta >= 1.0)) throw std::invalid_argument("ScalarizationSpec: theta must be >= 1");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("ScalarizationSpec: alpha in [0, 1]");
        if (!(A > 0.0 && B > 0.0)) throw std::invalid_argument("ScalarizationSpec: A, B must be > 0");
    }
};

// delta_rho^min at the reference rate r_s.
inline double delta_rho_s_min_db(const ReferencePair& ref, const ConstraintSet& cs,
                                 const TradeoffModel& model) {
    const double k = static_cast<double>(ref.n) * ref.r_s;
    return min_power_penalty_db(model, complexity_budget(cs, ref.n, k));
}

// delta_r^min at the reference SNR rho_s.
inline double delta_r_s_min(const ReferencePair& ref, const ConstraintSet& cs,
                            const TradeoffModel& model) {
    return std::max(0.0, ref.r_s - constrained_max_rate(ref.n, ref.rho_s_db, cs.eps_m, model, cs));
}

// Membership in the attainable objective set S.
inline bool attainable_contains(double delta_r, double delta_rho_db, const ReferencePair& ref,
                                const ConstraintSet& cs, const TradeoffModel& model) {
    if (delta_rho_db < 0.0 || delta_rho_db > cs.rho_m_db - ref.rho_s_db) return false;
    const double m = constrained_max_rate(ref.n, ref.rho_s_db + delta_rho_db, cs.eps_m, model, cs);
    const double lower = std::max(0.0, ref.r_s - m);
    return delta_r >= lower - 1e-12 && delta_r <= ref.r_s - cs.r_m + 1e-12;
}

// Pareto boundary: sweep of delta_rho over [start, end] with the boundary
// equation r_s - delta_r = M(n, rho_s + delta_rho, eps_m). Ordered by
// delta_rho ascending, delta_r strictly decreasing.
inline std::vector<ParetoPoint> pareto_boundary(const ReferencePair& ref, const ConstraintSet& cs,
                                                const TradeoffModel& model, double grid_step_db = 0.01) {
    const double drho_s = delta_rho_s_min_db(ref, cs, model);
    if (!std::isfinite(drho_s)) throw InfeasibleError("pareto_boundary: complexity budget kappa <= 1");
    const double dr_s = delta_r_s_min(ref, cs, model);
    const double budget = cs.rho_m_db - ref.rho_s_db;
    if (budget < 0.0) throw InfeasibleError("pareto_boundary: rho_s exceeds the power budget");
    const double drho_end = std::min(drho_s, budget);

    const auto m_at = [&](double drho) {
        return constrained_max_rate(ref.n, ref.rho_s_db + drho, cs.eps_m, model, cs);
    };
    if (m_at(drho_end) < cs.r_m - 1e-12)
        throw InfeasibleError("pareto_boundary: no feasible pair can be found (M < r_m everywhere)");

    double drho_start = 0.0;
    if (ref.r_s - dr_s < cs.r_m) {
        // smallest power penalty at which the boundary rate reaches r_m
        double lo = 0.0, hi = drho_end;
        for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (m_at(mid) < cs.r_m)
                lo = mid;
            else
                hi = mid;
        }
        drho_start = hi;
    }

    std::vector<ParetoPoint> pts;
    for (double d = drho_start;; d += grid_step_db) {
        const bool last = d >= drho_end - 1e-12;
        const double drho = last ? drho_end : d;
        ParetoPoint p;
        p.delta_rho_db = drho;
        p.delta_r = std::max(0.0, ref.r_s - m_at(drho));
        p.rate = ref.r_s - p.delta_r;
        p.snr_db = ref.rho_s_db + drho;
        pts.push_back(p);
        if (last) break;
    }
    // enforce strictly decreasing delta_r against solver-tolerance jitter;
    // the final point (the delta_rho^min endpoint) always survives
    std::vector<ParetoPoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool last = (i + 1 == pts.size());
        if (out.empty() || pts[i].delta_r < out.back().delta_r - 1e-12) {
            out.push_back(pts[i]);
        } else if (last) {
            out.back() = pts[i];
        }
    }
    if (out.empty()) throw InfeasibleError("pareto_boundary: empty boundary");
    return out;
}

// Power-cost term of the scalarized objective.
inline double power_cost(double delta_rho_db, const ScalarizationSpec& spec) {
    switch (spec.power_cost_mode) {
        case PowerCostMode::shannon_log:
            // log2(1 + delta_rho_linear_excess) = log2(10^(dB/10))
            return delta_rho_db * 0.33219280948873623;
        case PowerCostMode::raw_db_log:
            return std::log2(std::max(delta_rho_db, spec.raw_floor_db));
    }
    return 0.0;
}

// Weighted l-theta scalarization of one objective pair.
inline double scalarize(const ParetoPoint& point, const ScalarizationSpec& spec) {
    spec.validate();
    const double gr = spec.A * spec.alpha * (point.delta_r / spec.norm_r);
    const double gp = spec.B * (1.0 - spec.alpha) * (power_cost(point.delta_rho_db, spec) / spec.norm_rho);
    if (std::isinf(spec.theta)) return std::max(gr, gp);
    if (spec.theta == 1.0) return gr + gp;
    // general finite theta via the power mean; weights sit outside the power
    return std::pow(spec.A * spec.alpha * std::pow(point.delta_r / spec.norm_r, spec.theta) +
                        spec.B * (1.0 - spec.alpha) *
                            std::pow(power_cost(point.delta_rho_db, spec) / spec.norm_rho, spec.theta),
                    1.0 / spec.theta);
}

inline std::size_t optimize_index(const std::vector<ParetoPoint>& boundary,
                                  const ScalarizationSpec& spec) {
    if (boundary.empty()) throw InfeasibleError("optimize: empty boundary");
    std::size_t best = 0;
    double best_v = scalarize(boundary[0], spec);
    for (std::size_t i = 1; i < boundary.size(); ++i) {
        const double v = scalarize(boundary[i], spec);
        if (v < best_v) {  // ties keep the smaller delta_rho (earlier index)
            best_v = v;
            best = i;
        }
    }
    return best;
}

inline TransmissionPair optimize(const ReferencePair& ref, const ConstraintSet& cs,
                                 const TradeoffModel& model, const ScalarizationSpec& spec,
                                 double grid_step_db = 0.01) {
    const auto boundary = pareto_boundary(ref, cs, model, grid_step_db);
    return boundary[optimize_index(boundary, spec)];
}

enum class Regime { Low, Medium, High };

struct RegimeInfo {
    Regime regime = Regime::Low;
    double rho_i_db = 0.0;        // inflection of R on the dB axis
    double rho_i_shift_db = 0.0;  // rho_i + delta_rho_i^min
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Low: return "Low";
        case Regime::Medium: return "Medium";
        case Regime::High: return "High";
    }
    return "?";
}

// Low: rho_s <= rho_i (concave boundary); High: rho_s > rho_i + drho_i^min
// (convex); Medium: in between.
inline RegimeInfo classify_regime(const ReferencePair& ref, double eps_m, const TradeoffModel& model,
                                  const ConstraintSet& cs) {
    RegimeInfo info;
    info.rho_i_db = inflection_snr_db(ref.n, eps_m);
    const double r_i = max_rate(ref.n, db_to_linear(info.rho_i_db), eps_m);
    const double k_i = std::max(1.0, static_cast<double>(ref.n) * r_i);
    const double drho_i = min_power_penalty_db(model, complexity_budget(cs, ref.n, k_i));
    info.rho_i_shift_db = info.rho_i_db + drho_i;
    if (ref.rho_s_db <= info.rho_i_db)
        info.regime = Regime::Low;
    else if (ref.rho_s_db > info.rho_i_shift_db)
        info.regime = Regime::High;
    else
        info.regime = Regime::Medium;
    return info;
}

// Distinct boundary indices attained by optimize over an alpha grid.
inline std::set<std::size_t> accessible_points(const std::vector<ParetoPoint>& boundary,
                                               ScalarizationSpec spec,
                                               const std::vector<double>& alpha_grid) {
    std::set<std::size_t> attained;
    for (double a : alpha_grid) {
        spec.alpha = a;
        attained.insert(optimize_index(boundary, spec));
    }
    return attained;
}

}  // namespace urllc
