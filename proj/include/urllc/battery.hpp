#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "urllc/moop.hpp"

namespace urllc {

// Transmit-side link budget.
struct LinkBudget {
    double pathloss_ref_db = 30.0;   // at 1 m
    double pathloss_exponent = 2.0;
    double noise_dbm = -110.0;
    double distance_m = 100.0;

    void validate() const {
        if (distance_m < 1.0) throw std::invalid_argument("LinkBudget: distance must be >= 1 m");
        if (pathloss_exponent <= 0.0) throw std::invalid_argument("LinkBudget: exponent must be > 0");
    }
};

struct BatteryState {
    double capacity_joules = 0.0;
    double remaining_joules = 0.0;

    double t() const { return capacity_joules > 0 ? remaining_joules / capacity_joules : 0.0; }
};

// Battery-dependent weight: alpha = 1 - (1 + (t/(1+t))^2)^{-1}, with t
// the remaining battery fraction in [0, 1]. Monotone increasing.
inline double alpha_from_battery(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("alpha_from_battery: t must be in [0, 1]");
    const double u = t / (1.0 + t);
    return 1.0 - 1.0 / (1.0 + u * u);
}

// Radiated transmit power needed to present SNR rho at the receiver.
inline double tx_power_watts(double rho_db, const LinkBudget& link) {
    link.validate();
    const double p_dbm = rho_db + link.noise_dbm + link.pathloss_ref_db +
                         10.0 * link.pathloss_exponent * std::log10(link.distance_m);
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

enum class BatteryPolicy { adaptive, fixed_alpha0, fixed_alpha1 };

struct SimStep {
    double t = 0.0;
    double alpha = 0.0;
    double rate = 0.0;
    double snr_db = 0.0;
    double energy_j = 0.0;
    double delta_r = 0.0;
    double delta_rho_db = 0.0;
};

struct SimResult {
    std::vector<SimStep> steps;
    std::uint64_t total_transmissions = 0;
    double total_info_bits = 0.0;
    double efficiency_bits_per_joule = 0.0;
};

// Per-codeword adaptive transmission until the battery cannot fund one
// more codeword. The scalarization spec carries theta/A/B; alpha is set
// per step from the battery level (or held fixed for the baselines).
// When spec.norm_r/norm_rho are <= 0 they are auto-set to the boundary
// endpoint ranges so both objectives are swept on comparable scales.
inline SimResult run_simulation(const ReferencePair& ref, const ConstraintSet& cs,
                                const TradeoffModel& model, ScalarizationSpec spec,
                                const LinkBudget& link, BatteryState battery,
                                BatteryPolicy policy = BatteryPolicy::adaptive,
                                double grid_step_db = 0.01) {
    const std::vector<ParetoPoint> boundary = pareto_boundary(ref, cs, model, grid_step_db);
    if (spec.norm_r <= 0.0)
        spec.norm_r = std::max(1e-12, boundary.front().delta_r);
    if (spec.norm_rho <= 0.0)
        spec.norm_rho = std::max(1e-12, power_cost(boundary.back().delta_rho_db, spec));

    SimResult res;
    while (true) {
        const double t = battery.t();
        double alpha;
        switch (policy) {
            case BatteryPolicy::fixed_alpha0: alpha = 0.0; break;
            case BatteryPolicy::fixed_alpha1: alpha = 1.0; break;
            default: alpha = alpha_from_battery(t); break;
        }
        spec.alpha = alpha;
        const ParetoPoint& pt = boundary[optimize_index(boundary, spec)];
        const double energy = tx_power_watts(pt.snr_db, link) * static_cast<double>(ref.n) * cs.T_s;
        if (energy > battery.remaining_joules) break;
        battery.remaining_joules -= energy;
        res.steps.push_back({t, alpha, pt.rate, pt.snr_db, energy, pt.delta_r, pt.delta_rho_db});
        res.total_transmissions += 1;
        res.total_info_bits += static_cast<double>(ref.n) * pt.rate;
    }
    if (res.steps.empty())
        throw InfeasibleError("run_simulation: battery cannot fund a single codeword");
    return res;
}

// n * sum(r_s - delta_r) over all transmissions, per Joule of capacity.
inline double energy_efficiency(const SimResult& result, const BatteryState& battery) {
    if (battery.capacity_joules <= 0.0) throw std::domain_error("energy_efficiency: capacity must be > 0");
    return result.total_info_bits / battery.capacity_joules;
}

}  // namespace urllc
