#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "urllc/battery.hpp"

using namespace urllc;

namespace {

const TradeoffModel kModel = paper_preset_model();

ScalarizationSpec battery_spec(double theta) {
    ScalarizationSpec spec;
    spec.theta = theta;
    spec.A = 1.0;
    spec.B = 1.0 / 9.0;
    spec.norm_r = 0.0;   // auto: boundary endpoint ranges
    spec.norm_rho = 0.0;
    return spec;
}

}  // namespace

TEST_CASE("battery weight curve anchors") {
    CHECK(alpha_from_battery(0.0) == 0.0);
    CHECK(alpha_from_battery(1.0) == Catch::Approx(0.2));
    CHECK(alpha_from_battery(0.5) == Catch::Approx(0.1));  // (1/3)^2 -> 1 - 1/(10/9)
    double prev = -1.0;
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const double a = alpha_from_battery(t);
        CHECK(a >= prev);
        CHECK(a >= 0.0);
        CHECK(a <= 0.2);
        prev = a;
    }
    CHECK_THROWS_AS(alpha_from_battery(1.5), std::domain_error);
    CHECK_THROWS_AS(alpha_from_battery(-0.1), std::domain_error);
}

TEST_CASE("link budget converts SNR to radiated power") {
    LinkBudget link;  // 30 dB at 1 m, exponent 2, -110 dBm noise, 100 m
    // rho = 0 dB -> P = -110 + 30 + 40 = -40 dBm = 1e-7 W
    CHECK(tx_power_watts(0.0, link) == Catch::Approx(1e-7).epsilon(1e-12));
    // +10 dB SNR costs x10 power
    CHECK(tx_power_watts(10.0, link) == Catch::Approx(1e-6).epsilon(1e-12));
    LinkBudget near = link;
    near.distance_m = 10.0;
    CHECK(tx_power_watts(0.0, near) == Catch::Approx(1e-9).epsilon(1e-12));
    LinkBudget bad = link;
    bad.distance_m = 0.5;
    CHECK_THROWS_AS(tx_power_watts(0.0, bad), std::invalid_argument);
}

TEST_CASE("battery state tracks the remaining fraction") {
    BatteryState b{2.0, 0.5};
    CHECK(b.t() == Catch::Approx(0.25));
}

TEST_CASE("simulation conserves energy and drains monotonically") {
    ConstraintSet cs;
    const ReferencePair ref = make_reference(128, 0.5, cs.eps_m);
    LinkBudget link;
    BatteryState battery{5e-7, 5e-7};
    const SimResult res = run_simulation(ref, cs, kModel, battery_spec(1.0), link, battery);
    REQUIRE(!res.steps.empty());
    CHECK(res.total_transmissions == res.steps.size());
    double spent = 0.0, bits = 0.0;
    double prev_t = 1.0 + 1e-12;
    for (const auto& st : res.steps) {
        CHECK(st.t <= prev_t);
        prev_t = st.t;
        CHECK(st.energy_j > 0.0);
        CHECK(st.rate == Catch::Approx(ref.r_s - st.delta_r).margin(1e-12));
        spent += st.energy_j;
        bits += 128.0 * st.rate;
    }
    CHECK(spent <= battery.capacity_joules + 1e-18);
    // the leftover cannot fund one more codeword at the cheapest boundary point
    const auto bd = pareto_boundary(ref, cs, kModel);
    const double cheapest = tx_power_watts(bd.front().snr_db, link) * 128.0 * cs.T_s;
    CHECK(battery.capacity_joules - spent < cheapest);
    CHECK(res.total_info_bits == Catch::Approx(bits));
    CHECK(energy_efficiency(res, battery) == Catch::Approx(bits / battery.capacity_joules));
}

TEST_CASE("weighted-sum policy transitions once near half battery") {
    ConstraintSet cs;
    const ReferencePair ref = make_reference(128, 0.5, cs.eps_m);
    LinkBudget link;
    BatteryState battery{5e-7, 5e-7};
    const SimResult res = run_simulation(ref, cs, kModel, battery_spec(1.0), link, battery);
    // rate trajectory: exactly one downward switch
    int transitions = 0;
    double switch_t = -1.0;
    for (std::size_t i = 1; i < res.steps.size(); ++i) {
        if (res.steps[i].rate != res.steps[i - 1].rate) {
            ++transitions;
            switch_t = res.steps[i].t;
            CHECK(res.steps[i].rate < res.steps[i - 1].rate);
        }
    }
    CHECK(transitions == 1);
    CHECK(switch_t == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("Chebyshev policy degrades smoothly through many levels") {
    ConstraintSet cs;
    const ReferencePair ref = make_reference(128, 0.5, cs.eps_m);
    LinkBudget link;
    BatteryState battery{5e-7, 5e-7};
    const SimResult res =
        run_simulation(ref, cs, kModel, battery_spec(std::numeric_limits<double>::infinity()), link, battery);
    std::set<double> levels;
    double prev = 1.0;
    for (const auto& st : res.steps) {
        CHECK(st.rate <= prev + 1e-12);
        prev = st.rate;
        levels.insert(st.rate);
    }
    CHECK(levels.size() >= 10);
}

TEST_CASE("fixed policies pin the endpoints") {
    ConstraintSet cs;
    const ReferencePair ref = make_reference(128, 0.5, cs.eps_m);
    const auto bd = pareto_boundary(ref, cs, kModel);
    LinkBudget link;
    BatteryState battery{2e-7, 2e-7};
    const SimResult low = run_simulation(ref, cs, kModel, battery_spec(1.0), link, battery,
                                         BatteryPolicy::fixed_alpha0);
    for (const auto& st : low.steps) {
        CHECK(st.snr_db == Catch::Approx(bd.front().snr_db));
        CHECK(st.rate == Catch::Approx(bd.front().rate));
    }
    const SimResult high = run_simulation(ref, cs, kModel, battery_spec(1.0), link, battery,
                                          BatteryPolicy::fixed_alpha1);
    for (const auto& st : high.steps) {
        CHECK(st.snr_db == Catch::Approx(bd.back().snr_db));
        CHECK(st.rate == Catch::Approx(ref.r_s).margin(1e-8));
    }
    // the low-power fixed policy always squeezes out at least as many codewords
    CHECK(low.total_transmissions >= high.total_transmissions);
}

TEST_CASE("undersized battery is reported as infeasible") {
    ConstraintSet cs;
    const ReferencePair ref = make_reference(128, 0.5, cs.eps_m);
    LinkBudget link;
    BatteryState battery{1e-15, 1e-15};
    CHECK_THROWS_AS(run_simulation(ref, cs, kModel, battery_spec(1.0), link, battery), InfeasibleError);
}

TEST_CASE("energy efficiency guards its domain") {
    SimResult res;
    res.total_info_bits = 10.0;
    CHECK_THROWS_AS(energy_efficiency(res, BatteryState{0.0, 0.0}), std::domain_error);
    CHECK(energy_efficiency(res, BatteryState{2.0, 0.0}) == Catch::Approx(5.0));
}
