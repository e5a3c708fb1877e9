#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "urllc/fb_bounds.hpp"
#include "urllc/rng.hpp"

using namespace urllc;

TEST_CASE("dB conversions round-trip") {
    CHECK(db_to_linear(0.0) == Catch::Approx(1.0));
    CHECK(db_to_linear(10.0) == Catch::Approx(10.0));
    CHECK(linear_to_db(db_to_linear(3.7)) == Catch::Approx(3.7).margin(1e-12));
    CHECK_THROWS_AS(linear_to_db(-1.0), std::domain_error);
}

TEST_CASE("Q function against closed-form anchors") {
    CHECK(q_func(0.0) == Catch::Approx(0.5));
    CHECK(q_func(1.0) == Catch::Approx(0.15865525393145705).epsilon(1e-12));
    // symmetry Q(-x) = 1 - Q(x)
    for (double x : {0.3, 1.7, 4.2}) CHECK(q_func(-x) == Catch::Approx(1.0 - q_func(x)).margin(1e-14));
}

TEST_CASE("inverse Q against a numerical tail-integral oracle") {
    // oracle: integrate the standard normal density from x to 12 by Simpson
    const auto tail = [](double x) {
        const int steps = 200000;
        const double hi = 12.0;
        const double h = (hi - x) / steps;
        const double inv_sqrt_2pi = 0.3989422804014327;
        double s = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double t = x + h * i;
            const double f = inv_sqrt_2pi * std::exp(-0.5 * t * t);
            s += (i == 0 || i == steps) ? f : (i % 2 ? 4.0 * f : 2.0 * f);
        }
        return s * h / 3.0;
    };
    for (double p : {0.3, 1e-2, 1e-5}) {
        const double x = q_inv(p);
        CHECK(tail(x) == Catch::Approx(p).epsilon(1e-6));
    }
    CHECK(q_inv(1e-5) == Catch::Approx(4.264890794).epsilon(1e-8));
    CHECK(q_inv(q_func(1.234)) == Catch::Approx(1.234).margin(1e-9));
    CHECK_THROWS_AS(q_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(q_inv(1.0), std::domain_error);
}

TEST_CASE("Gauss-Hermite rule integrates exp(-x^2) moments exactly") {
    const auto& rule = gauss_hermite(64);
    double s0 = 0.0, s2 = 0.0;
    for (int i = 0; i < 64; ++i) {
        s0 += rule.weights[i];
        s2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    const double sqrt_pi = 1.7724538509055160273;
    CHECK(s0 == Catch::Approx(sqrt_pi).epsilon(1e-13));
    CHECK(s2 == Catch::Approx(0.5 * sqrt_pi).epsilon(1e-13));
}

TEST_CASE("channel moments agree with direct Monte Carlo") {
    // C = E[g(Z)], V = Var[g(Z)], Z ~ N(0,1), MC with known standard error
    for (double rho : {0.5, 2.0}) {
        CounterRng rng(42, static_cast<std::uint64_t>(rho * 100));
        const std::uint64_t N = 400000;
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = 0; i < N; ++i) {
            const double g = detail::biawgn_integrand(rng.next_gaussian(), rho);
            s += g;
            s2 += g * g;
        }
        const double mean = s / N;
        const double var = s2 / N - mean * mean;
        const ChannelMoments m = channel_moments(rho);
        const double se = std::sqrt(var / N);
        CHECK(std::abs(m.capacity - mean) < 4.0 * se);
        CHECK(m.dispersion == Catch::Approx(var).epsilon(0.02));
    }
}

TEST_CASE("channel moments limits and monotonicity") {
    CHECK(channel_moments(0.0).capacity == Catch::Approx(0.0).margin(1e-12));
    CHECK(channel_moments(0.0).dispersion == Catch::Approx(0.0).margin(1e-9));
    CHECK(channel_moments(100.0).capacity >= 0.999999);
    double prev = -1.0;
    for (double rho = 0.0; rho <= 16.0; rho += 0.5) {
        const double c = channel_moments(rho).capacity;
        CHECK(c >= prev - 1e-12);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        prev = c;
    }
    CHECK_THROWS_AS(channel_moments(-0.1), std::domain_error);
}

TEST_CASE("quadrature order refinement is converged") {
    for (double rho : {0.1, 1.0, 3.0, 10.0}) {
        const ChannelMoments a = detail::channel_moments_at_order(rho, 64);
        const ChannelMoments b = detail::channel_moments_at_order(rho, 128);
        CHECK(std::abs(a.capacity - b.capacity) < 1e-7);
        CHECK(std::abs(a.dispersion - b.dispersion) < 1e-5);
    }
}

TEST_CASE("max_rate basic behavior") {
    // backs off from capacity, shrinking with n
    const double c = channel_moments(1.0).capacity;
    const double r128 = max_rate(128, 1.0, 1e-5);
    const double r1024 = max_rate(1024, 1.0, 1e-5);
    CHECK(r128 < r1024);
    CHECK(r1024 < c);
    // exact two-term formula
    const ChannelMoments m = channel_moments(1.0);
    CHECK(r128 == Catch::Approx(m.capacity - std::sqrt(m.dispersion / 128.0) * q_inv(1e-5)).margin(1e-12));
    // clamped at zero for hopeless operating points
    CHECK(max_rate(8, 0.01, 1e-9) == 0.0);
    CHECK_THROWS_AS(max_rate(128, 1.0, 0.7), std::domain_error);
}

TEST_CASE("required_snr inverts max_rate") {
    for (double r : {0.3, 0.5, 0.9}) {
        const double rho = required_snr(128, r, 1e-5);
        CHECK(max_rate(128, rho, 1e-5) == Catch::Approx(r).margin(1e-8));
    }
    // monotone in the target rate
    CHECK(required_snr(128, 0.5, 1e-5) < required_snr(128, 0.7, 1e-5));
    CHECK_THROWS_AS(required_snr(128, 1.0, 1e-5), std::domain_error);
}

TEST_CASE("inflection point splits convex and concave segments") {
    const double rho_i = inflection_snr_db(128, 1e-5);
    CHECK(rho_i == Catch::Approx(3.655).margin(0.01));
    const auto rate_db = [](double snr_db) { return max_rate(128, db_to_linear(snr_db), 1e-5); };
    const double h = 0.05;
    // second difference positive well below, negative well above
    const double below = rate_db(rho_i - 1.0 + h) - 2.0 * rate_db(rho_i - 1.0) + rate_db(rho_i - 1.0 - h);
    const double above = rate_db(rho_i + 1.0 + h) - 2.0 * rate_db(rho_i + 1.0) + rate_db(rho_i + 1.0 - h);
    CHECK(below > 0.0);
    CHECK(above < 0.0);
    // longer blocks push the inflection toward lower SNR
    CHECK(inflection_snr_db(512, 1e-5) < rho_i);
}
