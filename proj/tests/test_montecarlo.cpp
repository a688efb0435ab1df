#include "cavsim/montecarlo.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

using namespace cavsim;

namespace {

FluctuationSpec quiet_spec() {
    FluctuationSpec spec;
    for (auto& c : spec.cavities) {
        c.c_sigma_rel = 0.0;
        c.kappa_ratio = {0.9, 0.0};
        c.delta_c = {0.0, 0.0};
        c.delta_a = {0.0, 0.0};
    }
    spec.trials = 20;
    spec.window = 1;
    return spec;
}

}  // namespace

TEST_CASE("linspace") {
    const auto g = linspace(1.0, 10.0, 500);
    CHECK(g.size() == 500);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 10.0);
    CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
    CHECK_THROWS_AS(linspace(0.0, 1.0, 0), std::invalid_argument);
    CHECK(default_c_grid() == g);
}

TEST_CASE("moving average") {
    std::vector<SweepPoint> raw;
    for (int i = 0; i < 7; ++i) {
        raw.push_back({double(i), double(i * i), 0.1});
    }
    CHECK(moving_average(raw, 1) == raw);
    const auto avg = moving_average(raw, 3);
    CHECK(avg[0].mean == doctest::Approx((0.0 + 1.0) / 2.0));
    CHECK(avg[3].mean == doctest::Approx((4.0 + 9.0 + 16.0) / 3.0));
    CHECK(avg[6].mean == doctest::Approx((25.0 + 36.0) / 2.0));
    CHECK(avg[3].std_error == doctest::Approx(std::sqrt(3 * 0.01) / 3.0));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        CHECK(avg[i].x == raw[i].x);
    }
    // window wider than the data: every point is the global mean
    const auto wide = moving_average(raw, 50);
    CHECK(wide[0].mean == doctest::Approx(wide[6].mean));
    CHECK_THROWS_AS(moving_average(raw, 0), std::invalid_argument);
}

TEST_CASE("spec validation") {
    FluctuationSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.trials = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.window = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.cavities[1].delta_a.sigma = -0.1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.phases[0].sigma = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    CHECK_THROWS_AS(mc_infidelity_curve(FluctuationSpec{}, Scheme::mzi, {}), std::invalid_argument);
    CHECK_THROWS_AS(mc_infidelity_curve(FluctuationSpec{}, Scheme::mzi, {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("no fluctuations and identical cavities: zero infidelity in the new scheme") {
    const SweepResult r = mc_infidelity_curve(quiet_spec(), Scheme::mzi, linspace(1.0, 10.0, 10));
    REQUIRE(r.points.size() == 10);
    for (const auto& p : r.points) {
        CHECK(std::abs(p.mean) < 1e-12);
        CHECK(p.std_error < 1e-12);
    }
    CHECK(r.clamped == 0);
    CHECK(r.samples == 200);
    CHECK(r.no_herald == 0);
}

TEST_CASE("phase noise with zero width reduces to the plain curve") {
    FluctuationSpec spec;
    spec.trials = 200;
    spec.window = 5;
    spec.seed = 99;
    const auto grid = linspace(1.0, 10.0, 12);
    const SweepResult plain = mc_infidelity_curve(spec, Scheme::mzi, grid);
    const SweepResult noisy = mc_phase_noise(spec, 0.0, Scheme::mzi, grid);
    CHECK(plain.points == noisy.points);
}

TEST_CASE("identical seed gives identical results, independent of thread count") {
    FluctuationSpec spec;
    spec.trials = 300;
    spec.seed = 7;
    const auto grid = linspace(1.0, 10.0, 16);
    setenv("CAVSIM_THREADS", "1", 1);
    const SweepResult one = mc_infidelity_curve(spec, Scheme::direct, grid);
    setenv("CAVSIM_THREADS", "4", 1);
    const SweepResult four = mc_infidelity_curve(spec, Scheme::direct, grid);
    unsetenv("CAVSIM_THREADS");
    CHECK(one.points == four.points);
    CHECK(one.clamped == four.clamped);

    spec.seed = 8;
    const SweepResult other = mc_infidelity_curve(spec, Scheme::direct, grid);
    CHECK_FALSE(one.points == other.points);
}

TEST_CASE("standard errors are non-negative and x is increasing") {
    FluctuationSpec spec;
    spec.trials = 100;
    const SweepResult r = mc_infidelity_curve(spec, Scheme::mzi, linspace(0.0, 3.0, 20));
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        CHECK(r.points[i].std_error >= 0.0);
        if (i > 0) {
            CHECK(r.points[i].x > r.points[i - 1].x);
        }
    }
}

TEST_CASE("new scheme beats the old scheme under the default spread") {
    FluctuationSpec spec;
    spec.trials = 2000;
    spec.window = 1;
    const auto grid = linspace(1.0, 10.0, 10);
    const SweepResult n = mc_infidelity_curve(spec, Scheme::mzi, grid);
    const SweepResult o = mc_infidelity_curve(spec, Scheme::direct, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double sigma = std::hypot(n.points[i].std_error, o.points[i].std_error);
        CHECK(n.points[i].mean <= o.points[i].mean + 3.0 * sigma);
    }
    // clamping happens (kappa_r/kappa spread reaches past 1) and is reported
    CHECK(n.clamped > 0);
    CHECK(n.clamp_fraction() < 0.02);
}

TEST_CASE("sweep_1d") {
    const CavityParams base = reference_baseline();
    const SweepPair s = sweep_1d(base, SweepAxis::delta_c, {-0.5, 0.0, 0.5}, Scheme::mzi);
    CHECK(s.fidelity.points[1].mean == doctest::Approx(avg_fidelity_new(base)).epsilon(1e-15));
    CHECK(s.success.points[1].mean == doctest::Approx(avg_success(base, Scheme::mzi)).epsilon(1e-15));
    CHECK(s.fidelity.quantity == "avg_fidelity");
    CHECK(s.success.quantity == "avg_success");
    CHECK(s.success.axis == SweepAxis::delta_c);

    const SweepPair z = sweep_1d(base, SweepAxis::zeta, {0.8, 1.0}, Scheme::mzi);
    CHECK(z.fidelity.points[1].mean - z.fidelity.points[0].mean == doctest::Approx(0.04).epsilon(0.01));
    const SweepPair k = sweep_1d(base, SweepAxis::kappa_ratio, {0.7, 1.0}, Scheme::direct);
    CHECK(k.fidelity.points[1].mean - k.fidelity.points[0].mean == doctest::Approx(0.124).epsilon(0.01));

    CHECK_THROWS_AS(sweep_1d(base, SweepAxis::zeta, {0.5, 1.5}, Scheme::mzi), std::invalid_argument);
    CHECK_THROWS_AS(sweep_1d(base, SweepAxis::cooperativity, {-1.0, 1.0}, Scheme::mzi), std::invalid_argument);
}

TEST_CASE("axis names") {
    for (SweepAxis a : {SweepAxis::zeta, SweepAxis::kappa_ratio, SweepAxis::delta_c, SweepAxis::cooperativity}) {
        CHECK(sweep_axis_from_string(to_string(a)) == a);
    }
    CHECK_THROWS_AS(sweep_axis_from_string("gamma"), std::invalid_argument);
}
