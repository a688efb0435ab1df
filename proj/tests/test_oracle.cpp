#include "cavsim/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace cavsim;
using namespace cavsim::oracle;

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2;

std::pair<complex, complex> random_qubit(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    const double c = u(rng);
    return {std::sqrt((1 + c) / 2) * std::polar(1.0, ph(rng)), std::sqrt((1 - c) / 2) * std::polar(1.0, ph(rng))};
}

JointState random_state(std::mt19937_64& rng) {
    const auto [ap, bp] = random_qubit(rng);
    const auto [a, b] = random_qubit(rng);
    return {ap, bp, a, b};
}

CavityParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(0.0, 20.0);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return {c(rng), d(rng), d(rng), unit(rng), unit(rng)};
}

template <std::size_t N>
void check_unitary(const std::array<complex, N * N>& m) {
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            complex s = 0.0;
            for (std::size_t k = 0; k < N; ++k) {
                s += m[i * N + k] * std::conj(m[j * N + k]);
            }
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

const std::vector<std::array<complex, 2>> kAtomZero{{1.0, 0.0}};

}  // namespace

TEST_CASE("optical elements are unitary") {
    check_unitary<2>(waveplate_matrix(Waveplate::half));
    check_unitary<2>(waveplate_matrix(Waveplate::quarter));
    check_unitary<4>(pbs_matrix());
}

TEST_CASE("PBS routes by polarization") {
    NetworkState s = prepare({"in", "t", "r"}, "in", 1.0, 0.0, kAtomZero, 1.0, 0.0);
    s = apply_pbs(s, "in", "t", "r");
    CHECK(std::abs(s.amplitude(s.path_index("t"), SpatialMode::matched, Polarization::H, 0) - 1.0) < 1e-15);
    CHECK(s.path_norm_sq(s.path_index("in")) == 0.0);

    NetworkState d = prepare({"in", "t", "r"}, "in", kInvSqrt2, kInvSqrt2, kAtomZero, 1.0, 0.0);
    d = apply_pbs(d, "in", "t", "r");
    CHECK(d.path_norm_sq(d.path_index("t")) == doctest::Approx(0.5));
    CHECK(d.path_norm_sq(d.path_index("r")) == doctest::Approx(0.5));
    CHECK(d.optical_norm_sq() == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(apply_pbs(d, "nowhere", "t", "r"), std::invalid_argument);
}

TEST_CASE("two-input PBS combines ports") {
    NetworkState s = prepare({"a", "b", "t", "r"}, "a", 0.6, 0.0, kAtomZero, 1.0, 0.0);
    s.amplitude(s.path_index("b"), SpatialMode::matched, Polarization::V, 0) = 0.8;
    s = apply_pbs(s, "a", "b", "t", "r");
    CHECK(s.path_norm_sq(s.path_index("t")) == doctest::Approx(1.0));
    CHECK(std::abs(s.amplitude(s.path_index("t"), SpatialMode::matched, Polarization::H, 0) - 0.6) < 1e-15);
    CHECK(std::abs(s.amplitude(s.path_index("t"), SpatialMode::matched, Polarization::V, 0) - 0.8) < 1e-15);
}

TEST_CASE("waveplates") {
    NetworkState v = prepare({"p"}, "p", 0.0, 1.0, kAtomZero, 1.0, 0.0);
    const NetworkState h = apply_waveplate(v, "p", Waveplate::half);
    CHECK(std::abs(h.amplitude(0, SpatialMode::matched, Polarization::H, 0) - 1.0) < 1e-15);
    const NetworkState back = apply_waveplate(h, "p", Waveplate::half);
    CHECK(std::abs(back.amplitude(0, SpatialMode::matched, Polarization::V, 0) - 1.0) < 1e-15);

    // QWP sends sigma+ to V and sigma- to (minus) H
    NetworkState plus = prepare({"p"}, "p", kInvSqrt2, kInvSqrt2, kAtomZero, 1.0, 0.0);
    plus = apply_waveplate(plus, "p", Waveplate::quarter);
    CHECK(std::norm(plus.amplitude(0, SpatialMode::matched, Polarization::V, 0)) == doctest::Approx(1.0));
    NetworkState minus = prepare({"p"}, "p", kInvSqrt2, -kInvSqrt2, kAtomZero, 1.0, 0.0);
    minus = apply_waveplate(minus, "p", Waveplate::quarter);
    CHECK(std::norm(minus.amplitude(0, SpatialMode::matched, Polarization::H, 0)) == doctest::Approx(1.0));
}

TEST_CASE("scattering with ideal reflections is a pure phase map") {
    // sigma+ with |0>_a couples (+1), sigma- with |0>_a does not (-1)
    const std::vector<std::array<complex, 2>> atom0{{1.0, 0.0}};
    NetworkState plus = prepare({"c"}, "c", kInvSqrt2, kInvSqrt2, atom0, 1.0, 0.0);
    plus = apply_scattering(plus, "c", ReflectionPair::ideal(), CouplingRule::symmetric);
    CHECK(std::abs(plus.amplitude(0, SpatialMode::matched, Polarization::H, 0) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(plus.amplitude(0, SpatialMode::matched, Polarization::V, 0) - kInvSqrt2) < 1e-15);

    NetworkState minus = prepare({"c"}, "c", kInvSqrt2, -kInvSqrt2, atom0, 1.0, 0.0);
    minus = apply_scattering(minus, "c", ReflectionPair::ideal(), CouplingRule::symmetric);
    CHECK(std::abs(minus.amplitude(0, SpatialMode::matched, Polarization::H, 0) + kInvSqrt2) < 1e-15);
    CHECK(std::abs(minus.amplitude(0, SpatialMode::matched, Polarization::V, 0) - kInvSqrt2) < 1e-15);
}

TEST_CASE("fully mismatched light is untouched by the cavity") {
    const ReflectionPair lossy = reflection_lossy(CavityParams{2.0, 0.1, 0.0, 0.7, 0.0});
    NetworkState s = prepare({"c"}, "c", 0.6, 0.8, {{kInvSqrt2, kInvSqrt2}}, 0.0, 0.4);
    const NetworkState after = apply_scattering(s, "c", lossy, CouplingRule::symmetric);
    for (std::size_t atoms = 0; atoms < 2; ++atoms) {
        for (Polarization pol : {Polarization::H, Polarization::V}) {
            CHECK(after.amplitude(0, SpatialMode::mismatched, pol, atoms) ==
                  s.amplitude(0, SpatialMode::mismatched, pol, atoms));
        }
    }
    CHECK(after.loss_probability() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("full MZI network on H with an ideal cavity: |H>|g+-> -> +-|V>|g+->") {
    // |g+-> = (|0> +- |1>)/sqrt2
    for (int sign : {+1, -1}) {
        const JointState s{0.0, 1.0, kInvSqrt2, sign * kInvSqrt2};
        const NetworkRun run = run_cz_new(ReflectionPair::ideal(), 1.0, s);
        REQUIRE(run.gate.heralded());
        CHECK(*run.gate.fidelity == doctest::Approx(1.0).epsilon(1e-14));
        const complex h0 = run.gate.output.at(SpatialMode::matched, 1, 0);
        const complex h1 = run.gate.output.at(SpatialMode::matched, 1, 1);
        // ideal CZ output for this input: (|0> - |1>)/sqrt2 on |1>_p for g+, (|0> + |1>)/sqrt2 for g-
        CHECK(std::abs(h0 - kInvSqrt2) < 1e-12);
        CHECK(std::abs(h1 + sign * kInvSqrt2) < 1e-12);
    }
}

TEST_CASE("attenuator moves weight into a loss channel") {
    NetworkState s = prepare({"p"}, "p", 0.0, 1.0, kAtomZero, 1.0, 0.0);
    const std::size_t before = s.loss_channel_count();
    s = apply_attenuator(s, "p", 0.5);
    CHECK(s.loss_channel_count() > before);
    CHECK(s.optical_norm_sq() == doctest::Approx(0.25));
    CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(apply_attenuator(s, "p", 1.5), std::invalid_argument);
}

TEST_CASE("herald projection") {
    NetworkState s = prepare({"a", "b"}, "a", 1.0, 0.0, kAtomZero, 1.0, 0.0);
    Herald h = herald(s, {"a"});
    REQUIRE(h.state);
    CHECK(h.probability == doctest::Approx(1.0));
    CHECK(herald(s, {"b"}).state == std::nullopt);
    CHECK_THROWS_AS(herald(s, {}), std::invalid_argument);
}

TEST_CASE("network reproduces the loss-balancing reference amplitudes") {
    const ReflectionPair r = reflection_lossy(CavityParams{4.0, 0.0, 0.0, 0.916, 1.0});
    const NetworkRun run = run_cz_new(r, 1.0, JointState::equal_superposition());
    CHECK(std::abs(run.gate.output.at(SpatialMode::matched, 0, 0)) == doctest::Approx(0.548333).epsilon(1e-5));
    CHECK(std::abs(run.gate.output.at(SpatialMode::matched, 1, 0)) == doctest::Approx(0.446465).epsilon(1e-5));
}

TEST_CASE("new-scheme herald probability at the reference point") {
    const ReflectionPair r = reflection_lossy(CavityParams{4.0, 0.0, 0.0, 0.916, 0.92});
    const NetworkRun run = run_cz_new(r, 0.92, JointState::equal_superposition());
    CHECK(run.gate.success_probability == doctest::Approx(0.80).epsilon(0.02));
}

TEST_CASE("network and closed forms agree on random inputs") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const CavityParams p = random_params(rng);
        const JointState s = random_state(rng);
        const ReflectionPair r = reflection_lossy(p);
        const double phi = phase(rng);
        const double att = unit(rng);
        const double theta = phase(rng);

        const GateResult a = cz_new(r, p.zeta, s, phi, att);
        const NetworkRun n = run_cz_new(r, p.zeta, s, phi, att, theta);
        REQUIRE(n.max_bookkeeping_defect < 1e-12);
        REQUIRE(std::abs(a.success_probability - n.gate.success_probability) < 1e-10);
        REQUIRE(a.heralded() == n.gate.heralded());
        if (a.heralded()) {
            REQUIRE(std::abs(*a.fidelity - *n.gate.fidelity) < 1e-10);
        }

        const GateResult ao = cz_old(r, p.zeta, s);
        const NetworkRun no = run_cz_old(r, p.zeta, s, theta);
        REQUIRE(no.max_bookkeeping_defect < 1e-12);
        REQUIRE(std::abs(ao.success_probability - no.gate.success_probability) < 1e-10);
        if (ao.heralded()) {
            REQUIRE(std::abs(*ao.fidelity - *no.gate.fidelity) < 1e-10);
        }
    }
}

TEST_CASE("heralded results do not depend on the mismatch phase") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> phase(-10.0, 10.0);
    const ReflectionPair r = reflection_lossy(CavityParams{3.0, 0.1, 0.05, 0.9, 0.8});
    const JointState s = random_state(rng);
    const NetworkRun ref_new = run_cz_new(r, 0.8, s, 0.2, 1.0, 0.0);
    const NetworkRun ref_old = run_cz_old(r, 0.8, s, 0.0);
    for (int i = 0; i < 50; ++i) {
        const double theta = phase(rng);
        const NetworkRun n = run_cz_new(r, 0.8, s, 0.2, 1.0, theta);
        const NetworkRun o = run_cz_old(r, 0.8, s, theta);
        REQUIRE(std::abs(*n.gate.fidelity - *ref_new.gate.fidelity) < 1e-10);
        REQUIRE(std::abs(n.gate.success_probability - ref_new.gate.success_probability) < 1e-10);
        REQUIRE(std::abs(*o.gate.fidelity - *ref_old.gate.fidelity) < 1e-10);
        REQUIRE(std::abs(o.gate.success_probability - ref_old.gate.success_probability) < 1e-10);
    }
}

TEST_CASE("loss channels stay orthogonal") {
    // Two scatterings off absorbing cavities: every removed amplitude sits in
    // its own channel, so the total loss is the sum of the separate losses.
    const ReflectionPair half = ReflectionPair::from_amplitudes(0.5, -0.5);
    NetworkState s = prepare({"c"}, "c", kInvSqrt2, kInvSqrt2, {{kInvSqrt2, kInvSqrt2}}, 1.0, 0.0);
    s = apply_scattering(s, "c", half, CouplingRule::symmetric);
    const double first = s.loss_probability();
    CHECK(first == doctest::Approx(0.75));
    s = apply_scattering(s, "c", half, CouplingRule::symmetric);
    CHECK(s.loss_probability() == doctest::Approx(0.75 + 0.25 * 0.75));
    CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-15));
}
