#include "cavsim/entangle.hpp"
#include "cavsim/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace cavsim;

namespace {

CavityParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(0.0, 20.0);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::uniform_real_distribution<double> kr(0.3, 1.0);
    return {c(rng), d(rng), d(rng), kr(rng), 1.0};
}

}  // namespace

TEST_CASE("new scheme: identical cavities give a perfect Bell pair") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const CavityParams p = random_params(rng);
        const double phi = phase(rng);
        const auto f = atom_atom_new(TwoCavitySetup{p, p, phi, phi});
        REQUIRE(f.has_value());
        REQUIRE(std::abs(*f - 1.0) < 1e-12);
    }
}

TEST_CASE("new scheme: opposite arm phases cancel the Bell overlap") {
    const CavityParams p{4.0, 0.0, 0.0, 0.916, 1.0};
    const auto f = atom_atom_new(TwoCavitySetup{p, p, 0.0, std::numbers::pi});
    REQUIRE(f);
    CHECK(*f == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("new scheme depends only on the phase difference") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const ReflectionPair a = reflection_lossy(random_params(rng));
        const ReflectionPair b = reflection_lossy(random_params(rng));
        const double p1 = phase(rng), p2 = phase(rng), shift = phase(rng);
        REQUIRE(std::abs(*atom_atom_new(a, b, p1, p2) - *atom_atom_new(a, b, p1 + shift, p2 + shift)) < 1e-12);
    }
}

TEST_CASE("new scheme no-herald when neither cavity flips") {
    const ReflectionPair same = ReflectionPair::from_amplitudes(-0.5, -0.5);
    CHECK_FALSE(atom_atom_new(same, same).has_value());
}

TEST_CASE("new scheme near the Monte Carlo operating point") {
    CavityParams a{5.0, 0.02, -0.03, 0.9, 1.0};
    CavityParams b{5.5, -0.04, 0.01, 0.88, 1.0};
    const auto f = atom_atom_new(TwoCavitySetup{a, b});
    REQUIRE(f);
    CHECK(1.0 - *f < 0.006);
    CHECK(1.0 - *f >= 0.0);
}

TEST_CASE("old scheme: ideal cavities give both Bell states") {
    const OldSchemeBell bell = atom_atom_old(ReflectionPair::ideal(), ReflectionPair::ideal());
    REQUIRE(bell.phi_plus);
    REQUIRE(bell.psi_plus);
    CHECK(*bell.phi_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*bell.psi_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(*bell.averaged() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("old scheme: identical non-ideal cavities are imperfect") {
    const CavityParams p{4.0, 0.0, 0.0, 0.916, 1.0};
    const OldSchemeBell bell = atom_atom_old(TwoCavitySetup{p, p});
    REQUIRE(bell.averaged());
    CHECK(*bell.averaged() < 1.0 - 1e-4);
    CHECK(*bell.phi_plus < 1.0);
}

TEST_CASE("old scheme is symmetric under swapping the cavities") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const ReflectionPair a = reflection_lossy(random_params(rng));
        const ReflectionPair b = reflection_lossy(random_params(rng));
        const OldSchemeBell ab = atom_atom_old(a, b);
        const OldSchemeBell ba = atom_atom_old(b, a);
        REQUIRE(std::abs(*ab.phi_plus - *ba.phi_plus) < 1e-12);
        REQUIRE(std::abs(*ab.psi_plus - *ba.psi_plus) < 1e-12);
    }
}

TEST_CASE("closed forms match the chained gate networks") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> phase(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const ReflectionPair a = reflection_lossy(random_params(rng));
        const ReflectionPair b = reflection_lossy(random_params(rng));
        const double p1 = phase(rng), p2 = phase(rng);

        const auto closed_new = atom_atom_new(a, b, p1, p2);
        const oracle::EntanglementRun net_new = oracle::run_atom_atom_new(a, b, p1, p2);
        REQUIRE(net_new.max_bookkeeping_defect < 1e-12);
        REQUIRE(closed_new.has_value() == net_new.fidelity.has_value());
        if (closed_new) {
            REQUIRE(std::abs(*closed_new - *net_new.fidelity) < 1e-10);
            // both clicks herald with the same fidelity
            REQUIRE(std::abs(*net_new.outcome_fidelity[0] - *closed_new) < 1e-10);
            REQUIRE(std::abs(*net_new.outcome_fidelity[1] - *closed_new) < 1e-10);
        }

        const OldSchemeBell closed_old = atom_atom_old(a, b);
        const oracle::EntanglementRun net_old = oracle::run_atom_atom_old(a, b);
        REQUIRE(net_old.max_bookkeeping_defect < 1e-12);
        REQUIRE(std::abs(*closed_old.phi_plus - *net_old.outcome_fidelity[0]) < 1e-10);
        REQUIRE(std::abs(*closed_old.psi_plus - *net_old.outcome_fidelity[1]) < 1e-10);
        REQUIRE(std::abs(*closed_old.averaged() - *net_old.fidelity) < 1e-10);
    }
}

TEST_CASE("entanglement fidelities stay in [0, 1]") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> phase(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        const ReflectionPair a = reflection_lossy(random_params(rng));
        const ReflectionPair b = reflection_lossy(random_params(rng));
        const auto fn = atom_atom_new(a, b, phase(rng), phase(rng));
        const OldSchemeBell fo = atom_atom_old(a, b);
        for (const auto& f : {fn, fo.phi_plus, fo.psi_plus, fo.averaged()}) {
            if (f) {
                REQUIRE(*f >= -1e-12);
                REQUIRE(*f <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("two atoms in one cavity") {
    const TwoAtomEstimate exp2 = two_atoms_one_cavity(CavityParams{4.0, 0.0, 0.0, 0.916, 0.92});
    CHECK(exp2.cavity_fidelity == doctest::Approx(0.9996).epsilon(5e-4));
    CHECK(exp2.p_loss == doctest::Approx(0.323).epsilon(5e-3));

    const TwoAtomEstimate mismatch = two_atoms_one_cavity(ReflectionPair::ideal(), 0.92);
    CHECK(std::abs(mismatch.fidelity - 0.94) < 1e-12);
    CHECK(mismatch.p_loss == 0.0);

    const TwoAtomEstimate ideal = two_atoms_one_cavity(ReflectionPair::ideal(), 1.0);
    CHECK(ideal.fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ideal.p_loss == 0.0);

    const ReflectionPair absorbing = ReflectionPair::from_amplitudes(0.0, 0.0);
    CHECK_THROWS_AS(two_atoms_one_cavity(absorbing, 1.0), std::domain_error);
    CHECK_THROWS_AS(two_atoms_one_cavity(ReflectionPair::ideal(), 1.1), std::invalid_argument);
}
