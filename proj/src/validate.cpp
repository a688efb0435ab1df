#include "cavsim/validate.hpp"

#include "cavsim/entangle.hpp"
#include "cavsim/io.hpp"
#include "cavsim/montecarlo.hpp"
#include "cavsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cavsim::validate {

namespace {

Check within(std::string name, double computed, double expected, double tolerance, std::string note = {}) {
    return Check{std::move(name), computed, expected, tolerance, Comparison::within, std::move(note)};
}

Check at_least(std::string name, double computed, double bound, std::string note = {}) {
    return Check{std::move(name), computed, bound, 0.0, Comparison::at_least, std::move(note)};
}

double fidelity_or_zero(const GateResult& g) { return g.fidelity.value_or(0.0); }

}  // namespace

bool Check::pass() const {
    if (!std::isfinite(computed)) {
        return false;
    }
    if (comparison == Comparison::at_least) {
        return computed >= expected;
    }
    return std::abs(computed - expected) <= tolerance;
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

Report experiment_1() {
    const CavityParams p{3.0, 0.12, 0.83 * 0.12, 0.92, 0.92};
    const GateResult g = cz_old(p, JointState::equal_superposition());
    const double f = fidelity_or_zero(g);
    // Preparation, readout and multi-photon errors outside the gate model cost a further 10 %.
    constexpr double kOtherErrors = 0.10;
    Report r{"experiment 1: atom-photon entanglement", {}};
    r.checks.push_back(within("fidelity", f, 0.90, 0.01));
    r.checks.push_back(within("success probability", g.success_probability, 0.69, 0.01));
    r.checks.push_back(within("fidelity with other errors", f - kOtherErrors, 0.80, 0.01, "measured 0.807"));
    return r;
}

Report experiment_2() {
    const CavityParams p{4.0, 0.0, 0.0, 0.916, 0.92};
    const TwoAtomEstimate est = two_atoms_one_cavity(p);
    const TwoAtomEstimate mismatch_only = two_atoms_one_cavity(ReflectionPair::ideal(), 0.92);
    Report r{"experiment 2: two atoms in one cavity", {}};
    r.checks.push_back(within("fidelity (cavity loss and finite C)", est.cavity_fidelity, 0.9996, 5e-4));
    r.checks.push_back(within("photon loss probability", est.p_loss, 0.323, 5e-3, "measured 0.33"));
    r.checks.push_back(within("mismatch-only fidelity", mismatch_only.fidelity, 0.94, 1e-12));
    return r;
}

std::optional<Balance> loss_balance(const CavityParams& p, const JointState& s) {
    const ReflectionPair refl = reflection_lossy(p);
    const double flip = std::abs(refl.r_c - refl.r_nc);
    const double transmission = std::sqrt(p.zeta) * flip / 2.0;
    if (transmission < kNoHeraldThreshold) {
        return std::nullopt;
    }
    Balance b;
    b.attenuation = std::min(1.0, transmission);
    b.unbalanced = cz_new(refl, p.zeta, s);
    b.balanced = cz_new(refl, p.zeta, s, 0.0, b.attenuation);
    b.balanced_oracle = oracle::run_cz_new(refl, p.zeta, s, 0.0, b.attenuation).gate;
    return b;
}

Report loss_balance_report() {
    const CavityParams p{4.0, 0.0, 0.0, 0.916, 1.0};
    const JointState s = JointState::equal_superposition();
    const ReflectionPair refl = reflection_lossy(p);
    const GateResult analytic = cz_new(refl, p.zeta, s);
    const GateResult network = oracle::run_cz_new(refl, p.zeta, s).gate;
    const auto v0 = [](const GateResult& g) { return std::abs(g.output.at(SpatialMode::matched, 0, 0)); };
    const auto h0 = [](const GateResult& g) { return std::abs(g.output.at(SpatialMode::matched, 1, 0)); };

    Report r{"loss balancing in the bypass arm", {}};
    r.checks.push_back(within("|V> amplitude (analytic)", v0(analytic), 0.548333, 1e-5));
    r.checks.push_back(within("|H> amplitude (analytic)", h0(analytic), 0.446465, 1e-5));
    r.checks.push_back(within("|V> amplitude (network)", v0(network), 0.548333, 1e-5));
    r.checks.push_back(within("|H> amplitude (network)", h0(network), 0.446465, 1e-5));

    const auto b = loss_balance(p, s);
    if (!b) {
        throw std::logic_error("loss balancing unexpectedly impossible at the reference point");
    }
    r.checks.push_back(within("balanced |V| - |H|", v0(b->balanced) - h0(b->balanced), 0.0, 1e-12));
    r.checks.push_back(
        at_least("balanced fidelity >= unbalanced", fidelity_or_zero(b->balanced), fidelity_or_zero(b->unbalanced)));
    r.checks.push_back(within("balanced fidelity, network vs analytic",
                              fidelity_or_zero(b->balanced_oracle) - fidelity_or_zero(b->balanced), 0.0, 1e-10));
    r.checks.push_back(within("balanced success, network vs analytic",
                              b->balanced_oracle.success_probability - b->balanced.success_probability, 0.0, 1e-10,
                              "balanced success " + io::format_number(b->balanced.success_probability)));
    return r;
}

double multiphoton_throughput(double nbar, double eta, double p_success) {
    if (!(nbar >= 0.0) || !(eta >= 0.0 && eta <= 1.0) || !(p_success >= 0.0 && p_success <= 1.0)) {
        throw std::invalid_argument("multiphoton_throughput: nbar >= 0, eta and p_success in [0, 1]");
    }
    return nbar * std::exp(-nbar) * eta * p_success;
}

Report throughput_report() {
    const CavityParams base = reference_baseline();
    const double p_old = avg_success(base, Scheme::direct);
    const double p_new = avg_success(base, Scheme::mzi);
    Report r{"weak coherent source throughput", {}};
    r.checks.push_back(within("average success (old)", p_old, 0.70, 0.02));
    r.checks.push_back(within("average success (new)", p_new, 0.80, 0.02));
    r.checks.push_back(within("throughput (old)", multiphoton_throughput(0.13, 0.55, p_old), 0.044, 0.002));
    r.checks.push_back(within("throughput (new)", multiphoton_throughput(0.13, 0.55, p_new), 0.050, 0.002));
    return r;
}

Report sweep_deltas_report() {
    const CavityParams base = reference_baseline();
    auto with = [&](double zeta, double kappa_ratio) {
        CavityParams p = base;
        p.zeta = zeta;
        p.kappa_ratio = kappa_ratio;
        return p;
    };
    const auto drop = [&](const CavityParams& hi, const CavityParams& lo, Scheme scheme) {
        if (scheme == Scheme::mzi) {
            return 100.0 * (avg_fidelity_new(hi) - avg_fidelity_new(lo));
        }
        return 100.0 * (avg_fidelity_old(hi) - avg_fidelity_old(lo));
    };
    const CavityParams zeta_hi = with(1.0, base.kappa_ratio);
    const CavityParams zeta_lo = with(0.8, base.kappa_ratio);
    const CavityParams kr_hi = with(base.zeta, 1.0);
    const CavityParams kr_lo = with(base.zeta, 0.7);

    Report r{"average fidelity drops (percentage points)", {}};
    r.checks.push_back(within("zeta 1.0 -> 0.8 (old)", drop(zeta_hi, zeta_lo, Scheme::direct), 15.0, 1.0));
    r.checks.push_back(within("zeta 1.0 -> 0.8 (new)", drop(zeta_hi, zeta_lo, Scheme::mzi), 4.0, 1.0));
    r.checks.push_back(within("kappa_r/kappa 1.0 -> 0.7 (old)", drop(kr_hi, kr_lo, Scheme::direct), 12.4, 1.0));
    r.checks.push_back(within("kappa_r/kappa 1.0 -> 0.7 (new)", drop(kr_hi, kr_lo, Scheme::mzi), 3.7, 1.0));
    return r;
}

std::vector<Report> run_all() {
    return {experiment_1(), experiment_2(), loss_balance_report(), sweep_deltas_report(), throughput_report()};
}

nlohmann::json to_json(const std::vector<Report>& reports) {
    nlohmann::json out = nlohmann::json::array();
    bool all = true;
    for (const auto& r : reports) {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : r.checks) {
            nlohmann::json jc{{"name", c.name},
                              {"computed", io::round12(c.computed)},
                              {"expected", io::round12(c.expected)},
                              {"comparison", c.comparison == Comparison::within ? "within" : "at_least"},
                              {"tolerance", io::round12(c.tolerance)},
                              {"pass", c.pass()}};
            if (!c.note.empty()) {
                jc["note"] = c.note;
            }
            checks.push_back(std::move(jc));
        }
        all = all && r.passed();
        out.push_back({{"title", r.title}, {"pass", r.passed()}, {"checks", checks}});
    }
    return nlohmann::json{{"pass", all}, {"reports", out}};
}

std::string to_text(const std::vector<Report>& reports) {
    std::ostringstream os;
    for (const auto& r : reports) {
        os << "== " << r.title << '\n';
        for (const auto& c : r.checks) {
            os << "  [" << (c.pass() ? "PASS" : "FAIL") << "] " << c.name << ": " << io::format_number(c.computed);
            if (c.comparison == Comparison::within) {
                os << " (expected " << io::format_number(c.expected) << " +/- " << io::format_number(c.tolerance)
                   << ")";
            } else {
                os << " (at least " << io::format_number(c.expected) << ")";
            }
            if (!c.note.empty()) {
                os << "  " << c.note;
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace cavsim::validate
