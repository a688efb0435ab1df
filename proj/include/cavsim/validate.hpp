#pragma once

#include "cavsim/analytic.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cavsim::validate {

enum class Comparison { within, at_least };

/// One reproduced number with the reference it is checked against.
struct Check {
    std::string name;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::within;
    std::string note;

    bool pass() const;
};

struct Report {
    std::string title;
    std::vector<Check> checks;

    bool passed() const;
};

/// Direct-reflection gate at the operating point of the atom-photon
/// entanglement experiment (zeta 0.92, C 3, detuned, kappa_r/kappa 0.92).
Report experiment_1();

/// Two atoms in one cavity (zeta 0.92, C 4, resonant, kappa_r/kappa 0.916).
Report experiment_2();

struct Balance {
    double attenuation = 1.0;  ///< amplitude transmission inserted in the bypass arm
    GateResult unbalanced;
    GateResult balanced;
    GateResult balanced_oracle;
};

/// Attenuates the bypass arm so the heralded |V> and |H> branches carry
/// equal weight: transmission = sqrt(zeta) |r_c - r_nc| / 2. Empty when
/// the cavity never flips the photon (r_c == r_nc).
std::optional<Balance> loss_balance(const CavityParams& p, const JointState& s);

/// Output amplitudes and balancing at C = 4, kappa_r/kappa = 0.916, zeta = 1.
Report loss_balance_report();

/// nbar e^{-nbar} eta p_success.
double multiphoton_throughput(double nbar, double eta, double p_success);

Report throughput_report();

/// Average-fidelity drops along the zeta and kappa_ratio axes.
Report sweep_deltas_report();

std::vector<Report> run_all();

nlohmann::json to_json(const std::vector<Report>& reports);
std::string to_text(const std::vector<Report>& reports);

}  // namespace cavsim::validate
