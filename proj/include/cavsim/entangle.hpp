#pragma once

#include "cavsim/cavity.hpp"

#include <optional>

namespace cavsim {

/// Two remote nodes linked by one photon. The closed forms below ignore
/// mode mismatch (the zeta field of either parameter set is not read);
/// mismatched chains are only available through the oracle network.
struct TwoCavitySetup {
    CavityParams first;
    CavityParams second;
    double phi_1 = 0.0;  ///< MZI phase at the first node (new scheme only)
    double phi_2 = 0.0;
};

/// Fidelity of the heralded Bell pair for the MZI scheme; identical for
/// both detector outcomes. Empty when neither node flips the photon.
std::optional<double> atom_atom_new(const TwoCavitySetup& setup);
std::optional<double> atom_atom_new(const ReflectionPair& first, const ReflectionPair& second, double phi_1 = 0.0,
                                    double phi_2 = 0.0);

/// Heralded Bell fidelities for the direct-reflection scheme.
struct OldSchemeBell {
    std::optional<double> phi_plus;  ///< sigma- click
    std::optional<double> psi_plus;  ///< sigma+ click
    double weight_phi_plus = 0.0;    ///< unnormalised branch weights
    double weight_psi_plus = 0.0;

    /// Click-probability weighted mean of the two fidelities.
    std::optional<double> averaged() const;
};

OldSchemeBell atom_atom_old(const TwoCavitySetup& setup);
OldSchemeBell atom_atom_old(const ReflectionPair& first, const ReflectionPair& second);

/// Two atoms sharing one cavity, sigma+ photon reflected once.
struct TwoAtomEstimate {
    double fidelity = 0.0;         ///< full estimate at the given zeta
    double cavity_fidelity = 0.0;  ///< same formula at zeta = 1 (cavity loss and finite C only)
    double p_loss = 0.0;
};

TwoAtomEstimate two_atoms_one_cavity(const CavityParams& p);
TwoAtomEstimate two_atoms_one_cavity(const ReflectionPair& refl, double zeta);

}  // namespace cavsim
