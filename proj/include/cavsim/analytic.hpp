#pragma once

#include "cavsim/cavity.hpp"

#include <array>
#include <numbers>
#include <optional>
#include <string>

namespace cavsim {

/// Which atom-photon CZ implementation a formula refers to.
///
/// `mzi`: photon split by polarization in a Mach-Zehnder interferometer,
/// only |H> = |1>_p scatters off a cavity holding a symmetric
/// (doubly degenerate) atom; unflipped light is rejected.
/// `direct`: the whole photon reflects off a cavity holding a
/// three-level atom; photonic qubit encoded as |sigma-> = |0>_p,
/// |sigma+> = |1>_p.
enum class Scheme { mzi, direct };

std::string to_string(Scheme s);
/// Accepts "new"/"mzi" and "old"/"direct".
Scheme scheme_from_string(const std::string& name);

/// Product input state (alpha_p|0>_p + beta_p|1>_p)(alpha|0>_a + beta|1>_a).
///
/// For Scheme::mzi |0>_p = |V>, |1>_p = |H>; for Scheme::direct
/// |0>_p = |sigma->, |1>_p = |sigma+>.
struct JointState {
    complex alpha_p{std::numbers::sqrt2 / 2, 0.0};
    complex beta_p{std::numbers::sqrt2 / 2, 0.0};
    complex alpha{std::numbers::sqrt2 / 2, 0.0};
    complex beta{std::numbers::sqrt2 / 2, 0.0};

    /// Both qubits normalised to within 1e-12, else std::invalid_argument.
    void validate() const;

    static JointState equal_superposition() { return {}; }

    /// Bloch parameterisation: alpha = cos(theta/2) e^{i azimuth},
    /// beta = sin(theta/2), for the photon and the atom respectively.
    static JointState from_bloch(double theta_p, double azimuth_p, double theta_a, double azimuth_a);
};

enum class SpatialMode { matched = 0, mismatched = 1 };

/// Heralded (normalised) photon-atom output, one amplitude per
/// (spatial mode, photonic bit, atomic bit).
struct OutputState {
    std::array<complex, 8> amplitudes{};

    complex& at(SpatialMode mode, int photon, int atom) { return amplitudes[index(mode, photon, atom)]; }
    complex at(SpatialMode mode, int photon, int atom) const { return amplitudes[index(mode, photon, atom)]; }

private:
    static std::size_t index(SpatialMode mode, int photon, int atom) {
        return static_cast<std::size_t>(static_cast<int>(mode) * 4 + photon * 2 + atom);
    }
};

/// Success probabilities below this are treated as "no herald".
inline constexpr double kNoHeraldThreshold = 1e-12;

struct GateResult {
    /// Empty when the gate never heralds (success_probability below
    /// kNoHeraldThreshold); averages must skip such points.
    std::optional<double> fidelity;
    double success_probability = 0.0;
    double p_loss = 0.0;      ///< photon lost from the cavity (or the attenuator)
    double p_h_reject = 0.0;  ///< conditional on survival, the unflipped branch is rejected (mzi only)
    OutputState output;       ///< mismatched-mode phase taken as zero

    bool heralded() const { return fidelity.has_value(); }
};

/// MZI scheme gate. `mzi_phase` is the extra phase picked up by the
/// bypass (|V>) arm; `arm_transmission` is an amplitude attenuation in
/// that arm, with the removed weight counted as loss.
GateResult cz_new(const ReflectionPair& refl, double zeta, const JointState& s, double mzi_phase = 0.0,
                  double arm_transmission = 1.0);
GateResult cz_new(const CavityParams& p, const JointState& s, double mzi_phase = 0.0,
                  double arm_transmission = 1.0);

/// Direct-reflection reference scheme. p_h_reject is always zero.
GateResult cz_old(const ReflectionPair& refl, double zeta, const JointState& s);
GateResult cz_old(const CavityParams& p, const JointState& s);

/// Fidelity averaged over the photon Bloch sphere. The MZI-scheme
/// fidelity does not depend on the atomic state.
double avg_fidelity_new(const CavityParams& p, double mzi_phase = 0.0);

/// Fidelity averaged over both the atom and photon Bloch spheres.
double avg_fidelity_old(const CavityParams& p);

/// Success probability averaged the same way as the matching fidelity.
double avg_success(const CavityParams& p, Scheme scheme, double mzi_phase = 0.0);

}  // namespace cavsim
