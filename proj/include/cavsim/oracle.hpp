#pragma once

#include "cavsim/analytic.hpp"
#include "cavsim/cavity.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

/// Brute-force state-vector model of the optical networks.
///
/// A single photon travels through labelled paths carrying a polarization
/// (H/V) and a spatial mode (matched/mismatched with the cavity mode). The
/// photon is entangled with one or two atomic qubits. Every scattering event
/// opens four new orthogonal loss channels; those amplitudes are kept and
/// never re-enter an optical path.
///
/// Polarization convention: |sigma+> = (|H> + |V>)/sqrt2,
/// |sigma-> = (|H> - |V>)/sqrt2. Polarizing beam splitters transmit H and
/// reflect V without extra phases.
namespace cavsim::oracle {

enum class Polarization { H = 0, V = 1 };
enum class Waveplate { half, quarter };

/// Which (atomic bit, circular polarization) pairs couple to the cavity.
///   symmetric: |0>_a with sigma+, |1>_a with sigma-  (doubly degenerate atom)
///   lambda:    |1>_a with sigma+ only                (three-level atom)
enum class CouplingRule { symmetric, lambda };

/// 2x2 polarization matrix acting on (H, V) amplitudes, row-major.
using Matrix2 = std::array<complex, 4>;

/// HWP swaps H and V. The quarter-wave element maps
/// H -> (V - H)/sqrt2 and V -> (V + H)/sqrt2, the convention under which the
/// two-node heralding patterns come out as |V>: Phi+, |H>: Psi+ and, read in
/// the circular basis, |sigma->: Phi+, |sigma+>: Psi+.
Matrix2 waveplate_matrix(Waveplate kind);

/// 4x4 matrix of a PBS acting on (A_H, A_V, B_H, B_V) -> (T_H, T_V, R_H, R_V)
/// for input ports A, B and output ports T, R.
std::array<complex, 16> pbs_matrix();

class NetworkState {
public:
    NetworkState(std::vector<std::string> paths, int n_atoms);

    std::size_t path_index(const std::string& label) const;
    const std::vector<std::string>& paths() const { return paths_; }
    int atom_count() const { return n_atoms_; }
    std::size_t atom_dim() const { return std::size_t{1} << n_atoms_; }

    complex& amplitude(std::size_t path, SpatialMode mode, Polarization pol, std::size_t atoms);
    complex amplitude(std::size_t path, SpatialMode mode, Polarization pol, std::size_t atoms) const;

    /// Opens a new orthogonal loss channel over the atomic basis and returns its id.
    std::size_t open_loss_channel();
    std::vector<complex>& loss_channel(std::size_t id) { return loss_.at(id); }
    const std::vector<complex>& loss_channel(std::size_t id) const { return loss_.at(id); }
    std::size_t loss_channel_count() const { return loss_.size(); }

    double optical_norm_sq() const;
    double path_norm_sq(std::size_t path) const;
    double loss_probability() const;
    double discarded() const { return discarded_; }
    void add_discarded(double p) { discarded_ += p; }

    /// optical + loss + discarded; stays 1 for an unnormalised evolution.
    double total_probability() const { return optical_norm_sq() + loss_probability() + discarded_; }

private:
    std::size_t offset(std::size_t path, SpatialMode mode, Polarization pol) const;

    std::vector<std::string> paths_;
    int n_atoms_;
    std::vector<complex> optical_;
    std::vector<std::vector<complex>> loss_;
    double discarded_ = 0.0;
};

/// Single photon on `path` with polarization amplitudes (h, v), times the
/// product of the per-atom states (amplitude of |0>, amplitude of |1>),
/// split into sqrt(1-zeta) e^{i theta} |mis> + sqrt(zeta) |mat>.
NetworkState prepare(std::vector<std::string> paths, const std::string& path, complex h, complex v,
                     const std::vector<std::array<complex, 2>>& atoms, double zeta, double theta);

/// Single-input PBS: H goes to h_path, V to v_path.
NetworkState apply_pbs(NetworkState state, const std::string& in_path, const std::string& h_path,
                       const std::string& v_path);

/// Two-input PBS: out_t receives H from port A and V from port B; out_r
/// receives V from A and H from B.
NetworkState apply_pbs(NetworkState state, const std::string& in_a, const std::string& in_b,
                       const std::string& out_t, const std::string& out_r);

NetworkState apply_waveplate(NetworkState state, const std::string& path, Waveplate kind);
NetworkState apply_phase(NetworkState state, const std::string& path, double phase);

/// Scales the amplitude on `path` by `transmission`; the removed part is
/// moved into a fresh loss channel.
NetworkState apply_attenuator(NetworkState state, const std::string& path, double transmission);

/// Cavity reflection of the matched mode on `cavity_path`, acting on atom
/// `atom` of the register. Mismatched light is untouched.
NetworkState apply_scattering(NetworkState state, const std::string& cavity_path, const ReflectionPair& refl,
                              CouplingRule rule, int atom = 0);

/// Conditional state given that the photon is found in one of
/// `detected_paths`. `state` is empty when the projection probability is
/// below kNoHeraldThreshold.
struct Herald {
    std::optional<NetworkState> state;
    double probability = 0.0;
};
Herald herald(const NetworkState& state, const std::vector<std::string>& detected_paths);

enum class PolarizationBasis { linear, circular };

/// Atomic amplitudes (per spatial mode) left after detecting the photon on
/// `path` with a definite polarization.
struct PolarizationClick {
    std::array<std::vector<complex>, 2> atoms;  ///< indexed by SpatialMode
    double probability = 0.0;                   ///< relative to the state's norm
};
/// outcome 0 = H (linear) / sigma- (circular); 1 = V / sigma+.
PolarizationClick detect_polarization(const NetworkState& state, const std::string& path, PolarizationBasis basis,
                                      int outcome);

/// Result of running a complete network together with the worst
/// probability-bookkeeping defect |total - 1| seen after any element.
struct NetworkRun {
    GateResult gate;
    double max_bookkeeping_defect = 0.0;
};

NetworkRun run_cz_new(const ReflectionPair& refl, double zeta, const JointState& s, double mzi_phase = 0.0,
                      double arm_transmission = 1.0, double mismatch_phase = 0.0);
NetworkRun run_cz_old(const ReflectionPair& refl, double zeta, const JointState& s, double mismatch_phase = 0.0);

/// Two-node remote entanglement run. Fidelity is the herald-weighted
/// average over the two polarization outcomes.
struct EntanglementRun {
    std::optional<double> fidelity;
    std::array<std::optional<double>, 2> outcome_fidelity;  ///< [H or sigma-, V or sigma+]
    std::array<double, 2> outcome_probability{};
    double success_probability = 0.0;
    double max_bookkeeping_defect = 0.0;
};

/// sigma+ photon, atoms in |0>_x and |1>_x, two MZI gates with an HWP in
/// between, QWP and H/V detection.
EntanglementRun run_atom_atom_new(const ReflectionPair& first, const ReflectionPair& second, double phi_1,
                                  double phi_2, double zeta = 1.0, double mismatch_phase = 0.0);

/// H photon, atoms in |0>_x |0>_x, two direct reflections, QWP and
/// circular-basis detection.
EntanglementRun run_atom_atom_old(const ReflectionPair& first, const ReflectionPair& second, double zeta = 1.0,
                                  double mismatch_phase = 0.0);

}  // namespace cavsim::oracle
