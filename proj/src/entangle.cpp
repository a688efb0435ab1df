#include "cavsim/entangle.hpp"

#include "cavsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavsim {

std::optional<double> atom_atom_new(const ReflectionPair& first, const ReflectionPair& second, double phi_1,
                                    double phi_2) {
    const complex a = first.r_c - first.r_nc;
    const complex b = second.r_c - second.r_nc;
    const double denom = std::norm(a) + std::norm(b);
    if (denom < kNoHeraldThreshold) {
        return std::nullopt;
    }
    const double f = 0.5 * std::norm(b + a * std::polar(1.0, phi_2 - phi_1)) / denom;
    return std::clamp(f, 0.0, 1.0);
}

std::optional<double> atom_atom_new(const TwoCavitySetup& setup) {
    return atom_atom_new(reflection_lossy(setup.first), reflection_lossy(setup.second), setup.phi_1, setup.phi_2);
}

std::optional<double> OldSchemeBell::averaged() const {
    double sum = 0.0;
    double weight = 0.0;
    if (phi_plus) {
        sum += weight_phi_plus * *phi_plus;
        weight += weight_phi_plus;
    }
    if (psi_plus) {
        sum += weight_psi_plus * *psi_plus;
        weight += weight_psi_plus;
    }
    if (weight < kNoHeraldThreshold) {
        return std::nullopt;
    }
    return sum / weight;
}

OldSchemeBell atom_atom_old(const ReflectionPair& first, const ReflectionPair& second) {
    const complex rc = first.r_c;
    const complex rnc = first.r_nc;
    const complex rc2 = second.r_c;
    const complex rnc2 = second.r_nc;

    // sigma- branch amplitudes on |00>, |10>, |01>, |11>
    const complex m00 = 2.0 * rnc2 * rnc;
    const complex m10 = rnc2 * rnc + rnc2 * rc;
    const complex m01 = rnc2 * rnc + rc2 * rnc;
    const complex m11 = rnc2 * rnc + rc2 * rc;
    // sigma+ branch amplitudes on |10>, |01>, |11>
    const complex p10 = rnc2 * rnc - rnc2 * rc;
    const complex p01 = rnc2 * rnc - rc2 * rnc;
    const complex p11 = rnc2 * rnc - rc2 * rc;

    OldSchemeBell out;
    out.weight_phi_plus = std::norm(m00) + std::norm(m10) + std::norm(m01) + std::norm(m11);
    out.weight_psi_plus = std::norm(p10) + std::norm(p01) + std::norm(p11);
    if (out.weight_phi_plus >= kNoHeraldThreshold) {
        out.phi_plus = std::clamp(0.5 * std::norm(m00 + m11) / out.weight_phi_plus, 0.0, 1.0);
    }
    if (out.weight_psi_plus >= kNoHeraldThreshold) {
        out.psi_plus = std::clamp(0.5 * std::norm(p10 + p01) / out.weight_psi_plus, 0.0, 1.0);
    }
    return out;
}

OldSchemeBell atom_atom_old(const TwoCavitySetup& setup) {
    return atom_atom_old(reflection_lossy(setup.first), reflection_lossy(setup.second));
}

TwoAtomEstimate two_atoms_one_cavity(const ReflectionPair& refl, double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw std::invalid_argument("zeta must lie in [0, 1]");
    }
    const double flip = std::norm((3.0 * refl.r_c - refl.r_nc) / 4.0);
    const auto estimate = [&](double z, double& p_loss) {
        p_loss = 0.25 * z * (3.0 * refl.t_c_sq + refl.t_nc_sq);
        if (1.0 - p_loss < kNoHeraldThreshold) {
            throw std::domain_error("two_atoms_one_cavity: photon is always lost");
        }
        return ((1.0 - z) * 0.25 + z * flip) / (1.0 - p_loss);
    };
    TwoAtomEstimate out;
    double unused = 0.0;
    out.fidelity = estimate(zeta, out.p_loss);
    out.cavity_fidelity = estimate(1.0, unused);
    return out;
}

TwoAtomEstimate two_atoms_one_cavity(const CavityParams& p) {
    return two_atoms_one_cavity(reflection_lossy(p), p.zeta);
}

}  // namespace cavsim
