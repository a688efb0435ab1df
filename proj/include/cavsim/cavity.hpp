#pragma once

#include <complex>

namespace cavsim {

using complex = std::complex<double>;

/// Physical rates of one atom-cavity node.
///
/// All decay rates (kappa, kappa_r, gamma) and the coupling g follow the
/// half-width-at-half-maximum convention. Frequencies are angular and share
/// the unit of the rates.
struct RawCavityParams {
    double g = 0.0;
    double kappa = 1.0;    ///< total cavity field decay rate
    double kappa_r = 1.0;  ///< decay through the coupling mirror
    double gamma = 1.0;    ///< atomic dipole decay rate
    double omega_p = 0.0;  ///< photon
    double omega_c = 0.0;  ///< cavity
    double omega_a = 0.0;  ///< atomic transition

    /// Throws std::invalid_argument when the rates are unphysical.
    void validate() const;
};

/// Dimensionless operating point consumed by every gate formula.
struct CavityParams {
    double cooperativity = 0.0;  ///< C = g^2 / (2 gamma kappa)
    double delta_c = 0.0;        ///< (omega_p - omega_c) / kappa
    double delta_a = 0.0;        ///< (omega_p - omega_a) / gamma
    double kappa_ratio = 1.0;    ///< kappa_r / kappa
    double zeta = 1.0;           ///< spatial mode-matching efficiency

    void validate() const;

    /// Large finite cooperativity, resonant, lossless, perfectly matched.
    static CavityParams ideal();

    bool operator==(const CavityParams&) const = default;
};

/// Reflection amplitudes for the coupled and uncoupled photon-atom
/// configurations, with the matching loss probabilities.
struct ReflectionPair {
    complex r_c{1.0, 0.0};
    complex r_nc{-1.0, 0.0};
    double t_c_sq = 0.0;   ///< 1 - |r_c|^2
    double t_nc_sq = 0.0;  ///< 1 - |r_nc|^2

    static ReflectionPair from_amplitudes(complex r_c, complex r_nc);
    /// r_c = 1, r_nc = -1, no loss.
    static ReflectionPair ideal() { return from_amplitudes({1.0, 0.0}, {-1.0, 0.0}); }
};

CavityParams reduce_params(const RawCavityParams& raw, double zeta);

/// Reflection coefficients including loss through the second mirror and
/// scattering (kappa_ratio < 1).
ReflectionPair reflection_lossy(const CavityParams& p);

/// Lossless one-sided cavity coefficients.
ReflectionPair reflection_lossless(double delta_c, double delta_a, double cooperativity);

}  // namespace cavsim
