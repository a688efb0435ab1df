#include "cavsim/cavity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cavsim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

void RawCavityParams::validate() const {
    require(std::isfinite(g) && std::isfinite(kappa) && std::isfinite(kappa_r) && std::isfinite(gamma),
            "cavity rates must be finite");
    require(std::isfinite(omega_p) && std::isfinite(omega_c) && std::isfinite(omega_a),
            "frequencies must be finite");
    require(kappa > 0.0, "kappa must be positive");
    require(gamma > 0.0, "gamma must be positive");
    require(g >= 0.0, "g must be non-negative");
    require(kappa_r >= 0.0 && kappa_r <= kappa, "kappa_r must lie in [0, kappa]");
}

void CavityParams::validate() const {
    require(std::isfinite(cooperativity) && cooperativity >= 0.0, "cooperativity must be finite and >= 0");
    require(std::isfinite(delta_c), "delta_c must be finite");
    require(std::isfinite(delta_a), "delta_a must be finite");
    require(kappa_ratio >= 0.0 && kappa_ratio <= 1.0, "kappa_ratio must lie in [0, 1]");
    require(zeta >= 0.0 && zeta <= 1.0, "zeta must lie in [0, 1]");
}

CavityParams CavityParams::ideal() {
    return CavityParams{1e9, 0.0, 0.0, 1.0, 1.0};
}

ReflectionPair ReflectionPair::from_amplitudes(complex r_c, complex r_nc) {
    return ReflectionPair{r_c, r_nc, 1.0 - std::norm(r_c), 1.0 - std::norm(r_nc)};
}

CavityParams reduce_params(const RawCavityParams& raw, double zeta) {
    raw.validate();
    CavityParams p;
    p.cooperativity = raw.g * raw.g / (2.0 * raw.gamma * raw.kappa);
    p.delta_c = (raw.omega_p - raw.omega_c) / raw.kappa;
    p.delta_a = (raw.omega_p - raw.omega_a) / raw.gamma;
    p.kappa_ratio = raw.kappa_r / raw.kappa;
    p.zeta = zeta;
    p.validate();
    return p;
}

ReflectionPair reflection_lossy(const CavityParams& p) {
    p.validate();
    const complex i{0.0, 1.0};
    const complex cav = i * p.delta_c + 1.0;
    const complex atom = i * p.delta_a + 1.0;
    const complex r_c = 1.0 - 2.0 * p.kappa_ratio * atom / (cav * atom + 2.0 * p.cooperativity);
    const complex r_nc = 1.0 - 2.0 * p.kappa_ratio / cav;
    return ReflectionPair::from_amplitudes(r_c, r_nc);
}

ReflectionPair reflection_lossless(double delta_c, double delta_a, double cooperativity) {
    if (!(cooperativity >= 0.0)) {
        throw std::invalid_argument("cooperativity must be >= 0");
    }
    const complex i{0.0, 1.0};
    const complex cav = i * delta_c + 1.0;
    const complex atom = i * delta_a + 1.0;
    const complex r_c = ((i * delta_c - 1.0) * atom + 2.0 * cooperativity) / (cav * atom + 2.0 * cooperativity);
    const complex r_nc = (i * delta_c - 1.0) / cav;
    return ReflectionPair::from_amplitudes(r_c, r_nc);
}

}  // namespace cavsim
