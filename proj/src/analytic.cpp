#include "cavsim/analytic.hpp"

#include "cavsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavsim {

namespace {

constexpr double kNormTolerance = 1e-12;

double unit_clamp(double x) { return std::clamp(x, 0.0, 1.0); }

void check_zeta(double zeta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw std::invalid_argument("zeta must lie in [0, 1]");
    }
}

// Photon amplitudes on the Bloch sphere depend only on cos(theta) once the
// azimuthal phase is dropped; every closed form here uses moduli only.
JointState from_polar_cosines(double cos_photon, double cos_atom) {
    JointState s;
    s.alpha_p = std::sqrt(std::max(0.0, 0.5 * (1.0 + cos_photon)));
    s.beta_p = std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_photon)));
    s.alpha = std::sqrt(std::max(0.0, 0.5 * (1.0 + cos_atom)));
    s.beta = std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_atom)));
    return s;
}

}  // namespace

std::string to_string(Scheme s) {
    return s == Scheme::mzi ? "new" : "old";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "new" || name == "mzi") {
        return Scheme::mzi;
    }
    if (name == "old" || name == "direct") {
        return Scheme::direct;
    }
    throw std::invalid_argument("unknown scheme '" + name + "' (expected new or old)");
}

void JointState::validate() const {
    const double photon = std::norm(alpha_p) + std::norm(beta_p);
    const double atom = std::norm(alpha) + std::norm(beta);
    if (std::abs(photon - 1.0) > kNormTolerance) {
        throw std::invalid_argument("photon amplitudes are not normalised");
    }
    if (std::abs(atom - 1.0) > kNormTolerance) {
        throw std::invalid_argument("atomic amplitudes are not normalised");
    }
}

JointState JointState::from_bloch(double theta_p, double azimuth_p, double theta_a, double azimuth_a) {
    JointState s;
    s.alpha_p = std::polar(std::cos(0.5 * theta_p), azimuth_p);
    s.beta_p = std::sin(0.5 * theta_p);
    s.alpha = std::polar(std::cos(0.5 * theta_a), azimuth_a);
    s.beta = std::sin(0.5 * theta_a);
    return s;
}

GateResult cz_new(const ReflectionPair& refl, double zeta, const JointState& s, double mzi_phase,
                  double arm_transmission) {
    check_zeta(zeta);
    s.validate();
    if (!(arm_transmission >= 0.0 && arm_transmission <= 1.0)) {
        throw std::invalid_argument("arm_transmission must lie in [0, 1]");
    }
    const double ap2 = std::norm(s.alpha_p);
    const double bp2 = std::norm(s.beta_p);
    const double att2 = arm_transmission * arm_transmission;

    GateResult out;
    out.p_loss = unit_clamp(0.5 * zeta * bp2 * (refl.t_c_sq + refl.t_nc_sq) + ap2 * (1.0 - att2));
    const double unflipped = (1.0 - zeta) * bp2 + 0.25 * zeta * bp2 * std::norm(refl.r_c + refl.r_nc);
    const double survive = 1.0 - out.p_loss;
    out.p_h_reject = survive > 0.0 ? unit_clamp(unflipped / survive) : 0.0;
    out.success_probability = unit_clamp(survive * (1.0 - out.p_h_reject));
    if (out.success_probability < kNoHeraldThreshold) {
        return out;
    }

    const complex flipped = 0.5 * (refl.r_c - refl.r_nc);
    const complex arm = std::polar(1.0, mzi_phase);
    const double numerator = (1.0 - zeta) * att2 * ap2 * ap2 +
                             zeta * std::norm(arm_transmission * ap2 * arm + bp2 * flipped);
    out.fidelity = unit_clamp(numerator / out.success_probability);

    const double norm = 1.0 / std::sqrt(out.success_probability);
    const complex v_mis = norm * arm_transmission * std::sqrt(1.0 - zeta) * arm * s.alpha_p;
    const complex v_mat = norm * arm_transmission * std::sqrt(zeta) * arm * s.alpha_p;
    const complex h_mat = norm * std::sqrt(zeta) * flipped * s.beta_p;
    out.output.at(SpatialMode::mismatched, 0, 0) = v_mis * s.alpha;
    out.output.at(SpatialMode::mismatched, 0, 1) = v_mis * s.beta;
    out.output.at(SpatialMode::matched, 0, 0) = v_mat * s.alpha;
    out.output.at(SpatialMode::matched, 0, 1) = v_mat * s.beta;
    out.output.at(SpatialMode::matched, 1, 0) = h_mat * s.alpha;
    out.output.at(SpatialMode::matched, 1, 1) = -h_mat * s.beta;
    return out;
}

GateResult cz_new(const CavityParams& p, const JointState& s, double mzi_phase, double arm_transmission) {
    return cz_new(reflection_lossy(p), p.zeta, s, mzi_phase, arm_transmission);
}

GateResult cz_old(const ReflectionPair& refl, double zeta, const JointState& s) {
    check_zeta(zeta);
    s.validate();
    const double ap2 = std::norm(s.alpha_p);
    const double bp2 = std::norm(s.beta_p);
    const double a2 = std::norm(s.alpha);
    const double b2 = std::norm(s.beta);

    GateResult out;
    out.p_loss = unit_clamp(zeta * (refl.t_nc_sq + bp2 * b2 * (refl.t_c_sq - refl.t_nc_sq)));
    out.success_probability = 1.0 - out.p_loss;
    if (out.success_probability < kNoHeraldThreshold) {
        return out;
    }

    const double mis_overlap = ap2 + bp2 * (a2 - b2);
    const complex mat_overlap = ap2 * refl.r_nc + bp2 * (refl.r_nc * a2 - refl.r_c * b2);
    const double numerator = (1.0 - zeta) * mis_overlap * mis_overlap + zeta * std::norm(mat_overlap);
    out.fidelity = unit_clamp(numerator / out.success_probability);

    const double norm = 1.0 / std::sqrt(out.success_probability);
    const double mis = norm * std::sqrt(1.0 - zeta);
    const double mat = norm * std::sqrt(zeta);
    out.output.at(SpatialMode::mismatched, 0, 0) = mis * s.alpha_p * s.alpha;
    out.output.at(SpatialMode::mismatched, 0, 1) = mis * s.alpha_p * s.beta;
    out.output.at(SpatialMode::mismatched, 1, 0) = mis * s.beta_p * s.alpha;
    out.output.at(SpatialMode::mismatched, 1, 1) = mis * s.beta_p * s.beta;
    out.output.at(SpatialMode::matched, 0, 0) = mat * s.alpha_p * refl.r_nc * s.alpha;
    out.output.at(SpatialMode::matched, 0, 1) = mat * s.alpha_p * refl.r_nc * s.beta;
    out.output.at(SpatialMode::matched, 1, 0) = mat * s.beta_p * refl.r_nc * s.alpha;
    out.output.at(SpatialMode::matched, 1, 1) = mat * s.beta_p * refl.r_c * s.beta;
    return out;
}

GateResult cz_old(const CavityParams& p, const JointState& s) {
    return cz_old(reflection_lossy(p), p.zeta, s);
}

double avg_fidelity_new(const CavityParams& p, double mzi_phase) {
    const ReflectionPair refl = reflection_lossy(p);
    return sphere_average(SphereIntegrand1{[&](double u, double& value) {
        const GateResult r = cz_new(refl, p.zeta, from_polar_cosines(u, 0.0), mzi_phase);
        if (!r.heralded()) {
            return false;
        }
        value = *r.fidelity;
        return true;
    }});
}

double avg_fidelity_old(const CavityParams& p) {
    const ReflectionPair refl = reflection_lossy(p);
    return sphere_average(SphereIntegrand2{[&](double u_photon, double u_atom, double& value) {
        const GateResult r = cz_old(refl, p.zeta, from_polar_cosines(u_photon, u_atom));
        if (!r.heralded()) {
            return false;
        }
        value = *r.fidelity;
        return true;
    }});
}

double avg_success(const CavityParams& p, Scheme scheme, double mzi_phase) {
    const ReflectionPair refl = reflection_lossy(p);
    if (scheme == Scheme::mzi) {
        return sphere_average(SphereIntegrand1{[&](double u, double& value) {
            value = cz_new(refl, p.zeta, from_polar_cosines(u, 0.0), mzi_phase).success_probability;
            return true;
        }});
    }
    return sphere_average(SphereIntegrand2{[&](double u_photon, double u_atom, double& value) {
        value = cz_old(refl, p.zeta, from_polar_cosines(u_photon, u_atom)).success_probability;
        return true;
    }});
}

}  // namespace cavsim
