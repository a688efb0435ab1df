#include "cavsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace cavsim::oracle {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
constexpr std::array<SpatialMode, 2> kModes{SpatialMode::matched, SpatialMode::mismatched};
constexpr std::array<Polarization, 2> kPols{Polarization::H, Polarization::V};

int atom_bit(std::size_t basis_index, int atom, int n_atoms) {
    return static_cast<int>((basis_index >> (n_atoms - 1 - atom)) & 1U);
}

double defect(const NetworkState& s) { return std::abs(s.total_probability() - 1.0); }

/// Tracks the worst bookkeeping defect along a chain of elements.
struct Tracker {
    double worst = 0.0;
    NetworkState operator()(NetworkState s) {
        worst = std::max(worst, defect(s));
        return s;
    }
};

double overlap_fidelity(const std::array<std::vector<complex>, 2>& by_mode, const std::vector<complex>& target,
                        double probability) {
    double sum = 0.0;
    for (const auto& psi : by_mode) {
        complex ip{0.0, 0.0};
        for (std::size_t i = 0; i < target.size(); ++i) {
            ip += std::conj(target[i]) * psi[i];
        }
        sum += std::norm(ip);
    }
    return std::clamp(sum / probability, 0.0, 1.0);
}

}  // namespace

Matrix2 waveplate_matrix(Waveplate kind) {
    switch (kind) {
        case Waveplate::half:
            return {complex{0.0}, complex{1.0}, complex{1.0}, complex{0.0}};
        case Waveplate::quarter:
            return {complex{-kInvSqrt2}, complex{kInvSqrt2}, complex{kInvSqrt2}, complex{kInvSqrt2}};
    }
    throw std::invalid_argument("unknown waveplate kind");
}

std::array<complex, 16> pbs_matrix() {
    // rows: T_H, T_V, R_H, R_V; columns: A_H, A_V, B_H, B_V
    std::array<complex, 16> m{};
    m[0 * 4 + 0] = 1.0;  // A_H -> T_H
    m[1 * 4 + 3] = 1.0;  // B_V -> T_V
    m[2 * 4 + 2] = 1.0;  // B_H -> R_H
    m[3 * 4 + 1] = 1.0;  // A_V -> R_V
    return m;
}

NetworkState::NetworkState(std::vector<std::string> paths, int n_atoms) : paths_(std::move(paths)), n_atoms_(n_atoms) {
    if (n_atoms < 1 || n_atoms > 8) {
        throw std::invalid_argument("NetworkState: atom count must be in [1, 8]");
    }
    if (paths_.empty()) {
        throw std::invalid_argument("NetworkState: at least one path is required");
    }
    optical_.assign(paths_.size() * 4 * atom_dim(), complex{0.0, 0.0});
}

std::size_t NetworkState::path_index(const std::string& label) const {
    const auto it = std::find(paths_.begin(), paths_.end(), label);
    if (it == paths_.end()) {
        throw std::invalid_argument("unknown path label '" + label + "'");
    }
    return static_cast<std::size_t>(it - paths_.begin());
}

std::size_t NetworkState::offset(std::size_t path, SpatialMode mode, Polarization pol) const {
    return ((path * 2 + static_cast<std::size_t>(mode)) * 2 + static_cast<std::size_t>(pol)) * atom_dim();
}

complex& NetworkState::amplitude(std::size_t path, SpatialMode mode, Polarization pol, std::size_t atoms) {
    return optical_.at(offset(path, mode, pol) + atoms);
}

complex NetworkState::amplitude(std::size_t path, SpatialMode mode, Polarization pol, std::size_t atoms) const {
    return optical_.at(offset(path, mode, pol) + atoms);
}

std::size_t NetworkState::open_loss_channel() {
    loss_.emplace_back(atom_dim(), complex{0.0, 0.0});
    return loss_.size() - 1;
}

double NetworkState::optical_norm_sq() const {
    double sum = 0.0;
    for (const complex& a : optical_) {
        sum += std::norm(a);
    }
    return sum;
}

double NetworkState::path_norm_sq(std::size_t path) const {
    double sum = 0.0;
    for (const SpatialMode mode : kModes) {
        for (const Polarization pol : kPols) {
            for (std::size_t k = 0; k < atom_dim(); ++k) {
                sum += std::norm(amplitude(path, mode, pol, k));
            }
        }
    }
    return sum;
}

double NetworkState::loss_probability() const {
    double sum = 0.0;
    for (const auto& channel : loss_) {
        for (const complex& a : channel) {
            sum += std::norm(a);
        }
    }
    return sum;
}

NetworkState prepare(std::vector<std::string> paths, const std::string& path, complex h, complex v,
                     const std::vector<std::array<complex, 2>>& atoms, double zeta, double theta) {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
        throw std::invalid_argument("zeta must lie in [0, 1]");
    }
    NetworkState state(std::move(paths), static_cast<int>(atoms.size()));
    const std::size_t p = state.path_index(path);
    const complex mis = std::polar(std::sqrt(1.0 - zeta), theta);
    const complex mat = std::sqrt(zeta);
    for (std::size_t k = 0; k < state.atom_dim(); ++k) {
        complex register_amp{1.0, 0.0};
        for (int a = 0; a < state.atom_count(); ++a) {
            register_amp *= atoms[static_cast<std::size_t>(a)][static_cast<std::size_t>(atom_bit(k, a, state.atom_count()))];
        }
        state.amplitude(p, SpatialMode::matched, Polarization::H, k) = mat * h * register_amp;
        state.amplitude(p, SpatialMode::matched, Polarization::V, k) = mat * v * register_amp;
        state.amplitude(p, SpatialMode::mismatched, Polarization::H, k) = mis * h * register_amp;
        state.amplitude(p, SpatialMode::mismatched, Polarization::V, k) = mis * v * register_amp;
    }
    return state;
}

NetworkState apply_pbs(NetworkState state, const std::string& in_path, const std::string& h_path,
                       const std::string& v_path) {
    const std::size_t in = state.path_index(in_path);
    const std::size_t to_h = state.path_index(h_path);
    const std::size_t to_v = state.path_index(v_path);
    for (const SpatialMode mode : kModes) {
        for (std::size_t k = 0; k < state.atom_dim(); ++k) {
            const complex h = std::exchange(state.amplitude(in, mode, Polarization::H, k), complex{0.0, 0.0});
            const complex v = std::exchange(state.amplitude(in, mode, Polarization::V, k), complex{0.0, 0.0});
            state.amplitude(to_h, mode, Polarization::H, k) += h;
            state.amplitude(to_v, mode, Polarization::V, k) += v;
        }
    }
    return state;
}

NetworkState apply_pbs(NetworkState state, const std::string& in_a, const std::string& in_b, const std::string& out_t,
                       const std::string& out_r) {
    const std::size_t a = state.path_index(in_a);
    const std::size_t b = state.path_index(in_b);
    const std::size_t t = state.path_index(out_t);
    const std::size_t r = state.path_index(out_r);
    if (a == b) {
        throw std::invalid_argument("apply_pbs: input ports must differ");
    }
    const auto m = pbs_matrix();
    for (const SpatialMode mode : kModes) {
        for (std::size_t k = 0; k < state.atom_dim(); ++k) {
            const std::array<complex, 4> in{
                std::exchange(state.amplitude(a, mode, Polarization::H, k), complex{0.0, 0.0}),
                std::exchange(state.amplitude(a, mode, Polarization::V, k), complex{0.0, 0.0}),
                std::exchange(state.amplitude(b, mode, Polarization::H, k), complex{0.0, 0.0}),
                std::exchange(state.amplitude(b, mode, Polarization::V, k), complex{0.0, 0.0}),
            };
            std::array<complex, 4> out{};
            for (std::size_t row = 0; row < 4; ++row) {
                for (std::size_t col = 0; col < 4; ++col) {
                    out[row] += m[row * 4 + col] * in[col];
                }
            }
            state.amplitude(t, mode, Polarization::H, k) += out[0];
            state.amplitude(t, mode, Polarization::V, k) += out[1];
            state.amplitude(r, mode, Polarization::H, k) += out[2];
            state.amplitude(r, mode, Polarization::V, k) += out[3];
        }
    }
    return state;
}

NetworkState apply_waveplate(NetworkState state, const std::string& path, Waveplate kind) {
    const std::size_t p = state.path_index(path);
    const Matrix2 m = waveplate_matrix(kind);
    for (const SpatialMode mode : kModes) {
        for (std::size_t k = 0; k < state.atom_dim(); ++k) {
            complex& h = state.amplitude(p, mode, Polarization::H, k);
            complex& v = state.amplitude(p, mode, Polarization::V, k);
            const complex h_in = h;
            const complex v_in = v;
            h = m[0] * h_in + m[1] * v_in;
            v = m[2] * h_in + m[3] * v_in;
        }
    }
    return state;
}

NetworkState apply_phase(NetworkState state, const std::string& path, double phase) {
    const std::size_t p = state.path_index(path);
    const complex factor = std::polar(1.0, phase);
    for (const SpatialMode mode : kModes) {
        for (const Polarization pol : kPols) {
            for (std::size_t k = 0; k < state.atom_dim(); ++k) {
                state.amplitude(p, mode, pol, k) *= factor;
            }
        }
    }
    return state;
}

NetworkState apply_attenuator(NetworkState state, const std::string& path, double transmission) {
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw std::invalid_argument("attenuator transmission must lie in [0, 1]");
    }
    const std::size_t p = state.path_index(path);
    const double leak = std::sqrt(1.0 - transmission * transmission);
    // One channel per (mode, polarization) keeps the removed light orthogonal.
    for (const SpatialMode mode : kModes) {
        for (const Polarization pol : kPols) {
            const std::size_t channel = state.open_loss_channel();
            for (std::size_t k = 0; k < state.atom_dim(); ++k) {
                complex& a = state.amplitude(p, mode, pol, k);
                state.loss_channel(channel)[k] = leak * a;
                a *= transmission;
            }
        }
    }
    return state;
}

NetworkState apply_scattering(NetworkState state, const std::string& cavity_path, const ReflectionPair& refl,
                              CouplingRule rule, int atom) {
    if (atom < 0 || atom >= state.atom_count()) {
        throw std::invalid_argument("apply_scattering: atom index out of range");
    }
    const std::size_t p = state.path_index(cavity_path);
    const double t_c = std::sqrt(std::max(0.0, refl.t_c_sq));
    const double t_nc = std::sqrt(std::max(0.0, refl.t_nc_sq));

    // Loss channels: coupled sigma+, coupled sigma-, uncoupled sigma+, uncoupled sigma-.
    std::array<std::size_t, 4> channel{};
    for (auto& c : channel) {
        c = state.open_loss_channel();
    }

    for (std::size_t k = 0; k < state.atom_dim(); ++k) {
        const int bit = atom_bit(k, atom, state.atom_count());
        complex& h = state.amplitude(p, SpatialMode::matched, Polarization::H, k);
        complex& v = state.amplitude(p, SpatialMode::matched, Polarization::V, k);
        const complex plus = kInvSqrt2 * (h + v);
        const complex minus = kInvSqrt2 * (h - v);

        bool plus_coupled = false;
        bool minus_coupled = false;
        switch (rule) {
            case CouplingRule::symmetric:
                plus_coupled = bit == 0;
                minus_coupled = bit == 1;
                break;
            case CouplingRule::lambda:
                plus_coupled = bit == 1;
                minus_coupled = false;
                break;
        }

        const complex plus_out = (plus_coupled ? refl.r_c : refl.r_nc) * plus;
        const complex minus_out = (minus_coupled ? refl.r_c : refl.r_nc) * minus;
        state.loss_channel(plus_coupled ? channel[0] : channel[2])[k] += (plus_coupled ? t_c : t_nc) * plus;
        state.loss_channel(minus_coupled ? channel[1] : channel[3])[k] += (minus_coupled ? t_c : t_nc) * minus;

        h = kInvSqrt2 * (plus_out + minus_out);
        v = kInvSqrt2 * (plus_out - minus_out);
    }
    return state;
}

Herald herald(const NetworkState& state, const std::vector<std::string>& detected_paths) {
    if (detected_paths.empty()) {
        throw std::invalid_argument("herald: at least one detected path is required");
    }
    std::vector<std::size_t> indices;
    indices.reserve(detected_paths.size());
    for (const auto& label : detected_paths) {
        indices.push_back(state.path_index(label));
    }

    Herald result;
    for (const std::size_t p : indices) {
        result.probability += state.path_norm_sq(p);
    }
    if (result.probability < kNoHeraldThreshold) {
        return result;
    }

    NetworkState out(detected_paths, state.atom_count());
    const double scale = 1.0 / std::sqrt(result.probability);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        for (const SpatialMode mode : kModes) {
            for (const Polarization pol : kPols) {
                for (std::size_t k = 0; k < state.atom_dim(); ++k) {
                    out.amplitude(i, mode, pol, k) = scale * state.amplitude(indices[i], mode, pol, k);
                }
            }
        }
    }
    result.state = std::move(out);
    return result;
}

PolarizationClick detect_polarization(const NetworkState& state, const std::string& path, PolarizationBasis basis,
                                      int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("detect_polarization: outcome must be 0 or 1");
    }
    const std::size_t p = state.path_index(path);
    PolarizationClick click;
    for (const SpatialMode mode : kModes) {
        auto& atoms = click.atoms[static_cast<std::size_t>(mode)];
        atoms.assign(state.atom_dim(), complex{0.0, 0.0});
        for (std::size_t k = 0; k < state.atom_dim(); ++k) {
            const complex h = state.amplitude(p, mode, Polarization::H, k);
            const complex v = state.amplitude(p, mode, Polarization::V, k);
            if (basis == PolarizationBasis::linear) {
                atoms[k] = outcome == 0 ? h : v;
            } else {
                atoms[k] = outcome == 0 ? kInvSqrt2 * (h - v) : kInvSqrt2 * (h + v);
            }
            click.probability += std::norm(atoms[k]);
        }
    }
    return click;
}

NetworkRun run_cz_new(const ReflectionPair& refl, double zeta, const JointState& s, double mzi_phase,
                      double arm_transmission, double mismatch_phase) {
    s.validate();
    Tracker track;
    const std::vector<std::string> paths{"in", "r1", "p2", "d1", "out", "reject", "dump"};

    // |0>_p = V, |1>_p = H
    NetworkState st = track(prepare(paths, "in", s.beta_p, s.alpha_p, {{s.alpha, s.beta}}, zeta, mismatch_phase));
    st = track(apply_pbs(std::move(st), "in", "r1", "p2"));
    st = track(apply_phase(std::move(st), "p2", mzi_phase));
    st = track(apply_attenuator(std::move(st), "p2", arm_transmission));
    st = track(apply_scattering(std::move(st), "r1", refl, CouplingRule::symmetric));
    // Returning light: flipped (V) goes down to d1, unflipped H leaves through the input port.
    st = track(apply_pbs(std::move(st), "r1", "reject", "d1"));
    st = track(apply_waveplate(std::move(st), "d1", Waveplate::half));
    st = track(apply_pbs(std::move(st), "d1", "p2", "out", "dump"));

    NetworkRun run;
    run.max_bookkeeping_defect = track.worst;
    GateResult& g = run.gate;
    g.p_loss = std::clamp(st.loss_probability(), 0.0, 1.0);
    const double survive = 1.0 - g.p_loss;
    const double rejected = st.path_norm_sq(st.path_index("reject")) + st.path_norm_sq(st.path_index("dump"));
    g.p_h_reject = survive > 0.0 ? std::clamp(rejected / survive, 0.0, 1.0) : 0.0;

    const Herald h = herald(st, {"out"});
    g.success_probability = h.probability;
    if (!h.state) {
        return run;
    }

    const std::array<complex, 2> atom{s.alpha, s.beta};
    double fidelity = 0.0;
    for (const SpatialMode mode : kModes) {
        complex ip{0.0, 0.0};
        for (std::size_t k = 0; k < 2; ++k) {
            const complex v = h.state->amplitude(0, mode, Polarization::V, k);
            const complex hh = h.state->amplitude(0, mode, Polarization::H, k);
            g.output.at(mode, 0, static_cast<int>(k)) = v;
            g.output.at(mode, 1, static_cast<int>(k)) = hh;
            const double sign = k == 0 ? 1.0 : -1.0;
            ip += std::conj(s.alpha_p * atom[k]) * v + std::conj(s.beta_p * sign * atom[k]) * hh;
        }
        fidelity += std::norm(ip);
    }
    g.fidelity = std::clamp(fidelity, 0.0, 1.0);
    return run;
}

NetworkRun run_cz_old(const ReflectionPair& refl, double zeta, const JointState& s, double mismatch_phase) {
    s.validate();
    Tracker track;
    // |0>_p = sigma-, |1>_p = sigma+
    const complex h_in = kInvSqrt2 * (s.beta_p + s.alpha_p);
    const complex v_in = kInvSqrt2 * (s.beta_p - s.alpha_p);
    NetworkState st = track(prepare({"cavity"}, "cavity", h_in, v_in, {{s.alpha, s.beta}}, zeta, mismatch_phase));
    st = track(apply_scattering(std::move(st), "cavity", refl, CouplingRule::lambda));

    NetworkRun run;
    run.max_bookkeeping_defect = track.worst;
    GateResult& g = run.gate;
    g.p_loss = std::clamp(st.loss_probability(), 0.0, 1.0);
    const Herald h = herald(st, {"cavity"});
    g.success_probability = h.probability;
    if (!h.state) {
        return run;
    }

    const std::array<complex, 2> atom{s.alpha, s.beta};
    double fidelity = 0.0;
    for (const SpatialMode mode : kModes) {
        complex ip{0.0, 0.0};
        for (std::size_t k = 0; k < 2; ++k) {
            const complex hh = h.state->amplitude(0, mode, Polarization::H, k);
            const complex v = h.state->amplitude(0, mode, Polarization::V, k);
            const complex minus = kInvSqrt2 * (hh - v);
            const complex plus = kInvSqrt2 * (hh + v);
            g.output.at(mode, 0, static_cast<int>(k)) = minus;
            g.output.at(mode, 1, static_cast<int>(k)) = plus;
            const double sign = k == 0 ? 1.0 : -1.0;
            // Ideal output carries an overall minus sign, irrelevant for |<.|.>|^2.
            ip += std::conj(-s.alpha_p * atom[k]) * minus + std::conj(-s.beta_p * sign * atom[k]) * plus;
        }
        fidelity += std::norm(ip);
    }
    g.fidelity = std::clamp(fidelity, 0.0, 1.0);
    return run;
}

namespace {

const std::vector<complex> kPhiPlus{kInvSqrt2, 0.0, 0.0, kInvSqrt2};
const std::vector<complex> kPsiPlus{0.0, kInvSqrt2, kInvSqrt2, 0.0};

EntanglementRun finish_entanglement(const NetworkState& st, double worst, const std::string& out,
                                    PolarizationBasis basis, const std::array<const std::vector<complex>*, 2>& targets) {
    EntanglementRun run;
    run.max_bookkeeping_defect = worst;
    const Herald h = herald(st, {out});
    run.success_probability = h.probability;
    if (!h.state) {
        return run;
    }
    double weighted = 0.0;
    double total = 0.0;
    for (int outcome = 0; outcome < 2; ++outcome) {
        const PolarizationClick click = detect_polarization(*h.state, out, basis, outcome);
        const auto o = static_cast<std::size_t>(outcome);
        run.outcome_probability[o] = click.probability;
        if (click.probability < kNoHeraldThreshold) {
            continue;
        }
        const double f = overlap_fidelity(click.atoms, *targets[o], click.probability);
        run.outcome_fidelity[o] = f;
        weighted += click.probability * f;
        total += click.probability;
    }
    if (total > 0.0) {
        run.fidelity = weighted / total;
    }
    return run;
}

}  // namespace

EntanglementRun run_atom_atom_new(const ReflectionPair& first, const ReflectionPair& second, double phi_1,
                                  double phi_2, double zeta, double mismatch_phase) {
    Tracker track;
    const std::vector<std::string> paths{"in",  "r1_a", "p2_a", "d1_a", "link", "reject_a", "dump_a",
                                         "r1_b", "p2_b", "d1_b", "out", "reject_b", "dump_b"};
    const std::array<complex, 2> x0{kInvSqrt2, kInvSqrt2};
    const std::array<complex, 2> x1{kInvSqrt2, -kInvSqrt2};
    // sigma+ = (H + V)/sqrt2
    NetworkState st = track(prepare(paths, "in", kInvSqrt2, kInvSqrt2, {x0, x1}, zeta, mismatch_phase));

    st = track(apply_pbs(std::move(st), "in", "r1_a", "p2_a"));
    st = track(apply_phase(std::move(st), "p2_a", phi_1));
    st = track(apply_scattering(std::move(st), "r1_a", first, CouplingRule::symmetric, 0));
    st = track(apply_pbs(std::move(st), "r1_a", "reject_a", "d1_a"));
    st = track(apply_waveplate(std::move(st), "d1_a", Waveplate::half));
    st = track(apply_pbs(std::move(st), "d1_a", "p2_a", "link", "dump_a"));
    st = track(apply_waveplate(std::move(st), "link", Waveplate::half));

    st = track(apply_pbs(std::move(st), "link", "r1_b", "p2_b"));
    st = track(apply_phase(std::move(st), "p2_b", phi_2));
    st = track(apply_scattering(std::move(st), "r1_b", second, CouplingRule::symmetric, 1));
    st = track(apply_pbs(std::move(st), "r1_b", "reject_b", "d1_b"));
    st = track(apply_waveplate(std::move(st), "d1_b", Waveplate::half));
    st = track(apply_pbs(std::move(st), "d1_b", "p2_b", "out", "dump_b"));
    st = track(apply_waveplate(std::move(st), "out", Waveplate::quarter));

    // H click heralds Psi+, V click heralds Phi+.
    return finish_entanglement(st, track.worst, "out", PolarizationBasis::linear, {&kPsiPlus, &kPhiPlus});
}

EntanglementRun run_atom_atom_old(const ReflectionPair& first, const ReflectionPair& second, double zeta,
                                  double mismatch_phase) {
    Tracker track;
    const std::array<complex, 2> x0{kInvSqrt2, kInvSqrt2};
    NetworkState st = track(prepare({"line"}, "line", 1.0, 0.0, {x0, x0}, zeta, mismatch_phase));
    st = track(apply_scattering(std::move(st), "line", first, CouplingRule::lambda, 0));
    st = track(apply_scattering(std::move(st), "line", second, CouplingRule::lambda, 1));
    st = track(apply_waveplate(std::move(st), "line", Waveplate::quarter));
    // sigma- click heralds Phi+, sigma+ click heralds Psi+.
    return finish_entanglement(st, track.worst, "line", PolarizationBasis::circular, {&kPhiPlus, &kPsiPlus});
}

}  // namespace cavsim::oracle
