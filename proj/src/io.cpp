#include "cavsim/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cavsim::io {

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        j.at(key).get_to(out);
    }
}

void read_gaussian(const json& j, const std::string& prefix, Gaussian& g) {
    read(j, (prefix + "_mean").c_str(), g.mean);
    read(j, (prefix + "_sigma").c_str(), g.sigma);
}

void read_cavity(const json& j, const std::string& prefix, CavityFluctuation& c) {
    read(j, (prefix + "c_sigma_rel").c_str(), c.c_sigma_rel);
    read_gaussian(j, prefix + "kappa_ratio", c.kappa_ratio);
    read_gaussian(j, prefix + "delta_c", c.delta_c);
    read_gaussian(j, prefix + "delta_a", c.delta_a);
}

void write_gaussian(json& j, const std::string& prefix, const Gaussian& g) {
    j[prefix + "_mean"] = g.mean;
    j[prefix + "_sigma"] = g.sigma;
}

void write_cavity(json& j, const std::string& prefix, const CavityFluctuation& c) {
    j[prefix + "c_sigma_rel"] = c.c_sigma_rel;
    write_gaussian(j, prefix + "kappa_ratio", c.kappa_ratio);
    write_gaussian(j, prefix + "delta_c", c.delta_c);
    write_gaussian(j, prefix + "delta_a", c.delta_a);
}

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) { return std::stod(format_number(x)); }

CavityParams cavity_params_from_json(const json& j, const CavityParams& defaults) {
    CavityParams p = defaults;
    read(j, "C", p.cooperativity);
    read(j, "delta_c", p.delta_c);
    read(j, "delta_a", p.delta_a);
    read(j, "kappa_ratio", p.kappa_ratio);
    read(j, "zeta", p.zeta);
    p.validate();
    return p;
}

json to_json(const CavityParams& p) {
    return json{{"C", p.cooperativity},
                {"delta_c", p.delta_c},
                {"delta_a", p.delta_a},
                {"kappa_ratio", p.kappa_ratio},
                {"zeta", p.zeta}};
}

McRecipe mc_recipe_from_json(const json& j, const McRecipe& defaults) {
    if (!j.is_object()) {
        throw std::invalid_argument("Monte Carlo config must be a JSON object");
    }
    McRecipe r = defaults;
    read_cavity(j, "", r.spec.cavities[0]);
    r.spec.cavities[1] = r.spec.cavities[0];
    read_cavity(j, "node2_", r.spec.cavities[1]);
    read_gaussian(j, "phi", r.spec.phases[0]);
    r.spec.phases[1] = r.spec.phases[0];
    read_gaussian(j, "node2_phi", r.spec.phases[1]);
    read(j, "trials", r.spec.trials);
    read(j, "seed", r.spec.seed);
    read(j, "window", r.spec.window);
    read(j, "c_min", r.c_min);
    read(j, "c_max", r.c_max);
    read(j, "c_points", r.c_points);
    read(j, "scheme", r.scheme);
    if (r.scheme != "new" && r.scheme != "old" && r.scheme != "both") {
        throw std::invalid_argument("scheme must be new, old or both");
    }
    if (!(r.c_max >= r.c_min) || r.c_points < 1) {
        throw std::invalid_argument("invalid cooperativity grid");
    }
    r.spec.validate();
    return r;
}

json to_json(const McRecipe& r) {
    json j;
    write_cavity(j, "", r.spec.cavities[0]);
    if (!(r.spec.cavities[1] == r.spec.cavities[0])) {
        write_cavity(j, "node2_", r.spec.cavities[1]);
    }
    write_gaussian(j, "phi", r.spec.phases[0]);
    if (!(r.spec.phases[1] == r.spec.phases[0])) {
        write_gaussian(j, "node2_phi", r.spec.phases[1]);
    }
    j["trials"] = r.spec.trials;
    j["seed"] = r.spec.seed;
    j["window"] = r.spec.window;
    j["c_min"] = r.c_min;
    j["c_max"] = r.c_max;
    j["c_points"] = r.c_points;
    j["scheme"] = r.scheme;
    return j;
}

void write_csv(std::ostream& os, const SweepResult& r) {
    os << "x,mean,stderr\n";
    for (const auto& p : r.points) {
        os << format_number(p.x) << ',' << format_number(p.mean) << ',' << format_number(p.std_error) << '\n';
    }
}

json to_json(const SweepResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back(json{{"x", round12(p.x)}, {"mean", round12(p.mean)}, {"stderr", round12(p.std_error)}});
    }
    json meta{{"quantity", r.quantity}, {"scheme", to_string(r.scheme)}};
    if (r.spec) {
        meta["seed"] = r.spec->seed;
        meta["samples"] = r.samples;
        meta["no_herald"] = r.no_herald;
        meta["draws"] = r.draws;
        meta["clamped"] = r.clamped;
        meta["clamp_fraction"] = round12(r.clamp_fraction());
    }
    if (r.axis) {
        meta["axis"] = to_string(*r.axis);
    }
    if (r.base) {
        meta["base"] = to_json(*r.base);
    }
    return json{{"metadata", meta}, {"points", points}};
}

json to_json(const GateResult& g) {
    json j{{"success_probability", round12(g.success_probability)},
           {"p_loss", round12(g.p_loss)},
           {"p_h_reject", round12(g.p_h_reject)},
           {"heralded", g.heralded()}};
    j["fidelity"] = g.fidelity ? json(round12(*g.fidelity)) : json(nullptr);
    json amps = json::array();
    for (const complex& a : g.output.amplitudes) {
        amps.push_back(json::array({round12(a.real()), round12(a.imag())}));
    }
    j["output_amplitudes"] = amps;
    return j;
}

}  // namespace cavsim::io
