#include "cavsim/analytic.hpp"
#include "cavsim/io.hpp"
#include "cavsim/montecarlo.hpp"
#include "cavsim/oracle.hpp"
#include "cavsim/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using cavsim::io::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNoHerald = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CavityFlags {
    std::optional<double> c;
    std::optional<double> kr;
    std::optional<double> zeta;
    std::optional<double> dc;
    std::optional<double> da;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--c", c, "cooperativity C");
        cmd->add_option("--kr", kr, "kappa_r / kappa");
        cmd->add_option("--zeta", zeta, "mode-matching efficiency");
        cmd->add_option("--dc", dc, "cavity detuning (units of kappa)");
        cmd->add_option("--da", da, "atomic detuning (units of gamma)");
    }

    cavsim::CavityParams apply(cavsim::CavityParams p) const {
        if (c) p.cooperativity = *c;
        if (kr) p.kappa_ratio = *kr;
        if (zeta) p.zeta = *zeta;
        if (dc) p.delta_c = *dc;
        if (da) p.delta_a = *da;
        p.validate();
        return p;
    }
};

struct OutputFlags {
    std::string format = "csv";
    std::optional<std::string> out;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out, "output directory");
    }
};

json read_config(const std::optional<std::string>& path) {
    if (!path) {
        return json::object();
    }
    std::ifstream in(*path);
    if (!in) {
        throw ConfigError("cannot open config file " + *path);
    }
    try {
        json j = json::parse(in);
        if (!j.is_object()) {
            throw ConfigError("config file " + *path + " must hold a JSON object");
        }
        return j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + *path + ": " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
}

fs::path prepare_dir(const std::optional<std::string>& out) {
    const fs::path dir = out.value_or(".");
    fs::create_directories(dir);
    return dir;
}

std::vector<cavsim::Scheme> schemes_for(const std::string& name) {
    if (name == "both") {
        return {cavsim::Scheme::mzi, cavsim::Scheme::direct};
    }
    return {cavsim::scheme_from_string(name)};
}

std::string render(const cavsim::SweepResult& r, const std::string& format, const json& config) {
    if (format == "json") {
        json j = cavsim::io::to_json(r);
        j["metadata"]["config"] = config;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    cavsim::io::write_csv(os, r);
    return os.str();
}

// gate -----------------------------------------------------------------------

struct GateOptions {
    std::optional<std::string> config;
    std::string scheme = "new";
    CavityFlags cavity;
    double phi = 0.0;
    double transmission = 1.0;
    double alpha_p = std::numbers::sqrt2 / 2;
    double beta_p = std::numbers::sqrt2 / 2;
    double alpha = std::numbers::sqrt2 / 2;
    double beta = std::numbers::sqrt2 / 2;
    bool oracle = false;
    OutputFlags output;
};

json gate_row(const cavsim::GateResult& g) {
    return cavsim::io::to_json(g);
}

int run_gate(const GateOptions& o) {
    const json file = read_config(o.config);
    const cavsim::CavityParams p = o.cavity.apply(cavsim::io::cavity_params_from_json(file, cavsim::CavityParams{}));
    const cavsim::Scheme scheme = cavsim::scheme_from_string(o.scheme);
    const cavsim::JointState s{o.alpha_p, o.beta_p, o.alpha, o.beta};
    s.validate();
    if (!(o.transmission >= 0.0 && o.transmission <= 1.0)) {
        throw std::invalid_argument("--attenuation must lie in [0, 1]");
    }
    if (scheme == cavsim::Scheme::direct && (o.phi != 0.0 || o.transmission != 1.0)) {
        throw std::invalid_argument("--phi and --attenuation only apply to the new scheme");
    }

    const cavsim::ReflectionPair refl = cavsim::reflection_lossy(p);
    const cavsim::GateResult analytic = scheme == cavsim::Scheme::mzi
                                            ? cavsim::cz_new(refl, p.zeta, s, o.phi, o.transmission)
                                            : cavsim::cz_old(refl, p.zeta, s);
    std::optional<cavsim::oracle::NetworkRun> network;
    if (o.oracle) {
        network = scheme == cavsim::Scheme::mzi ? cavsim::oracle::run_cz_new(refl, p.zeta, s, o.phi, o.transmission)
                                                : cavsim::oracle::run_cz_old(refl, p.zeta, s);
    }

    std::string text;
    if (o.output.format == "json") {
        json j{{"scheme", cavsim::to_string(scheme)},
               {"params", cavsim::io::to_json(p)},
               {"state", {{"alpha_p", o.alpha_p}, {"beta_p", o.beta_p}, {"alpha", o.alpha}, {"beta", o.beta}}},
               {"phi", o.phi},
               {"attenuation", o.transmission},
               {"analytic", gate_row(analytic)}};
        if (network) {
            j["oracle"] = gate_row(network->gate);
            j["oracle_bookkeeping_defect"] = cavsim::io::round12(network->max_bookkeeping_defect);
            double diff = std::max({std::abs(analytic.success_probability - network->gate.success_probability),
                                    std::abs(analytic.p_loss - network->gate.p_loss),
                                    std::abs(analytic.p_h_reject - network->gate.p_h_reject)});
            if (analytic.fidelity && network->gate.fidelity) {
                diff = std::max(diff, std::abs(*analytic.fidelity - *network->gate.fidelity));
            } else if (analytic.heralded() != network->gate.heralded()) {
                diff = 1.0;
            }
            j["oracle_max_difference"] = cavsim::io::round12(diff);
        }
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "quantity,analytic" << (network ? ",oracle" : "") << '\n';
        auto row = [&](const char* name, auto get) {
            os << name << ',' << get(analytic);
            if (network) {
                os << ',' << get(network->gate);
            }
            os << '\n';
        };
        row("fidelity", [](const cavsim::GateResult& g) {
            return g.fidelity ? cavsim::io::format_number(*g.fidelity) : std::string("nan");
        });
        row("success_probability",
            [](const cavsim::GateResult& g) { return cavsim::io::format_number(g.success_probability); });
        row("p_loss", [](const cavsim::GateResult& g) { return cavsim::io::format_number(g.p_loss); });
        row("p_h_reject", [](const cavsim::GateResult& g) { return cavsim::io::format_number(g.p_h_reject); });
        text = os.str();
    }

    if (o.output.out) {
        write_file(prepare_dir(o.output.out) / ("gate." + o.output.format), text);
    } else {
        std::cout << text;
    }
    if (!analytic.heralded()) {
        std::cerr << "gate never heralds at this operating point\n";
        return kExitNoHerald;
    }
    return 0;
}

// sweep ----------------------------------------------------------------------

struct SweepOptions {
    std::optional<std::string> config;
    std::string axis = "zeta";
    std::string scheme = "both";
    CavityFlags cavity;
    std::optional<double> from;
    std::optional<double> to;
    std::size_t points = 101;
    OutputFlags output;
};

std::pair<double, double> default_range(cavsim::SweepAxis axis) {
    switch (axis) {
        case cavsim::SweepAxis::zeta:
            return {0.5, 1.0};
        case cavsim::SweepAxis::kappa_ratio:
            return {0.5, 1.0};
        case cavsim::SweepAxis::delta_c:
            return {-1.0, 1.0};
        case cavsim::SweepAxis::cooperativity:
            return {0.5, 10.0};
    }
    return {0.0, 1.0};
}

int run_sweep(const SweepOptions& o) {
    const json file = read_config(o.config);
    const cavsim::CavityParams base = o.cavity.apply(cavsim::io::cavity_params_from_json(file, cavsim::reference_baseline()));
    const cavsim::SweepAxis axis = cavsim::sweep_axis_from_string(o.axis);
    const auto [lo_default, hi_default] = default_range(axis);
    const double lo = o.from.value_or(lo_default);
    const double hi = o.to.value_or(hi_default);
    if (o.points < 2 || !(hi > lo)) {
        throw std::invalid_argument("sweep needs --points >= 2 and --to > --from");
    }
    const std::vector<double> grid = cavsim::linspace(lo, hi, o.points);

    json config = cavsim::io::to_json(base);
    config["axis"] = cavsim::to_string(axis);
    config["from"] = lo;
    config["to"] = hi;
    config["points"] = o.points;

    const fs::path dir = prepare_dir(o.output.out);
    for (const cavsim::Scheme scheme : schemes_for(o.scheme)) {
        const cavsim::SweepPair pair = cavsim::sweep_1d(base, axis, grid, scheme);
        const std::string stem = "sweep_" + cavsim::to_string(axis) + "_" + cavsim::to_string(scheme);
        write_file(dir / (stem + "_fidelity." + o.output.format), render(pair.fidelity, o.output.format, config));
        write_file(dir / (stem + "_success." + o.output.format), render(pair.success, o.output.format, config));
    }
    if (o.output.format == "csv") {
        write_file(dir / ("sweep_" + cavsim::to_string(axis) + "_config.json"), config.dump(2) + "\n");
    }
    return 0;
}

// mc -------------------------------------------------------------------------

struct McOptions {
    std::optional<std::string> spec;
    std::optional<std::string> scheme;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> points;
    std::optional<std::size_t> window;
    std::optional<double> c_min;
    std::optional<double> c_max;
    std::optional<double> phi_sigma;
    OutputFlags output;
};

int run_mc(const McOptions& o) {
    const json file = read_config(o.spec);
    cavsim::io::McRecipe recipe = cavsim::io::mc_recipe_from_json(file);
    if (o.scheme) recipe.scheme = *o.scheme;
    if (o.seed) recipe.spec.seed = *o.seed;
    if (o.trials) recipe.spec.trials = *o.trials;
    if (o.points) recipe.c_points = *o.points;
    if (o.window) recipe.spec.window = *o.window;
    if (o.c_min) recipe.c_min = *o.c_min;
    if (o.c_max) recipe.c_max = *o.c_max;
    if (o.phi_sigma) {
        recipe.spec.phases = {cavsim::Gaussian{0.0, *o.phi_sigma}, cavsim::Gaussian{0.0, *o.phi_sigma}};
    }
    // Re-parse the merged recipe so flag values go through the same checks as file values.
    recipe = cavsim::io::mc_recipe_from_json(cavsim::io::to_json(recipe));
    const json config = cavsim::io::to_json(recipe);

    const std::vector<double> grid = recipe.grid();
    const fs::path dir = prepare_dir(o.output.out);
    for (const cavsim::Scheme scheme : schemes_for(recipe.scheme)) {
        const cavsim::SweepResult r = cavsim::mc_infidelity_curve(recipe.spec, scheme, grid);
        if (r.clamp_fraction() > 0.001) {
            std::cerr << "note: " << cavsim::to_string(scheme) << " scheme clamped " << r.clamped << " of " << r.draws
                      << " parameter draws\n";
        }
        write_file(dir / ("mc_" + cavsim::to_string(scheme) + "." + o.output.format),
                   render(r, o.output.format, config));
    }
    if (o.output.format == "csv") {
        write_file(dir / "mc_config.json", config.dump(2) + "\n");
    }
    return 0;
}

// validate -------------------------------------------------------------------

int run_validate(const OutputFlags& o) {
    const std::vector<cavsim::validate::Report> reports = cavsim::validate::run_all();
    const json verdict = cavsim::validate::to_json(reports);
    const std::string text = cavsim::validate::to_text(reports);
    if (o.out) {
        const fs::path dir = prepare_dir(o.out);
        write_file(dir / "validation.json", verdict.dump(2) + "\n");
        write_file(dir / "validation.txt", text);
    }
    std::cout << (o.format == "json" ? verdict.dump(2) + "\n" : text);
    const bool ok = verdict.at("pass").get<bool>();
    if (!o.out && o.format != "json") {
        std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
    }
    return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-QED atom-photon gate simulator"};
    app.require_subcommand(1);

    GateOptions gate;
    CLI::App* gate_cmd = app.add_subcommand("gate", "evaluate one gate operating point");
    gate_cmd->add_option("--config", gate.config, "JSON file with C, delta_c, delta_a, kappa_ratio, zeta");
    gate_cmd->add_option("--scheme", gate.scheme, "new or old");
    gate.cavity.add_to(gate_cmd);
    gate_cmd->add_option("--phi", gate.phi, "MZI phase in the bypass arm (radians)");
    gate_cmd->add_option("--attenuation", gate.transmission, "amplitude transmission of the bypass arm");
    gate_cmd->add_option("--alpha-p", gate.alpha_p, "photon |0> amplitude");
    gate_cmd->add_option("--beta-p", gate.beta_p, "photon |1> amplitude");
    gate_cmd->add_option("--alpha", gate.alpha, "atom |0> amplitude");
    gate_cmd->add_option("--beta", gate.beta, "atom |1> amplitude");
    gate_cmd->add_flag("--oracle", gate.oracle, "also run the optical network simulation");
    gate.output.add_to(gate_cmd);

    SweepOptions sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Bloch-averaged fidelity and success along one axis");
    sweep_cmd->add_option("--config", sweep.config, "JSON file with the baseline cavity parameters");
    sweep_cmd->add_option("--axis", sweep.axis, "zeta, kappa_ratio, delta_c or C");
    sweep_cmd->add_option("--scheme", sweep.scheme, "new, old or both");
    sweep.cavity.add_to(sweep_cmd);
    sweep_cmd->add_option("--from", sweep.from, "first grid value");
    sweep_cmd->add_option("--to", sweep.to, "last grid value");
    sweep_cmd->add_option("--points", sweep.points, "grid size");
    sweep.output.add_to(sweep_cmd);

    McOptions mc;
    CLI::App* mc_cmd = app.add_subcommand("mc", "remote-entanglement Monte Carlo over fluctuating cavities");
    mc_cmd->add_option("--spec,--config", mc.spec, "JSON fluctuation spec");
    mc_cmd->add_option("--scheme", mc.scheme, "new, old or both");
    mc_cmd->add_option("--seed", mc.seed, "RNG seed");
    mc_cmd->add_option("--trials", mc.trials, "trials per cooperativity point");
    mc_cmd->add_option("--points", mc.points, "cooperativity grid size");
    mc_cmd->add_option("--c-min", mc.c_min, "smallest mean cooperativity");
    mc_cmd->add_option("--c-max", mc.c_max, "largest mean cooperativity");
    mc_cmd->add_option("--window", mc.window, "moving-average window");
    mc_cmd->add_option("--phi-sigma", mc.phi_sigma, "standard deviation of both MZI phases");
    mc.output.add_to(mc_cmd);

    OutputFlags validate;
    validate.format = "text";
    CLI::App* validate_cmd = app.add_subcommand("validate", "reproduce the reference numbers and check them");
    validate_cmd->add_option("--format", validate.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    validate_cmd->add_option("--out", validate.out, "directory for validation.json and validation.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*gate_cmd) return run_gate(gate);
        if (*sweep_cmd) return run_sweep(sweep);
        if (*mc_cmd) return run_mc(mc);
        if (*validate_cmd) return run_validate(validate);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitFail;
}
