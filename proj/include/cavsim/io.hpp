#pragma once

#include "cavsim/analytic.hpp"
#include "cavsim/montecarlo.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace cavsim::io {

using nlohmann::json;

/// 12 significant digits, the precision used for every emitted number.
std::string format_number(double x);

/// Value rounded to 12 significant digits (what a reader of our files sees).
double round12(double x);

/// Flat keys: C, delta_c, delta_a, kappa_ratio, zeta. Missing keys keep the
/// value from `defaults`; unknown keys are ignored by this reader.
CavityParams cavity_params_from_json(const json& j, const CavityParams& defaults);
json to_json(const CavityParams& p);

/// Everything needed to re-run one Monte Carlo invocation.
///
/// Flat keys: c_sigma_rel, kappa_ratio_mean, kappa_ratio_sigma,
/// delta_c_mean, delta_c_sigma, delta_a_mean, delta_a_sigma, phi_mean,
/// phi_sigma, trials, seed, window, c_min, c_max, c_points, scheme.
/// Keys prefixed with "node2_" override the second node only.
struct McRecipe {
    FluctuationSpec spec;
    std::string scheme = "both";  ///< new, old or both
    double c_min = 1.0;
    double c_max = 10.0;
    std::size_t c_points = 500;

    std::vector<double> grid() const { return linspace(c_min, c_max, c_points); }
    bool operator==(const McRecipe&) const = default;
};

McRecipe mc_recipe_from_json(const json& j, const McRecipe& defaults = {});
json to_json(const McRecipe& r);

/// Header "x,mean,stderr", LF line endings.
void write_csv(std::ostream& os, const SweepResult& r);
json to_json(const SweepResult& r);

json to_json(const GateResult& g);

}  // namespace cavsim::io
