#pragma once

#include "cavsim/analytic.hpp"
#include "cavsim/cavity.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cavsim {

struct Gaussian {
    double mean = 0.0;
    double sigma = 0.0;

    bool operator==(const Gaussian&) const = default;
};

/// Per-cavity parameter spread. The cooperativity mean is the grid value;
/// its standard deviation is `c_sigma_rel` times that mean.
struct CavityFluctuation {
    double c_sigma_rel = 0.1;
    Gaussian kappa_ratio{0.9, 0.05};
    Gaussian delta_c{0.0, 0.05};
    Gaussian delta_a{0.0, 0.05};

    bool operator==(const CavityFluctuation&) const = default;
};

/// Gaussian fluctuation model for the two-node entanglement Monte Carlo.
/// Defaults are the reference spread used for the remote-entanglement curves,
/// without phase noise.
struct FluctuationSpec {
    std::array<CavityFluctuation, 2> cavities{};
    std::array<Gaussian, 2> phases{};  ///< MZI phases at node 1 and node 2
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::size_t window = 50;  ///< moving-average width over grid points

    void validate() const;
    bool operator==(const FluctuationSpec&) const = default;
};

struct SweepPoint {
    double x = 0.0;
    double mean = 0.0;
    double std_error = 0.0;

    bool operator==(const SweepPoint&) const = default;
};

enum class SweepAxis { zeta, kappa_ratio, delta_c, cooperativity };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepResult {
    std::vector<SweepPoint> points;  ///< x strictly increasing
    std::string quantity;            ///< "infidelity", "avg_fidelity" or "avg_success"
    Scheme scheme = Scheme::mzi;

    // Monte Carlo bookkeeping
    std::optional<FluctuationSpec> spec;
    std::size_t samples = 0;    ///< trials evaluated (heralded or not)
    std::size_t no_herald = 0;  ///< trials skipped because nothing heralds
    std::size_t draws = 0;      ///< individual clamped-parameter draws
    std::size_t clamped = 0;    ///< draws pulled back into range

    // Deterministic sweeps
    std::optional<SweepAxis> axis;
    std::optional<CavityParams> base;

    double clamp_fraction() const { return draws == 0 ? 0.0 : static_cast<double>(clamped) / static_cast<double>(draws); }
};

/// `points` evenly spaced values from `lo` to `hi` inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// 500 points on [1, 10].
std::vector<double> default_c_grid();

/// Centered moving average over neighbouring points, truncated at the
/// ends. Window 1 returns the input unchanged.
std::vector<SweepPoint> moving_average(const std::vector<SweepPoint>& raw, std::size_t window);

/// Mean remote-entanglement infidelity at every cooperativity on `c_grid`
/// under the Gaussian spec, smoothed by the spec's moving average.
///
/// Random streams are keyed by (seed, grid index), so the result does not
/// depend on the number of worker threads (CAVSIM_THREADS sets it).
SweepResult mc_infidelity_curve(const FluctuationSpec& spec, Scheme scheme, const std::vector<double>& c_grid);

/// Same as mc_infidelity_curve with both MZI phases drawn from
/// N(0, phi_sigma).
SweepResult mc_phase_noise(const FluctuationSpec& spec, double phi_sigma, Scheme scheme,
                           const std::vector<double>& c_grid);

struct SweepPair {
    SweepResult fidelity;
    SweepResult success;
};

/// Bloch-averaged fidelity and success probability while one parameter of
/// `base` varies along `grid`.
SweepPair sweep_1d(const CavityParams& base, SweepAxis axis, const std::vector<double>& grid, Scheme scheme);

/// C = 4, kappa_r/kappa = 0.916, zeta = 0.92, resonant.
CavityParams reference_baseline();

/// Worker threads used by the Monte Carlo (CAVSIM_THREADS, else hardware).
std::size_t worker_count();

}  // namespace cavsim
