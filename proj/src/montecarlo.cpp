#include "cavsim/montecarlo.hpp"

#include "cavsim/entangle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

namespace cavsim {

namespace {

struct GridOutcome {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t no_herald = 0;
    std::size_t draws = 0;
    std::size_t clamped = 0;
};

class Sampler {
public:
    Sampler(std::uint64_t seed, std::size_t grid_index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(grid_index), static_cast<std::uint32_t>(grid_index >> 32)};
        engine_.seed(seq);
    }

    double normal(const Gaussian& g) { return g.mean + g.sigma * unit_(engine_); }

    double clamped(const Gaussian& g, double lo, double hi) {
        const double x = normal(g);
        ++draws;
        if (x < lo || x > hi) {
            ++clamps;
            return std::clamp(x, lo, hi);
        }
        return x;
    }

    std::size_t draws = 0;
    std::size_t clamps = 0;

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> unit_{0.0, 1.0};
};

ReflectionPair draw_cavity(Sampler& rng, const CavityFluctuation& f, double c_mean) {
    CavityParams p;
    p.cooperativity = rng.clamped({c_mean, f.c_sigma_rel * c_mean}, 0.0, HUGE_VAL);
    p.kappa_ratio = rng.clamped(f.kappa_ratio, 0.0, 1.0);
    p.delta_c = rng.normal(f.delta_c);
    p.delta_a = rng.normal(f.delta_a);
    return reflection_lossy(p);
}

GridOutcome run_grid_point(const FluctuationSpec& spec, Scheme scheme, double c_mean, std::size_t grid_index) {
    Sampler rng(spec.seed, grid_index);
    GridOutcome out;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
        // Fixed draw order per trial keeps streams aligned across schemes and phase settings.
        const ReflectionPair first = draw_cavity(rng, spec.cavities[0], c_mean);
        const ReflectionPair second = draw_cavity(rng, spec.cavities[1], c_mean);
        const double phi_1 = rng.normal(spec.phases[0]);
        const double phi_2 = rng.normal(spec.phases[1]);

        const std::optional<double> f = scheme == Scheme::mzi ? atom_atom_new(first, second, phi_1, phi_2)
                                                              : atom_atom_old(first, second).averaged();
        if (!f) {
            ++out.no_herald;
            continue;
        }
        const double infidelity = 1.0 - *f;
        sum += infidelity;
        sum_sq += infidelity * infidelity;
        ++n;
    }
    out.draws = rng.draws;
    out.clamped = rng.clamps;
    if (n > 0) {
        out.mean = sum / static_cast<double>(n);
        if (n > 1) {
            const double var = std::max(0.0, (sum_sq - sum * out.mean) / static_cast<double>(n - 1));
            out.std_error = std::sqrt(var / static_cast<double>(n));
        }
    }
    return out;
}

void check_increasing(const std::vector<double>& grid) {
    if (grid.empty()) {
        throw std::invalid_argument("grid must not be empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("grid must be strictly increasing");
        }
    }
}

void check_gaussian(const Gaussian& g, const char* name) {
    if (!std::isfinite(g.mean) || !std::isfinite(g.sigma) || g.sigma < 0.0) {
        throw std::invalid_argument(std::string(name) + ": sigma must be >= 0 and values finite");
    }
}

}  // namespace

void FluctuationSpec::validate() const {
    for (const auto& c : cavities) {
        if (!std::isfinite(c.c_sigma_rel) || c.c_sigma_rel < 0.0) {
            throw std::invalid_argument("c_sigma_rel must be >= 0");
        }
        check_gaussian(c.kappa_ratio, "kappa_ratio");
        check_gaussian(c.delta_c, "delta_c");
        check_gaussian(c.delta_a, "delta_a");
    }
    check_gaussian(phases[0], "phi_1");
    check_gaussian(phases[1], "phi_2");
    if (trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (window < 1) {
        throw std::invalid_argument("window must be >= 1");
    }
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::zeta:
            return "zeta";
        case SweepAxis::kappa_ratio:
            return "kappa_ratio";
        case SweepAxis::delta_c:
            return "delta_c";
        case SweepAxis::cooperativity:
            return "C";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "zeta") return SweepAxis::zeta;
    if (name == "kappa_ratio" || name == "kr") return SweepAxis::kappa_ratio;
    if (name == "delta_c" || name == "dc") return SweepAxis::delta_c;
    if (name == "C" || name == "c" || name == "cooperativity") return SweepAxis::cooperativity;
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 0) {
        throw std::invalid_argument("linspace: need at least one point");
    }
    if (points == 1) {
        return {lo};
    }
    std::vector<double> out(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

std::vector<double> default_c_grid() { return linspace(1.0, 10.0, 500); }

std::vector<SweepPoint> moving_average(const std::vector<SweepPoint>& raw, std::size_t window) {
    if (window < 1) {
        throw std::invalid_argument("moving_average: window must be >= 1");
    }
    if (window == 1) {
        return raw;
    }
    const std::size_t before = (window - 1) / 2;
    const std::size_t after = window - 1 - before;
    std::vector<SweepPoint> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::size_t lo = i >= before ? i - before : 0;
        const std::size_t hi = std::min(raw.size() - 1, i + after);
        double sum = 0.0;
        double var = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            sum += raw[j].mean;
            var += raw[j].std_error * raw[j].std_error;
        }
        const auto count = static_cast<double>(hi - lo + 1);
        out[i] = {raw[i].x, sum / count, std::sqrt(var) / count};
    }
    return out;
}

std::size_t worker_count() {
    std::size_t n = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CAVSIM_THREADS")) {
        char* end = nullptr;
        const unsigned long requested = std::strtoul(env, &end, 10);
        if (end != env && requested > 0) {
            n = std::min<std::size_t>(requested, 256);
        }
    }
    return n;
}

SweepResult mc_infidelity_curve(const FluctuationSpec& spec, Scheme scheme, const std::vector<double>& c_grid) {
    spec.validate();
    check_increasing(c_grid);
    for (const double c : c_grid) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw std::invalid_argument("cooperativity grid values must be finite and >= 0");
        }
    }

    std::vector<GridOutcome> outcomes(c_grid.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < c_grid.size(); i = next++) {
            outcomes[i] = run_grid_point(spec, scheme, c_grid[i], i);
        }
    };
    const std::size_t workers = std::min(worker_count(), c_grid.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    SweepResult result;
    result.quantity = "infidelity";
    result.scheme = scheme;
    result.spec = spec;
    std::vector<SweepPoint> raw(c_grid.size());
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        raw[i] = {c_grid[i], outcomes[i].mean, outcomes[i].std_error};
        result.samples += spec.trials;
        result.no_herald += outcomes[i].no_herald;
        result.draws += outcomes[i].draws;
        result.clamped += outcomes[i].clamped;
    }
    result.points = moving_average(raw, spec.window);
    return result;
}

SweepResult mc_phase_noise(const FluctuationSpec& spec, double phi_sigma, Scheme scheme,
                           const std::vector<double>& c_grid) {
    FluctuationSpec noisy = spec;
    noisy.phases = {Gaussian{0.0, phi_sigma}, Gaussian{0.0, phi_sigma}};
    return mc_infidelity_curve(noisy, scheme, c_grid);
}

CavityParams reference_baseline() { return CavityParams{4.0, 0.0, 0.0, 0.916, 0.92}; }

SweepPair sweep_1d(const CavityParams& base, SweepAxis axis, const std::vector<double>& grid, Scheme scheme) {
    base.validate();
    check_increasing(grid);

    SweepPair out;
    out.fidelity.scheme = scheme;
    out.fidelity.axis = axis;
    out.fidelity.base = base;
    out.success = out.fidelity;
    out.fidelity.quantity = "avg_fidelity";
    out.success.quantity = "avg_success";

    for (const double x : grid) {
        CavityParams p = base;
        switch (axis) {
            case SweepAxis::zeta:
                p.zeta = x;
                break;
            case SweepAxis::kappa_ratio:
                p.kappa_ratio = x;
                break;
            case SweepAxis::delta_c:
                p.delta_c = x;
                break;
            case SweepAxis::cooperativity:
                p.cooperativity = x;
                break;
        }
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("sweep grid value " + std::to_string(x) + " out of range for axis " +
                                        to_string(axis) + ": " + e.what());
        }
        const double f = scheme == Scheme::mzi ? avg_fidelity_new(p) : avg_fidelity_old(p);
        out.fidelity.points.push_back({x, f, 0.0});
        out.success.points.push_back({x, avg_success(p, scheme), 0.0});
    }
    return out;
}

}  // namespace cavsim
