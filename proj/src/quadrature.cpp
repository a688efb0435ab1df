#include "cavsim/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cavsim {

namespace {

constexpr unsigned kStartOrder = 8;
constexpr unsigned kMaxOrder = 1024;

GaussLegendreRule build_rule(unsigned order) {
    // legendre_p_zeros returns the non-negative half of the roots.
    const std::vector<double> half = boost::math::legendre_p_zeros<double>(static_cast<int>(order));
    GaussLegendreRule rule;
    rule.nodes.reserve(order);
    rule.weights.reserve(order);
    for (const double x : half) {
        const double dp = boost::math::legendre_p_prime(static_cast<int>(order), x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
        if (x != 0.0) {
            rule.nodes.push_back(-x);
            rule.weights.push_back(w);
        }
    }
    return rule;
}

template <class Estimate>
double converge(Estimate&& estimate, double tolerance) {
    double previous = estimate(kStartOrder);
    for (unsigned order = 2 * kStartOrder; order <= kMaxOrder; order *= 2) {
        const double current = estimate(order);
        if (std::abs(current - previous) < tolerance) {
            return current;
        }
        previous = current;
    }
    throw std::runtime_error("sphere_average: quadrature did not converge");
}

}  // namespace

const GaussLegendreRule& gauss_legendre(unsigned order) {
    if (order == 0) {
        throw std::invalid_argument("gauss_legendre: order must be positive");
    }
    static std::mutex mutex;
    static std::map<unsigned, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, build_rule(order)).first;
    }
    return it->second;
}

double sphere_average(const SphereIntegrand1& f, double tolerance) {
    return converge(
        [&](unsigned order) {
            const auto& rule = gauss_legendre(order);
            double sum = 0.0;
            double weight = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                double value = 0.0;
                if (f(rule.nodes[i], value)) {
                    sum += rule.weights[i] * value;
                    weight += rule.weights[i];
                }
            }
            return weight > 0.0 ? sum / weight : 0.0;
        },
        tolerance);
}

double sphere_average(const SphereIntegrand2& f, double tolerance) {
    return converge(
        [&](unsigned order) {
            const auto& rule = gauss_legendre(order);
            double sum = 0.0;
            double weight = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                    double value = 0.0;
                    if (f(rule.nodes[i], rule.nodes[j], value)) {
                        const double w = rule.weights[i] * rule.weights[j];
                        sum += w * value;
                        weight += w;
                    }
                }
            }
            return weight > 0.0 ? sum / weight : 0.0;
        },
        tolerance);
}

}  // namespace cavsim
