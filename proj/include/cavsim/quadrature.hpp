#pragma once

#include <functional>
#include <vector>

namespace cavsim {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rules are cached per order; the returned reference stays valid for the
/// lifetime of the program.
const GaussLegendreRule& gauss_legendre(unsigned order);

/// Uniform average over the sphere of a function of the polar cosine,
/// (1/2) * integral_{-1}^{1} f(u) du, with the order doubled until two
/// successive estimates differ by less than `tolerance`.
///
/// `f` may decline a node by returning false (no-herald points); declined
/// nodes are dropped and the remaining weight renormalised.
using SphereIntegrand1 = std::function<bool(double cos_theta, double& value)>;
double sphere_average(const SphereIntegrand1& f, double tolerance = 1e-10);

/// Tensor-product version for two independent Bloch spheres.
using SphereIntegrand2 = std::function<bool(double cos_theta_1, double cos_theta_2, double& value)>;
double sphere_average(const SphereIntegrand2& f, double tolerance = 1e-10);

}  // namespace cavsim
