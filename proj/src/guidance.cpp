#include "rds/guidance.hpp"

#include <stdexcept>

namespace rds {

double charbonnier_weight(double grad_sq, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("charbonnier_weight: lambda must be positive");
    if (!(grad_sq >= 0.0))
        throw std::invalid_argument("charbonnier_weight: squared gradient must be >= 0");
    return charbonnier_core(grad_sq, 1.0 / (lambda * lambda));
}

double sigmoid_guidance(double x, double epsilon, GuidanceKind kind) {
    if (kind == GuidanceKind::Arctan && !(epsilon > 0.0))
        throw std::invalid_argument("sigmoid_guidance: epsilon must be positive");
    return sigmoid_core(x, 1.0 / epsilon, kind);
}

RdsParams couple_parameters(double sigma, double lambda) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("couple_parameters: sigma must be positive");
    if (!(lambda > 0.0))
        throw std::invalid_argument("couple_parameters: lambda must be positive");
    RdsParams params;
    params.sigma = sigma;
    params.rho = 1.6 * sigma;
    params.nu = 1.6 * sigma;
    params.lambda = lambda;
    params.epsilon = 0.15 * lambda;
    params.tau = default_rds_time_step(params.delta, 1.0);
    return params;
}

}  // namespace rds
