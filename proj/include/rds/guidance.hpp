#pragma once

#include <cmath>

#include "rds/params.hpp"

namespace rds {

/// Charbonnier diffusivity g(s^2) = 1 / sqrt(1 + s^2 / lambda^2) applied to
/// a squared gradient magnitude. Decreases from 1 towards 0; lambda = +inf
/// gives exactly 1 for any finite input.
double charbonnier_weight(double grad_sq, double lambda);

/// Bounded odd sign function: (2/pi) arctan(x / epsilon), or the hard sign
/// of x (with sgn(0) = 0) when kind is Sign.
double sigmoid_guidance(double x, double epsilon, GuidanceKind kind = GuidanceKind::Arctan);

/// Build a full parameter set from the two hand-tuned knobs. The remaining
/// scales follow the fixed couplings rho = nu = 1.6 sigma and
/// epsilon = 0.15 lambda; everything else keeps its default.
RdsParams couple_parameters(double sigma, double lambda);

// Inline cores shared with the solver loops (reciprocals are precomputed
// there, so the public wrappers above must evaluate the same expressions).

inline double charbonnier_core(double grad_sq, double inv_lambda_sq) {
    return 1.0 / std::sqrt(1.0 + grad_sq * inv_lambda_sq);
}

inline double sigmoid_core(double x, double inv_epsilon, GuidanceKind kind) {
    if (kind == GuidanceKind::Sign) return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    constexpr double two_over_pi = 0.63661977236758134308;  // 2/pi
    return two_over_pi * std::atan(x * inv_epsilon);
}

}  // namespace rds
