#pragma once

#include <algorithm>

#include "rds/morphology.hpp"
#include "rds/stencils.hpp"

namespace rds {

/// Shape of the shock sign function F: smooth arctan ramp or hard sign.
enum class GuidanceKind { Arctan, Sign };

/// Direction field used for the shock term of the inpainting equation.
enum class ShockKind { Coherence, AlvarezMazorra };

/// How unknown pixels are filled before the first iteration.
enum class InitKind { KnownMean, Zero };

/// Largest time step for which one explicit delta-Laplacian diffusion step
/// satisfies the discrete maximum-minimum principle: h^2 / (4 - 2 delta).
double diffusion_time_step_bound(DeltaWeight delta = DeltaWeight(), double h = 1.0);

/// Default solver step: 95% of the joint stability bound of the diffusion
/// and morphological terms.
inline double default_rds_time_step(DeltaWeight delta = DeltaWeight(), double h = 1.0) {
    return 0.95 * std::min(diffusion_time_step_bound(delta, h),
                           morphology_time_step_bound(delta, h));
}

/// Full parameter set of the inpainting solver. `couple_parameters` fills
/// the scale and contrast entries from just (sigma, lambda).
struct RdsParams {
    double sigma = 1.0;    // pre-smoothing scale of the shock direction data
    double rho = 1.6;      // integration scale of the structure tensor
    double nu = 1.6;       // pre-smoothing scale inside the diffusion weight
    double lambda = 1.0;   // Charbonnier contrast parameter (grey levels per pixel)
    double epsilon = 0.15; // sigmoid sharpness (second-derivative units)
    DeltaWeight delta{};
    double tau = default_rds_time_step();
    GuidanceKind guidance = GuidanceKind::Arctan;
    ShockKind shock = ShockKind::Coherence;
    long max_iterations = 100000;
    double stop_tolerance = 1e-3;  // stop once no pixel moves by this much
    int tensor_lag = 1;            // recompute the direction field every m steps
    InitKind init = InitKind::KnownMean;
};

/// Outcome of an iterative solve. observed_min/max cover every iterate of
/// every pixel, starting from the initialised image; input_min/max describe
/// the initialised image itself.
struct SolverReport {
    long iterations_run = 0;
    double final_max_update = 0.0;
    double input_min = 0.0;
    double input_max = 0.0;
    double observed_min = 0.0;
    double observed_max = 0.0;
    double wall_seconds = 0.0;
};

/// Render a report as "key=value" lines (one per field).
std::string format_report(const SolverReport& report);

}  // namespace rds
