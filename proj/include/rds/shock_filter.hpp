#pragma once

#include <utility>

#include "rds/guidance.hpp"
#include "rds/params.hpp"
#include "rds/structure.hpp"

namespace rds {

/// Edge detector steering the shock filter du/dt = -F(L u) |grad u|.
enum class ShockOperator {
    Laplacian,          // L = delta-weighted Laplacian of u
    GradientDirection,  // L = second derivative of u along its gradient
    AlvarezMazorra,     // L = same, but on the sigma-smoothed image
    Coherence           // L = second derivative of u_sigma along the
                        //     dominant structure-tensor direction
};

struct ShockConfig {
    ShockOperator op = ShockOperator::Coherence;
    double sigma = 1.0;    // pre-smoothing scale (AlvarezMazorra, Coherence)
    double rho = 1.6;      // tensor integration scale (Coherence)
    double epsilon = 0.15; // sigmoid sharpness (Arctan guidance)
    GuidanceKind guidance = GuidanceKind::Arctan;
    DeltaWeight delta{};
    double tau = 0.0;             // time step; 0 selects 0.95 * the stability bound
    long iterations = 100;        // iteration cap
    double stop_tolerance = 0.0;  // stop early below this max update; 0 disables
};

/// One explicit shock step: erode where F(L u) > 0, dilate where it is
/// negative, using the delta-weighted upwind gradient magnitudes.
/// Throws std::invalid_argument if the (explicit or auto-selected) time
/// step exceeds the morphological stability bound.
ImageGrid shock_step(const ImageGrid& u, const ShockConfig& config);

/// Iterate shock_step with progress tracking. Stops after
/// config.iterations steps, or earlier once the largest per-pixel update
/// falls below config.stop_tolerance (when positive).
std::pair<ImageGrid, SolverReport> run_shock_filter(const ImageGrid& u,
                                                    const ShockConfig& config);

}  // namespace rds
