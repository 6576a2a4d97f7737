#pragma once

#include <utility>

#include "rds/guidance.hpp"
#include "rds/params.hpp"
#include "rds/structure.hpp"

namespace rds {

/// One explicit update of the inpainting evolution
///   du/dt = g * Laplacian(u) - (1 - g) * F(d_ww u_sigma) * |grad u|
/// on every channel, with the channel-coupled diffusion weight g and (for
/// the coherence shock kind) the joint structure-tensor direction field.
/// Known pixels are restored to their input values afterwards.
/// Throws std::invalid_argument if params.tau exceeds the joint stability
/// bound min(diffusion_time_step_bound, morphology_time_step_bound).
MultiChannelImage rds_step(const MultiChannelImage& u, const Mask& mask,
                           const RdsParams& params);
ImageGrid rds_step(const ImageGrid& u, const Mask& mask, const RdsParams& params);

/// Inpaint the unknown pixels of f (those not set in mask). Unknown pixels
/// are initialised per params.init, then the explicit scheme runs until
/// the largest per-pixel update drops below params.stop_tolerance or
/// params.max_iterations is reached. Known pixels act as Dirichlet data:
/// they are restored after every step.
std::pair<ImageGrid, SolverReport> inpaint(const ImageGrid& f, const Mask& mask,
                                           const RdsParams& params);

/// Multi-channel variant: channels are coupled through a joint diffusion
/// weight and a joint structure tensor, and evolve with shared parameters.
std::pair<MultiChannelImage, SolverReport> inpaint_vector(const MultiChannelImage& f,
                                                          const Mask& mask,
                                                          const RdsParams& params);

}  // namespace rds
