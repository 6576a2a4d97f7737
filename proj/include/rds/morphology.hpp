#pragma once

#include <algorithm>
#include <cmath>

#include "rds/stencils.hpp"

namespace rds {

enum class MorphMode { Dilation, Erosion };

/// Upwind gradient-magnitude field together with the mode it was built for.
struct UpwindGradient {
    ImageGrid magnitude;
    MorphMode mode;
};

/// axial_c = (1-delta)/h, diag_c = delta/(sqrt(2) h).
inline double dilation_magnitude_of(const Neigh9& v, double axial_c, double diag_c) {
    const double ax = std::max(std::max(v.pz - v.zz, v.mz - v.zz), 0.0);
    const double ay = std::max(std::max(v.zp - v.zz, v.zm - v.zz), 0.0);
    const double d1 = std::max(std::max(v.pp - v.zz, v.mm - v.zz), 0.0);
    const double d2 = std::max(std::max(v.mp - v.zz, v.pm - v.zz), 0.0);
    return axial_c * std::sqrt(ax * ax + ay * ay) + diag_c * std::sqrt(d1 * d1 + d2 * d2);
}

inline double erosion_magnitude_of(const Neigh9& v, double axial_c, double diag_c) {
    const double ax = std::max(std::max(v.zz - v.pz, v.zz - v.mz), 0.0);
    const double ay = std::max(std::max(v.zz - v.zp, v.zz - v.zm), 0.0);
    const double d1 = std::max(std::max(v.zz - v.pp, v.zz - v.mm), 0.0);
    const double d2 = std::max(std::max(v.zz - v.mp, v.zz - v.pm), 0.0);
    return axial_c * std::sqrt(ax * ax + ay * ay) + diag_c * std::sqrt(d1 * d1 + d2 * d2);
}

/// delta-weighted Rouy-Tourin upwind approximations of |grad u| for
/// dilation (uphill differences) and erosion (downhill differences).
/// Both fields are non-negative everywhere.
ImageGrid upwind_dilation_magnitude(const ImageGrid& image, DeltaWeight delta = DeltaWeight());
ImageGrid upwind_erosion_magnitude(const ImageGrid& image, DeltaWeight delta = DeltaWeight());
UpwindGradient upwind_gradient(const ImageGrid& image, MorphMode mode,
                               DeltaWeight delta = DeltaWeight());

/// Largest time step for which one explicit dilation/erosion step
/// satisfies the discrete maximum-minimum principle:
/// h / (sqrt(2) (1 - delta) + delta).
double morphology_time_step_bound(DeltaWeight delta = DeltaWeight(), double h = 1.0);

}  // namespace rds
