#include "rds/morphology.hpp"

#include <stdexcept>

namespace rds {

UpwindGradient upwind_gradient(const ImageGrid& image, MorphMode mode, DeltaWeight delta) {
    require_stencil_size(image, "upwind_gradient");
    const double h = image.spacing();
    const double axial_c = (1.0 - delta.value) / h;
    const double diag_c = delta.value / (std::sqrt(2.0) * h);

    UpwindGradient out{ImageGrid(image.width(), image.height(), 0.0, h), mode};
    if (mode == MorphMode::Dilation) {
        detail::for_each_neigh9(image, [&](int x, int y, const Neigh9& v) {
            out.magnitude.at(x, y) = dilation_magnitude_of(v, axial_c, diag_c);
        });
    } else {
        detail::for_each_neigh9(image, [&](int x, int y, const Neigh9& v) {
            out.magnitude.at(x, y) = erosion_magnitude_of(v, axial_c, diag_c);
        });
    }
    return out;
}

ImageGrid upwind_dilation_magnitude(const ImageGrid& image, DeltaWeight delta) {
    return upwind_gradient(image, MorphMode::Dilation, delta).magnitude;
}

ImageGrid upwind_erosion_magnitude(const ImageGrid& image, DeltaWeight delta) {
    return upwind_gradient(image, MorphMode::Erosion, delta).magnitude;
}

double morphology_time_step_bound(DeltaWeight delta, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("morphology_time_step_bound: h must be positive");
    return h / (std::sqrt(2.0) * (1.0 - delta.value) + delta.value);
}

}  // namespace rds
