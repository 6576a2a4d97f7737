#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rds/stencils.hpp"

namespace rds {

struct EigenVector2 {
    double c;  // x component
    double s;  // y component
};

/// Unit eigenvector of the symmetric matrix [[jxx, jxy], [jxy, jyy]] for
/// its larger eigenvalue. When the eigenvalue gap is below 1e-14 times the
/// matrix magnitude the direction is ill-defined and (1, 0) is returned.
/// The sign is normalised so the first non-zero component is positive.
///
/// The candidate formulas and the branch condition are arranged so that
/// results commute bit-for-bit with rotating or flipping the input matrix
/// (up to the overall sign, which quadratic forms ignore).
inline EigenVector2 dominant_eigenvector(double jxx, double jxy, double jyy) {
    const double diff = jxx - jyy;
    const double cross = 2.0 * jxy;
    const double gap = std::sqrt(diff * diff + cross * cross);
    const double scale = std::fabs(jxx) + std::fabs(jyy);
    if (gap <= 1e-14 * scale || gap == 0.0) return {1.0, 0.0};

    double c, s;
    if (diff >= 0.0) {
        c = gap + diff;
        s = cross;
    } else {
        c = cross;
        s = gap - diff;
    }
    const double norm = std::sqrt(c * c + s * s);
    c /= norm;
    s /= norm;
    if (c < 0.0 || (c == 0.0 && s < 0.0)) {
        c = -c;
        s = -s;
    }
    return {c, s};
}

/// Smoothed structure tensor entries with the dominant eigenvector at
/// every pixel, stored as flat row-major arrays.
struct StructureField {
    int width = 0;
    int height = 0;
    std::vector<double> jxx, jxy, jyy;
    std::vector<double> c, s;

    void resize(int w, int h);
};

/// Scratch space for tensor construction (reused across solver steps).
struct TensorWorkspace {
    std::vector<ImageGrid> gx, gy;
    ImageGrid pxx, pxy, pyy;
    ImageGrid sxx, sxy, syy;
    ConvolveScratch conv;
    std::vector<double> chan;
};

/// Build the rho-integrated structure tensor and its eigen directions from
/// channels that have already been pre-smoothed at scale sigma. Gradients
/// use the Sobel stencils; the per-channel tensor products are averaged
/// over channels and then smoothed at scale rho with zero-value boundaries.
void tensor_from_smoothed(const std::vector<const ImageGrid*>& smoothed,
                          const GaussianKernel& rho_kernel, StructureField& out,
                          TensorWorkspace& ws);

/// Structure tensor of a single channel: smooth at sigma (mirror
/// boundaries), differentiate, form products, integrate at rho.
StructureField structure_tensor(const ImageGrid& image, double sigma, double rho);

/// Channel-coupled tensor: the per-channel tensors are averaged before the
/// eigen-analysis. With a single channel this equals structure_tensor.
StructureField joint_structure_tensor(const MultiChannelImage& image, double sigma, double rho);

/// Second derivative of (image smoothed at sigma) along the field's
/// dominant direction: c^2 uxx + 2 c s uxy + s^2 uyy.
ImageGrid directional_second_derivative(const ImageGrid& image, const StructureField& field,
                                        double sigma);

/// Quadratic form of the 3x3 second-difference stencils along (c, s).
/// Grouped so results are unchanged bit-for-bit by (c, s) -> (-c, -s) and
/// commute with grid rotations and flips.
inline double quadform_of(const Neigh9& v, double c, double s, double inv_h2, double inv_4h2) {
    const double vxx = dxx_of(v, inv_h2);
    const double vyy = dyy_of(v, inv_h2);
    const double vxy = dxy_of(v, inv_4h2);
    return ((c * c) * vxx + (s * s) * vyy) + (2.0 * (c * s)) * vxy;
}

namespace detail {

/// Mean that ignores the order of its inputs: sorts, then sums offsets
/// from the minimum. Exact for all-equal inputs, so averaging identical
/// channels reproduces the single-channel value bit-for-bit.
inline double ordered_mean(std::vector<double>& values) {
    if (values.size() == 1) return values[0];
    std::sort(values.begin(), values.end());
    const double lo = values.front();
    double acc = 0.0;
    for (const double v : values) acc += v - lo;
    return lo + acc / static_cast<double>(values.size());
}

}  // namespace detail
}  // namespace rds
