#pragma once

#include <cstdint>
#include <utility>

#include "rds/image.hpp"

namespace rds {

/// Mark round(density * w * h) distinct pixels as known, chosen uniformly
/// without replacement. Deterministic for a given (w, h, density, seed).
Mask gen_random_mask(int width, int height, double density, std::uint64_t seed);

/// A two-pixel seed straddling an intended edge: the line passes through
/// (x, y) at angle_deg (degrees, counter-clockwise from the +x axis), and
/// the two known pixels sit on either side of it with values low / high.
/// `high` lies on the side the rotated normal (angle_deg + 90deg) points to.
struct DipoleSpec {
    double x = 0.0;
    double y = 0.0;
    double angle_deg = 0.0;
    double low = 0.0;
    double high = 255.0;
};

/// Stamp one dipole into an existing image + mask pair.
void add_dipole(MultiChannelImage& image, Mask& mask, const DipoleSpec& spec);

/// Fresh grey canvas (filled with (low+high)/2 at unknown pixels) carrying
/// a single dipole.
std::pair<MultiChannelImage, Mask> gen_dipole(int width, int height, const DipoleSpec& spec);

// Rasterisation helpers for synthetic test scenes (pixel centres at
// integer coordinates).
void fill_disk(ImageGrid& img, double cx, double cy, double radius, double value);
void fill_triangle(ImageGrid& img, double x0, double y0, double x1, double y1, double x2,
                   double y2, double value);
void draw_segment(ImageGrid& img, double x0, double y0, double x1, double y1,
                  double half_width, double value);

/// Smooth deterministic pseudo-natural field: a sum of random Gaussian
/// blobs, affinely rescaled to [vmin, vmax].
ImageGrid make_smooth_field(int width, int height, std::uint64_t seed, int blobs,
                            double vmin, double vmax);

}  // namespace rds
