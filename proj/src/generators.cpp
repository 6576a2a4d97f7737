#include "rds/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rds {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Unbiased uniform draw from [0, n) via rejection sampling.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace

Mask gen_random_mask(int width, int height, double density, std::uint64_t seed) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("gen_random_mask: dimensions must be positive");
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("gen_random_mask: density must lie in (0, 1]");

    const std::size_t n = static_cast<std::size_t>(width) * height;
    const std::size_t k =
        std::min(n, static_cast<std::size_t>(std::llround(density * static_cast<double>(n))));

    std::vector<std::uint32_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0u);
    std::mt19937_64 rng(seed);
    Mask mask(width, height);
    // Partial Fisher-Yates: the first k entries become the sample.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(bounded(rng, n - i));
        std::swap(indices[i], indices[j]);
        mask.flags()[indices[i]] = 1;
    }
    return mask;
}

void add_dipole(MultiChannelImage& image, Mask& mask, const DipoleSpec& spec) {
    if (mask.width() != image.width() || mask.height() != image.height())
        throw std::invalid_argument("add_dipole: mask and image shapes differ");
    const double rad = (spec.angle_deg + 90.0) * kPi / 180.0;
    const double nx = std::cos(rad);
    const double ny = std::sin(rad);

    // Quantise the normal to the nearest of the 8 grid directions, then
    // take the pixels half a step to either side of the line point.
    constexpr double kOctant = 0.38268343236508977;  // sin(22.5 deg)
    const double qx = nx > kOctant ? 1.0 : (nx < -kOctant ? -1.0 : 0.0);
    const double qy = ny > kOctant ? 1.0 : (ny < -kOctant ? -1.0 : 0.0);

    const int lx = static_cast<int>(std::llround(spec.x - 0.5 * qx));
    const int ly = static_cast<int>(std::llround(spec.y - 0.5 * qy));
    const int hx = static_cast<int>(std::llround(spec.x + 0.5 * qx));
    const int hy = static_cast<int>(std::llround(spec.y + 0.5 * qy));
    if (lx == hx && ly == hy)
        throw std::invalid_argument("add_dipole: dipole pixels coincide");

    const auto inside = [&](int x, int y) {
        return x >= 0 && x < image.width() && y >= 0 && y < image.height();
    };
    if (!inside(lx, ly) || !inside(hx, hy))
        throw std::invalid_argument("add_dipole: dipole pixels fall outside the image");

    for (int c = 0; c < image.n_channels(); ++c) {
        image.channel(c).at(lx, ly) = spec.low;
        image.channel(c).at(hx, hy) = spec.high;
    }
    mask.set(lx, ly, true);
    mask.set(hx, hy, true);
}

std::pair<MultiChannelImage, Mask> gen_dipole(int width, int height, const DipoleSpec& spec) {
    MultiChannelImage image(width, height, 1, 0.5 * (spec.low + spec.high));
    Mask mask(width, height);
    add_dipole(image, mask, spec);
    return {std::move(image), std::move(mask)};
}

void fill_disk(ImageGrid& img, double cx, double cy, double radius, double value) {
    const double r2 = radius * radius;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= r2) img.at(x, y) = value;
        }
    }
}

void fill_triangle(ImageGrid& img, double x0, double y0, double x1, double y1, double x2,
                   double y2, double value) {
    const auto edge = [](double ax, double ay, double bx, double by, double px, double py) {
        return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    };
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double e0 = edge(x0, y0, x1, y1, x, y);
            const double e1 = edge(x1, y1, x2, y2, x, y);
            const double e2 = edge(x2, y2, x0, y0, x, y);
            const bool all_neg = e0 <= 0 && e1 <= 0 && e2 <= 0;
            const bool all_pos = e0 >= 0 && e1 >= 0 && e2 >= 0;
            if (all_neg || all_pos) img.at(x, y) = value;
        }
    }
}

void draw_segment(ImageGrid& img, double x0, double y0, double x1, double y1,
                  double half_width, double value) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const double len2 = dx * dx + dy * dy;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double t = len2 > 0.0 ? ((x - x0) * dx + (y - y0) * dy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double px = x0 + t * dx;
            const double py = y0 + t * dy;
            const double ddx = x - px;
            const double ddy = y - py;
            if (ddx * ddx + ddy * ddy <= half_width * half_width) img.at(x, y) = value;
        }
    }
}

ImageGrid make_smooth_field(int width, int height, std::uint64_t seed, int blobs,
                            double vmin, double vmax) {
    if (!(vmax >= vmin))
        throw std::invalid_argument("make_smooth_field: vmax must be >= vmin");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, width - 1.0);
    std::uniform_real_distribution<double> uy(0.0, height - 1.0);
    std::uniform_real_distribution<double> ur(0.05 * std::min(width, height),
                                              0.35 * std::min(width, height));
    std::uniform_real_distribution<double> ua(-1.0, 1.0);

    ImageGrid img(width, height, 0.0);
    for (int b = 0; b < blobs; ++b) {
        const double cx = ux(rng);
        const double cy = uy(rng);
        const double r = ur(rng);
        const double amp = ua(rng);
        const double inv = 1.0 / (2.0 * r * r);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                const double dx = x - cx;
                const double dy = y - cy;
                img.at(x, y) += amp * std::exp(-(dx * dx + dy * dy) * inv);
            }
    }

    const auto [lo_it, hi_it] = std::minmax_element(img.values().begin(), img.values().end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double span = hi > lo ? hi - lo : 1.0;
    for (double& v : img.values()) v = vmin + (v - lo) / span * (vmax - vmin);
    return img;
}

}  // namespace rds
