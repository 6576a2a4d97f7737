#include "rds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rds {

Metrics compute_metrics(const MultiChannelImage& result, const MultiChannelImage& reference) {
    if (result.width() != reference.width() || result.height() != reference.height() ||
        result.n_channels() != reference.n_channels())
        throw std::invalid_argument("compute_metrics: shapes differ");

    const std::size_t n =
        static_cast<std::size_t>(result.width()) * result.height() * result.n_channels();

    double ref_min = reference.channel(0).data()[0];
    double ref_max = ref_min;
    double sq_sum = 0.0;
    for (int c = 0; c < result.n_channels(); ++c) {
        const double* a = result.channel(c).data();
        const double* b = reference.channel(c).data();
        const std::size_t m = result.channel(c).size();
        for (std::size_t i = 0; i < m; ++i) {
            const double d = a[i] - b[i];
            sq_sum += d * d;
            ref_min = std::min(ref_min, b[i]);
            ref_max = std::max(ref_max, b[i]);
        }
    }

    Metrics metrics;
    metrics.mse = sq_sum / static_cast<double>(n);
    metrics.psnr = metrics.mse > 0.0 ? 10.0 * std::log10(255.0 * 255.0 / metrics.mse)
                                     : std::numeric_limits<double>::infinity();

    const double threshold = 0.5 * (ref_min + ref_max);
    std::size_t agree = 0;
    for (int c = 0; c < result.n_channels(); ++c) {
        const double* a = result.channel(c).data();
        const double* b = reference.channel(c).data();
        const std::size_t m = result.channel(c).size();
        for (std::size_t i = 0; i < m; ++i)
            if ((a[i] > threshold) == (b[i] > threshold)) ++agree;
    }
    metrics.binary_accuracy = static_cast<double>(agree) / static_cast<double>(n);
    return metrics;
}

Metrics compute_metrics(const ImageGrid& result, const ImageGrid& reference) {
    return compute_metrics(MultiChannelImage(std::vector<ImageGrid>{result}),
                           MultiChannelImage(std::vector<ImageGrid>{reference}));
}

ImageGrid threshold_image(const ImageGrid& image, double threshold) {
    ImageGrid out(image.width(), image.height(), 0.0, image.spacing());
    for (std::size_t i = 0; i < image.size(); ++i)
        out.data()[i] = image.data()[i] > threshold ? 1.0 : 0.0;
    return out;
}

int count_components4(const ImageGrid& binary) {
    const int w = binary.width();
    const int h = binary.height();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    int components = 0;

    const auto fg = [&](int x, int y) { return binary.at(x, y) != 0.0; };
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
            if (!fg(x0, y0) || seen[i0]) continue;
            ++components;
            seen[i0] = 1;
            stack.push_back({x0, y0});
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx[k];
                    const int ny = y + dy[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                    if (!seen[ni] && fg(nx, ny)) {
                        seen[ni] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return components;
}

double marching_squares_perimeter(const ImageGrid& binary) {
    const int w = binary.width();
    const int h = binary.height();
    const auto fg = [&](int x, int y) {
        if (x < 0 || x >= w || y < 0 || y >= h) return false;
        return binary.at(x, y) != 0.0;
    };

    constexpr double kDiag = 0.70710678118654752440;  // sqrt(2)/2
    double perimeter = 0.0;
    // One cell per 2x2 block of (virtually padded) samples.
    for (int y = -1; y < h; ++y) {
        for (int x = -1; x < w; ++x) {
            const int code = (fg(x, y) ? 1 : 0) | (fg(x + 1, y) ? 2 : 0) |
                             (fg(x + 1, y + 1) ? 4 : 0) | (fg(x, y + 1) ? 8 : 0);
            switch (code) {
                case 0:
                case 15:
                    break;
                case 1:
                case 2:
                case 4:
                case 8:
                case 7:
                case 11:
                case 13:
                case 14:
                    perimeter += kDiag;  // one corner cut
                    break;
                case 3:
                case 6:
                case 9:
                case 12:
                    perimeter += 1.0;  // straight crossing
                    break;
                case 5:
                case 10:
                    perimeter += 2.0 * kDiag;  // saddle: two corner cuts
                    break;
                default:
                    break;
            }
        }
    }
    return perimeter;
}

double isoperimetric_ratio(const ImageGrid& binary) {
    constexpr double kPi = 3.14159265358979323846;
    double area = 0.0;
    for (const double v : binary.values())
        if (v != 0.0) area += 1.0;
    const double p = marching_squares_perimeter(binary);
    if (p <= 0.0) return 0.0;
    return 4.0 * kPi * area / (p * p);
}

}  // namespace rds
