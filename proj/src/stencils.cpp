#include "rds/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace rds {

DeltaWeight::DeltaWeight(double v) : value(v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("DeltaWeight: value must lie in [0, 1]");
}

std::vector<double> GaussianKernel::full_weights() const {
    std::vector<double> full(static_cast<std::size_t>(2 * radius + 1));
    for (int t = -radius; t <= radius; ++t)
        full[static_cast<std::size_t>(t + radius)] = weights[static_cast<std::size_t>(std::abs(t))];
    return full;
}

GaussianKernel make_gaussian_kernel(double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0)
        throw std::invalid_argument("make_gaussian_kernel: sigma must be finite and >= 0");
    GaussianKernel kernel;
    kernel.sigma = sigma;
    if (sigma == 0.0) {
        kernel.radius = 0;
        kernel.weights = {1.0};
        return kernel;
    }
    kernel.radius = static_cast<int>(std::ceil(5.0 * sigma));
    kernel.weights.resize(static_cast<std::size_t>(kernel.radius) + 1);
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    for (int t = 0; t <= kernel.radius; ++t)
        kernel.weights[static_cast<std::size_t>(t)] =
            std::exp(-static_cast<double>(t) * t * inv_two_sigma2);
    double norm = kernel.weights[0];
    for (int t = 1; t <= kernel.radius; ++t)
        norm += 2.0 * kernel.weights[static_cast<std::size_t>(t)];
    for (double& wt : kernel.weights) wt /= norm;
    return kernel;
}

namespace detail {

void convolve_rows(const double* src, int w, int h, const GaussianKernel& kernel,
                   Boundary boundary, double* dst, std::vector<double>& pad) {
    const int r = kernel.radius;
    const double* wts = kernel.weights.data();
    pad.resize(static_cast<std::size_t>(w) + 2 * r);
    for (int y = 0; y < h; ++y) {
        const double* in = src + static_cast<std::size_t>(y) * w;
        double* out = dst + static_cast<std::size_t>(y) * w;

        std::memcpy(pad.data() + r, in, static_cast<std::size_t>(w) * sizeof(double));
        if (boundary == Boundary::Mirror) {
            for (int t = 1; t <= r; ++t) {
                pad[static_cast<std::size_t>(r - t)] = in[mirror_index(-t, w)];
                pad[static_cast<std::size_t>(r + w - 1 + t)] = in[mirror_index(w - 1 + t, w)];
            }
        } else {
            for (int t = 1; t <= r; ++t) {
                pad[static_cast<std::size_t>(r - t)] = 0.0;
                pad[static_cast<std::size_t>(r + w - 1 + t)] = 0.0;
            }
        }

        const double* centre = pad.data() + r;
        const double w0 = wts[0];
        for (int i = 0; i < w; ++i) out[i] = w0 * centre[i];
        for (int t = 1; t <= r; ++t) {
            const double wt = wts[t];
            const double* left = centre - t;
            const double* right = centre + t;
            for (int i = 0; i < w; ++i) out[i] += wt * (left[i] + right[i]);
        }
    }
}

void transpose_field(const double* src, int w, int h, double* dst) {
    constexpr int kBlock = 32;
    for (int y0 = 0; y0 < h; y0 += kBlock) {
        const int y1 = std::min(y0 + kBlock, h);
        for (int x0 = 0; x0 < w; x0 += kBlock) {
            const int x1 = std::min(x0 + kBlock, w);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    dst[static_cast<std::size_t>(x) * h + y] =
                        src[static_cast<std::size_t>(y) * w + x];
        }
    }
}

}  // namespace detail

void gaussian_convolve_into(const ImageGrid& src, const GaussianKernel& kernel,
                            Boundary boundary, ImageGrid& dst, ConvolveScratch& scratch) {
    if (!dst.same_shape(src)) dst = ImageGrid(src.width(), src.height(), 0.0, src.spacing());
    if (kernel.radius == 0) {
        std::copy(src.values().begin(), src.values().end(), dst.values().begin());
        return;
    }

    const int w = src.width();
    const int h = src.height();
    const std::size_t n = src.size();
    scratch.a.resize(n);
    scratch.t.resize(n);
    double* a = scratch.a.data();
    double* t = scratch.t.data();

    // Path A: x-pass, then y-pass (run as a row pass on the transpose so
    // both axes execute the identical code).
    detail::convolve_rows(src.data(), w, h, kernel, boundary, dst.data(), scratch.pad);
    detail::transpose_field(dst.data(), w, h, t);
    detail::convolve_rows(t, h, w, kernel, boundary, a, scratch.pad);
    detail::transpose_field(a, h, w, dst.data());

    // Path B: y-pass, then x-pass.
    detail::transpose_field(src.data(), w, h, t);
    detail::convolve_rows(t, h, w, kernel, boundary, a, scratch.pad);
    detail::transpose_field(a, h, w, t);
    detail::convolve_rows(t, w, h, kernel, boundary, a, scratch.pad);

    double* out = dst.data();
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (out[i] + a[i]);
}

ImageGrid gaussian_convolve(const ImageGrid& image, double sigma, Boundary boundary) {
    const GaussianKernel kernel = make_gaussian_kernel(sigma);
    ImageGrid dst(image.width(), image.height(), 0.0, image.spacing());
    ConvolveScratch scratch;
    gaussian_convolve_into(image, kernel, boundary, dst, scratch);
    return dst;
}

ImageGrid sobel_x(const ImageGrid& image) {
    require_stencil_size(image, "sobel_x");
    ImageGrid out(image.width(), image.height(), 0.0, image.spacing());
    const double inv_8h = 1.0 / (8.0 * image.spacing());
    detail::for_each_neigh9(image, [&](int x, int y, const Neigh9& v) {
        out.at(x, y) = sobel_x_of(v, inv_8h);
    });
    return out;
}

ImageGrid sobel_y(const ImageGrid& image) {
    require_stencil_size(image, "sobel_y");
    ImageGrid out(image.width(), image.height(), 0.0, image.spacing());
    const double inv_8h = 1.0 / (8.0 * image.spacing());
    detail::for_each_neigh9(image, [&](int x, int y, const Neigh9& v) {
        out.at(x, y) = sobel_y_of(v, inv_8h);
    });
    return out;
}

SecondDerivatives second_derivatives(const ImageGrid& image) {
    require_stencil_size(image, "second_derivatives");
    const double h = image.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_4h2 = 1.0 / (4.0 * h * h);
    SecondDerivatives d{ImageGrid(image.width(), image.height(), 0.0, h),
                        ImageGrid(image.width(), image.height(), 0.0, h),
                        ImageGrid(image.width(), image.height(), 0.0, h)};
    detail::for_each_neigh9(image, [&](int x, int y, const Neigh9& v) {
        d.uxx.at(x, y) = dxx_of(v, inv_h2);
        d.uyy.at(x, y) = dyy_of(v, inv_h2);
        d.uxy.at(x, y) = dxy_of(v, inv_4h2);
    });
    return d;
}

ImageGrid delta_laplacian(const ImageGrid& image, DeltaWeight delta) {
    require_stencil_size(image, "delta_laplacian");
    const double h = image.spacing();
    const double axial_w = (1.0 - delta.value) / (h * h);
    const double diag_w = delta.value / (2.0 * h * h);
    ImageGrid out(image.width(), image.height(), 0.0, h);
    detail::for_each_neigh9(image, [&](int x, int y, const Neigh9& v) {
        out.at(x, y) = delta_laplacian_of(v, axial_w, diag_w);
    });
    return out;
}

}  // namespace rds
