#include "rds/structure.hpp"

#include <stdexcept>

namespace rds {

void StructureField::resize(int w, int h) {
    width = w;
    height = h;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    jxx.assign(n, 0.0);
    jxy.assign(n, 0.0);
    jyy.assign(n, 0.0);
    c.assign(n, 1.0);
    s.assign(n, 0.0);
}

void tensor_from_smoothed(const std::vector<const ImageGrid*>& smoothed,
                          const GaussianKernel& rho_kernel, StructureField& out,
                          TensorWorkspace& ws) {
    if (smoothed.empty())
        throw std::invalid_argument("tensor_from_smoothed: needs at least one channel");
    const ImageGrid& first = *smoothed.front();
    require_stencil_size(first, "tensor_from_smoothed");
    const int w = first.width();
    const int h = first.height();
    const int nc = static_cast<int>(smoothed.size());
    const double inv_8h = 1.0 / (8.0 * first.spacing());
    const std::size_t n = first.size();

    out.resize(w, h);
    if (static_cast<int>(ws.gx.size()) < nc) {
        ws.gx.resize(static_cast<std::size_t>(nc));
        ws.gy.resize(static_cast<std::size_t>(nc));
    }

    for (int ci = 0; ci < nc; ++ci) {
        const ImageGrid& src = *smoothed[static_cast<std::size_t>(ci)];
        if (!src.same_shape(first))
            throw std::invalid_argument("tensor_from_smoothed: channels must share shape");
        ImageGrid& gx = ws.gx[static_cast<std::size_t>(ci)];
        ImageGrid& gy = ws.gy[static_cast<std::size_t>(ci)];
        if (!gx.same_shape(src)) gx = ImageGrid(w, h, 0.0, src.spacing());
        if (!gy.same_shape(src)) gy = ImageGrid(w, h, 0.0, src.spacing());
        double* gxd = gx.data();
        double* gyd = gy.data();
        detail::for_each_neigh9(src, [&](int x, int y, const Neigh9& v) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gxd[i] = sobel_x_of(v, inv_8h);
            gyd[i] = sobel_y_of(v, inv_8h);
        });
    }

    if (!ws.pxx.same_shape(first)) {
        ws.pxx = ImageGrid(w, h, 0.0, first.spacing());
        ws.pxy = ImageGrid(w, h, 0.0, first.spacing());
        ws.pyy = ImageGrid(w, h, 0.0, first.spacing());
    }
    double* pxx = ws.pxx.data();
    double* pxy = ws.pxy.data();
    double* pyy = ws.pyy.data();
    if (nc == 1) {
        const double* gx = ws.gx[0].data();
        const double* gy = ws.gy[0].data();
        for (std::size_t i = 0; i < n; ++i) {
            pxx[i] = gx[i] * gx[i];
            pxy[i] = gx[i] * gy[i];
            pyy[i] = gy[i] * gy[i];
        }
    } else {
        ws.chan.resize(static_cast<std::size_t>(nc));
        for (std::size_t i = 0; i < n; ++i) {
            for (int ci = 0; ci < nc; ++ci) {
                const double gx = ws.gx[static_cast<std::size_t>(ci)].data()[i];
                ws.chan[static_cast<std::size_t>(ci)] = gx * gx;
            }
            pxx[i] = detail::ordered_mean(ws.chan);
            for (int ci = 0; ci < nc; ++ci) {
                const double gx = ws.gx[static_cast<std::size_t>(ci)].data()[i];
                const double gy = ws.gy[static_cast<std::size_t>(ci)].data()[i];
                ws.chan[static_cast<std::size_t>(ci)] = gx * gy;
            }
            pxy[i] = detail::ordered_mean(ws.chan);
            for (int ci = 0; ci < nc; ++ci) {
                const double gy = ws.gy[static_cast<std::size_t>(ci)].data()[i];
                ws.chan[static_cast<std::size_t>(ci)] = gy * gy;
            }
            pyy[i] = detail::ordered_mean(ws.chan);
        }
    }

    // Integration scale: smooth the averaged products. The convolution
    // treats values outside the grid as zero here, unlike image smoothing.
    gaussian_convolve_into(ws.pxx, rho_kernel, Boundary::Zero, ws.sxx, ws.conv);
    gaussian_convolve_into(ws.pxy, rho_kernel, Boundary::Zero, ws.sxy, ws.conv);
    gaussian_convolve_into(ws.pyy, rho_kernel, Boundary::Zero, ws.syy, ws.conv);

    std::copy(ws.sxx.values().begin(), ws.sxx.values().end(), out.jxx.begin());
    std::copy(ws.sxy.values().begin(), ws.sxy.values().end(), out.jxy.begin());
    std::copy(ws.syy.values().begin(), ws.syy.values().end(), out.jyy.begin());

    for (std::size_t i = 0; i < n; ++i) {
        const EigenVector2 v = dominant_eigenvector(out.jxx[i], out.jxy[i], out.jyy[i]);
        out.c[i] = v.c;
        out.s[i] = v.s;
    }
}

StructureField structure_tensor(const ImageGrid& image, double sigma, double rho) {
    require_stencil_size(image, "structure_tensor");
    const ImageGrid smoothed = gaussian_convolve(image, sigma, Boundary::Mirror);
    StructureField out;
    TensorWorkspace ws;
    tensor_from_smoothed({&smoothed}, make_gaussian_kernel(rho), out, ws);
    return out;
}

StructureField joint_structure_tensor(const MultiChannelImage& image, double sigma, double rho) {
    if (image.n_channels() < 1)
        throw std::invalid_argument("joint_structure_tensor: empty image");
    std::vector<ImageGrid> smoothed;
    smoothed.reserve(static_cast<std::size_t>(image.n_channels()));
    for (int c = 0; c < image.n_channels(); ++c)
        smoothed.push_back(gaussian_convolve(image.channel(c), sigma, Boundary::Mirror));
    std::vector<const ImageGrid*> ptrs;
    for (const ImageGrid& ch : smoothed) ptrs.push_back(&ch);
    StructureField out;
    TensorWorkspace ws;
    tensor_from_smoothed(ptrs, make_gaussian_kernel(rho), out, ws);
    return out;
}

ImageGrid directional_second_derivative(const ImageGrid& image, const StructureField& field,
                                        double sigma) {
    require_stencil_size(image, "directional_second_derivative");
    if (field.width != image.width() || field.height != image.height())
        throw std::invalid_argument(
            "directional_second_derivative: field and image shapes differ");
    const ImageGrid smoothed = gaussian_convolve(image, sigma, Boundary::Mirror);
    const double h = image.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_4h2 = 1.0 / (4.0 * h * h);
    ImageGrid out(image.width(), image.height(), 0.0, h);
    const int w = image.width();
    detail::for_each_neigh9(smoothed, [&](int x, int y, const Neigh9& v) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        out.at(x, y) = quadform_of(v, field.c[i], field.s[i], inv_h2, inv_4h2);
    });
    return out;
}

}  // namespace rds
