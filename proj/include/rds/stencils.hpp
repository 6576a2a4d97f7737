#pragma once

#include <cmath>
#include <vector>

#include "rds/image.hpp"

namespace rds {

/// Weight of the diagonal neighbours in the 3x3 stencil family, in [0, 1].
/// 0 gives the classic axial discretisations, 1 purely diagonal ones; the
/// default sqrt(2) - 1 balances the axial and diagonal propagation speeds
/// of the upwind schemes, which minimises their directional bias.
struct DeltaWeight {
    DeltaWeight() : value(default_value()) {}
    explicit DeltaWeight(double v);

    static double default_value() { return std::sqrt(2.0) - 1.0; }

    double value;
};

/// Sampled Gaussian, truncated at radius ceil(5 sigma) and renormalised so
/// the discrete weights sum to one. Only the non-negative offsets are
/// stored; weights[t] applies to offsets -t and +t alike.
struct GaussianKernel {
    double sigma = 0.0;
    int radius = 0;
    std::vector<double> weights;  // size radius + 1, weights[0] is the centre

    std::vector<double> full_weights() const;  // symmetric, size 2*radius + 1
};

GaussianKernel make_gaussian_kernel(double sigma);

enum class Boundary { Mirror, Zero };

/// Scratch buffers for repeated convolutions; reusing one instance across
/// calls avoids per-call allocation in solver loops.
struct ConvolveScratch {
    std::vector<double> pad;
    std::vector<double> a;
    std::vector<double> t;
};

/// Separable Gaussian convolution. The two separable orders (x then y,
/// y then x) are both evaluated and averaged, which makes the result
/// bit-for-bit equivariant under 90-degree rotations and axis flips.
/// sigma = 0 returns the input unchanged.
ImageGrid gaussian_convolve(const ImageGrid& image, double sigma,
                            Boundary boundary = Boundary::Mirror);
void gaussian_convolve_into(const ImageGrid& src, const GaussianKernel& kernel,
                            Boundary boundary, ImageGrid& dst, ConvolveScratch& scratch);

/// 3x3 Sobel derivative approximations with weights 1/(8h).
ImageGrid sobel_x(const ImageGrid& image);
ImageGrid sobel_y(const ImageGrid& image);

struct SecondDerivatives {
    ImageGrid uxx;
    ImageGrid uyy;
    ImageGrid uxy;
};

/// Central second differences and the 4-point cross derivative.
SecondDerivatives second_derivatives(const ImageGrid& image);

/// delta-weighted 3x3 Laplacian: (1-delta) times the axial five-point
/// stencil plus delta/2 times its diagonal counterpart.
ImageGrid delta_laplacian(const ImageGrid& image, DeltaWeight delta = DeltaWeight());

// ------------------------------------------------------------------------
// Per-pixel stencil cores. These are shared by the field operations above
// and by the fused solver loops, so every caller evaluates the exact same
// floating-point expression. The operand groupings are chosen so that the
// results commute bit-for-bit with grid rotations and flips (paired
// neighbours only ever meet inside a commutative add).

/// 3x3 neighbourhood values; first letter is the x offset (m/z/p =
/// -1/0/+1), second letter the y offset.
struct Neigh9 {
    double mm, zm, pm;
    double mz, zz, pz;
    double mp, zp, pp;
};

inline double sobel_x_of(const Neigh9& v, double inv_8h) {
    return (2.0 * (v.pz - v.mz) + ((v.pm - v.mm) + (v.pp - v.mp))) * inv_8h;
}

inline double sobel_y_of(const Neigh9& v, double inv_8h) {
    return (2.0 * (v.zp - v.zm) + ((v.mp - v.mm) + (v.pp - v.pm))) * inv_8h;
}

inline double dxx_of(const Neigh9& v, double inv_h2) {
    return ((v.mz + v.pz) - 2.0 * v.zz) * inv_h2;
}

inline double dyy_of(const Neigh9& v, double inv_h2) {
    return ((v.zm + v.zp) - 2.0 * v.zz) * inv_h2;
}

inline double dxy_of(const Neigh9& v, double inv_4h2) {
    return ((v.pp + v.mm) - (v.mp + v.pm)) * inv_4h2;
}

/// axial_w = (1-delta)/h^2, diag_w = delta/(2 h^2).
inline double delta_laplacian_of(const Neigh9& v, double axial_w, double diag_w) {
    const double axial = ((v.mz + v.pz) + (v.zm + v.zp)) - 4.0 * v.zz;
    const double diag = ((v.mm + v.pp) + (v.mp + v.pm)) - 4.0 * v.zz;
    return axial_w * axial + diag_w * diag;
}

namespace detail {

/// Calls f(x, y, v) for every pixel with its mirrored 3x3 neighbourhood.
template <class F>
void for_each_neigh9(const ImageGrid& img, F&& f) {
    const int w = img.width();
    const int h = img.height();
    for (int y = 0; y < h; ++y) {
        const double* rm = img.row(mirror_index(y - 1, h));
        const double* rz = img.row(y);
        const double* rp = img.row(mirror_index(y + 1, h));
        {
            const int xm = mirror_index(-1, w);
            const Neigh9 v{rm[xm], rm[0], rm[1], rz[xm], rz[0], rz[1], rp[xm], rp[0], rp[1]};
            f(0, y, v);
        }
        for (int x = 1; x < w - 1; ++x) {
            const Neigh9 v{rm[x - 1], rm[x], rm[x + 1], rz[x - 1], rz[x],
                           rz[x + 1], rp[x - 1], rp[x], rp[x + 1]};
            f(x, y, v);
        }
        {
            const int x = w - 1;
            const int xp = mirror_index(w, w);
            const Neigh9 v{rm[x - 1], rm[x], rm[xp], rz[x - 1], rz[x],
                           rz[xp], rp[x - 1], rp[x], rp[xp]};
            f(x, y, v);
        }
    }
}

/// Like for_each_neigh9, but walks two equally shaped fields in lockstep
/// and also hands the flat row-major index to f(i, x, y, va, vb).
template <class F>
void for_each_neigh9_pair(const ImageGrid& A, const ImageGrid& B, F&& f) {
    const int w = A.width();
    const int h = A.height();
    std::size_t i = 0;
    for (int y = 0; y < h; ++y) {
        const int ym = mirror_index(y - 1, h);
        const int yp = mirror_index(y + 1, h);
        const double* am = A.row(ym);
        const double* az = A.row(y);
        const double* ap = A.row(yp);
        const double* bm = B.row(ym);
        const double* bz = B.row(y);
        const double* bp = B.row(yp);
        {
            const int xm = mirror_index(-1, w);
            const Neigh9 va{am[xm], am[0], am[1], az[xm], az[0], az[1], ap[xm], ap[0], ap[1]};
            const Neigh9 vb{bm[xm], bm[0], bm[1], bz[xm], bz[0], bz[1], bp[xm], bp[0], bp[1]};
            f(i++, 0, y, va, vb);
        }
        for (int x = 1; x < w - 1; ++x) {
            const Neigh9 va{am[x - 1], am[x], am[x + 1], az[x - 1], az[x],
                            az[x + 1], ap[x - 1], ap[x], ap[x + 1]};
            const Neigh9 vb{bm[x - 1], bm[x], bm[x + 1], bz[x - 1], bz[x],
                            bz[x + 1], bp[x - 1], bp[x], bp[x + 1]};
            f(i++, x, y, va, vb);
        }
        {
            const int x = w - 1;
            const int xp = mirror_index(w, w);
            const Neigh9 va{am[x - 1], am[x], am[xp], az[x - 1], az[x],
                            az[xp], ap[x - 1], ap[x], ap[xp]};
            const Neigh9 vb{bm[x - 1], bm[x], bm[xp], bz[x - 1], bz[x],
                            bz[xp], bp[x - 1], bp[x], bp[xp]};
            f(i++, x, y, va, vb);
        }
    }
}

void convolve_rows(const double* src, int w, int h, const GaussianKernel& kernel,
                   Boundary boundary, double* dst, std::vector<double>& pad);
void transpose_field(const double* src, int w, int h, double* dst);

}  // namespace detail
}  // namespace rds
