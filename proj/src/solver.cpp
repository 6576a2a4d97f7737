#include "rds/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rds {

double diffusion_time_step_bound(DeltaWeight delta, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("diffusion_time_step_bound: h must be positive");
    return h * h / (4.0 - 2.0 * delta.value);
}

std::string format_report(const SolverReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "iterations_run=" << report.iterations_run << "\n"
        << "final_max_update=" << report.final_max_update << "\n"
        << "input_min=" << report.input_min << "\n"
        << "input_max=" << report.input_max << "\n"
        << "observed_min=" << report.observed_min << "\n"
        << "observed_max=" << report.observed_max << "\n"
        << "wall_seconds=" << report.wall_seconds << "\n";
    return out.str();
}

namespace {

void validate_params(const RdsParams& p, double h) {
    if (!(std::isfinite(p.sigma) && p.sigma >= 0.0))
        throw std::invalid_argument("rds solver: sigma must be finite and >= 0");
    if (!(std::isfinite(p.rho) && p.rho >= 0.0))
        throw std::invalid_argument("rds solver: rho must be finite and >= 0");
    if (!(std::isfinite(p.nu) && p.nu >= 0.0))
        throw std::invalid_argument("rds solver: nu must be finite and >= 0");
    if (!(p.lambda > 0.0))
        throw std::invalid_argument("rds solver: lambda must be positive");
    if (p.guidance == GuidanceKind::Arctan && !(p.epsilon > 0.0))
        throw std::invalid_argument("rds solver: epsilon must be positive");
    if (!(p.tau > 0.0))
        throw std::invalid_argument("rds solver: tau must be positive");
    const double bound =
        std::min(diffusion_time_step_bound(p.delta, h), morphology_time_step_bound(p.delta, h));
    if (p.tau > bound)
        throw std::invalid_argument(
            "rds solver: tau exceeds the explicit-scheme stability bound");
    if (p.max_iterations < 0)
        throw std::invalid_argument("rds solver: max_iterations must be >= 0");
    if (!(p.stop_tolerance >= 0.0))
        throw std::invalid_argument("rds solver: stop_tolerance must be >= 0");
    if (p.tensor_lag < 1)
        throw std::invalid_argument("rds solver: tensor_lag must be >= 1");
}

void validate_geometry(const MultiChannelImage& f, const Mask& mask) {
    require_stencil_size(f.channel(0), "rds solver");
    if (mask.width() != f.width() || mask.height() != f.height())
        throw std::invalid_argument("rds solver: mask and image shapes differ");
}

struct Engine {
    int w, h, nc;
    double hsp;
    const Mask* mask;
    RdsParams p;

    double inv_lambda_sq, inv_epsilon;
    double lap_axial_w, lap_diag_w;  // Laplacian stencil weights
    double up_axial_c, up_diag_c;    // upwind magnitude coefficients
    double inv_8h, inv_h2, inv_4h2;

    GaussianKernel ksig, knu, krho;
    ConvolveScratch conv;
    TensorWorkspace tensor_ws;
    StructureField field;

    std::vector<ImageGrid> u, unext, f0, usig, unu;
    std::vector<std::vector<double>> gradsq;
    std::vector<double> g;
    std::vector<double> chan;
    std::vector<const ImageGrid*> usig_ptrs;

    long steps_done = 0;
    double observed_min = 0.0, observed_max = 0.0;

    Engine(const MultiChannelImage& f, const Mask& m, const RdsParams& params)
        : w(f.width()),
          h(f.height()),
          nc(f.n_channels()),
          hsp(f.spacing()),
          mask(&m),
          p(params) {
        validate_geometry(f, m);
        validate_params(p, hsp);

        inv_lambda_sq = 1.0 / (p.lambda * p.lambda);
        inv_epsilon = 1.0 / p.epsilon;
        lap_axial_w = (1.0 - p.delta.value) / (hsp * hsp);
        lap_diag_w = p.delta.value / (2.0 * hsp * hsp);
        up_axial_c = (1.0 - p.delta.value) / hsp;
        up_diag_c = p.delta.value / (std::sqrt(2.0) * hsp);
        inv_8h = 1.0 / (8.0 * hsp);
        inv_h2 = 1.0 / (hsp * hsp);
        inv_4h2 = 1.0 / (4.0 * hsp * hsp);

        ksig = make_gaussian_kernel(p.sigma);
        knu = make_gaussian_kernel(p.nu);
        krho = make_gaussian_kernel(p.rho);

        f0 = f.channels();
        u = f.channels();
        unext.assign(static_cast<std::size_t>(nc), ImageGrid(w, h, 0.0, hsp));
        usig.assign(static_cast<std::size_t>(nc), ImageGrid(w, h, 0.0, hsp));
        unu.assign(static_cast<std::size_t>(nc), ImageGrid(w, h, 0.0, hsp));
        gradsq.assign(static_cast<std::size_t>(nc),
                      std::vector<double>(static_cast<std::size_t>(w) * h, 0.0));
        g.assign(static_cast<std::size_t>(w) * h, 1.0);
        chan.resize(static_cast<std::size_t>(nc));
        for (int c = 0; c < nc; ++c) usig_ptrs.push_back(&usig[static_cast<std::size_t>(c)]);
    }

    void require_finite_known() const {
        for (int c = 0; c < nc; ++c) {
            const double* fc = f0[static_cast<std::size_t>(c)].data();
            const std::uint8_t* kn = mask->flags().data();
            const std::size_t n = static_cast<std::size_t>(w) * h;
            for (std::size_t i = 0; i < n; ++i)
                if (kn[i] && !std::isfinite(fc[i]))
                    throw std::invalid_argument("rds solver: known pixel values must be finite");
        }
    }

    void require_finite_all() const {
        for (int c = 0; c < nc; ++c)
            for (const double v : f0[static_cast<std::size_t>(c)].values())
                if (!std::isfinite(v))
                    throw std::invalid_argument("rds solver: image values must be finite");
    }

    // Fill unknown pixels: per-channel mean of the known values (computed
    // order-independently) or zero.
    void initialise() {
        const std::uint8_t* kn = mask->flags().data();
        const std::size_t n = static_cast<std::size_t>(w) * h;
        for (int c = 0; c < nc; ++c) {
            double fill = 0.0;
            if (p.init == InitKind::KnownMean) {
                std::vector<double> known_vals;
                known_vals.reserve(mask->known_count());
                const double* fc = f0[static_cast<std::size_t>(c)].data();
                for (std::size_t i = 0; i < n; ++i)
                    if (kn[i]) known_vals.push_back(fc[i]);
                fill = detail::ordered_mean(known_vals);
            }
            double* uc = u[static_cast<std::size_t>(c)].data();
            for (std::size_t i = 0; i < n; ++i)
                if (!kn[i]) uc[i] = fill;
        }
        observed_min = observed_max = u[0].data()[0];
        track_bounds();
    }

    void track_bounds() {
        for (int c = 0; c < nc; ++c) {
            for (const double v : u[static_cast<std::size_t>(c)].values()) {
                if (v < observed_min) observed_min = v;
                if (v > observed_max) observed_max = v;
            }
        }
    }

    // One explicit update on all channels; returns the largest absolute
    // change over unknown pixels.
    double step() {
        const bool coherence = (p.shock == ShockKind::Coherence);
        const std::size_t n = static_cast<std::size_t>(w) * h;

        for (int c = 0; c < nc; ++c) {
            gaussian_convolve_into(u[static_cast<std::size_t>(c)], ksig, Boundary::Mirror,
                                   usig[static_cast<std::size_t>(c)], conv);
            gaussian_convolve_into(u[static_cast<std::size_t>(c)], knu, Boundary::Mirror,
                                   unu[static_cast<std::size_t>(c)], conv);
        }

        if (coherence && steps_done % p.tensor_lag == 0)
            tensor_from_smoothed(usig_ptrs, krho, field, tensor_ws);

        for (int c = 0; c < nc; ++c) {
            double* gs = gradsq[static_cast<std::size_t>(c)].data();
            detail::for_each_neigh9(unu[static_cast<std::size_t>(c)],
                                    [&](int x, int y, const Neigh9& v) {
                                        const double gx = sobel_x_of(v, inv_8h);
                                        const double gy = sobel_y_of(v, inv_8h);
                                        gs[static_cast<std::size_t>(y) * w + x] = gx * gx + gy * gy;
                                    });
        }
        if (nc == 1) {
            const double* gs = gradsq[0].data();
            for (std::size_t i = 0; i < n; ++i) g[i] = charbonnier_core(gs[i], inv_lambda_sq);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                for (int c = 0; c < nc; ++c)
                    chan[static_cast<std::size_t>(c)] = gradsq[static_cast<std::size_t>(c)][i];
                g[i] = charbonnier_core(detail::ordered_mean(chan), inv_lambda_sq);
            }
        }

        const double* cf = field.c.data();
        const double* sf = field.s.data();
        const double tau = p.tau;
        const GuidanceKind kind = p.guidance;
        for (int c = 0; c < nc; ++c) {
            double* out = unext[static_cast<std::size_t>(c)].data();
            const double* gw = g.data();
            detail::for_each_neigh9_pair(
                u[static_cast<std::size_t>(c)], usig[static_cast<std::size_t>(c)],
                [&](std::size_t i, int, int, const Neigh9& a, const Neigh9& b) {
                    const double lap = delta_laplacian_of(a, lap_axial_w, lap_diag_w);
                    double dww;
                    if (coherence) {
                        dww = quadform_of(b, cf[i], sf[i], inv_h2, inv_4h2);
                    } else {
                        const double gx = sobel_x_of(b, inv_8h);
                        const double gy = sobel_y_of(b, inv_8h);
                        const double m2 = gx * gx + gy * gy;
                        if (m2 < 1e-24) {
                            dww = 0.0;
                        } else {
                            const double mag = std::sqrt(m2);
                            dww = quadform_of(b, gx / mag, gy / mag, inv_h2, inv_4h2);
                        }
                    }
                    const double sv = sigmoid_core(dww, inv_epsilon, kind);
                    double shock = 0.0;
                    if (sv > 0.0)
                        shock = sv * erosion_magnitude_of(a, up_axial_c, up_diag_c);
                    else if (sv < 0.0)
                        shock = sv * dilation_magnitude_of(a, up_axial_c, up_diag_c);
                    const double gi = gw[i];
                    out[i] = a.zz + tau * (gi * lap - (1.0 - gi) * shock);
                });
        }

        // Dirichlet reset, update tracking, swap.
        double max_update = 0.0;
        const std::uint8_t* kn = mask->flags().data();
        for (int c = 0; c < nc; ++c) {
            double* un = unext[static_cast<std::size_t>(c)].data();
            const double* uc = u[static_cast<std::size_t>(c)].data();
            const double* fc = f0[static_cast<std::size_t>(c)].data();
            double lo = observed_min, hi = observed_max;
            for (std::size_t i = 0; i < n; ++i) {
                if (kn[i]) {
                    un[i] = fc[i];
                } else {
                    const double d = std::fabs(un[i] - uc[i]);
                    if (d > max_update) max_update = d;
                }
                if (un[i] < lo) lo = un[i];
                if (un[i] > hi) hi = un[i];
            }
            observed_min = lo;
            observed_max = hi;
            std::swap(u[static_cast<std::size_t>(c)], unext[static_cast<std::size_t>(c)]);
        }
        ++steps_done;
        return max_update;
    }

    MultiChannelImage current() const { return MultiChannelImage(u); }
};

std::pair<MultiChannelImage, SolverReport> run_inpaint(const MultiChannelImage& f,
                                                       const Mask& mask,
                                                       const RdsParams& params) {
    const auto t0 = std::chrono::steady_clock::now();
    Engine engine(f, mask, params);
    if (mask.known_count() == 0)
        throw std::invalid_argument("rds solver: mask marks no known pixels");
    engine.require_finite_known();
    engine.initialise();

    SolverReport report;
    report.input_min = engine.observed_min;
    report.input_max = engine.observed_max;

    double last_update = 0.0;
    while (engine.steps_done < params.max_iterations) {
        last_update = engine.step();
        if (params.stop_tolerance > 0.0 && last_update < params.stop_tolerance) break;
    }

    report.iterations_run = engine.steps_done;
    report.final_max_update = last_update;
    report.observed_min = engine.observed_min;
    report.observed_max = engine.observed_max;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {engine.current(), report};
}

}  // namespace

MultiChannelImage rds_step(const MultiChannelImage& u, const Mask& mask,
                           const RdsParams& params) {
    Engine engine(u, mask, params);
    engine.require_finite_all();
    engine.step();
    return engine.current();
}

ImageGrid rds_step(const ImageGrid& u, const Mask& mask, const RdsParams& params) {
    MultiChannelImage wrapped(std::vector<ImageGrid>{u});
    return rds_step(wrapped, mask, params).channel(0);
}

std::pair<ImageGrid, SolverReport> inpaint(const ImageGrid& f, const Mask& mask,
                                           const RdsParams& params) {
    MultiChannelImage wrapped(std::vector<ImageGrid>{f});
    auto [result, report] = run_inpaint(wrapped, mask, params);
    return {result.channel(0), report};
}

std::pair<MultiChannelImage, SolverReport> inpaint_vector(const MultiChannelImage& f,
                                                          const Mask& mask,
                                                          const RdsParams& params) {
    return run_inpaint(f, mask, params);
}

}  // namespace rds
