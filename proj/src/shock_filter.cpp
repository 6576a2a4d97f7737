#include "rds/shock_filter.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rds {
namespace {

struct ShockEngine {
    int w, h;
    double hsp;
    ShockConfig cfg;
    double tau;
    double inv_epsilon;
    double up_axial_c, up_diag_c;
    double lap_axial_w, lap_diag_w;
    double inv_8h, inv_h2, inv_4h2;

    GaussianKernel ksig, krho;
    ConvolveScratch conv;
    TensorWorkspace tensor_ws;
    StructureField field;

    ImageGrid u, unext, usig;
    long steps_done = 0;
    double observed_min = 0.0, observed_max = 0.0;

    ShockEngine(const ImageGrid& input, const ShockConfig& config)
        : w(input.width()), h(input.height()), hsp(input.spacing()), cfg(config), u(input) {
        require_stencil_size(input, "shock filter");
        if (!(std::isfinite(cfg.sigma) && cfg.sigma >= 0.0))
            throw std::invalid_argument("shock filter: sigma must be finite and >= 0");
        if (!(std::isfinite(cfg.rho) && cfg.rho >= 0.0))
            throw std::invalid_argument("shock filter: rho must be finite and >= 0");
        if (cfg.guidance == GuidanceKind::Arctan && !(cfg.epsilon > 0.0))
            throw std::invalid_argument("shock filter: epsilon must be positive");
        if (cfg.iterations < 0)
            throw std::invalid_argument("shock filter: iterations must be >= 0");
        if (!(cfg.stop_tolerance >= 0.0))
            throw std::invalid_argument("shock filter: stop_tolerance must be >= 0");

        const double bound = morphology_time_step_bound(cfg.delta, hsp);
        tau = cfg.tau == 0.0 ? 0.95 * bound : cfg.tau;
        if (!(tau > 0.0))
            throw std::invalid_argument("shock filter: tau must be positive");
        if (tau > bound)
            throw std::invalid_argument(
                "shock filter: tau exceeds the morphological stability bound");

        for (const double v : u.values())
            if (!std::isfinite(v))
                throw std::invalid_argument("shock filter: image values must be finite");

        inv_epsilon = 1.0 / cfg.epsilon;
        up_axial_c = (1.0 - cfg.delta.value) / hsp;
        up_diag_c = cfg.delta.value / (std::sqrt(2.0) * hsp);
        lap_axial_w = (1.0 - cfg.delta.value) / (hsp * hsp);
        lap_diag_w = cfg.delta.value / (2.0 * hsp * hsp);
        inv_8h = 1.0 / (8.0 * hsp);
        inv_h2 = 1.0 / (hsp * hsp);
        inv_4h2 = 1.0 / (4.0 * hsp * hsp);

        ksig = make_gaussian_kernel(cfg.sigma);
        krho = make_gaussian_kernel(cfg.rho);
        unext = ImageGrid(w, h, 0.0, hsp);
        usig = ImageGrid(w, h, 0.0, hsp);

        observed_min = observed_max = u.data()[0];
        track_bounds(u);
    }

    void track_bounds(const ImageGrid& img) {
        for (const double v : img.values()) {
            if (v < observed_min) observed_min = v;
            if (v > observed_max) observed_max = v;
        }
    }

    double step() {
        const bool needs_smooth =
            cfg.op == ShockOperator::AlvarezMazorra || cfg.op == ShockOperator::Coherence;
        if (needs_smooth) gaussian_convolve_into(u, ksig, Boundary::Mirror, usig, conv);
        if (cfg.op == ShockOperator::Coherence) {
            std::vector<const ImageGrid*> ptr{&usig};
            tensor_from_smoothed(ptr, krho, field, tensor_ws);
        }

        const ImageGrid& deriv_src = needs_smooth ? usig : u;
        const double* cf = field.c.data();
        const double* sf = field.s.data();
        double* out = unext.data();
        const ShockOperator op = cfg.op;
        const GuidanceKind kind = cfg.guidance;

        detail::for_each_neigh9_pair(
            u, deriv_src, [&](std::size_t i, int, int, const Neigh9& a, const Neigh9& b) {
                double edge;
                switch (op) {
                    case ShockOperator::Laplacian:
                        edge = delta_laplacian_of(a, lap_axial_w, lap_diag_w);
                        break;
                    case ShockOperator::Coherence:
                        edge = quadform_of(b, cf[i], sf[i], inv_h2, inv_4h2);
                        break;
                    default: {  // gradient direction, plain or pre-smoothed
                        const double gx = sobel_x_of(b, inv_8h);
                        const double gy = sobel_y_of(b, inv_8h);
                        const double m2 = gx * gx + gy * gy;
                        if (m2 < 1e-24) {
                            edge = 0.0;
                        } else {
                            const double mag = std::sqrt(m2);
                            edge = quadform_of(b, gx / mag, gy / mag, inv_h2, inv_4h2);
                        }
                        break;
                    }
                }
                const double sv = sigmoid_core(edge, inv_epsilon, kind);
                double shock = 0.0;
                if (sv > 0.0)
                    shock = sv * erosion_magnitude_of(a, up_axial_c, up_diag_c);
                else if (sv < 0.0)
                    shock = sv * dilation_magnitude_of(a, up_axial_c, up_diag_c);
                out[i] = a.zz - tau * shock;
            });

        double max_update = 0.0;
        const double* uc = u.data();
        const std::size_t n = u.size();
        double lo = observed_min, hi = observed_max;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::fabs(out[i] - uc[i]);
            if (d > max_update) max_update = d;
            if (out[i] < lo) lo = out[i];
            if (out[i] > hi) hi = out[i];
        }
        observed_min = lo;
        observed_max = hi;
        std::swap(u, unext);
        ++steps_done;
        return max_update;
    }
};

}  // namespace

ImageGrid shock_step(const ImageGrid& u, const ShockConfig& config) {
    ShockEngine engine(u, config);
    engine.step();
    return engine.u;
}

std::pair<ImageGrid, SolverReport> run_shock_filter(const ImageGrid& u,
                                                    const ShockConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    ShockEngine engine(u, config);

    SolverReport report;
    report.input_min = engine.observed_min;
    report.input_max = engine.observed_max;

    double last_update = 0.0;
    while (engine.steps_done < config.iterations) {
        last_update = engine.step();
        if (config.stop_tolerance > 0.0 && last_update < config.stop_tolerance) break;
    }

    report.iterations_run = engine.steps_done;
    report.final_max_update = last_update;
    report.observed_min = engine.observed_min;
    report.observed_max = engine.observed_max;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {engine.u, report};
}

}  // namespace rds
