// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit code equals
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rds/experiments.hpp"
#include "rds/generators.hpp"
#include "rds/guidance.hpp"
#include "rds/metrics.hpp"
#include "rds/morphology.hpp"
#include "rds/shock_filter.hpp"
#include "rds/solver.hpp"
#include "rds/stencils.hpp"

using namespace rds;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

double find_stat(const ExperimentResult& r, const std::string& key) {
    for (const auto& [k, v] : r.stats)
        if (k == key) return std::stod(v);
    return std::numeric_limits<double>::quiet_NaN();
}

ImageGrid random_grid(std::mt19937_64& rng, int w, int h, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ImageGrid img(w, h);
    for (double& v : img.values()) v = dist(rng);
    return img;
}

Mask random_mask_local(std::mt19937_64& rng, int w, int h, double density) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Mask mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (dist(rng) < density) mask.set(x, y, true);
    return mask;
}

// ---- grid transform helpers (self-contained copy for the gate) ----------

ImageGrid g_transpose(const ImageGrid& in) {
    ImageGrid out(in.height(), in.width(), 0.0, in.spacing());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) out.at(y, x) = in.at(x, y);
    return out;
}
ImageGrid g_flip_x(const ImageGrid& in) {
    ImageGrid out(in.width(), in.height(), 0.0, in.spacing());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) out.at(in.width() - 1 - x, y) = in.at(x, y);
    return out;
}
ImageGrid g_flip_y(const ImageGrid& in) {
    ImageGrid out(in.width(), in.height(), 0.0, in.spacing());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) out.at(x, in.height() - 1 - y) = in.at(x, y);
    return out;
}
Mask m_transpose(const Mask& in) {
    Mask out(in.height(), in.width());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) out.set(y, x, in.known(x, y));
    return out;
}
Mask m_flip_x(const Mask& in) {
    Mask out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) out.set(in.width() - 1 - x, y, in.known(x, y));
    return out;
}
Mask m_flip_y(const Mask& in) {
    Mask out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x) out.set(x, in.height() - 1 - y, in.known(x, y));
    return out;
}

bool bitwise_equal(const ImageGrid& a, const ImageGrid& b) {
    if (a.width() != b.width() || a.height() != b.height()) return false;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        if (a.values()[i] != b.values()[i]) return false;
    return true;
}

// --------------------------------------------------------------- 1 ------

void criterion_1_max_min_fuzz() {
    const double t0 = now_seconds();
    std::mt19937_64 rng(9001);
    const int cases = 200;
    const long iterations = 500;
    int violations = 0;
    double worst_excess = 0.0;

    for (int k = 0; k < cases; ++k) {
        std::uniform_real_distribution<double> lo_d(-50.0, 100.0);
        std::uniform_real_distribution<double> span_d(1.0, 300.0);
        const double lo = lo_d(rng);
        const double hi = lo + span_d(rng);
        const ImageGrid f = random_grid(rng, 64, 64, lo, hi);
        Mask mask = random_mask_local(rng, 64, 64, 0.02 + 0.28 * (k % 7) / 6.0);
        mask.set(32, 32, true);

        RdsParams p;
        p.sigma = 0.5 + 1.5 * ((k % 5) / 4.0);
        p.lambda = (k % 3 == 0) ? 0.5 : ((k % 3 == 1) ? 1.0 : 4.0);
        p.rho = 1.6 * p.sigma;
        p.nu = 1.6 * p.sigma;
        p.epsilon = 0.15 * p.lambda;
        p.guidance = (k % 2 == 0) ? GuidanceKind::Arctan : GuidanceKind::Sign;
        p.shock = (k % 4 < 2) ? ShockKind::Coherence : ShockKind::AlvarezMazorra;
        if (k % 6 == 5) p.delta = DeltaWeight(k % 2 == 0 ? 0.0 : 1.0);
        p.tau = 0.95 * std::min(diffusion_time_step_bound(p.delta),
                                morphology_time_step_bound(p.delta));
        p.tensor_lag = (k % 8 == 7) ? 3 : 1;
        p.max_iterations = iterations;
        p.stop_tolerance = 0.0;

        auto [out, rep] = inpaint(f, mask, p);
        const double excess = std::max(rep.input_min - rep.observed_min,
                                       rep.observed_max - rep.input_max);
        worst_excess = std::max(worst_excess, excess);
        if (excess > 1e-9) ++violations;
    }

    const double dt = now_seconds() - t0;
    const bool pass = violations == 0 && dt < 120.0;
    report(1, "max-min principle over 200 randomised solves x 500 steps", pass,
           "violations=" + std::to_string(violations) + ", worst_excess=" + fmt(worst_excess) +
               ", seconds=" + fmt(dt));
}

// --------------------------------------------------------------- 2 ------

void criterion_2_stability_bounds() {
    const DeltaWeight d;
    const double tau_d = diffusion_time_step_bound(d, 1.0);
    const double tau_m = morphology_time_step_bound(d, 1.0);
    const double tau_d_formula = 1.0 / (6.0 - 2.0 * std::sqrt(2.0));
    const double tau_m_formula = 1.0 / (3.0 * std::sqrt(2.0) - 3.0);

    const bool pass = std::fabs(tau_d - tau_d_formula) < 1e-12 &&
                      std::fabs(tau_m - tau_m_formula) < 1e-12 &&
                      std::fabs(tau_d - 0.3153) < 1e-4 && std::fabs(tau_m - 0.8047) < 1e-4 &&
                      std::fabs(diffusion_time_step_bound(DeltaWeight(0.0)) - 0.25) < 1e-15 &&
                      std::fabs(diffusion_time_step_bound(DeltaWeight(1.0)) - 0.5) < 1e-15 &&
                      std::fabs(morphology_time_step_bound(DeltaWeight(1.0)) - 1.0) < 1e-15;
    report(2, "explicit-scheme stability bounds at the default stencil weight", pass,
           "tau_diff=" + fmt(tau_d) + " (h^2/(4-2delta)), tau_morph=" + fmt(tau_m) +
               " (h/(sqrt2(1-delta)+delta))");
}

// --------------------------------------------------------------- 3 ------

void criterion_3_halfplane(const ExperimentOptions& options) {
    const double t0 = now_seconds();
    const ExperimentResult r = run_experiment("dipole-halfplane", options);
    const double dt = now_seconds() - t0;
    const double acc = find_stat(r, "binary_accuracy");
    const bool pass = r.passed && acc >= 0.99 && dt < 60.0;
    report(3, "half-plane edge rebuilt from a two-pixel seed", pass,
           "binary_accuracy=" + fmt(acc) + ", seconds=" + fmt(dt));
}

// --------------------------------------------------------------- 4 ------

void criterion_4_disk(const ExperimentOptions& options) {
    const ExperimentResult r = run_experiment("dipole-disk", options);
    const double iso = find_stat(r, "isoperimetric_ratio");
    const double comp = find_stat(r, "components");
    const double acc = find_stat(r, "binary_accuracy");
    const bool pass = r.passed && comp == 1.0 && iso > 0.85 && acc >= 0.95;
    report(4, "disk rebuilt from four tangential edge seeds", pass,
           "components=" + fmt(comp) + ", isoperimetric=" + fmt(iso) +
               ", binary_accuracy=" + fmt(acc));
}

// --------------------------------------------------------------- 5 ------

void criterion_5_elongation(const ExperimentOptions& options) {
    const ExperimentResult r = run_experiment("line-elongation", options);
    const double a_in = find_stat(r, "area_input");
    const double a_coh = find_stat(r, "area_coherence");
    const double a_grad = find_stat(r, "area_smoothed_gradient");
    const bool spans = find_stat(r, "touches_left") == 1.0 && find_stat(r, "touches_right") == 1.0;
    const bool pass = r.passed && a_coh > a_in && spans && a_grad < a_in;
    report(5, "coherence flow elongates a line segment, gradient flow shrinks it", pass,
           "area " + fmt(a_in) + " -> " + fmt(a_coh) + " (coherence, spans=" +
               (spans ? "yes" : "no") + ") vs -> " + fmt(a_grad) + " (gradient)");
}

// --------------------------------------------------------------- 6 ------

void criterion_6_degenerate_diffusion() {
    std::mt19937_64 rng(606);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const ImageGrid u = random_grid(rng, 64, 64, 0.0, 255.0);
        const Mask mask = random_mask_local(rng, 64, 64, 0.2);
        RdsParams p;
        p.lambda = std::numeric_limits<double>::infinity();

        const ImageGrid fused = rds_step(u, mask, p);
        const ImageGrid lap = delta_laplacian(u, p.delta);
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                const double expect =
                    mask.known(x, y) ? u.at(x, y) : u.at(x, y) + p.tau * lap.at(x, y);
                worst = std::max(worst, std::fabs(fused.at(x, y) - expect));
            }
        }
    }
    report(6, "infinite contrast scale reduces the step to pure diffusion", worst <= 1e-6,
           "max deviation from the Laplacian step = " + fmt(worst));
}

// --------------------------------------------------------------- 7 ------

void criterion_7_stencil_exactness() {
    double worst = 0.0;
    for (const double h : {1.0, 0.5}) {
        ImageGrid ramp(12, 11, 0.0, h);
        ImageGrid quad(12, 11, 0.0, h);
        for (int y = 0; y < 11; ++y) {
            for (int x = 0; x < 12; ++x) {
                const double px = x * h, py = y * h;
                ramp.at(x, y) = 4.0 + 2.5 * px - 1.75 * py;
                quad.at(x, y) = px * px + 3.0 * px * py + 2.0 * py * py;
            }
        }
        const ImageGrid gx = sobel_x(ramp);
        const ImageGrid gy = sobel_y(ramp);
        const SecondDerivatives dd = second_derivatives(quad);
        for (int y = 1; y < 10; ++y) {
            for (int x = 1; x < 11; ++x) {
                worst = std::max(worst, std::fabs(gx.at(x, y) - 2.5));
                worst = std::max(worst, std::fabs(gy.at(x, y) + 1.75));
                worst = std::max(worst, std::fabs(dd.uxx.at(x, y) - 2.0));
                worst = std::max(worst, std::fabs(dd.uyy.at(x, y) - 4.0));
                worst = std::max(worst, std::fabs(dd.uxy.at(x, y) - 3.0));
            }
        }
        for (const double dv : {0.0, DeltaWeight::default_value(), 1.0}) {
            const ImageGrid lap = delta_laplacian(quad, DeltaWeight(dv));
            for (int y = 1; y < 10; ++y)
                for (int x = 1; x < 11; ++x)
                    worst = std::max(worst, std::fabs(lap.at(x, y) - 6.0));
        }
    }
    report(7, "derivative stencils are exact on ramps and quadratics", worst <= 1e-8,
           "max interior error = " + fmt(worst) + " over h in {1, 0.5}");
}

// --------------------------------------------------------------- 8 ------

void criterion_8_bitwise_symmetry() {
    std::mt19937_64 rng(808);
    const ImageGrid img = random_grid(rng, 24, 24, 0.0, 255.0);
    Mask mask = random_mask_local(rng, 24, 24, 0.2);
    mask.set(12, 12, true);

    RdsParams p;
    p.max_iterations = 60;
    p.stop_tolerance = 0.0;

    struct T {
        const char* name;
        ImageGrid (*gi)(const ImageGrid&);
        Mask (*gm)(const Mask&);
    };
    auto rot90_i = +[](const ImageGrid& g) { return g_flip_y(g_transpose(g)); };
    auto rot90_m = +[](const Mask& m) { return m_flip_y(m_transpose(m)); };
    auto rot180_i = +[](const ImageGrid& g) { return g_flip_x(g_flip_y(g)); };
    auto rot180_m = +[](const Mask& m) { return m_flip_x(m_flip_y(m)); };
    auto rot270_i = +[](const ImageGrid& g) { return g_flip_x(g_transpose(g)); };
    auto rot270_m = +[](const Mask& m) { return m_flip_x(m_transpose(m)); };
    auto anti_i = +[](const ImageGrid& g) { return g_flip_x(g_flip_y(g_transpose(g))); };
    auto anti_m = +[](const Mask& m) { return m_flip_x(m_flip_y(m_transpose(m))); };
    const std::vector<T> transforms = {
        {"transpose", +[](const ImageGrid& g) { return g_transpose(g); },
         +[](const Mask& m) { return m_transpose(m); }},
        {"flip_x", +[](const ImageGrid& g) { return g_flip_x(g); },
         +[](const Mask& m) { return m_flip_x(m); }},
        {"flip_y", +[](const ImageGrid& g) { return g_flip_y(g); },
         +[](const Mask& m) { return m_flip_y(m); }},
        {"rot90", rot90_i, rot90_m},
        {"rot180", rot180_i, rot180_m},
        {"rot270", rot270_i, rot270_m},
        {"anti_transpose", anti_i, anti_m},
    };

    std::string bad;
    auto [base, r0] = inpaint(img, mask, p);
    for (const T& t : transforms) {
        auto [lhs, r1] = inpaint(t.gi(img), t.gm(mask), p);
        if (!bitwise_equal(lhs, t.gi(base))) bad += std::string(" inpaint:") + t.name;
    }

    ShockConfig sc;
    sc.op = ShockOperator::Coherence;
    sc.iterations = 10;
    auto [sbase, sr0] = run_shock_filter(img, sc);
    for (const T& t : transforms) {
        auto [lhs, sr1] = run_shock_filter(t.gi(img), sc);
        if (!bitwise_equal(lhs, t.gi(sbase))) bad += std::string(" shock:") + t.name;
    }

    // channel coupling must preserve the scalar path and channel order
    auto [vec3, rv] =
        inpaint_vector(MultiChannelImage(std::vector<ImageGrid>{img, img, img}), mask, p);
    for (int c = 0; c < 3; ++c)
        if (!bitwise_equal(vec3.channel(c), base)) bad += " identical-channels";

    const ImageGrid img2 = random_grid(rng, 24, 24, 0.0, 255.0);
    const ImageGrid img3 = random_grid(rng, 24, 24, 0.0, 255.0);
    auto [abc, ra] =
        inpaint_vector(MultiChannelImage(std::vector<ImageGrid>{img, img2, img3}), mask, p);
    auto [cba, rc] =
        inpaint_vector(MultiChannelImage(std::vector<ImageGrid>{img3, img2, img}), mask, p);
    if (!bitwise_equal(abc.channel(0), cba.channel(2)) ||
        !bitwise_equal(abc.channel(1), cba.channel(1)) ||
        !bitwise_equal(abc.channel(2), cba.channel(0)))
        bad += " channel-permutation";

    // morphological duality
    ImageGrid neg = img;
    for (double& v : neg.values()) v = -v;
    ImageGrid ero = upwind_erosion_magnitude(img);
    ImageGrid dil_neg = upwind_dilation_magnitude(neg);
    if (!bitwise_equal(ero, dil_neg)) bad += " erosion-dilation-duality";

    report(8, "bit-for-bit dihedral symmetry of solver and shock runs", bad.empty(),
           bad.empty() ? "all 7 transforms, identical channels, permutation, duality exact"
                       : ("mismatch:" + bad));
}

// --------------------------------------------------------------- 9 ------

void criterion_9_grey_shift() {
    std::mt19937_64 rng(909);
    const ImageGrid img = random_grid(rng, 48, 48, 0.0, 200.0);
    Mask mask = random_mask_local(rng, 48, 48, 0.15);
    mask.set(24, 24, true);

    RdsParams p;
    p.max_iterations = 150;
    p.stop_tolerance = 0.0;

    ImageGrid shifted = img;
    for (double& v : shifted.values()) v += 17.5;

    auto [base, r1] = inpaint(img, mask, p);
    auto [moved, r2] = inpaint(shifted, mask, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < base.values().size(); ++i)
        worst = std::max(worst, std::fabs(moved.values()[i] - 17.5 - base.values()[i]));
    report(9, "grey-level shift invariance after 150 steps", worst <= 1e-9,
           "max deviation = " + fmt(worst));
}

// -------------------------------------------------------------- 10 ------

void criterion_10_sparse_solve(const ExperimentOptions& options) {
    const double t0 = now_seconds();
    const ExperimentResult r = run_experiment("sparse-grey", options);
    const double dt = now_seconds() - t0;
    const double psnr = find_stat(r, "psnr");
    const double iters = find_stat(r, "iterations");
    report(10, "256x256 solve from 20% known pixels completes", r.passed,
           "iterations=" + fmt(iters) + ", psnr=" + fmt(psnr) + ", seconds=" + fmt(dt) +
               " (runtime reported, not gated)");
}

}  // namespace

int main() {
    const ExperimentOptions options{
        (std::filesystem::temp_directory_path() / "rds_acceptance").string(), 1};

    criterion_1_max_min_fuzz();
    criterion_2_stability_bounds();
    criterion_3_halfplane(options);
    criterion_4_disk(options);
    criterion_5_elongation(options);
    criterion_6_degenerate_diffusion();
    criterion_7_stencil_exactness();
    criterion_8_bitwise_symmetry();
    criterion_9_grey_shift();
    criterion_10_sparse_solve(options);

    if (failures == 0) {
        std::printf("acceptance: all 10 criteria satisfied\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    }
    return failures;
}
