// Command-line front end: inpainting, shock filtering, synthetic inputs,
// metrics, and the bundled experiment suite.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rds/experiments.hpp"
#include "rds/generators.hpp"
#include "rds/guidance.hpp"
#include "rds/image_io.hpp"
#include "rds/metrics.hpp"
#include "rds/shock_filter.hpp"
#include "rds/solver.hpp"
#include "rds/structure.hpp"

namespace {

// Exit codes: 0 success, 1 a requested check failed, 2 usage or I/O error.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
}

void print_summary(const rds::SolverReport& report) {
    std::cout << "iterations=" << report.iterations_run
              << " final_max_update=" << report.final_max_update
              << " wall_seconds=" << report.wall_seconds << "\n";
}

const std::map<std::string, rds::GuidanceKind> kGuidanceNames = {
    {"arctan", rds::GuidanceKind::Arctan},
    {"sign", rds::GuidanceKind::Sign},
};

const std::map<std::string, rds::ShockKind> kShockNames = {
    {"coherence", rds::ShockKind::Coherence},
    {"smoothed-gradient", rds::ShockKind::AlvarezMazorra},
};

const std::map<std::string, rds::InitKind> kInitNames = {
    {"mean", rds::InitKind::KnownMean},
    {"zero", rds::InitKind::Zero},
};

const std::map<std::string, rds::ShockOperator> kOperatorNames = {
    {"laplacian", rds::ShockOperator::Laplacian},
    {"gradient", rds::ShockOperator::GradientDirection},
    {"smoothed-gradient", rds::ShockOperator::AlvarezMazorra},
    {"coherence", rds::ShockOperator::Coherence},
};

struct InpaintArgs {
    std::string image_path, mask_path, output_path, report_path, eigen_prefix;
    double sigma = 1.0, lambda = 1.0;
    double rho = 0.0, nu = 0.0, epsilon = 0.0, delta = 0.0, tau = 0.0;
    long max_iter = 0;
    double tol = -1.0;
    long lag = 0;
    rds::GuidanceKind guidance = rds::GuidanceKind::Arctan;
    rds::ShockKind shock = rds::ShockKind::Coherence;
    rds::InitKind init = rds::InitKind::KnownMean;
};

void add_inpaint(CLI::App& app) {
    auto args = std::make_shared<InpaintArgs>();
    CLI::App* sub = app.add_subcommand(
        "inpaint", "Reconstruct unknown pixels from a sparse image and a mask");
    sub->add_option("--image", args->image_path, "Input image (pgm/ppm/png)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--mask", args->mask_path, "Mask image; bright pixels are known")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--output", args->output_path, "Where to write the result")->required();
    sub->add_option("--sigma", args->sigma, "Pre-smoothing scale (pixels)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--lambda", args->lambda, "Contrast scale for the diffusion weight")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--rho", args->rho, "Orientation-smoothing scale (default 1.6*sigma)");
    sub->add_option("--nu", args->nu, "Weight pre-smoothing scale (default 1.6*sigma)");
    sub->add_option("--epsilon", args->epsilon, "Sigmoid sharpness (default 0.15*lambda)");
    sub->add_option("--delta", args->delta, "Diagonal stencil weight in [0,1]");
    sub->add_option("--tau", args->tau, "Explicit time-step size");
    sub->add_option("--guidance", args->guidance, "Sigmoid flavour")
        ->transform(CLI::CheckedTransformer(kGuidanceNames, CLI::ignore_case));
    sub->add_option("--shock", args->shock, "Shock-direction estimator")
        ->transform(CLI::CheckedTransformer(kShockNames, CLI::ignore_case));
    sub->add_option("--max-iter", args->max_iter, "Iteration cap");
    sub->add_option("--tol", args->tol, "Stop when the largest update falls below this");
    sub->add_option("--lag", args->lag, "Recompute the orientation field every N steps");
    sub->add_option("--init", args->init, "Unknown-pixel initialisation")
        ->transform(CLI::CheckedTransformer(kInitNames, CLI::ignore_case));
    sub->add_option("--report", args->report_path, "Write a key=value run report here");
    sub->add_option("--dump-eigen", args->eigen_prefix,
                    "Write <prefix>_c.pfm / <prefix>_s.pfm orientation fields of the result");

    sub->callback([args, sub]() {
        rds::RdsParams params = rds::couple_parameters(args->sigma, args->lambda);
        if (sub->count("--rho")) params.rho = args->rho;
        if (sub->count("--nu")) params.nu = args->nu;
        if (sub->count("--epsilon")) params.epsilon = args->epsilon;
        if (sub->count("--delta")) params.delta = rds::DeltaWeight(args->delta);
        if (sub->count("--tau")) params.tau = args->tau;
        if (sub->count("--max-iter")) params.max_iterations = args->max_iter;
        if (sub->count("--tol")) params.stop_tolerance = args->tol;
        if (sub->count("--lag")) params.tensor_lag = static_cast<int>(args->lag);
        params.guidance = args->guidance;
        params.shock = args->shock;
        params.init = args->init;

        const rds::MultiChannelImage image = rds::load_image(args->image_path);
        const rds::Mask mask = rds::load_mask(args->mask_path);
        auto [result, report] = rds::inpaint_vector(image, mask, params);

        rds::save_image(result, args->output_path);
        print_summary(report);
        if (!args->report_path.empty())
            write_text(args->report_path, rds::format_report(report));
        if (!args->eigen_prefix.empty()) {
            const rds::StructureField field =
                rds::joint_structure_tensor(result, params.sigma, params.rho);
            rds::ImageGrid c(result.width(), result.height());
            rds::ImageGrid s(result.width(), result.height());
            for (std::size_t i = 0; i < field.c.size(); ++i) {
                c.values()[i] = field.c[i];
                s.values()[i] = field.s[i];
            }
            rds::write_pfm(c, args->eigen_prefix + "_c.pfm");
            rds::write_pfm(s, args->eigen_prefix + "_s.pfm");
        }
    });
}

struct ShockArgs {
    std::string image_path, output_path, report_path;
    rds::ShockConfig config;
    double delta = 0.0;
};

void add_shockfilter(CLI::App& app) {
    auto args = std::make_shared<ShockArgs>();
    CLI::App* sub =
        app.add_subcommand("shockfilter", "Sharpen an image with an upwind shock filter");
    sub->add_option("--image", args->image_path, "Input image (single channel)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--output", args->output_path, "Where to write the result")->required();
    sub->add_option("--operator", args->config.op, "Edge detector steering the filter")
        ->transform(CLI::CheckedTransformer(kOperatorNames, CLI::ignore_case));
    sub->add_option("--sigma", args->config.sigma, "Pre-smoothing scale")
        ->capture_default_str();
    sub->add_option("--rho", args->config.rho, "Orientation-smoothing scale")
        ->capture_default_str();
    sub->add_option("--epsilon", args->config.epsilon, "Sigmoid sharpness")
        ->capture_default_str();
    sub->add_option("--guidance", args->config.guidance, "Sigmoid flavour")
        ->transform(CLI::CheckedTransformer(kGuidanceNames, CLI::ignore_case));
    sub->add_option("--delta", args->delta, "Diagonal stencil weight in [0,1]");
    sub->add_option("--tau", args->config.tau, "Time-step size (0 picks a stable default)");
    sub->add_option("--iterations", args->config.iterations, "Number of steps")
        ->capture_default_str();
    sub->add_option("--tol", args->config.stop_tolerance, "Early-stop update threshold");
    sub->add_option("--report", args->report_path, "Write a key=value run report here");

    sub->callback([args, sub]() {
        if (sub->count("--delta")) args->config.delta = rds::DeltaWeight(args->delta);
        const rds::MultiChannelImage image = rds::load_image(args->image_path);
        if (image.n_channels() != 1)
            throw std::runtime_error("shockfilter expects a single-channel image");
        auto [result, report] = rds::run_shock_filter(image.channel(0), args->config);
        rds::save_image(result, args->output_path);
        print_summary(report);
        if (!args->report_path.empty())
            write_text(args->report_path, rds::format_report(report));
    });
}

void add_gen_mask(CLI::App& app) {
    struct Args {
        int width = 256, height = 256;
        double density = 0.2;
        std::uint64_t seed = 0;
        std::string output;
    };
    auto args = std::make_shared<Args>();
    CLI::App* sub = app.add_subcommand("gen-mask", "Generate a uniform random known-pixel mask");
    sub->add_option("--width", args->width)->capture_default_str();
    sub->add_option("--height", args->height)->capture_default_str();
    sub->add_option("--density", args->density, "Fraction of pixels marked known")
        ->capture_default_str();
    sub->add_option("--seed", args->seed)->capture_default_str();
    sub->add_option("--output", args->output, "Mask image path")->required();
    sub->callback([args]() {
        const rds::Mask mask =
            rds::gen_random_mask(args->width, args->height, args->density, args->seed);
        rds::save_image(rds::mask_to_image(mask), args->output);
    });
}

void add_gen_dipole(CLI::App& app) {
    struct Args {
        int width = 128, height = 128;
        rds::DipoleSpec spec{63.5, 64.0, -90.0, 0.0, 255.0};
        std::string image_path, mask_path;
    };
    auto args = std::make_shared<Args>();
    CLI::App* sub = app.add_subcommand(
        "gen-dipole", "Generate a two-pixel edge seed (image + mask pair)");
    sub->add_option("--width", args->width)->capture_default_str();
    sub->add_option("--height", args->height)->capture_default_str();
    sub->add_option("--x", args->spec.x, "Edge anchor x")->capture_default_str();
    sub->add_option("--y", args->spec.y, "Edge anchor y")->capture_default_str();
    sub->add_option("--angle", args->spec.angle_deg, "Edge direction in degrees")
        ->capture_default_str();
    sub->add_option("--low", args->spec.low)->capture_default_str();
    sub->add_option("--high", args->spec.high)->capture_default_str();
    sub->add_option("--image", args->image_path, "Image output path")->required();
    sub->add_option("--mask", args->mask_path, "Mask output path")->required();
    sub->callback([args]() {
        auto [image, mask] = rds::gen_dipole(args->width, args->height, args->spec);
        rds::save_image(image, args->image_path);
        rds::save_image(rds::mask_to_image(mask), args->mask_path);
    });
}

void add_metrics(CLI::App& app) {
    struct Args {
        std::string result_path, reference_path;
        double min_psnr = -1.0, min_accuracy = -1.0;
    };
    auto args = std::make_shared<Args>();
    CLI::App* sub = app.add_subcommand("metrics", "Compare a result against a reference image");
    sub->add_option("--result", args->result_path)->required()->check(CLI::ExistingFile);
    sub->add_option("--reference", args->reference_path)->required()->check(CLI::ExistingFile);
    sub->add_option("--min-psnr", args->min_psnr, "Fail (exit 1) below this PSNR");
    sub->add_option("--min-accuracy", args->min_accuracy,
                    "Fail (exit 1) below this binary accuracy");
    sub->callback([args]() {
        const rds::MultiChannelImage result = rds::load_image(args->result_path);
        const rds::MultiChannelImage reference = rds::load_image(args->reference_path);
        const rds::Metrics m = rds::compute_metrics(result, reference);
        std::cout << "mse=" << m.mse << "\npsnr=" << m.psnr
                  << "\nbinary_accuracy=" << m.binary_accuracy << "\n";
        if (args->min_psnr >= 0.0 && m.psnr < args->min_psnr)
            throw CheckFailed("psnr below threshold");
        if (args->min_accuracy >= 0.0 && m.binary_accuracy < args->min_accuracy)
            throw CheckFailed("binary accuracy below threshold");
    });
}

void add_experiment(CLI::App& app) {
    struct Args {
        std::vector<std::string> names;
        rds::ExperimentOptions options;
        bool list = false;
    };
    auto args = std::make_shared<Args>();
    CLI::App* sub = app.add_subcommand("experiment", "Run bundled reproduction experiments");
    sub->add_option("names", args->names, "Experiment names, or 'all'");
    sub->add_flag("--list", args->list, "List available experiments and exit");
    sub->add_option("--out", args->options.out_dir, "Output directory")
        ->capture_default_str();
    sub->add_option("--jobs", args->options.jobs, "Concurrent experiments")
        ->capture_default_str();
    sub->callback([args]() {
        if (args->list) {
            for (const std::string& name : rds::experiment_names()) std::cout << name << "\n";
            return;
        }
        std::vector<std::string> names = args->names;
        if (names.empty() || (names.size() == 1 && names[0] == "all"))
            names = rds::experiment_names();
        const std::vector<rds::ExperimentResult> results =
            rds::run_experiments(names, args->options);
        bool all_passed = true;
        for (const rds::ExperimentResult& r : results) {
            std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " ("
                      << r.detail << ") [" << r.seconds << "s]\n";
            all_passed = all_passed && r.passed;
        }
        if (!all_passed) throw CheckFailed("one or more experiments failed");
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularised diffusion-shock image inpainting toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI-style key=value file");

    add_inpaint(app);
    add_shockfilter(app);
    add_gen_mask(app);
    add_gen_dipole(app);
    add_metrics(app);
    add_experiment(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
