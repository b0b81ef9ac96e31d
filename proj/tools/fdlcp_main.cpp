// fdlcp: command-line front end for the reconstruction library.
// Exit codes: 0 success, 2 usage/config error, 3 solver non-convergence,
// 4 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdlcp/dictionary.hpp"
#include "fdlcp/direction.hpp"
#include "fdlcp/fft.hpp"
#include "fdlcp/image.hpp"
#include "fdlcp/manifest.hpp"
#include "fdlcp/metrics.hpp"
#include "fdlcp/sampling.hpp"
#include "fdlcp/solver.hpp"
#include "fdlcp/sweep.hpp"

namespace {

using namespace fdlcp;

constexpr const char* kMetricsHeader = "case,pattern,rate,method,penalty,rlne,ssim";

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void append_metrics_row(const std::string& path, const std::string& case_label,
                        const std::string& pattern, const std::string& rate,
                        const std::string& method, const std::string& penalty, double rlne_v,
                        double ssim_v) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open metrics file: " + path);
    if (fresh) out << kMetricsHeader << '\n';
    out << case_label << ',' << pattern << ',' << rate << ',' << method << ',' << penalty << ','
        << fmt(rlne_v) << ',' << fmt(ssim_v) << '\n';
    if (!out) throw IoError("failed writing metrics file: " + path);
}

int run_args(const std::vector<std::string>& args, int depth);

struct PhantomOpts {
    int size = 0;
    std::string kind = "shepp_logan";
    std::string out;
};

struct MaskOpts {
    std::string pattern;
    double rate = 0.0;
    std::uint64_t seed = 0;
    int size = 0;
    double center_fraction = 0.04;
    std::string out;
};

struct SimulateOpts {
    std::string image, mask, out;
};

struct ReconOpts {
    std::string kspace, mask, method, out, truth, trace;
    std::string penalty = "l1";
    int T = 1;
    double eta = 0.2;
    double lambda = 1e3;
    double beta = 4e2;
    double eps = 1e-4;
};

struct SweepOpts {
    std::string image, out;
    std::vector<std::string> transforms{"haar2d", "dct2d", "fdl", "fdlcp"};
    std::vector<double> fractions{0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0};
};

struct EvalOpts {
    std::string recon, truth, out;
};

void cmd_phantom(const PhantomOpts& o, const std::vector<std::string>& argv) {
    const Image img = make_phantom(o.size, phantom_kind_from_string(o.kind));
    save_cimg(o.out, img);
    RunManifest m;
    m.command = "phantom";
    m.argv = argv;
    m.config = {{"size", o.size}, {"kind", o.kind}};
    m.outputs = {{"out", o.out}};
    save_manifest(manifest_path_for(o.out), m);
    std::cout << "phantom " << o.kind << " " << o.size << "x" << o.size << " -> " << o.out
              << "\n";
}

void cmd_mask(const MaskOpts& o, const std::vector<std::string>& argv) {
    SamplingMask mask;
    if (o.pattern == "cartesian")
        mask = make_cartesian_mask(o.size, o.size, o.rate, o.center_fraction, o.seed);
    else if (o.pattern == "random2d")
        mask = make_random2d_mask(o.size, o.size, o.rate, o.seed);
    else
        mask = make_radial_mask(o.size, o.size, o.rate, o.seed);
    save_cimg(o.out, mask.to_image());
    RunManifest m;
    m.command = "mask";
    m.argv = argv;
    m.config = {{"pattern", o.pattern},
                {"rate", o.rate},
                {"seed", o.seed},
                {"size", o.size},
                {"center_fraction", o.center_fraction}};
    m.outputs = {{"out", o.out}};
    save_manifest(manifest_path_for(o.out), m);
    std::cout << "achieved rate " << fmt(mask.rate()) << "\n";
}

void cmd_simulate(const SimulateOpts& o, const std::vector<std::string>& argv) {
    const Image img = load_cimg(o.image);
    const SamplingMask mask = SamplingMask::from_image(load_cimg(o.mask));
    const KSpace y = encode(img, mask);
    save_cimg(o.out, y.to_image());
    RunManifest m;
    m.command = "simulate";
    m.argv = argv;
    m.inputs = {{"image", o.image}, {"mask", o.mask}};
    m.outputs = {{"out", o.out}};
    save_manifest(manifest_path_for(o.out), m);
    std::cout << "simulated k-space -> " << o.out << "\n";
}

int cmd_recon(const ReconOpts& o, const std::vector<std::string>& argv) {
    const KSpace y = KSpace::from_image(load_cimg(o.kspace));
    const SamplingMask mask = SamplingMask::from_image(load_cimg(o.mask));
    if (y.n1 != mask.n1 || y.n2 != mask.n2)
        throw ConfigError("recon: k-space and mask dimensions differ");

    SolverConfig scfg;
    scfg.lambda = o.lambda;
    scfg.beta = o.beta;
    scfg.eps = o.eps;
    scfg.penalty = o.penalty == "l0" ? Penalty::l0 : Penalty::l1;

    Image truth;
    const bool have_truth = !o.truth.empty();
    if (have_truth) truth = load_cimg(o.truth);

    Image x;
    bool converged = true;
    std::vector<IterationRecord> history;
    if (o.method == "zerofill") {
        x = adjoint(y);
    } else if (o.method == "sidwt") {
        AdmmResult r = sidwt_reference(y, mask, scfg);
        x = std::move(r.x);
        converged = r.converged;
        history = std::move(r.history);
        std::cout << "sidwt iterations " << r.iterations << " converged " << (converged ? 1 : 0)
                  << "\n";
    } else {
        PipelineConfig pcfg;
        pcfg.T = o.T;
        pcfg.train.eta = o.eta;
        pcfg.solver = scfg;
        PipelineResult r = fdlcp_pipeline(y, mask, pcfg, have_truth ? &truth : nullptr);
        for (const StageReport& s : r.stages) {
            std::cout << "stage " << s.stage << " seconds " << fmt(s.seconds);
            if (s.iterations > 0)
                std::cout << " iterations " << s.iterations << " converged "
                          << (s.converged ? 1 : 0);
            if (s.rlne >= 0.0) std::cout << " rlne " << fmt(s.rlne);
            std::cout << "\n";
        }
        x = std::move(r.x);
        converged = r.converged;
        history = std::move(r.final_history);
    }

    save_cimg(o.out, x);
    if (!o.trace.empty()) write_trace_csv(o.trace, history);
    if (have_truth) {
        const double e = rlne(x, truth);
        const double s = ssim(x, truth);
        append_metrics_row(o.out + ".metrics.csv", o.out, "-", fmt(mask.rate()), o.method,
                           o.method == "zerofill" ? "-" : o.penalty, e, s);
        std::cout << "rlne " << fmt(e) << " ssim " << fmt(s) << "\n";
    }

    RunManifest m;
    m.command = "recon";
    m.argv = argv;
    m.config = {{"method", o.method}, {"penalty", o.penalty},   {"T", o.T},
                {"eta", o.eta},       {"lambda", o.lambda},     {"beta", o.beta},
                {"eps", o.eps},       {"patch_n", 8},           {"Q", 71},
                {"sidwt_levels", 3},  {"max_iterations", 200},
                {"train_iterations", TrainConfig{}.max_iterations}};
    m.inputs = {{"kspace", o.kspace}, {"mask", o.mask}};
    if (have_truth) m.inputs["truth"] = o.truth;
    m.outputs = {{"out", o.out}};
    if (!o.trace.empty()) m.outputs["trace"] = o.trace;
    save_manifest(manifest_path_for(o.out), m);

    if (!converged) {
        std::cerr << "warning: max iterations reached before the residual tolerance\n";
        return 3;
    }
    return 0;
}

void cmd_sweep(const SweepOpts& o, const std::vector<std::string>& argv) {
    const Image img = load_cimg(o.image);
    const auto rows = sweep_sparsity(img, o.transforms, o.fractions);
    write_sweep_csv(o.out, rows);
    RunManifest m;
    m.command = "sweep_sparsity";
    m.argv = argv;
    m.config = {{"transforms", o.transforms}, {"fractions", o.fractions}, {"patch_n", 8},
                {"eta", 0.2}};
    m.inputs = {{"image", o.image}};
    m.outputs = {{"out", o.out}};
    save_manifest(manifest_path_for(o.out), m);
    for (const auto& r : rows)
        std::cout << r.transform << " " << fmt(r.fraction) << " " << fmt(r.rlne) << "\n";
}

void cmd_eval(const EvalOpts& o, const std::vector<std::string>& argv) {
    const Image rec = load_cimg(o.recon);
    const Image truth = load_cimg(o.truth);
    const double e = rlne(rec, truth);
    const double s = ssim(rec, truth);
    append_metrics_row(o.out, o.recon, "-", "-", "-", "-", e, s);
    RunManifest m;
    m.command = "eval";
    m.argv = argv;
    m.inputs = {{"recon", o.recon}, {"truth", o.truth}};
    m.outputs = {{"out", o.out}};
    save_manifest(manifest_path_for(o.out), m);
    std::cout << "rlne " << fmt(e) << " ssim " << fmt(s) << "\n";
}

int run_args(const std::vector<std::string>& args, int depth) {
    CLI::App app{"FDLCP compressed-sensing MRI reconstruction toolkit"};
    app.require_subcommand(1);

    PhantomOpts po;
    auto* phantom = app.add_subcommand("phantom", "Generate a deterministic test phantom");
    phantom->add_option("--size", po.size, "Image side length (>= 32)")->required();
    phantom->add_option("--kind", po.kind, "shepp_logan | directional_grid")
        ->check(CLI::IsMember({"shepp_logan", "directional_grid"}));
    phantom->add_option("--out", po.out, "Output .cimg path")->required();

    MaskOpts mo;
    auto* mask = app.add_subcommand("mask", "Generate a k-space sampling mask");
    mask->add_option("--pattern", mo.pattern, "cartesian | random2d | radial")
        ->required()
        ->check(CLI::IsMember({"cartesian", "random2d", "radial"}));
    mask->add_option("--rate", mo.rate, "Target sampling rate in (0, 1]")->required();
    mask->add_option("--seed", mo.seed, "PRNG seed");
    mask->add_option("--size", mo.size, "Mask side length")->required();
    mask->add_option("--center-fraction", mo.center_fraction,
                     "Fully-sampled center fraction (cartesian)");
    mask->add_option("--out", mo.out, "Output .cimg path")->required();

    SimulateOpts so;
    auto* sim = app.add_subcommand("simulate", "Undersampled acquisition y = U F x");
    sim->add_option("--image", so.image, "Input image .cimg")->required()->check(CLI::ExistingFile);
    sim->add_option("--mask", so.mask, "Sampling mask .cimg")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", so.out, "Output k-space .cimg")->required();

    ReconOpts ro;
    auto* rec = app.add_subcommand("recon", "Reconstruct an image from undersampled k-space");
    rec->add_option("--kspace", ro.kspace, "Measured k-space .cimg")
        ->required()
        ->check(CLI::ExistingFile);
    rec->add_option("--mask", ro.mask, "Sampling mask .cimg")->required()->check(CLI::ExistingFile);
    rec->add_option("--method", ro.method, "zerofill | sidwt | fdlcp")
        ->required()
        ->check(CLI::IsMember({"zerofill", "sidwt", "fdlcp"}));
    rec->add_option("--penalty", ro.penalty, "l1 | l0")->check(CLI::IsMember({"l1", "l0"}));
    rec->add_option("--T", ro.T, "Reference-image updates")->check(CLI::NonNegativeNumber);
    rec->add_option("--eta", ro.eta, "Dictionary training threshold");
    rec->add_option("--lambda", ro.lambda, "Data-fidelity weight");
    rec->add_option("--beta", ro.beta, "Frame-term penalty");
    rec->add_option("--eps", ro.eps, "Stopping residual");
    rec->add_option("--out", ro.out, "Output image .cimg")->required();
    rec->add_option("--truth", ro.truth, "Ground-truth .cimg for metrics")
        ->check(CLI::ExistingFile);
    rec->add_option("--trace", ro.trace, "Per-iteration trace CSV path");

    SweepOpts wo;
    auto* sweep = app.add_subcommand("sweep_sparsity", "Patch sparse-approximation decay study");
    sweep->add_option("--image", wo.image, "Input image .cimg")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--transforms", wo.transforms, "haar2d,dct2d,fdl,fdlcp")
        ->delimiter(',')
        ->check(CLI::IsMember({"haar2d", "dct2d", "fdl", "fdlcp"}));
    sweep->add_option("--fractions", wo.fractions, "Retained coefficient fractions in [0, 1]")
        ->delimiter(',');
    sweep->add_option("--out", wo.out, "Output CSV path")->required();

    EvalOpts eo;
    auto* eval = app.add_subcommand("eval", "Compute RLNE/SSIM for a reconstruction");
    eval->add_option("--recon", eo.recon, "Reconstruction .cimg")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--truth", eo.truth, "Ground truth .cimg")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--out", eo.out, "Metrics CSV path (appended)")->required();

    std::string manifest_path;
    auto* rerun = app.add_subcommand("rerun", "Re-execute a command from its manifest");
    rerun->add_option("--manifest", manifest_path, "Manifest JSON path")
        ->required()
        ->check(CLI::ExistingFile);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("fdlcp");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (phantom->parsed()) {
        cmd_phantom(po, args);
        return 0;
    }
    if (mask->parsed()) {
        cmd_mask(mo, args);
        return 0;
    }
    if (sim->parsed()) {
        cmd_simulate(so, args);
        return 0;
    }
    if (rec->parsed()) return cmd_recon(ro, args);
    if (sweep->parsed()) {
        cmd_sweep(wo, args);
        return 0;
    }
    if (eval->parsed()) {
        cmd_eval(eo, args);
        return 0;
    }
    if (rerun->parsed()) {
        if (depth > 4) throw ConfigError("rerun: manifest chain too deep");
        const RunManifest m = load_manifest(manifest_path);
        if (m.command == "rerun") throw ConfigError("rerun: refusing to rerun a rerun manifest");
        std::cout << "rerun " << m.command << " (tool_version " << m.tool_version << ")\n";
        return run_args(m.argv, depth + 1);
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_args(args, 0);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
