#include "fdlcp/solver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "fdlcp/fft.hpp"
#include "fdlcp/metrics.hpp"

namespace fdlcp {

namespace {

// Mask bits in standard FFT ordering (DC at [0,0]); storage is DC-centered.
std::vector<uint8_t> mask_standard_order(const SamplingMask& m) {
    std::vector<uint8_t> u(m.kept.size());
    const int n1 = m.n1, n2 = m.n2;
    for (int r = 0; r < n1; ++r)
        for (int c = 0; c < n2; ++c)
            u[static_cast<size_t>(r) * n2 + c] =
                m.kept[static_cast<size_t>((r + n1 / 2) % n1) * n2 + (c + n2 / 2) % n2];
    return u;
}

void validate_solver_config(const SolverConfig& cfg) {
    if (!(cfg.lambda >= 0.0)) throw ConfigError("solver: lambda must be >= 0");
    if (!(cfg.beta > 0.0)) throw ConfigError("solver: beta must be > 0");
    if (!(cfg.eps >= 0.0)) throw ConfigError("solver: eps must be >= 0");
    if (cfg.max_iterations < 1) throw ConfigError("solver: max_iterations must be >= 1");
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<cd> update_a(const std::vector<cd>& phi_x, const std::vector<cd>& d,
                         const SolverConfig& cfg) {
    if (phi_x.size() != d.size()) throw ConfigError("update_a: size mismatch");
    std::vector<cd> a(phi_x.size());
    if (cfg.penalty == Penalty::l1) {
        const double t = 1.0 / cfg.beta;
        for (size_t i = 0; i < a.size(); ++i) a[i] = soft_threshold(phi_x[i] - d[i], t);
    } else {
        const double t = std::sqrt(2.0 / cfg.beta);
        for (size_t i = 0; i < a.size(); ++i) {
            const cd v = phi_x[i] - d[i];
            a[i] = std::abs(v) >= t ? v : cd(0.0, 0.0);
        }
    }
    return a;
}

std::vector<cd> update_x(const std::vector<cd>& a, const std::vector<cd>& d,
                         const std::vector<cd>& h, const std::vector<cd>& y_std,
                         const std::vector<uint8_t>& u_std, const FrameOperator& op,
                         const SolverConfig& cfg, int n1, int n2,
                         std::vector<cd>* spectrum_out) {
    const size_t N = static_cast<size_t>(n1) * n2;
    if (a.size() != d.size() || a.size() != op.coeff_size())
        throw ConfigError("update_x: coefficient size mismatch");
    if (h.size() != N || y_std.size() != N || u_std.size() != N)
        throw ConfigError("update_x: grid size mismatch");
    std::vector<cd> sum(a.size());
    for (size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + d[i];
    std::vector<cd> g;
    op.synthesize(sum, g);
    std::vector<cd> G;
    fft2(g, G, n1, n2);
    std::vector<cd> X(N);
    for (size_t i = 0; i < N; ++i) {
        const double u = u_std[i] ? 1.0 : 0.0;
        X[i] = (cfg.lambda * u * (y_std[i] + h[i]) + cfg.beta * G[i]) / (cfg.lambda * u + cfg.beta);
    }
    std::vector<cd> x;
    ifft2(X, x, n1, n2);
    if (spectrum_out) *spectrum_out = std::move(X);
    return x;
}

AdmmResult admm_reconstruct(const KSpace& y, const SamplingMask& mask, const FrameOperator& op,
                            const SolverConfig& cfg) {
    validate_solver_config(cfg);
    if (y.n1 != mask.n1 || y.n2 != mask.n2)
        throw ConfigError("admm_reconstruct: k-space/mask dimension mismatch");
    const int n1 = y.n1, n2 = y.n2;
    const size_t N = static_cast<size_t>(n1) * n2;
    const auto t0 = std::chrono::steady_clock::now();

    const std::vector<uint8_t> u = mask_standard_order(mask);
    std::vector<cd> y_std = ifftshift(y.data, n1, n2);
    for (size_t i = 0; i < N; ++i)
        if (!u[i]) y_std[i] = cd(0.0, 0.0);

    // x0 = F_U^H y (zero-filling); a is assigned by the first update_a.
    std::vector<cd> x;
    ifft2(y_std, x, n1, n2);
    std::vector<cd> phi_x;
    op.analyze(x, phi_x);
    std::vector<cd> d(op.coeff_size(), cd(0.0, 0.0));
    std::vector<cd> h(N, cd(0.0, 0.0));

    AdmmResult result;
    result.history.reserve(static_cast<size_t>(cfg.max_iterations));

    std::vector<cd> X;
    for (int k = 1; k <= cfg.max_iterations; ++k) {
        std::vector<cd> a = update_a(phi_x, d, cfg);
        x = update_x(a, d, h, y_std, u, op, cfg, n1, n2, &X);

        double res2 = 0.0;
        for (size_t i = 0; i < N; ++i)
            if (u[i]) res2 += std::norm(X[i] - y_std[i]);
        const double data_residual = std::sqrt(res2);

        for (size_t i = 0; i < N; ++i)
            if (u[i]) h[i] -= cfg.delta_h * (X[i] - y_std[i]);

        op.analyze(x, phi_x);
        double primal2 = 0.0;
        for (size_t i = 0; i < phi_x.size(); ++i) primal2 += std::norm(phi_x[i] - a[i]);
        for (size_t i = 0; i < phi_x.size(); ++i) d[i] -= cfg.delta_d * (phi_x[i] - a[i]);

        double objective;
        if (cfg.penalty == Penalty::l1) {
            // Augmented Lagrangian with the just-updated multipliers.
            double l1 = 0.0, lin_h = 0.0, lin_d = 0.0;
            for (const cd& v : a) l1 += std::abs(v);
            for (size_t i = 0; i < N; ++i)
                if (u[i]) lin_h += (std::conj(h[i]) * (y_std[i] - X[i])).real();
            for (size_t i = 0; i < phi_x.size(); ++i)
                lin_d += (std::conj(d[i]) * (phi_x[i] - a[i])).real();
            objective = l1 + lin_h + 0.5 * cfg.lambda * res2 + lin_d + 0.5 * cfg.beta * primal2;
        } else {
            double nnz = 0.0;
            for (const cd& v : a)
                if (v != cd(0.0, 0.0)) nnz += 1.0;
            objective = nnz;
        }

        result.history.push_back(
            {k, data_residual, std::sqrt(primal2), objective, elapsed_seconds(t0)});
        result.iterations = k;
        if (data_residual <= cfg.eps) {
            result.converged = true;
            break;
        }
    }

    result.x = Image(n1, n2);
    result.x.data = std::move(x);
    return result;
}

AdmmResult sidwt_reference(const KSpace& y, const SamplingMask& mask, const SolverConfig& cfg,
                           int levels) {
    SidwtOperator op(y.n1, y.n2, levels);
    return admm_reconstruct(y, mask, op, cfg);
}

PipelineResult fdlcp_pipeline(const KSpace& y, const SamplingMask& mask,
                              const PipelineConfig& cfg, const Image* truth) {
    if (cfg.T < 0) throw ConfigError("pipeline: T must be >= 0");
    const int n1 = y.n1, n2 = y.n2;
    const DirectionSet ds = build_direction_set(cfg.patch.n);

    PipelineResult result;
    auto add_stage = [&](const std::string& name, double secs, int iters, bool conv,
                         const Image* img) {
        StageReport s;
        s.stage = name;
        s.seconds = secs;
        s.iterations = iters;
        s.converged = conv;
        if (truth && img) s.rlne = rlne(*img, *truth);
        result.stages.push_back(std::move(s));
    };

    auto t0 = std::chrono::steady_clock::now();
    // The reference problem is the l1 analysis model regardless of the
    // penalty used for the dictionary-domain reconstruction.
    SolverConfig ref_cfg = cfg.solver;
    ref_cfg.penalty = Penalty::l1;
    AdmmResult ref_run = sidwt_reference(y, mask, ref_cfg, cfg.sidwt_levels);
    add_stage("sidwt_reference", elapsed_seconds(t0), ref_run.iterations, ref_run.converged,
              &ref_run.x);
    Image reference = std::move(ref_run.x);

    bool final_converged = ref_run.converged;
    for (int round = 0; round <= cfg.T; ++round) {
        const std::string tag = "_" + std::to_string(round);

        t0 = std::chrono::steady_clock::now();
        ClassMap cmap = classify_patches(reference, cfg.patch, ds);
        add_stage("classify" + tag, elapsed_seconds(t0), 0, true, nullptr);

        t0 = std::chrono::steady_clock::now();
        DictionaryBank bank = train_bank(reference, cmap, cfg.patch, cfg.train);
        add_stage("train" + tag, elapsed_seconds(t0), 0, true, nullptr);

        t0 = std::chrono::steady_clock::now();
        AnalysisOperator op(bank, cmap, cfg.patch, n1, n2);
        AdmmResult run = admm_reconstruct(y, mask, op, cfg.solver);
        add_stage("reconstruct" + tag, elapsed_seconds(t0), run.iterations, run.converged,
                  &run.x);
        reference = std::move(run.x);
        final_converged = run.converged;
        result.final_history = std::move(run.history);
    }

    result.x = std::move(reference);
    result.converged = final_converged;
    return result;
}

void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open trace file: " + path);
    out << "iteration,data_residual,primal_residual,objective,seconds\n";
    out.precision(17);
    for (const auto& rec : history)
        out << rec.iteration << ',' << rec.data_residual << ',' << rec.primal_residual << ','
            << rec.objective << ',' << rec.seconds << '\n';
    if (!out) throw IoError("failed writing trace file: " + path);
}

}  // namespace fdlcp
