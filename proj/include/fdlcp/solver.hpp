#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdlcp/dictionary.hpp"
#include "fdlcp/frame.hpp"
#include "fdlcp/sampling.hpp"
#include "fdlcp/sidwt.hpp"

namespace fdlcp {

enum class Penalty { l1, l0 };

// beta trades data consistency against frame-coefficient shrinkage: the l1
// shrinkage is 1/beta and the l0 threshold sqrt(2/beta), so it also sets the
// scale at which the two penalties agree on peak-normalized images. 400 keeps
// both thresholds in the useful range while full-mask runs still contract the
// data error by beta/(lambda+beta) per iteration.
struct SolverConfig {
    double lambda = 1e3;
    double beta = 4e2;
    double delta_h = 1.0;
    double delta_d = 1.0;
    double eps = 1e-4;
    int max_iterations = 200;
    Penalty penalty = Penalty::l1;
};

struct IterationRecord {
    int iteration = 0;
    double data_residual = 0.0;   // ||y - U F x||_2
    double primal_residual = 0.0; // ||Phi x - a||_2
    double objective = 0.0;       // augmented Lagrangian (l1) or ||a||_0 (l0)
    double seconds = 0.0;         // wall time since solve start
};

struct AdmmResult {
    Image x;
    bool converged = false;
    int iterations = 0;
    std::vector<IterationRecord> history;
};

inline cd soft_threshold(cd v, double t) {
    const double m = std::abs(v);
    if (m <= t || m == 0.0) return cd(0.0, 0.0);
    return v * ((m - t) / m);
}

// One a-update: elementwise soft threshold at 1/beta (l1) or hard threshold
// at sqrt(2/beta) (l0) of phi_x - d.
std::vector<cd> update_a(const std::vector<cd>& phi_x, const std::vector<cd>& d,
                         const SolverConfig& cfg);

// Closed-form x-update in k-space: x = F^-1[(lambda*U(y+h) + beta*F Phi^H
// (a+d)) / (lambda*u + beta)]. y, h, and the mask are in standard FFT order
// here; returns the image and (optionally) its exact spectrum F x.
std::vector<cd> update_x(const std::vector<cd>& a, const std::vector<cd>& d,
                         const std::vector<cd>& h, const std::vector<cd>& y_std,
                         const std::vector<uint8_t>& u_std, const FrameOperator& op,
                         const SolverConfig& cfg, int n1, int n2,
                         std::vector<cd>* spectrum_out = nullptr);

AdmmResult admm_reconstruct(const KSpace& y, const SamplingMask& mask, const FrameOperator& op,
                            const SolverConfig& cfg);

// Reference reconstruction with the 3-level undecimated Daubechies-4 frame.
AdmmResult sidwt_reference(const KSpace& y, const SamplingMask& mask, const SolverConfig& cfg,
                           int levels = 3);

struct PipelineConfig {
    int T = 1;           // reference updates; T+1 classify/train/reconstruct passes
    int sidwt_levels = 3;
    PatchConfig patch;
    TrainConfig train;
    SolverConfig solver;
};

struct StageReport {
    std::string stage;
    double seconds = 0.0;
    int iterations = 0;
    bool converged = true;
    double rlne = -1.0;  // vs ground truth when supplied, else -1
};

struct PipelineResult {
    Image x;
    bool converged = false;  // final reconstruction stage
    std::vector<StageReport> stages;
    std::vector<IterationRecord> final_history;  // last reconstruction's trace
};

// Full pipeline: SIDWT reference, then T+1 rounds of classify -> train ->
// ADMM reconstruction, each round re-using the previous result as reference.
PipelineResult fdlcp_pipeline(const KSpace& y, const SamplingMask& mask,
                              const PipelineConfig& cfg, const Image* truth = nullptr);

void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& history);

}  // namespace fdlcp
