#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>

#include "fdlcp/fft.hpp"
#include "fdlcp/metrics.hpp"
#include "fdlcp/solver.hpp"

using namespace fdlcp;
namespace fs = std::filesystem;

namespace {

std::vector<cd> random_vec(size_t len, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cd> v(len);
    for (auto& z : v) z = cd(nd(rng), nd(rng));
    return v;
}

double vnorm(const std::vector<cd>& v) {
    double s = 0.0;
    for (const cd& z : v) s += std::norm(z);
    return std::sqrt(s);
}

double vdist(const std::vector<cd>& a, const std::vector<cd>& b) {
    REQUIRE(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

Matrix random_unitary(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Matrix M(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M(i, j) = cd(nd(rng), nd(rng));
    Eigen::HouseholderQR<Matrix> qr(M);
    return Matrix(qr.householderQ());
}

DictionaryBank haar_bank(int n, int Q) {
    DictionaryBank b;
    b.n = n;
    b.Q = Q;
    b.eta = 0.2;
    b.dicts.assign(Q, haar2d_dictionary(n));
    b.populated.assign(Q, false);
    b.iterations.assign(Q, 0);
    b.final_objective.assign(Q, 0.0);
    return b;
}

// Dense unitary 2D DFT matrix (standard index order, row-major pixels).
Matrix dense_dft(int n1, int n2) {
    const size_t N = static_cast<size_t>(n1) * n2;
    Matrix F(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int k1 = 0; k1 < n1; ++k1)
        for (int k2 = 0; k2 < n2; ++k2)
            for (int r = 0; r < n1; ++r)
                for (int c = 0; c < n2; ++c) {
                    const double ph = -2.0 * M_PI *
                                      (static_cast<double>(k1) * r / n1 +
                                       static_cast<double>(k2) * c / n2);
                    F(k1 * n2 + k2, r * n2 + c) = scale * cd(std::cos(ph), std::sin(ph));
                }
    return F;
}

SamplingMask full_mask(int n1, int n2) {
    SamplingMask m(n1, n2);
    std::fill(m.kept.begin(), m.kept.end(), uint8_t(1));
    return m;
}

struct TmpDir {
    fs::path path;
    TmpDir() {
        std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("fdlcp_solver_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TmpDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("soft_threshold: closed form, phase preservation, zero handling") {
    CHECK(soft_threshold(cd(2.0, 0.0), 0.5) == cd(1.5, 0.0));
    CHECK(soft_threshold(cd(0.0, 0.0), 0.5) == cd(0.0, 0.0));
    CHECK(soft_threshold(cd(0.5, 0.0), 0.5) == cd(0.0, 0.0));  // |v| == t -> 0

    for (double phi : {0.3, 1.7, -2.2, 3.0}) {
        const cd below = 0.3 * cd(std::cos(phi), std::sin(phi));
        CHECK(soft_threshold(below, 0.5) == cd(0.0, 0.0));
        const cd above = 1.7 * cd(std::cos(phi), std::sin(phi));
        const cd out = soft_threshold(above, 0.5);
        CHECK(std::abs(std::abs(out) - 1.2) < 1e-14);
        CHECK(std::abs(std::arg(out) - std::arg(above)) < 1e-14);
    }
}

TEST_CASE("update_a: l1 shrinkage, l0 threshold boundary, large-beta limit") {
    SolverConfig cfg;

    cfg.penalty = Penalty::l1;
    cfg.beta = 4.0;  // threshold 1/beta = 0.25
    std::vector<cd> phi_x{cd(0.5, 0.0)}, d{cd(0.0, 0.0)};
    CHECK(update_a(phi_x, d, cfg)[0] == cd(0.25, 0.0));

    // d is subtracted before thresholding
    d[0] = cd(0.2, 0.0);
    CHECK(std::abs(update_a(phi_x, d, cfg)[0] - cd(0.05, 0.0)) < 1e-15);

    cfg.penalty = Penalty::l0;
    cfg.beta = 2.0;  // threshold sqrt(2/beta) = 1 exactly
    d[0] = cd(0.0, 0.0);
    phi_x[0] = cd(0.999, 0.0);
    CHECK(update_a(phi_x, d, cfg)[0] == cd(0.0, 0.0));
    phi_x[0] = cd(1.0, 0.0);
    CHECK(update_a(phi_x, d, cfg)[0] == cd(1.0, 0.0));  // kept unchanged at the boundary

    // beta -> infinity: threshold -> 0, a -> phi_x - d for both penalties
    const std::vector<cd> px = random_vec(64, 11), dd = random_vec(64, 12);
    for (Penalty p : {Penalty::l1, Penalty::l0}) {
        cfg.penalty = p;
        cfg.beta = 1e12;
        const std::vector<cd> a = update_a(px, dd, cfg);
        double err = 0.0;
        for (size_t i = 0; i < a.size(); ++i) err += std::norm(a[i] - (px[i] - dd[i]));
        CHECK(std::sqrt(err) < 1e-5 * vnorm(px));
    }

    std::vector<cd> short_d(3);
    CHECK_THROWS_AS(update_a(px, short_d, cfg), ConfigError);
}

TEST_CASE("update_x: lambda=0 gives the pure frame solution") {
    SidwtOperator op(16, 16, 1);
    SolverConfig cfg;
    cfg.lambda = 0.0;
    const std::vector<cd> a = random_vec(op.coeff_size(), 21);
    const std::vector<cd> d = random_vec(op.coeff_size(), 22);
    const std::vector<cd> h(256, cd(0, 0)), y(256, cd(0, 0));
    const std::vector<uint8_t> u(256, 1);

    std::vector<cd> sum(a.size());
    for (size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + d[i];
    std::vector<cd> expect;
    op.synthesize(sum, expect);

    const std::vector<cd> x = update_x(a, d, h, y, u, op, cfg, 16, 16);
    CHECK(vdist(x, expect) < 1e-12 * vnorm(expect));
}

TEST_CASE("update_x: data term dominates as beta -> 0 on a full mask") {
    SidwtOperator op(16, 16, 1);
    SolverConfig cfg;
    cfg.beta = 1e-9;
    const std::vector<cd> y = random_vec(256, 31);
    const std::vector<cd> h(256, cd(0, 0));
    const std::vector<uint8_t> u(256, 1);

    // a + d = Phi x_true for the x_true determined by y
    std::vector<cd> x_true;
    ifft2(y, x_true, 16, 16);
    std::vector<cd> a;
    op.analyze(x_true, a);
    const std::vector<cd> d(a.size(), cd(0, 0));

    const std::vector<cd> x = update_x(a, d, h, y, u, op, cfg, 16, 16);
    CHECK(vdist(x, x_true) < 1e-6 * vnorm(x_true));
}

TEST_CASE("update_x: matches a dense normal-equations solve on small instances") {
    // 8x8 images with n=2 patches: the quadratic's normal matrix
    // lambda F^H U F + beta I is only 64x64, small enough to solve densely.
    const DirectionSet ds = build_direction_set(2);
    PatchConfig pcfg;
    pcfg.n = 2;
    const Matrix F = dense_dft(8, 8);

    for (uint64_t seed = 0; seed < 6; ++seed) {
        std::mt19937_64 rng(900 + seed);
        std::normal_distribution<double> nd;

        Image img(8, 8);
        for (auto& z : img.data) z = cd(nd(rng), nd(rng));
        const ClassMap cmap = classify_patches(img, pcfg, ds);
        DictionaryBank bank = haar_bank(2, ds.Q);
        for (int w = 0; w < ds.Q; w += 3) bank.dicts[w] = random_unitary(4, 7000 + 31 * seed + w);
        const AnalysisOperator op(bank, cmap, pcfg, 8, 8);

        std::vector<uint8_t> u(64, 0);
        int kept = 0;
        for (auto& b : u) kept += (b = (rng() % 3 != 0) ? 1 : 0);
        if (kept == 0) u[0] = 1;
        std::vector<cd> y(64, cd(0, 0));
        for (int i = 0; i < 64; ++i)
            if (u[i]) y[i] = cd(nd(rng), nd(rng));
        const std::vector<cd> h = random_vec(64, 1700 + seed);
        const std::vector<cd> a = random_vec(op.coeff_size(), 1800 + seed);
        const std::vector<cd> d = random_vec(op.coeff_size(), 1900 + seed);

        SolverConfig cfg;
        cfg.lambda = 1e3;
        cfg.beta = 4e2;
        const std::vector<cd> x = update_x(a, d, h, y, u, op, cfg, 8, 8);

        std::vector<cd> sum(a.size());
        for (size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + d[i];
        std::vector<cd> g;
        op.synthesize(sum, g);

        Matrix M = cfg.beta * Matrix::Identity(64, 64);
        Eigen::VectorXcd rhs(64);
        for (int i = 0; i < 64; ++i) rhs(i) = cfg.beta * g[i];
        for (int i = 0; i < 64; ++i) {
            if (!u[i]) continue;
            M += cfg.lambda * F.row(i).adjoint() * F.row(i);
            rhs += cfg.lambda * F.row(i).adjoint() * (y[i] + h[i]);
        }
        const Eigen::VectorXcd xd = M.ldlt().solve(rhs);

        double err = 0.0, ref = 0.0;
        for (int i = 0; i < 64; ++i) {
            err += std::norm(x[i] - xd(i));
            ref += std::norm(xd(i));
        }
        CHECK(std::sqrt(err) < 1e-8 * std::sqrt(ref));
    }
}

TEST_CASE("admm_reconstruct: zero data gives the zero image, converged") {
    const DirectionSet ds = build_direction_set(8);
    Image ref(16, 16, cd(1.0, 0.0));
    PatchConfig pcfg;
    const ClassMap cmap = classify_patches(ref, pcfg, ds);
    const DictionaryBank bank = haar_bank(8, ds.Q);
    const AnalysisOperator op(bank, cmap, pcfg, 16, 16);

    KSpace y(16, 16);
    const SamplingMask mask = full_mask(16, 16);
    SolverConfig cfg;
    const AdmmResult r = admm_reconstruct(y, mask, op, cfg);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    for (const cd& z : r.x.data) CHECK(z == cd(0.0, 0.0));
}

TEST_CASE("admm_reconstruct: full mask recovers F^-1 y within 5 iterations") {
    const DirectionSet ds = build_direction_set(8);
    const Image truth = make_phantom(32, PhantomKind::shepp_logan);
    PatchConfig pcfg;
    const ClassMap cmap = classify_patches(truth, pcfg, ds);
    const DictionaryBank bank = haar_bank(8, ds.Q);
    const AnalysisOperator op(bank, cmap, pcfg, 32, 32);

    const SamplingMask mask = full_mask(32, 32);
    const KSpace y = encode(truth, mask);
    const Image ref = adjoint(y);

    SolverConfig cfg;
    cfg.max_iterations = 5;
    const AdmmResult r = admm_reconstruct(y, mask, op, cfg);
    CHECK(rlne(r.x, ref) < 1e-3);
    CHECK(r.history.size() == static_cast<size_t>(r.iterations));
    for (const auto& rec : r.history) {
        CHECK(std::isfinite(rec.data_residual));
        CHECK(std::isfinite(rec.objective));
    }

    // sidwt reference path, same sanity
    const AdmmResult s = sidwt_reference(y, mask, cfg);
    CHECK(rlne(s.x, ref) < 1e-3);

    // the l0 hard threshold sqrt(2/beta) leaves a bias full sampling cannot
    // undo in 5 iterations, so only finiteness is asserted for it here
    cfg.penalty = Penalty::l0;
    const AdmmResult r0 = admm_reconstruct(y, mask, op, cfg);
    for (const auto& rec : r0.history) {
        CHECK(std::isfinite(rec.data_residual));
        CHECK(std::isfinite(rec.objective));
    }
}

TEST_CASE("admm_reconstruct: converged flag means the residual tolerance was met") {
    const Image truth = make_phantom(32, PhantomKind::shepp_logan);
    const SamplingMask mask = full_mask(32, 32);
    const KSpace y = encode(truth, mask);

    SolverConfig cfg;
    cfg.eps = 1.0;  // generous: must converge well before the cap
    AdmmResult r = sidwt_reference(y, mask, cfg);
    CHECK(r.converged);
    CHECK(r.iterations < cfg.max_iterations);
    CHECK(r.history.back().data_residual <= cfg.eps);

    cfg.eps = 0.0;  // unreachable: runs to the cap with the warning flag
    cfg.max_iterations = 3;
    r = sidwt_reference(y, mask, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
}

TEST_CASE("admm_reconstruct: l0 fixed point is stationary") {
    // Constant image with an all-Haar bank: every patch block has a single
    // coefficient at |v| = 2 and exact zeros elsewhere, so with threshold
    // sqrt(2/beta) = 1 nothing shrinks and one iteration must not move x.
    const DirectionSet ds = build_direction_set(8);
    const Image x_star(16, 16, cd(2.0, 0.0));
    PatchConfig pcfg;
    const ClassMap cmap = classify_patches(x_star, pcfg, ds);
    const DictionaryBank bank = haar_bank(8, ds.Q);
    const AnalysisOperator op(bank, cmap, pcfg, 16, 16);

    const SamplingMask mask = full_mask(16, 16);
    const KSpace y = encode(x_star, mask);

    SolverConfig cfg;
    cfg.penalty = Penalty::l0;
    cfg.beta = 2.0;
    cfg.max_iterations = 1;
    cfg.eps = 0.0;
    const AdmmResult r = admm_reconstruct(y, mask, op, cfg);

    double err = 0.0;
    for (size_t i = 0; i < r.x.data.size(); ++i) err += std::norm(r.x.data[i] - x_star.data[i]);
    CHECK(std::sqrt(err) < 1e-10 * x_star.norm2());
}

TEST_CASE("admm_reconstruct: configuration validation") {
    const Image truth = make_phantom(32, PhantomKind::shepp_logan);
    const SamplingMask mask = full_mask(32, 32);
    const KSpace y = encode(truth, mask);

    SolverConfig bad;
    bad.beta = 0.0;
    CHECK_THROWS_AS(sidwt_reference(y, mask, bad), ConfigError);
    bad = {};
    bad.lambda = -1.0;
    CHECK_THROWS_AS(sidwt_reference(y, mask, bad), ConfigError);
    bad = {};
    bad.eps = -1.0;
    CHECK_THROWS_AS(sidwt_reference(y, mask, bad), ConfigError);
    bad = {};
    bad.max_iterations = 0;
    CHECK_THROWS_AS(sidwt_reference(y, mask, bad), ConfigError);

    const SamplingMask small = full_mask(16, 16);
    CHECK_THROWS_AS(sidwt_reference(y, small, SolverConfig{}), ConfigError);
}

TEST_CASE("fdlcp_pipeline: stage structure for T=0 and T=1, validation") {
    const Image truth = make_phantom(32, PhantomKind::directional_grid);
    const SamplingMask mask = make_cartesian_mask(32, 32, 0.5, 0.04, 3);
    const KSpace y = encode(truth, mask);

    PipelineConfig cfg;
    cfg.solver.max_iterations = 2;
    cfg.train.max_iterations = 2;

    cfg.T = 0;
    const PipelineResult r0 = fdlcp_pipeline(y, mask, cfg, &truth);
    REQUIRE(r0.stages.size() == 4);
    CHECK(r0.stages[0].stage == "sidwt_reference");
    CHECK(r0.stages[1].stage == "classify_0");
    CHECK(r0.stages[2].stage == "train_0");
    CHECK(r0.stages[3].stage == "reconstruct_0");
    CHECK(r0.stages[0].rlne >= 0.0);
    CHECK(r0.stages[1].rlne == -1.0);  // no image produced by classify/train
    CHECK(r0.stages[3].rlne >= 0.0);
    CHECK(r0.final_history.size() == static_cast<size_t>(r0.stages[3].iterations));

    cfg.T = 1;
    const PipelineResult r1 = fdlcp_pipeline(y, mask, cfg, &truth);
    REQUIRE(r1.stages.size() == 7);
    CHECK(r1.stages[4].stage == "classify_1");
    CHECK(r1.stages[5].stage == "train_1");
    CHECK(r1.stages[6].stage == "reconstruct_1");

    // without ground truth no stage reports an error value
    const PipelineResult rn = fdlcp_pipeline(y, mask, cfg, nullptr);
    for (const auto& s : rn.stages) CHECK(s.rlne == -1.0);

    cfg.T = -1;
    CHECK_THROWS_AS(fdlcp_pipeline(y, mask, cfg, nullptr), ConfigError);
}

TEST_CASE("write_trace_csv: header and row format") {
    TmpDir tmp;
    const fs::path p = tmp.path / "trace.csv";
    std::vector<IterationRecord> hist{{1, 0.5, 0.25, 10.0, 0.01}, {2, 0.25, 0.125, 5.0, 0.02}};
    write_trace_csv(p.string(), hist);

    std::ifstream in(p);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "iteration,data_residual,primal_residual,objective,seconds");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.find(',') != std::string::npos);
        ++rows;
    }
    CHECK(rows == 2);

    CHECK_THROWS_AS(write_trace_csv((tmp.path / "no_dir" / "t.csv").string(), hist), IoError);
}
