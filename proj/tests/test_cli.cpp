#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fdlcp/image.hpp"
#include "fdlcp/metrics.hpp"
#include "fdlcp/sampling.hpp"

using namespace fdlcp;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FDLCP_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Shared workspace with the standard artifacts, generated once through the
// CLI itself.
struct Workspace {
    fs::path dir;
    std::string phantom, mask_full, mask_us, y_full, y_us;

    Workspace() {
        std::mt19937_64 rng(std::random_device{}());
        dir = fs::temp_directory_path() / ("fdlcp_cli_" + std::to_string(rng()));
        fs::create_directories(dir);
        phantom = (dir / "phantom.cimg").string();
        mask_full = (dir / "mask_full.cimg").string();
        mask_us = (dir / "mask_us.cimg").string();
        y_full = (dir / "y_full.cimg").string();
        y_us = (dir / "y_us.cimg").string();

        REQUIRE(run_cli("phantom --size 32 --kind shepp_logan --out " + phantom).code == 0);
        REQUIRE(run_cli("mask --pattern cartesian --rate 1.0 --size 32 --out " + mask_full).code ==
                0);
        REQUIRE(run_cli("mask --pattern cartesian --rate 0.4 --seed 5 --size 32 --out " +
                        mask_us)
                    .code == 0);
        REQUIRE(run_cli("simulate --image " + phantom + " --mask " + mask_full + " --out " +
                        y_full)
                    .code == 0);
        REQUIRE(run_cli("simulate --image " + phantom + " --mask " + mask_us + " --out " + y_us)
                    .code == 0);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

Workspace& ws() {
    static Workspace w;
    return w;
}

}  // namespace

TEST_CASE("cli: phantom generation is deterministic and validated") {
    const std::string again = (ws().dir / "phantom2.cimg").string();
    const RunResult r = run_cli("phantom --size 32 --kind shepp_logan --out " + again);
    CHECK(r.code == 0);
    CHECK(slurp(again) == slurp(ws().phantom));
    CHECK(fs::exists(ws().phantom + ".manifest.json"));

    const Image img = load_cimg(ws().phantom);
    CHECK(img.n1 == 32);
    CHECK(img.n2 == 32);
    CHECK(img.peak_magnitude() == 1.0);

    CHECK(run_cli("phantom --size 16 --kind shepp_logan --out " +
                  (ws().dir / "small.cimg").string())
              .code == 2);
    CHECK(run_cli("phantom --size 32 --kind swirl --out " + (ws().dir / "x.cimg").string())
              .code == 2);
}

TEST_CASE("cli: mask reports the achieved rate and round-trips") {
    const RunResult r =
        run_cli("mask --pattern cartesian --rate 1.0 --size 32 --out " + ws().mask_full);
    CHECK(r.code == 0);
    CHECK(r.out.find("achieved rate 1") != std::string::npos);

    const SamplingMask m = SamplingMask::from_image(load_cimg(ws().mask_full));
    CHECK(m.rate() == 1.0);

    const SamplingMask us = SamplingMask::from_image(load_cimg(ws().mask_us));
    CHECK(us.rate() > 0.3);
    CHECK(us.rate() < 0.5);

    CHECK(run_cli("mask --pattern spiral --rate 0.5 --size 32 --out " +
                  (ws().dir / "m.cimg").string())
              .code == 2);
}

TEST_CASE("cli: simulate matches the library encoder") {
    const Image img = load_cimg(ws().phantom);
    const SamplingMask m = SamplingMask::from_image(load_cimg(ws().mask_us));
    const KSpace y = encode(img, m);
    const Image stored = load_cimg(ws().y_us);
    for (size_t i = 0; i < y.data.size(); ++i) CHECK(stored.data[i] == y.data[i]);

    CHECK(run_cli("simulate --image " + (ws().dir / "missing.cimg").string() + " --mask " +
                  ws().mask_full + " --out " + (ws().dir / "y.cimg").string())
              .code == 2);
}

TEST_CASE("cli: zerofill on full data reproduces the truth") {
    const std::string out = (ws().dir / "zf.cimg").string();
    const RunResult r = run_cli("recon --kspace " + ws().y_full + " --mask " + ws().mask_full +
                                " --method zerofill --out " + out + " --truth " + ws().phantom);
    CHECK(r.code == 0);
    CHECK(r.out.find("rlne") != std::string::npos);

    const Image rec = load_cimg(out);
    const Image truth = load_cimg(ws().phantom);
    CHECK(rlne(rec, truth) < 1e-12);

    // metrics CSV row with the pinned header
    const std::string csv = slurp(out + ".metrics.csv");
    CHECK(csv.rfind("case,pattern,rate,method,penalty,rlne,ssim\n", 0) == 0);
    CHECK(csv.find("zerofill") != std::string::npos);
}

TEST_CASE("cli: converged sidwt run writes a trace and exits 0") {
    const std::string out = (ws().dir / "sidwt_full.cimg").string();
    const std::string trace = (ws().dir / "trace.csv").string();
    const RunResult r = run_cli("recon --kspace " + ws().y_full + " --mask " + ws().mask_full +
                                " --method sidwt --out " + out + " --trace " + trace);
    CHECK(r.code == 0);
    CHECK(r.out.find("converged 1") != std::string::npos);

    std::ifstream in(trace);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "iteration,data_residual,primal_residual,objective,seconds");
    std::string row;
    CHECK(std::getline(in, row));
}

TEST_CASE("cli: undersampled run hits the iteration cap and exits 3") {
    const std::string out = (ws().dir / "sidwt_us.cimg").string();
    const RunResult r = run_cli("recon --kspace " + ws().y_us + " --mask " + ws().mask_us +
                                " --method sidwt --eps 0 --out " + out);
    CHECK(r.code == 3);
    CHECK(r.out.find("warning") != std::string::npos);
    CHECK(fs::exists(out));  // best iterate is still written
}

TEST_CASE("cli: fdlcp pipeline prints stage reports") {
    const std::string out = (ws().dir / "fdlcp.cimg").string();
    const RunResult r = run_cli("recon --kspace " + ws().y_us + " --mask " + ws().mask_us +
                                " --method fdlcp --T 0 --out " + out + " --truth " +
                                ws().phantom);
    CHECK((r.code == 0 || r.code == 3));
    for (const char* stage : {"stage sidwt_reference", "stage classify_0", "stage train_0",
                              "stage reconstruct_0"})
        CHECK(r.out.find(stage) != std::string::npos);
    CHECK(r.out.find("stage classify_1") == std::string::npos);  // T=0: single round
    const Image rec = load_cimg(out);
    CHECK(rec.n1 == 32);
}

TEST_CASE("cli: rerun from a manifest reproduces the output bit-exactly") {
    const std::string out = (ws().dir / "rr.cimg").string();
    REQUIRE(run_cli("recon --kspace " + ws().y_us + " --mask " + ws().mask_us +
                    " --method sidwt --eps 0 --out " + out)
                .code == 3);
    const std::string first = slurp(out);

    const RunResult r = run_cli("rerun --manifest " + out + ".manifest.json");
    CHECK(r.code == 3);  // the replay reproduces the warning too
    CHECK(r.out.find("rerun recon") != std::string::npos);
    CHECK(slurp(out) == first);

    CHECK(run_cli("rerun --manifest " + (ws().dir / "none.json").string()).code == 2);
}

TEST_CASE("cli: eval of an image against itself is exact") {
    const std::string csv = (ws().dir / "eval.csv").string();
    const RunResult r = run_cli("eval --recon " + ws().phantom + " --truth " + ws().phantom +
                                " --out " + csv);
    CHECK(r.code == 0);
    CHECK(r.out.find("rlne 0 ") != std::string::npos);
    CHECK(r.out.find("ssim 1") != std::string::npos);
    CHECK(slurp(csv).rfind("case,pattern,rate,method,penalty,rlne,ssim\n", 0) == 0);
}

TEST_CASE("cli: sweep_sparsity writes the decay CSV") {
    const std::string csv = (ws().dir / "sweep.csv").string();
    const RunResult r = run_cli("sweep_sparsity --image " + ws().phantom +
                                " --transforms haar2d,dct2d --fractions 0.1,1.0 --out " + csv);
    CHECK(r.code == 0);

    std::ifstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "transform,fraction,rlne");
    int rows = 0;
    double last_rlne = -1.0;
    while (std::getline(in, line)) {
        ++rows;
        last_rlne = std::stod(line.substr(line.rfind(',') + 1));
    }
    CHECK(rows == 4);
    CHECK(last_rlne < 1e-10);  // dct2d at fraction 1.0

    CHECK(run_cli("sweep_sparsity --image " + ws().phantom +
                  " --transforms haar2d --fractions 1.5 --out " + csv)
              .code == 2);
}

TEST_CASE("cli: corrupt inputs give the io-error exit code") {
    const std::string bad = (ws().dir / "bad.cimg").string();
    std::ofstream(bad, std::ios::binary) << "not an image";
    CHECK(run_cli("recon --kspace " + bad + " --mask " + ws().mask_full +
                  " --method zerofill --out " + (ws().dir / "o.cimg").string())
              .code == 4);
    CHECK(run_cli("eval --recon " + bad + " --truth " + ws().phantom + " --out " +
                  (ws().dir / "e.csv").string())
              .code == 4);
}

TEST_CASE("cli: usage errors") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("transmogrify --foo 1").code == 2);
    CHECK(run_cli("recon --kspace " + ws().y_full + " --mask " + ws().mask_full +
                  " --method warp --out " + (ws().dir / "w.cimg").string())
              .code == 2);
}
