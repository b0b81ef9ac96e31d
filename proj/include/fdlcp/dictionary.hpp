#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fdlcp/direction.hpp"
#include "fdlcp/image.hpp"

namespace fdlcp {

using Matrix = Eigen::MatrixXcd;

// max_iterations: class specialization converges slowly from the Haar start
// (the coefficient support stabilizes early and the orthogonal update then
// rotates in small steps), so the budget must be generous; stagnant classes
// exit early through tau_d.
struct TrainConfig {
    double eta = 0.2;      // hard threshold
    int max_iterations = 100;
    double tau_d = 1e-4;   // relative objective-change tolerance
};

// Full-depth orthonormal 2D Haar dictionary (tensor product of 1D bases).
// Columns are atoms; atom 0 is the constant vector 1/n. n must be a power
// of 2.
Matrix haar2d_dictionary(int n);

// Standard orthonormal type-II 2D DCT dictionary (tensor product), columns
// are atoms. Used by the sparsity sweep.
Matrix dct2d_dictionary(int n);

inline cd hard_threshold(cd c, double eta) {
    return std::abs(c) >= eta ? c : cd(0.0, 0.0);  // boundary kept
}

// A = H_eta(D^H X), elementwise.
Matrix sparse_code(const Matrix& D, const Matrix& X, double eta);

// D = P V^H from the SVD X A^H = P Lambda V^H: the orthogonal minimizer of
// ||X - DA||_F. Rank-deficient inputs are completed by the SVD backend's
// deterministic orthonormal extension.
Matrix update_dictionary(const Matrix& X, const Matrix& A);

struct TrainTrace {
    std::vector<double> objective;  // per iteration, non-increasing
    int iterations = 0;
};

// Alternates sparse_code / update_dictionary from D_init until the objective
// ||X - DA||_F^2 + eta^2 ||A||_0 changes by relative < tau_d or the
// iteration budget runs out. Empty X returns D_init unchanged.
Matrix train_class_dictionary(const Matrix& X, const TrainConfig& cfg, const Matrix& D_init,
                              TrainTrace* trace = nullptr);

struct DictionaryBank {
    int n = 0;
    int Q = 0;
    double eta = 0.2;
    std::vector<Matrix> dicts;       // size Q; unpopulated classes hold Haar
    std::vector<uint8_t> populated;  // size Q
    std::vector<int> iterations;     // size Q, 0 when untrained
    std::vector<double> final_objective;  // size Q, 0 when untrained
};

// One dictionary per populated class, trained on that class's patches after
// dividing by the image's peak magnitude. Unpopulated classes keep the
// initial 2D Haar dictionary.
DictionaryBank train_bank(const Image& img, const ClassMap& cmap, const PatchConfig& pcfg,
                          const TrainConfig& tcfg);

// ".dbank": "FDLCP-DBANK 1\n" "<n> <Q> <num_populated>\n", then per populated
// class a little-endian uint16 index followed by n^4 float64 (re, im) pairs,
// column-major. Round-trips bit-exactly.
void save_dbank(const std::string& path, const DictionaryBank& bank);
DictionaryBank load_dbank(const std::string& path);

}  // namespace fdlcp
