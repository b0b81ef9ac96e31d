#include "fdlcp/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

namespace fdlcp {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Orthonormal full-depth 1D Haar analysis matrix W (W v = haar1d(v)).
Eigen::MatrixXd haar1d_matrix(int n) {
    Eigen::MatrixXd W(n, n);
    for (int i = 0; i < n; ++i) {
        std::vector<cd> e(n, cd(0, 0));
        e[i] = cd(1, 0);
        const std::vector<cd> h = haar1d(e);
        for (int k = 0; k < n; ++k) W(k, i) = h[k].real();
    }
    return W;
}

// Row-major patch vectorization: vec(W P W^T) = (W (x) W) vec(P).
Matrix kron_transform_dictionary(const Eigen::MatrixXd& W) {
    const int n = static_cast<int>(W.rows());
    Eigen::MatrixXd T(n * n, n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) T(a * n + b, i * n + j) = W(a, i) * W(b, j);
    return T.transpose().cast<cd>();  // atoms = rows of the analysis map
}

}  // namespace

Matrix haar2d_dictionary(int n) {
    if (!is_pow2(n)) throw ConfigError("haar2d dictionary needs power-of-2 n");
    return kron_transform_dictionary(haar1d_matrix(n));
}

Matrix dct2d_dictionary(int n) {
    if (n < 1) throw ConfigError("dct2d dictionary needs n >= 1");
    Eigen::MatrixXd W(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = (k == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int i = 0; i < n; ++i) W(k, i) = s * std::cos(M_PI * (2 * i + 1) * k / (2.0 * n));
    }
    return kron_transform_dictionary(W);
}

Matrix sparse_code(const Matrix& D, const Matrix& X, double eta) {
    if (D.rows() != X.rows()) throw ConfigError("sparse_code dims mismatch");
    Matrix A = D.adjoint() * X;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, j) = hard_threshold(A(i, j), eta);
    return A;
}

Matrix update_dictionary(const Matrix& X, const Matrix& A) {
    if (X.rows() != A.rows() || X.cols() != A.cols())
        throw ConfigError("update_dictionary dims mismatch");
    const Matrix M = X * A.adjoint();
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix P = svd.matrixU();
    Matrix V = svd.matrixV();
    // Phase convention: largest-|entry| of each left singular vector made
    // real positive; the paired rotation on V leaves P V^H unchanged.
    for (Eigen::Index k = 0; k < P.cols(); ++k) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < P.rows(); ++i) {
            const double m = std::abs(P(i, k));
            if (m > best) {
                best = m;
                imax = i;
            }
        }
        if (best > 0) {
            const cd phase = P(imax, k) / std::abs(P(imax, k));
            P.col(k) /= phase;
            V.col(k) /= phase;
        }
    }
    return P * V.adjoint();
}

namespace {

double objective(const Matrix& X, const Matrix& D, const Matrix& A, double eta) {
    const double fit = (X - D * A).squaredNorm();
    long nnz = 0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (A(i, j) != cd(0.0, 0.0)) ++nnz;
    return fit + eta * eta * static_cast<double>(nnz);
}

}  // namespace

Matrix train_class_dictionary(const Matrix& X, const TrainConfig& cfg, const Matrix& D_init,
                              TrainTrace* trace) {
    if (trace) {
        trace->objective.clear();
        trace->iterations = 0;
    }
    if (X.cols() == 0) return D_init;
    if (X.rows() != D_init.rows()) throw ConfigError("training data/dictionary dims mismatch");

    Matrix D = D_init;
    double prev = -1.0;
    for (int k = 1; k <= cfg.max_iterations; ++k) {
        const Matrix A = sparse_code(D, X, cfg.eta);
        const double f = objective(X, D, A, cfg.eta);
        if (trace) {
            trace->objective.push_back(f);
            trace->iterations = k;
        }
        D = update_dictionary(X, A);
        if (k > 1) {
            const double denom = std::max(prev, 1e-300);
            if (std::abs(prev - f) / denom < cfg.tau_d) break;
        }
        prev = f;
    }
    return D;
}

DictionaryBank train_bank(const Image& img, const ClassMap& cmap, const PatchConfig& pcfg,
                          const TrainConfig& tcfg) {
    DictionaryBank bank;
    bank.n = pcfg.n;
    bank.Q = cmap.Q;
    bank.eta = tcfg.eta;
    const Matrix haar = haar2d_dictionary(pcfg.n);
    bank.dicts.assign(cmap.Q, haar);
    bank.populated.assign(cmap.Q, 0);
    bank.iterations.assign(cmap.Q, 0);
    bank.final_objective.assign(cmap.Q, 0.0);

    const std::vector<Patch> patches = extract_patches(img, pcfg);
    if (patches.size() != cmap.classes.size())
        throw ConfigError("class map does not match image/patch config");
    const double peak = img.peak_magnitude();
    const double scale = peak > 0.0 ? 1.0 / peak : 1.0;
    const int nn = pcfg.n * pcfg.n;

    for (int w = 0; w < cmap.Q; ++w) {
        const std::vector<int>& idx = cmap.by_class[w];
        if (idx.empty()) continue;
        Matrix X(nn, static_cast<Eigen::Index>(idx.size()));
        for (size_t c = 0; c < idx.size(); ++c)
            for (int i = 0; i < nn; ++i) X(i, static_cast<Eigen::Index>(c)) =
                patches[idx[c]].values[i] * scale;
        if (X.norm() == 0.0) continue;  // degenerate class keeps Haar
        TrainTrace tr;
        bank.dicts[w] = train_class_dictionary(X, tcfg, haar, &tr);
        bank.populated[w] = 1;
        bank.iterations[w] = tr.iterations;
        bank.final_objective[w] = tr.objective.empty() ? 0.0 : tr.objective.back();
    }
    return bank;
}

void save_dbank(const std::string& path, const DictionaryBank& bank) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    const int num_pop =
        static_cast<int>(std::count(bank.populated.begin(), bank.populated.end(), uint8_t(1)));
    f << "FDLCP-DBANK 1\n" << bank.n << " " << bank.Q << " " << num_pop << "\n";
    const int nn = bank.n * bank.n;
    for (int w = 0; w < bank.Q; ++w) {
        if (!bank.populated[w]) continue;
        const uint16_t idx = static_cast<uint16_t>(w);
        f.write(reinterpret_cast<const char*>(&idx), sizeof(idx));
        // column-major, matching Eigen's layout
        f.write(reinterpret_cast<const char*>(bank.dicts[w].data()),
                static_cast<std::streamsize>(sizeof(cd) * nn * nn));
    }
    if (!f) throw IoError("write failed: " + path);
}

DictionaryBank load_dbank(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string magic;
    std::getline(f, magic);
    if (magic != "FDLCP-DBANK 1") throw IoError("bad magic in " + path);
    std::string dims;
    std::getline(f, dims);
    std::istringstream ds(dims);
    int n = 0, Q = 0, num_pop = 0;
    if (!(ds >> n >> Q >> num_pop) || n <= 0 || Q <= 0 || num_pop < 0 || num_pop > Q)
        throw IoError("bad dims in " + path);
    DictionaryBank bank;
    bank.n = n;
    bank.Q = Q;
    bank.dicts.assign(Q, haar2d_dictionary(n));
    bank.populated.assign(Q, 0);
    bank.iterations.assign(Q, 0);
    bank.final_objective.assign(Q, 0.0);
    const int nn = n * n;
    for (int i = 0; i < num_pop; ++i) {
        uint16_t idx = 0;
        f.read(reinterpret_cast<char*>(&idx), sizeof(idx));
        if (!f || idx >= Q) throw IoError("bad class record in " + path);
        Matrix D(nn, nn);
        f.read(reinterpret_cast<char*>(D.data()),
               static_cast<std::streamsize>(sizeof(cd) * nn * nn));
        if (f.gcount() != static_cast<std::streamsize>(sizeof(cd) * nn * nn))
            throw IoError("truncated dictionary in " + path);
        bank.dicts[idx] = std::move(D);
        bank.populated[idx] = 1;
    }
    return bank;
}

}  // namespace fdlcp
