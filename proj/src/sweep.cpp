#include "fdlcp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fdlcp/direction.hpp"
#include "fdlcp/metrics.hpp"

namespace fdlcp {

namespace {

// Gather all patches as columns of an n^2 x J matrix.
Matrix patch_matrix(const std::vector<Patch>& patches, int nn) {
    Matrix X(nn, static_cast<Eigen::Index>(patches.size()));
    for (size_t j = 0; j < patches.size(); ++j)
        for (int i = 0; i < nn; ++i) X(i, static_cast<Eigen::Index>(j)) = patches[j].values[i];
    return X;
}

// Keep the m largest-magnitude entries of each column (ties: lower row index
// wins), zero the rest.
void keep_largest(Matrix& A, int m) {
    const int nn = static_cast<int>(A.rows());
    std::vector<int> order(nn);
    std::vector<double> mag(nn);
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        for (int i = 0; i < nn; ++i) {
            order[i] = i;
            mag[i] = std::abs(A(i, j));
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return mag[a] > mag[b]; });
        for (int k = m; k < nn; ++k) A(order[k], j) = cd(0.0, 0.0);
    }
}

}  // namespace

std::vector<SweepRow> sweep_sparsity(const Image& img, const std::vector<std::string>& transforms,
                                     const std::vector<double>& fractions,
                                     const PatchConfig& pcfg, const TrainConfig& tcfg) {
    if (pcfg.stride != 1) throw ConfigError("sweep: stride must be 1");
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("sweep: fractions must lie in [0, 1]");
    const int nn = pcfg.n * pcfg.n;
    const std::vector<Patch> patches = extract_patches(img, pcfg);
    const int J = static_cast<int>(patches.size());
    const Matrix X = patch_matrix(patches, nn);

    std::vector<SweepRow> rows;
    for (const std::string& name : transforms) {
        // Per-class patch-index lists plus one dictionary per class; fixed
        // bases and "fdl" use a single class holding every patch.
        std::vector<Matrix> dicts;
        std::vector<std::vector<int>> groups;
        if (name == "haar2d" || name == "dct2d") {
            dicts.push_back(name == "haar2d" ? haar2d_dictionary(pcfg.n)
                                             : dct2d_dictionary(pcfg.n));
            groups.emplace_back(J);
            std::iota(groups[0].begin(), groups[0].end(), 0);
        } else if (name == "fdl") {
            const double peak = img.peak_magnitude();
            const Matrix Xs = peak > 0.0 ? Matrix(X / peak) : X;
            dicts.push_back(train_class_dictionary(Xs, tcfg, haar2d_dictionary(pcfg.n)));
            groups.emplace_back(J);
            std::iota(groups[0].begin(), groups[0].end(), 0);
        } else if (name == "fdlcp") {
            const DirectionSet ds = build_direction_set(pcfg.n);
            const ClassMap cmap = classify_patches(img, pcfg, ds);
            const DictionaryBank bank = train_bank(img, cmap, pcfg, tcfg);
            dicts = bank.dicts;
            groups = cmap.by_class;
        } else {
            throw ConfigError("sweep: unknown transform '" + name + "'");
        }

        // Analysis coefficients once per class, reused across fractions.
        std::vector<Matrix> coeffs(dicts.size());
        for (size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].empty()) continue;
            Matrix Xc(nn, static_cast<Eigen::Index>(groups[g].size()));
            for (size_t k = 0; k < groups[g].size(); ++k) Xc.col(k) = X.col(groups[g][k]);
            coeffs[g] = dicts[g].adjoint() * Xc;
        }

        for (double f : fractions) {
            const int m = std::min(nn, static_cast<int>(std::ceil(f * nn)));
            Image recon(img.n1, img.n2);
            for (size_t g = 0; g < groups.size(); ++g) {
                if (groups[g].empty()) continue;
                Matrix A = coeffs[g];
                keep_largest(A, m);
                Matrix P = dicts[g] * A;
                for (size_t k = 0; k < groups[g].size(); ++k) {
                    const Patch& p = patches[groups[g][k]];
                    for (int dr = 0; dr < pcfg.n; ++dr)
                        for (int dc = 0; dc < pcfg.n; ++dc) {
                            const int r = (p.origin_r + dr) % img.n1;
                            const int c = (p.origin_c + dc) % img.n2;
                            recon.at(r, c) += P(dr * pcfg.n + dc, static_cast<Eigen::Index>(k));
                        }
                }
            }
            const double inv_c = 1.0 / static_cast<double>(nn);
            for (cd& v : recon.data) v *= inv_c;
            rows.push_back({name, f, rlne(recon, img)});
        }
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open sweep file: " + path);
    out << "transform,fraction,rlne\n";
    out.precision(17);
    for (const auto& r : rows) out << r.transform << ',' << r.fraction << ',' << r.rlne << '\n';
    if (!out) throw IoError("failed writing sweep file: " + path);
}

}  // namespace fdlcp
