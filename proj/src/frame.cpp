#include "fdlcp/frame.hpp"

#include <cmath>

namespace fdlcp {

AnalysisOperator::AnalysisOperator(const DictionaryBank& bank, const ClassMap& cmap,
                                   PatchConfig cfg, int n1, int n2)
    : bank_(bank), cmap_(cmap), cfg_(cfg), n1_(n1), n2_(n2) {
    if (cfg.stride != 1) throw ConfigError("tight frame requires stride 1");
    if (bank.n != cfg.n) throw ConfigError("bank patch size mismatch");
    J_ = patch_count(n1, n2, cfg);
    if (static_cast<size_t>(J_) != cmap.classes.size())
        throw ConfigError("class map size mismatch");
    nn_ = cfg.n * cfg.n;
    inv_sqrt_c_ = 1.0 / cfg.n;  // c = n^2 for stride 1
}

size_t AnalysisOperator::coeff_size() const {
    return static_cast<size_t>(J_) * nn_;
}

void AnalysisOperator::analyze(const std::vector<cd>& image, std::vector<cd>& coeffs) const {
    if (image.size() != static_cast<size_t>(n1_) * n2_) throw ConfigError("image size mismatch");
    coeffs.assign(coeff_size(), cd(0, 0));
    const int n = cfg_.n;
    // Patches in row-major origin order; j = r0*n2 + c0 for stride 1.
    for (int w = 0; w < cmap_.Q; ++w) {
        const std::vector<int>& idx = cmap_.by_class[w];
        if (idx.empty()) continue;
        const Matrix& D = bank_.dicts[w];
        Matrix X(nn_, static_cast<Eigen::Index>(idx.size()));
        for (size_t c = 0; c < idx.size(); ++c) {
            const int j = idx[c];
            const int r0 = j / n2_, c0 = j % n2_;
            Eigen::Index i = 0;
            for (int dr = 0; dr < n; ++dr) {
                const size_t row = static_cast<size_t>((r0 + dr) % n1_) * n2_;
                for (int dc = 0; dc < n; ++dc)
                    X(i++, static_cast<Eigen::Index>(c)) = image[row + (c0 + dc) % n2_];
            }
        }
        const Matrix A = D.adjoint() * X;
        for (size_t c = 0; c < idx.size(); ++c) {
            cd* dst = coeffs.data() + static_cast<size_t>(idx[c]) * nn_;
            for (int i = 0; i < nn_; ++i) dst[i] = A(i, static_cast<Eigen::Index>(c)) * inv_sqrt_c_;
        }
    }
}

void AnalysisOperator::synthesize(const std::vector<cd>& coeffs, std::vector<cd>& image) const {
    if (coeffs.size() != coeff_size()) throw ConfigError("coefficient length mismatch");
    image.assign(static_cast<size_t>(n1_) * n2_, cd(0, 0));
    const int n = cfg_.n;
    for (int w = 0; w < cmap_.Q; ++w) {
        const std::vector<int>& idx = cmap_.by_class[w];
        if (idx.empty()) continue;
        const Matrix& D = bank_.dicts[w];
        Matrix A(nn_, static_cast<Eigen::Index>(idx.size()));
        for (size_t c = 0; c < idx.size(); ++c) {
            const cd* src = coeffs.data() + static_cast<size_t>(idx[c]) * nn_;
            for (int i = 0; i < nn_; ++i) A(i, static_cast<Eigen::Index>(c)) = src[i];
        }
        const Matrix P = D * A;
        for (size_t c = 0; c < idx.size(); ++c) {
            const int j = idx[c];
            const int r0 = j / n2_, c0 = j % n2_;
            Eigen::Index i = 0;
            for (int dr = 0; dr < n; ++dr) {
                const size_t row = static_cast<size_t>((r0 + dr) % n1_) * n2_;
                for (int dc = 0; dc < n; ++dc)
                    image[row + (c0 + dc) % n2_] +=
                        P(i++, static_cast<Eigen::Index>(c)) * inv_sqrt_c_;
            }
        }
    }
}

}  // namespace fdlcp
