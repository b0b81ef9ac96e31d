#include "fdlcp/sidwt.hpp"

#include <array>
#include <cmath>

namespace fdlcp {

namespace {

std::array<double, 4> db4_lowpass() {
    const double s3 = std::sqrt(3.0);
    const double norm = 4.0 * std::sqrt(2.0);
    return {(1.0 + s3) / norm, (3.0 + s3) / norm, (3.0 - s3) / norm, (1.0 - s3) / norm};
}

std::array<double, 4> db4_highpass() {
    const auto h = db4_lowpass();
    return {h[3], -h[2], h[1], -h[0]};  // g[k] = (-1)^k h[3-k]
}

using Grid = std::vector<cd>;

// Circular correlation along rows (axis=1) or columns (axis=0) with the
// filter dilated by `dil`, scaled by 1/sqrt(2). adjoint=true applies the
// transpose (circular convolution).
void filter_pass(const Grid& in, Grid& out, int n1, int n2, const std::array<double, 4>& f,
                 int dil, int axis, bool adjoint) {
    out.assign(in.size(), cd(0, 0));
    const double s = 1.0 / std::sqrt(2.0);
    if (axis == 1) {
        for (int r = 0; r < n1; ++r) {
            const cd* src = in.data() + static_cast<size_t>(r) * n2;
            cd* dst = out.data() + static_cast<size_t>(r) * n2;
            for (int c = 0; c < n2; ++c) {
                cd acc(0, 0);
                for (int k = 0; k < 4; ++k) {
                    const int off = adjoint ? (c - k * dil) : (c + k * dil);
                    acc += f[k] * src[((off % n2) + n2) % n2];
                }
                dst[c] = acc * s;
            }
        }
    } else {
        for (int c = 0; c < n2; ++c) {
            for (int r = 0; r < n1; ++r) {
                cd acc(0, 0);
                for (int k = 0; k < 4; ++k) {
                    const int off = adjoint ? (r - k * dil) : (r + k * dil);
                    acc += f[k] * in[static_cast<size_t>(((off % n1) + n1) % n1) * n2 + c];
                }
                out[static_cast<size_t>(r) * n2 + c] = acc * s;
            }
        }
    }
}

}  // namespace

SidwtOperator::SidwtOperator(int n1, int n2, int levels) : n1_(n1), n2_(n2), levels_(levels) {
    if (n1 < 8 || n2 < 8) throw ConfigError("sidwt needs dims >= 8");
    if (levels < 1) throw ConfigError("sidwt needs >= 1 level");
}

size_t SidwtOperator::coeff_size() const {
    return static_cast<size_t>(3 * levels_ + 1) * n1_ * n2_;
}

void SidwtOperator::analyze(const std::vector<cd>& image, std::vector<cd>& coeffs) const {
    if (image.size() != static_cast<size_t>(n1_) * n2_) throw ConfigError("image size mismatch");
    const auto h = db4_lowpass();
    const auto g = db4_highpass();
    const size_t plane = static_cast<size_t>(n1_) * n2_;
    coeffs.assign(coeff_size(), cd(0, 0));

    Grid s = image, rowL, rowH, tmp;
    for (int l = 1; l <= levels_; ++l) {
        const int dil = 1 << (l - 1);
        filter_pass(s, rowL, n1_, n2_, h, dil, 1, false);
        filter_pass(s, rowH, n1_, n2_, g, dil, 1, false);
        // subband slots: [LL | level L first] -> level l occupies blocks
        // 1 + 3*(levels - l) .. +2
        const size_t base = (1 + 3 * static_cast<size_t>(levels_ - l)) * plane;
        filter_pass(rowL, tmp, n1_, n2_, g, dil, 0, false);  // LH
        std::copy(tmp.begin(), tmp.end(), coeffs.begin() + base);
        filter_pass(rowH, tmp, n1_, n2_, h, dil, 0, false);  // HL
        std::copy(tmp.begin(), tmp.end(), coeffs.begin() + base + plane);
        filter_pass(rowH, tmp, n1_, n2_, g, dil, 0, false);  // HH
        std::copy(tmp.begin(), tmp.end(), coeffs.begin() + base + 2 * plane);
        filter_pass(rowL, tmp, n1_, n2_, h, dil, 0, false);  // LL -> next level
        s = tmp;
    }
    std::copy(s.begin(), s.end(), coeffs.begin());
}

void SidwtOperator::synthesize(const std::vector<cd>& coeffs, std::vector<cd>& image) const {
    if (coeffs.size() != coeff_size()) throw ConfigError("coefficient length mismatch");
    const auto h = db4_lowpass();
    const auto g = db4_highpass();
    const size_t plane = static_cast<size_t>(n1_) * n2_;

    Grid s(coeffs.begin(), coeffs.begin() + plane);  // LL at the deepest level
    Grid colL, colH, tmp, band;
    for (int l = levels_; l >= 1; --l) {
        const int dil = 1 << (l - 1);
        const size_t base = (1 + 3 * static_cast<size_t>(levels_ - l)) * plane;
        // column-adjoint combinations feeding the row-adjoint passes
        filter_pass(s, colL, n1_, n2_, h, dil, 0, true);
        band.assign(coeffs.begin() + base, coeffs.begin() + base + plane);  // LH
        filter_pass(band, tmp, n1_, n2_, g, dil, 0, true);
        for (size_t i = 0; i < plane; ++i) colL[i] += tmp[i];
        band.assign(coeffs.begin() + base + plane, coeffs.begin() + base + 2 * plane);  // HL
        filter_pass(band, colH, n1_, n2_, h, dil, 0, true);
        band.assign(coeffs.begin() + base + 2 * plane, coeffs.begin() + base + 3 * plane);
        filter_pass(band, tmp, n1_, n2_, g, dil, 0, true);  // HH
        for (size_t i = 0; i < plane; ++i) colH[i] += tmp[i];

        filter_pass(colL, s, n1_, n2_, h, dil, 1, true);
        filter_pass(colH, tmp, n1_, n2_, g, dil, 1, true);
        for (size_t i = 0; i < plane; ++i) s[i] += tmp[i];
    }
    image = std::move(s);
}

}  // namespace fdlcp
