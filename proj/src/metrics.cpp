#include "fdlcp/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace fdlcp {

double rlne(const Image& xhat, const Image& x) {
    if (xhat.n1 != x.n1 || xhat.n2 != x.n2) throw ConfigError("rlne: dimension mismatch");
    const double denom = x.norm2();
    if (denom == 0.0) throw ConfigError("rlne: zero ground truth");
    double num2 = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) {
        const cd diff = xhat.data[i] - x.data[i];
        num2 += std::norm(diff);
    }
    return std::sqrt(num2) / denom;
}

namespace {

// One SSIM evaluation over a rectangular window of the magnitude images.
double ssim_window(const std::vector<double>& a, const std::vector<double>& b, int n2, int r0,
                   int c0, int h, int w, double c1, double c2) {
    const double inv = 1.0 / (static_cast<double>(h) * w);
    double mu_a = 0.0, mu_b = 0.0;
    for (int r = r0; r < r0 + h; ++r)
        for (int c = c0; c < c0 + w; ++c) {
            mu_a += a[static_cast<size_t>(r) * n2 + c];
            mu_b += b[static_cast<size_t>(r) * n2 + c];
        }
    mu_a *= inv;
    mu_b *= inv;
    double var_a = 0.0, var_b = 0.0, cov = 0.0;
    for (int r = r0; r < r0 + h; ++r)
        for (int c = c0; c < c0 + w; ++c) {
            const double da = a[static_cast<size_t>(r) * n2 + c] - mu_a;
            const double db = b[static_cast<size_t>(r) * n2 + c] - mu_b;
            var_a += da * da;
            var_b += db * db;
            cov += da * db;
        }
    var_a *= inv;
    var_b *= inv;
    cov *= inv;
    const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
    const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
    return num / den;
}

}  // namespace

double ssim(const Image& xhat, const Image& x, SsimMode mode,
            std::optional<double> dynamic_range) {
    if (xhat.n1 != x.n1 || xhat.n2 != x.n2) throw ConfigError("ssim: dimension mismatch");
    const int n1 = x.n1, n2 = x.n2;
    std::vector<double> a(x.data.size()), b(x.data.size());
    for (size_t i = 0; i < x.data.size(); ++i) {
        a[i] = std::abs(xhat.data[i]);
        b[i] = std::abs(x.data[i]);
    }
    const double L = dynamic_range ? *dynamic_range : x.peak_magnitude();
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);
    if (mode == SsimMode::global) {
        return ssim_window(a, b, n2, 0, 0, n1, n2, c1, c2);
    }
    const int w = std::min({8, n1, n2});
    double acc = 0.0;
    long count = 0;
    for (int r = 0; r + w <= n1; ++r)
        for (int c = 0; c + w <= n2; ++c) {
            acc += ssim_window(a, b, n2, r, c, w, w, c1, c2);
            ++count;
        }
    return acc / static_cast<double>(count);
}

MetricReport compute_metrics(const Image& xhat, const Image& truth) {
    MetricReport rep;
    rep.rlne = rlne(xhat, truth);
    rep.ssim_global = ssim(xhat, truth, SsimMode::global);
    rep.ssim_windowed = ssim(xhat, truth, SsimMode::windowed);
    return rep;
}

}  // namespace fdlcp
