#pragma once

#include <optional>

#include "fdlcp/image.hpp"

namespace fdlcp {

// RLNE = ||xhat - x||_2 / ||x||_2 on the complex data. Zero ground truth is
// a ConfigError.
double rlne(const Image& xhat, const Image& x);

enum class SsimMode { global, windowed };

// SSIM on magnitude images with k1 = 0.01, k2 = 0.03, population statistics.
// Global mode applies the formula once with whole-image moments; windowed
// mode averages it over all fully-contained 8x8 windows (stride 1, uniform
// weights; window side shrinks to min(8, N1, N2) for small images). L
// defaults to the peak magnitude of x (the ground truth); pass it explicitly
// to make the metric symmetric.
double ssim(const Image& xhat, const Image& x, SsimMode mode = SsimMode::windowed,
            std::optional<double> dynamic_range = std::nullopt);

struct MetricReport {
    double rlne = 0.0;
    double ssim_global = 0.0;
    double ssim_windowed = 0.0;
};

MetricReport compute_metrics(const Image& xhat, const Image& truth);

}  // namespace fdlcp
