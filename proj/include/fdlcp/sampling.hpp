#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdlcp/image.hpp"

namespace fdlcp {

// Binary k-space acquisition pattern, stored DC-centered (DC at
// [floor(N1/2), floor(N2/2)]), matching the on-disk convention.
struct SamplingMask {
    int n1 = 0;
    int n2 = 0;
    std::vector<uint8_t> kept;  // row-major, 0/1

    SamplingMask() = default;
    SamplingMask(int height, int width)
        : n1(height), n2(width), kept(static_cast<size_t>(height) * width, 0) {}

    int count() const;
    double rate() const { return static_cast<double>(count()) / (static_cast<double>(n1) * n2); }
    int dc_r() const { return n1 / 2; }
    int dc_c() const { return n2 / 2; }

    Image to_image() const;  // 0/1 grid for .cimg storage
    static SamplingMask from_image(const Image& img);
};

// Measured k-space on the full grid, zero at unsampled locations; DC-centered.
struct KSpace {
    int n1 = 0;
    int n2 = 0;
    std::vector<cd> data;

    KSpace() = default;
    KSpace(int height, int width)
        : n1(height), n2(width), data(static_cast<size_t>(height) * width, cd(0, 0)) {}

    Image to_image() const;
    static KSpace from_image(const Image& img);
};

// Full phase-encode rows: a centered block of ceil(center_fraction*N1) rows
// always kept, the rest drawn without replacement with variable-density
// weights (1 + d/d_max)^-2. Deterministic in all arguments.
SamplingMask make_cartesian_mask(int n1, int n2, double rate, double center_fraction,
                                 uint64_t seed);

// Individual k-space points with the same radial variable-density weighting;
// the DC point is always kept.
SamplingMask make_random2d_mask(int n1, int n2, double rate, uint64_t seed);

// Union of spokes (grid rasterizations of lines through the DC center) at
// uniformly spaced angles in [0, pi). The seed is accepted for interface
// uniformity but unused: spokes are deterministic.
SamplingMask make_radial_mask_spokes(int n1, int n2, int spokes, uint64_t seed = 0);
// Smallest spoke count whose union reaches the target rate.
SamplingMask make_radial_mask(int n1, int n2, double rate, uint64_t seed = 0);

// y = U . FFT2(x), unitary normalization, output DC-centered with exact
// zeros at unsampled locations.
KSpace encode(const Image& x, const SamplingMask& mask);

// Zero-filling reconstruction: inverse unitary DFT of the zero-filled grid.
Image adjoint(const KSpace& y);

}  // namespace fdlcp
