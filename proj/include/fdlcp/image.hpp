#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdlcp/common.hpp"

namespace fdlcp {

// Complex 2D image, row-major. Doubles as a generic complex grid container
// (k-space grids and masks reuse the same file format).
struct Image {
    int n1 = 0;  // height (rows)
    int n2 = 0;  // width (cols)
    std::vector<cd> data;  // n1*n2, row-major

    Image() = default;
    Image(int height, int width, cd fill = cd(0.0, 0.0))
        : n1(height), n2(width), data(static_cast<size_t>(height) * width, fill) {
        if (height <= 0 || width <= 0) throw ConfigError("image dims must be positive");
    }

    cd& at(int r, int c) { return data[static_cast<size_t>(r) * n2 + c]; }
    const cd& at(int r, int c) const { return data[static_cast<size_t>(r) * n2 + c]; }
    size_t size() const { return data.size(); }

    double peak_magnitude() const;
    double norm2() const;  // l2 norm of the complex data
};

struct PatchConfig {
    int n = 8;       // patch side
    int stride = 1;  // origin step; boundary handling is always periodic wrap
};

struct Patch {
    std::vector<cd> values;  // n*n, row-major within the block
    int origin_r = 0;
    int origin_c = 0;
};

// Number of patches for the config (periodic wrap): origins are every
// multiple of stride along each axis.
int patch_count(int n1, int n2, const PatchConfig& cfg);

// Overlapping patches in row-major origin order, periodic wrap at borders.
std::vector<Patch> extract_patches(const Image& img, const PatchConfig& cfg);

// Sum of R_j^T p_j: adds each patch value back at its (wrapped) source pixel.
// With stride 1 this equals n^2 * identity when fed extract_patches output.
Image assemble_adjoint(const std::vector<Patch>& patches, int n1, int n2,
                       const PatchConfig& cfg);

enum class PhantomKind { shepp_logan, directional_grid };

// Deterministic real-valued phantom with peak magnitude exactly 1.0. N >= 32.
Image make_phantom(int N, PhantomKind kind);

PhantomKind phantom_kind_from_string(const std::string& s);

// ".cimg" container: "FDLCP-CIMG 1\n" "<N1> <N2>\n" then N1*N2 little-endian
// float64 (re, im) pairs, row-major. Round-trips bit-exactly.
void save_cimg(const std::string& path, const Image& img);
Image load_cimg(const std::string& path);

}  // namespace fdlcp
