#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdlcp/image.hpp"

namespace fdlcp {

// Fixed table of candidate pixel reorderings, one per geometric direction.
//
// Candidates are the primitive integer vectors (p, q), |p|,|q| <= n-1,
// identified mod pi (canonical sense p > 0, or p = 0 and q > 0) — the
// directions of all lines joining two pixel centers of the n x n grid.
// The permutation for (p, q) sorts pixels by the projected coordinate along
// the direction line, k = (2r-(n-1))p + (2c-(n-1))q, ties broken by
// row-major pixel index. Candidates that induce the same permutation
// collapse into a single class (at n=8 exactly one pair does: (1,0) and
// (7,1) both order pixels row-by-row), leaving 71 distinct directions.
struct DirectionSet {
    int n = 0;
    int Q = 0;
    std::vector<std::vector<int>> permutations;  // Q x n^2; out[i] = v[perm[i]]
    std::vector<double> angles;         // representative angle in [0, pi)
    std::vector<std::pair<int, int>> vectors;  // representative (p, q)
};

DirectionSet build_direction_set(int n);

// Per-patch class assignment over an image.
struct ClassMap {
    int Q = 0;
    std::vector<uint16_t> classes;           // omega_j, patch order
    std::vector<std::vector<int>> by_class;  // patch-index lists, size Q
};

// Applies the omega-th permutation to the patch values.
std::vector<cd> reorder(const Patch& patch, int omega, const DirectionSet& ds);

// Full-depth orthonormal 1D Haar transform of a length-2^k vector.
// Coefficient order: [scaling, coarsest details, ..., finest details].
std::vector<cd> haar1d(const std::vector<cd>& v);

// Residual of the omega-th candidate: energy outside the ceil(0.25*n^2)
// largest-magnitude Haar coefficients of the reordered patch.
double direction_residual(const Patch& patch, int omega, const DirectionSet& ds);

// argmin over candidates of direction_residual; ties -> smallest index.
int estimate_direction(const Patch& patch, const DirectionSet& ds);

ClassMap classify_patches(const Image& img, const PatchConfig& cfg, const DirectionSet& ds);

// ".cmap": "FDLCP-CMAP 1\n" "<J> <Q>\n" then J little-endian uint16 indices.
void save_cmap(const std::string& path, const ClassMap& cm);
ClassMap load_cmap(const std::string& path);

}  // namespace fdlcp
