#pragma once

#include <string>
#include <vector>

#include "fdlcp/dictionary.hpp"
#include "fdlcp/image.hpp"

namespace fdlcp {

struct SweepRow {
    std::string transform;
    double fraction = 0.0;
    double rlne = 0.0;
};

// Sparse-approximation decay study: for each transform, every stride-1 patch
// is approximated by its m = ceil(fraction * n^2) largest-magnitude
// coefficients, patches are reassembled by overlap averaging (divide by
// c = n^2), and the whole-image RLNE against the input is reported.
// Transforms: "haar2d", "dct2d" (fixed bases), "fdl" (one dictionary trained
// on all patches), "fdlcp" (per-direction-class dictionaries). Unknown
// transform names raise ConfigError.
std::vector<SweepRow> sweep_sparsity(const Image& img, const std::vector<std::string>& transforms,
                                     const std::vector<double>& fractions,
                                     const PatchConfig& pcfg = {}, const TrainConfig& tcfg = {});

// CSV with header "transform,fraction,rlne".
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace fdlcp
