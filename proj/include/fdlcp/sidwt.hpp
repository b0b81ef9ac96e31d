#pragma once

#include "fdlcp/frame.hpp"

namespace fdlcp {

// Shift-invariant (undecimated, a-trous) Daubechies-4 wavelet analysis as a
// tight frame: each 1D filtering is scaled by 1/sqrt(2), so Psi^H Psi = I.
// Circular boundary. Coefficient layout: [LL_L | per level l = L..1:
// LH_l, HL_l, HH_l], each subband n1*n2.
class SidwtOperator : public FrameOperator {
public:
    SidwtOperator(int n1, int n2, int levels = 3);

    size_t coeff_size() const override;
    void analyze(const std::vector<cd>& image, std::vector<cd>& coeffs) const override;
    void synthesize(const std::vector<cd>& coeffs, std::vector<cd>& image) const override;

    int levels() const { return levels_; }

private:
    int n1_, n2_, levels_;
};

}  // namespace fdlcp
