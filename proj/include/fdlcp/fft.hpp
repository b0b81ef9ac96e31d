#pragma once

#include <vector>

#include "fdlcp/common.hpp"

namespace fdlcp {

// Unitary 2D DFT pair: both directions scaled by 1/sqrt(n1*n2).
// Standard FFT index ordering (DC at [0,0]). In/out may alias.
void fft2(const std::vector<cd>& in, std::vector<cd>& out, int n1, int n2);
void ifft2(const std::vector<cd>& in, std::vector<cd>& out, int n1, int n2);

// Move DC from index 0 to floor(N/2) (per axis); ifftshift is the inverse.
std::vector<cd> fftshift(const std::vector<cd>& in, int n1, int n2);
std::vector<cd> ifftshift(const std::vector<cd>& in, int n1, int n2);

}  // namespace fdlcp
