#pragma once

#include <vector>

#include "fdlcp/dictionary.hpp"
#include "fdlcp/direction.hpp"
#include "fdlcp/image.hpp"

namespace fdlcp {

// Abstract tight-frame operator (Phi with Phi^H Phi = I); the ADMM solver is
// written against this interface so the dictionary frame and the SIDWT
// share the same reconstruction machinery.
class FrameOperator {
public:
    virtual ~FrameOperator() = default;
    virtual size_t coeff_size() const = 0;
    virtual void analyze(const std::vector<cd>& image, std::vector<cd>& coeffs) const = 0;
    virtual void synthesize(const std::vector<cd>& coeffs, std::vector<cd>& image) const = 0;
};

// Patch-dictionary tight frame: block j of the coefficients is
// (1/sqrt(c)) D_{omega_j}^H R_j x with c = n^2 (stride 1, periodic wrap).
class AnalysisOperator : public FrameOperator {
public:
    AnalysisOperator(const DictionaryBank& bank, const ClassMap& cmap, PatchConfig cfg,
                     int n1, int n2);

    size_t coeff_size() const override;
    void analyze(const std::vector<cd>& image, std::vector<cd>& coeffs) const override;
    void synthesize(const std::vector<cd>& coeffs, std::vector<cd>& image) const override;

    int patches() const { return J_; }
    int patch_dim() const { return nn_; }

private:
    const DictionaryBank& bank_;
    const ClassMap& cmap_;
    PatchConfig cfg_;
    int n1_, n2_, J_, nn_;
    double inv_sqrt_c_;
};

}  // namespace fdlcp
