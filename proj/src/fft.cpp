#include "fdlcp/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace fdlcp {

namespace {

// FFTW plans are not thread-safe to create; cache one per (n1, n2, sign).
// FFTW_UNALIGNED lets a cached plan execute on any buffer.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    void execute(const std::vector<cd>& in, std::vector<cd>& out, int n1, int n2, int sign) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_tuple(n1, n2, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cd> dummy(static_cast<size_t>(n1) * n2);
                plan = fftw_plan_dft_2d(
                    n1, n2, reinterpret_cast<fftw_complex*>(dummy.data()),
                    reinterpret_cast<fftw_complex*>(dummy.data()), sign,
                    FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        std::vector<cd> tmp = in;  // fftw_execute_dft may clobber input
        out.resize(tmp.size());
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }

private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace

void fft2(const std::vector<cd>& in, std::vector<cd>& out, int n1, int n2) {
    PlanCache::instance().execute(in, out, n1, n2, FFTW_FORWARD);
    const double s = 1.0 / std::sqrt(static_cast<double>(n1) * n2);
    for (cd& v : out) v *= s;
}

void ifft2(const std::vector<cd>& in, std::vector<cd>& out, int n1, int n2) {
    PlanCache::instance().execute(in, out, n1, n2, FFTW_BACKWARD);
    const double s = 1.0 / std::sqrt(static_cast<double>(n1) * n2);
    for (cd& v : out) v *= s;
}

namespace {
std::vector<cd> roll(const std::vector<cd>& in, int n1, int n2, int s1, int s2) {
    std::vector<cd> out(in.size());
    for (int r = 0; r < n1; ++r) {
        const int rr = (r + s1) % n1;
        for (int c = 0; c < n2; ++c) {
            const int cc = (c + s2) % n2;
            out[static_cast<size_t>(rr) * n2 + cc] = in[static_cast<size_t>(r) * n2 + c];
        }
    }
    return out;
}
}  // namespace

std::vector<cd> fftshift(const std::vector<cd>& in, int n1, int n2) {
    return roll(in, n1, n2, n1 / 2, n2 / 2);
}

std::vector<cd> ifftshift(const std::vector<cd>& in, int n1, int n2) {
    return roll(in, n1, n2, n1 - n1 / 2, n2 - n2 / 2);
}

}  // namespace fdlcp
