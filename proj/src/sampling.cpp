#include "fdlcp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fdlcp/fft.hpp"

namespace fdlcp {

int SamplingMask::count() const {
    return static_cast<int>(std::count(kept.begin(), kept.end(), uint8_t(1)));
}

Image SamplingMask::to_image() const {
    Image img(n1, n2);
    for (size_t i = 0; i < kept.size(); ++i) img.data[i] = cd(kept[i] ? 1.0 : 0.0, 0.0);
    return img;
}

SamplingMask SamplingMask::from_image(const Image& img) {
    SamplingMask m(img.n1, img.n2);
    for (size_t i = 0; i < img.data.size(); ++i) m.kept[i] = std::abs(img.data[i]) > 0.5 ? 1 : 0;
    return m;
}

Image KSpace::to_image() const {
    Image img(n1, n2);
    img.data = data;
    return img;
}

KSpace KSpace::from_image(const Image& img) {
    KSpace k(img.n1, img.n2);
    k.data = img.data;
    return k;
}

namespace {

double canonical_u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Weighted sampling without replacement (Efraimidis–Spirakis): top-k keys
// u^(1/w). Candidates are visited in index order; ties break by index.
std::vector<int> weighted_without_replacement(const std::vector<int>& candidates,
                                              const std::vector<double>& weights, int k,
                                              std::mt19937_64& rng) {
    struct Keyed {
        double key;
        int idx;
    };
    std::vector<Keyed> keys;
    keys.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        const double u = canonical_u01(rng);
        keys.push_back({std::pow(u, 1.0 / weights[i]), candidates[i]});
    }
    std::sort(keys.begin(), keys.end(), [](const Keyed& a, const Keyed& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.idx < b.idx;
    });
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k && i < static_cast<int>(keys.size()); ++i) out.push_back(keys[i].idx);
    return out;
}

}  // namespace

SamplingMask make_cartesian_mask(int n1, int n2, double rate, double center_fraction,
                                 uint64_t seed) {
    if (!(rate > 0.0 && rate <= 1.0)) throw ConfigError("rate must be in (0, 1]");
    if (!(center_fraction >= 0.0 && center_fraction < rate))
        throw ConfigError("center_fraction must satisfy 0 <= cf < rate");
    SamplingMask m(n1, n2);
    const int target = std::max<int>(1, std::lround(rate * n1));
    int block = static_cast<int>(std::ceil(center_fraction * n1));
    block = std::min(block, target);

    std::vector<uint8_t> row_kept(n1, 0);
    const int dc = m.dc_r();
    const int start = dc - block / 2;
    for (int r = start; r < start + block; ++r) row_kept[r] = 1;

    const double dmax = std::max(dc, n1 - 1 - dc);
    std::vector<int> cands;
    std::vector<double> w;
    for (int r = 0; r < n1; ++r) {
        if (row_kept[r]) continue;
        cands.push_back(r);
        const double d = std::abs(r - dc);
        w.push_back(std::pow(1.0 + d / dmax, -2.0));
    }
    std::mt19937_64 rng(seed);
    for (int r : weighted_without_replacement(cands, w, target - block, rng)) row_kept[r] = 1;

    for (int r = 0; r < n1; ++r)
        if (row_kept[r])
            for (int c = 0; c < n2; ++c) m.kept[static_cast<size_t>(r) * n2 + c] = 1;
    return m;
}

SamplingMask make_random2d_mask(int n1, int n2, double rate, uint64_t seed) {
    if (!(rate > 0.0 && rate <= 1.0)) throw ConfigError("rate must be in (0, 1]");
    SamplingMask m(n1, n2);
    const long total = static_cast<long>(n1) * n2;
    const int target = std::max<int>(1, std::lround(rate * total));
    const int dcr = m.dc_r(), dcc = m.dc_c();
    const size_t dc_idx = static_cast<size_t>(dcr) * n2 + dcc;
    m.kept[dc_idx] = 1;

    const double dmax =
        std::hypot(std::max(dcr, n1 - 1 - dcr), std::max(dcc, n2 - 1 - dcc));
    std::vector<int> cands;
    std::vector<double> w;
    cands.reserve(total - 1);
    w.reserve(total - 1);
    for (int r = 0; r < n1; ++r) {
        for (int c = 0; c < n2; ++c) {
            const size_t i = static_cast<size_t>(r) * n2 + c;
            if (i == dc_idx) continue;
            cands.push_back(static_cast<int>(i));
            const double d = std::hypot(r - dcr, c - dcc);
            w.push_back(std::pow(1.0 + d / dmax, -2.0));
        }
    }
    std::mt19937_64 rng(seed);
    for (int i : weighted_without_replacement(cands, w, target - 1, rng)) m.kept[i] = 1;
    return m;
}

namespace {

// Spoke offsets around the DC center. Angles in [0, pi/2) rasterize directly;
// [pi/2, pi) reuses the 90-degree rotation of the base spoke so that spokes
// at theta and theta+pi/2 are exact transposes of each other.
std::vector<std::pair<int, int>> spoke_offsets(double theta, double reach) {
    bool rotate = false;
    if (theta >= M_PI / 2) {
        theta -= M_PI / 2;
        rotate = true;
    }
    const double s = std::sin(theta), c = std::cos(theta);
    std::vector<std::pair<int, int>> out;
    for (double t = 0.0; t <= reach; t += 0.5) {
        int dr = static_cast<int>(std::lround(t * s));
        int dc = static_cast<int>(std::lround(t * c));
        if (rotate) {
            const int r2 = dc, c2 = -dr;
            dr = r2;
            dc = c2;
        }
        out.emplace_back(dr, dc);
        out.emplace_back(-dr, -dc);
    }
    return out;
}

}  // namespace

SamplingMask make_radial_mask_spokes(int n1, int n2, int spokes, uint64_t /*seed*/) {
    if (spokes < 1) throw ConfigError("spoke count must be >= 1");
    SamplingMask m(n1, n2);
    const int dcr = m.dc_r(), dcc = m.dc_c();
    const double reach =
        std::hypot(std::max(dcr, n1 - 1 - dcr), std::max(dcc, n2 - 1 - dcc)) + 1.0;
    for (int i = 0; i < spokes; ++i) {
        const double theta = i * M_PI / spokes;
        for (auto [dr, dc] : spoke_offsets(theta, reach)) {
            const int r = dcr + dr, c = dcc + dc;
            if (r >= 0 && r < n1 && c >= 0 && c < n2)
                m.kept[static_cast<size_t>(r) * n2 + c] = 1;
        }
    }
    return m;
}

SamplingMask make_radial_mask(int n1, int n2, double rate, uint64_t seed) {
    if (!(rate > 0.0 && rate <= 1.0)) throw ConfigError("rate must be in (0, 1]");
    const int max_spokes = 4 * std::max(n1, n2);
    for (int s = 1; s <= max_spokes; ++s) {
        SamplingMask m = make_radial_mask_spokes(n1, n2, s, seed);
        if (m.rate() >= rate) return m;
    }
    SamplingMask full(n1, n2);
    std::fill(full.kept.begin(), full.kept.end(), uint8_t(1));
    return full;
}

KSpace encode(const Image& x, const SamplingMask& mask) {
    if (x.n1 != mask.n1 || x.n2 != mask.n2) throw ConfigError("image/mask dims mismatch");
    std::vector<cd> freq;
    fft2(x.data, freq, x.n1, x.n2);
    freq = fftshift(freq, x.n1, x.n2);
    KSpace y(x.n1, x.n2);
    for (size_t i = 0; i < freq.size(); ++i) y.data[i] = mask.kept[i] ? freq[i] : cd(0.0, 0.0);
    return y;
}

Image adjoint(const KSpace& y) {
    std::vector<cd> freq = ifftshift(y.data, y.n1, y.n2);
    Image out(y.n1, y.n2);
    ifft2(freq, out.data, y.n1, y.n2);
    return out;
}

}  // namespace fdlcp
