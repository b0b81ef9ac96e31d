#include "fdlcp/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fdlcp {

double Image::peak_magnitude() const {
    double peak = 0.0;
    for (const cd& v : data) peak = std::max(peak, std::abs(v));
    return peak;
}

double Image::norm2() const {
    double s = 0.0;
    for (const cd& v : data) s += std::norm(v);
    return std::sqrt(s);
}

int patch_count(int n1, int n2, const PatchConfig& cfg) {
    if (cfg.n <= 0 || cfg.stride <= 0) throw ConfigError("patch size/stride must be positive");
    if (cfg.n > std::min(n1, n2)) throw ConfigError("patch size exceeds image side");
    const int rows = (n1 + cfg.stride - 1) / cfg.stride;
    const int cols = (n2 + cfg.stride - 1) / cfg.stride;
    return rows * cols;
}

std::vector<Patch> extract_patches(const Image& img, const PatchConfig& cfg) {
    const int J = patch_count(img.n1, img.n2, cfg);
    std::vector<Patch> out;
    out.reserve(J);
    for (int r0 = 0; r0 < img.n1; r0 += cfg.stride) {
        for (int c0 = 0; c0 < img.n2; c0 += cfg.stride) {
            Patch p;
            p.origin_r = r0;
            p.origin_c = c0;
            p.values.resize(static_cast<size_t>(cfg.n) * cfg.n);
            size_t k = 0;
            for (int dr = 0; dr < cfg.n; ++dr) {
                const int r = (r0 + dr) % img.n1;
                for (int dc = 0; dc < cfg.n; ++dc) {
                    const int c = (c0 + dc) % img.n2;
                    p.values[k++] = img.at(r, c);
                }
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

Image assemble_adjoint(const std::vector<Patch>& patches, int n1, int n2,
                       const PatchConfig& cfg) {
    if (static_cast<int>(patches.size()) != patch_count(n1, n2, cfg))
        throw ConfigError("patch count inconsistent with config");
    Image out(n1, n2);
    for (const Patch& p : patches) {
        size_t k = 0;
        for (int dr = 0; dr < cfg.n; ++dr) {
            const int r = (p.origin_r + dr) % n1;
            for (int dc = 0; dc < cfg.n; ++dc) {
                const int c = (p.origin_c + dc) % n2;
                out.at(r, c) += p.values[k++];
            }
        }
    }
    return out;
}

namespace {

struct Ellipse {
    double intensity, a, b, x0, y0, phi_deg;
};

// Canonical Shepp–Logan ellipse table.
constexpr Ellipse kSheppLogan[10] = {
    {2.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0},
    {-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0},
    {-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0},
    {-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0},
    {0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0},
    {0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0},
    {0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0},
    {0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0},
    {0.01, 0.0230, 0.0230, 0.00, -0.6060, 0.0},
    {0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0},
};

Image shepp_logan(int N) {
    Image img(N, N);
    for (int r = 0; r < N; ++r) {
        const double y = 1.0 - (r + 0.5) * 2.0 / N;
        for (int c = 0; c < N; ++c) {
            const double x = (c + 0.5) * 2.0 / N - 1.0;
            double v = 0.0;
            for (const Ellipse& e : kSheppLogan) {
                const double phi = e.phi_deg * M_PI / 180.0;
                const double ct = std::cos(phi), st = std::sin(phi);
                const double xr = (x - e.x0) * ct + (y - e.y0) * st;
                const double yr = -(x - e.x0) * st + (y - e.y0) * ct;
                if (xr * xr / (e.a * e.a) + yr * yr / (e.b * e.b) <= 1.0) v += e.intensity;
            }
            img.at(r, c) = cd(v, 0.0);
        }
    }
    return img;
}

Image directional_grid(int N) {
    Image img(N, N);
    const int h = N / 2;
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) {
            // quadrant stripe phase: TL horizontal stripes, TR 45 degrees,
            // BL vertical stripes, BR 135 degrees
            long t;
            if (r < h && c < h) t = r;
            else if (r < h) t = static_cast<long>(r) - c;
            else if (c < h) t = c;
            else t = static_cast<long>(r) + c;
            // smooth stripe profile, period ~7.9 px; the irrational period
            // keeps stripe values within any 8x8 patch pairwise distinct so
            // direction estimates resolve without accidental ties
            img.at(r, c) = cd(0.5 + 0.5 * std::sin(0.8 * t + 0.25), 0.0);
        }
    }
    return img;
}

}  // namespace

Image make_phantom(int N, PhantomKind kind) {
    if (N < 32) throw ConfigError("phantom size must be >= 32");
    Image img = (kind == PhantomKind::shepp_logan) ? shepp_logan(N) : directional_grid(N);
    const double peak = img.peak_magnitude();
    if (peak > 0.0)
        for (cd& v : img.data) v /= peak;
    return img;
}

PhantomKind phantom_kind_from_string(const std::string& s) {
    if (s == "shepp_logan") return PhantomKind::shepp_logan;
    if (s == "directional_grid") return PhantomKind::directional_grid;
    throw ConfigError("unknown phantom kind: " + s);
}

void save_cimg(const std::string& path, const Image& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "FDLCP-CIMG 1\n" << img.n1 << " " << img.n2 << "\n";
    static_assert(sizeof(cd) == 16, "complex<double> layout");
    f.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(cd)));
    if (!f) throw IoError("write failed: " + path);
}

Image load_cimg(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string magic;
    std::getline(f, magic);
    if (magic != "FDLCP-CIMG 1") throw IoError("bad magic in " + path);
    std::string dims;
    std::getline(f, dims);
    std::istringstream ds(dims);
    int n1 = 0, n2 = 0;
    if (!(ds >> n1 >> n2) || n1 <= 0 || n2 <= 0) throw IoError("bad dims in " + path);
    Image img(n1, n2);
    f.read(reinterpret_cast<char*>(img.data.data()),
           static_cast<std::streamsize>(img.data.size() * sizeof(cd)));
    if (f.gcount() != static_cast<std::streamsize>(img.data.size() * sizeof(cd)))
        throw IoError("truncated data in " + path);
    for (const cd& v : img.data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw IoError("non-finite sample in " + path);
    return img;
}

}  // namespace fdlcp
