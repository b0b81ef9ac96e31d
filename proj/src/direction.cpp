#include "fdlcp/direction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace fdlcp {

namespace {

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

double angle_of(int p, int q) {
    double a = std::atan2(static_cast<double>(p), static_cast<double>(q));
    if (a < 0) a += M_PI;
    if (a >= M_PI) a -= M_PI;
    return a;
}

}  // namespace

DirectionSet build_direction_set(int n) {
    if (n < 2) throw ConfigError("direction set needs n >= 2");
    struct Cand {
        int p, q;
        double angle;
        std::vector<int> perm;
    };
    std::vector<Cand> cands;
    for (int p = -(n - 1); p <= n - 1; ++p) {
        for (int q = -(n - 1); q <= n - 1; ++q) {
            if (p == 0 && q == 0) continue;
            if (gcd_int(std::abs(p), std::abs(q)) != 1) continue;
            if (p < 0 || (p == 0 && q < 0)) continue;
            Cand c{p, q, angle_of(p, q), {}};
            c.perm.resize(static_cast<size_t>(n) * n);
            std::iota(c.perm.begin(), c.perm.end(), 0);
            std::stable_sort(c.perm.begin(), c.perm.end(), [&](int a, int b) {
                const int ka = (2 * (a / n) - (n - 1)) * p + (2 * (a % n) - (n - 1)) * q;
                const int kb = (2 * (b / n) - (n - 1)) * p + (2 * (b % n) - (n - 1)) * q;
                if (ka != kb) return ka < kb;
                return a < b;
            });
            cands.push_back(std::move(c));
        }
    }

    // Merge candidates with identical permutations; the representative is the
    // member with the smallest (|p|+|q|, angle).
    std::map<std::vector<int>, size_t> groups;
    struct Class {
        std::vector<int> perm;
        int p, q;
        double angle;
    };
    std::vector<Class> classes;
    for (Cand& c : cands) {
        auto it = groups.find(c.perm);
        if (it == groups.end()) {
            groups.emplace(c.perm, classes.size());
            classes.push_back({std::move(c.perm), c.p, c.q, c.angle});
        } else {
            Class& g = classes[it->second];
            const int l1_new = std::abs(c.p) + std::abs(c.q);
            const int l1_old = std::abs(g.p) + std::abs(g.q);
            if (l1_new < l1_old || (l1_new == l1_old && c.angle < g.angle)) {
                g.p = c.p;
                g.q = c.q;
                g.angle = c.angle;
            }
        }
    }
    std::sort(classes.begin(), classes.end(), [](const Class& a, const Class& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        if (a.p != b.p) return a.p < b.p;
        return a.q < b.q;
    });

    DirectionSet ds;
    ds.n = n;
    ds.Q = static_cast<int>(classes.size());
    for (Class& c : classes) {
        ds.permutations.push_back(std::move(c.perm));
        ds.angles.push_back(c.angle);
        ds.vectors.emplace_back(c.p, c.q);
    }
    return ds;
}

std::vector<cd> reorder(const Patch& patch, int omega, const DirectionSet& ds) {
    if (omega < 0 || omega >= ds.Q) throw ConfigError("class index out of range");
    const std::vector<int>& perm = ds.permutations[omega];
    std::vector<cd> out(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) out[i] = patch.values[perm[i]];
    return out;
}

std::vector<cd> haar1d(const std::vector<cd>& v) {
    size_t len = v.size();
    if (len == 0 || (len & (len - 1)) != 0) throw ConfigError("haar1d needs power-of-2 length");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<cd> cur = v, out(len);
    size_t tail = len;
    while (cur.size() > 1) {
        const size_t half = cur.size() / 2;
        std::vector<cd> s(half);
        for (size_t i = 0; i < half; ++i) {
            s[i] = (cur[2 * i] + cur[2 * i + 1]) * inv_sqrt2;
            out[tail - half + i] = (cur[2 * i] - cur[2 * i + 1]) * inv_sqrt2;
        }
        tail -= half;
        cur = std::move(s);
    }
    out[0] = cur[0];
    return out;
}

namespace {

double residual_of_reordered(const std::vector<cd>& reordered) {
    const std::vector<cd> coeffs = haar1d(reordered);
    std::vector<double> energy(coeffs.size());
    double total = 0.0;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        energy[i] = std::norm(coeffs[i]);
        total += energy[i];
    }
    const size_t keep =
        static_cast<size_t>(std::ceil(0.25 * static_cast<double>(coeffs.size())));
    std::sort(energy.begin(), energy.end(), std::greater<double>());
    double kept = 0.0;
    for (size_t i = 0; i < keep; ++i) kept += energy[i];
    return std::max(0.0, total - kept);
}

}  // namespace

double direction_residual(const Patch& patch, int omega, const DirectionSet& ds) {
    return residual_of_reordered(reorder(patch, omega, ds));
}

int estimate_direction(const Patch& patch, const DirectionSet& ds) {
    const size_t len = patch.values.size();
    if (len == 0 || (len & (len - 1)) != 0)
        throw ConfigError("patch length must be a power of 2 for direction estimation");
    int best = 0;
    double best_res = direction_residual(patch, 0, ds);
    for (int w = 1; w < ds.Q; ++w) {
        const double r = direction_residual(patch, w, ds);
        if (r < best_res) {
            best_res = r;
            best = w;
        }
    }
    return best;
}

ClassMap classify_patches(const Image& img, const PatchConfig& cfg, const DirectionSet& ds) {
    const std::vector<Patch> patches = extract_patches(img, cfg);
    ClassMap cm;
    cm.Q = ds.Q;
    cm.classes.resize(patches.size());
    cm.by_class.assign(ds.Q, {});
    for (size_t j = 0; j < patches.size(); ++j) {
        const int w = estimate_direction(patches[j], ds);
        cm.classes[j] = static_cast<uint16_t>(w);
        cm.by_class[w].push_back(static_cast<int>(j));
    }
    return cm;
}

void save_cmap(const std::string& path, const ClassMap& cm) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "FDLCP-CMAP 1\n" << cm.classes.size() << " " << cm.Q << "\n";
    f.write(reinterpret_cast<const char*>(cm.classes.data()),
            static_cast<std::streamsize>(cm.classes.size() * sizeof(uint16_t)));
    if (!f) throw IoError("write failed: " + path);
}

ClassMap load_cmap(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string magic;
    std::getline(f, magic);
    if (magic != "FDLCP-CMAP 1") throw IoError("bad magic in " + path);
    std::string dims;
    std::getline(f, dims);
    std::istringstream ds(dims);
    long j = 0;
    int q = 0;
    if (!(ds >> j >> q) || j < 0 || q <= 0) throw IoError("bad dims in " + path);
    ClassMap cm;
    cm.Q = q;
    cm.classes.resize(j);
    f.read(reinterpret_cast<char*>(cm.classes.data()),
           static_cast<std::streamsize>(cm.classes.size() * sizeof(uint16_t)));
    if (f.gcount() != static_cast<std::streamsize>(cm.classes.size() * sizeof(uint16_t)))
        throw IoError("truncated data in " + path);
    cm.by_class.assign(q, {});
    for (size_t i = 0; i < cm.classes.size(); ++i) {
        if (cm.classes[i] >= q) throw IoError("class index out of range in " + path);
        cm.by_class[cm.classes[i]].push_back(static_cast<int>(i));
    }
    return cm;
}

}  // namespace fdlcp
