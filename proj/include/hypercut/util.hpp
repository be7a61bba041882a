#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_set>

namespace hypercut {

// Hash set over quantized N-dimensional keys with neighbor-bucket probing,
// so values within one bucket width of an inserted value are treated as
// duplicates regardless of which side of a bucket boundary they fall on.
template <std::size_t N>
class QuantSet {
public:
    explicit QuantSet(double bucket) : bucket_(bucket) {}

    // Returns true if the value was new and has been inserted.
    bool insert(const std::array<double, N>& v) {
        const auto k = key(v);
        if (probe(k, 0)) return false;
        set_.insert(hash(k));
        return true;
    }

    bool contains(const std::array<double, N>& v) const {
        return probe(key(v), 0);
    }

    std::size_t size() const { return set_.size(); }

private:
    using Key = std::array<std::int64_t, N>;

    Key key(const std::array<double, N>& v) const {
        Key k;
        for (std::size_t i = 0; i < N; ++i)
            k[i] = static_cast<std::int64_t>(std::llround(v[i] / bucket_));
        return k;
    }

    static std::uint64_t hash(const Key& k) {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : k) {
            h ^= static_cast<std::uint64_t>(x);
            h *= 1099511628211ull;
        }
        return h;
    }

    bool probe(Key k, std::size_t dim) const {
        if (dim == N) return set_.count(hash(k)) != 0;
        for (std::int64_t d = -1; d <= 1; ++d) {
            Key k2 = k;
            k2[dim] += d;
            if (probe(k2, dim + 1)) return true;
        }
        return false;
    }

    double bucket_;
    std::unordered_set<std::uint64_t> set_;
};

// Derivative-free 2D minimizer (Nelder-Mead). Good enough for the incenter
// solve and Karcher means; callers polish with more iterations when needed.
inline std::array<double, 2> minimize2d(
    const std::function<double(double, double)>& f, std::array<double, 2> x0,
    double scale = 0.05, int max_iter = 2000, double ftol = 1e-15) {
    std::array<std::array<double, 2>, 3> s = {
        {{x0[0], x0[1]}, {x0[0] + scale, x0[1]}, {x0[0], x0[1] + scale}}};
    std::array<double, 3> fv;
    for (int i = 0; i < 3; ++i) fv[i] = f(s[i][0], s[i][1]);

    auto order = [&] {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(s[i], s[j]);
                }
    };

    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::abs(fv[2] - fv[0]) < ftol) break;
        const double cx = (s[0][0] + s[1][0]) / 2.0;
        const double cy = (s[0][1] + s[1][1]) / 2.0;
        const double rx = cx + (cx - s[2][0]);
        const double ry = cy + (cy - s[2][1]);
        const double fr = f(rx, ry);
        if (fr < fv[0]) {
            const double ex = cx + 2.0 * (cx - s[2][0]);
            const double ey = cy + 2.0 * (cy - s[2][1]);
            const double fe = f(ex, ey);
            if (fe < fr) {
                s[2] = {ex, ey};
                fv[2] = fe;
            } else {
                s[2] = {rx, ry};
                fv[2] = fr;
            }
        } else if (fr < fv[1]) {
            s[2] = {rx, ry};
            fv[2] = fr;
        } else {
            const double kx = cx + 0.5 * (s[2][0] - cx);
            const double ky = cy + 0.5 * (s[2][1] - cy);
            const double fk = f(kx, ky);
            if (fk < fv[2]) {
                s[2] = {kx, ky};
                fv[2] = fk;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i][0] = s[0][0] + 0.5 * (s[i][0] - s[0][0]);
                    s[i][1] = s[0][1] + 0.5 * (s[i][1] - s[0][1]);
                    fv[i] = f(s[i][0], s[i][1]);
                }
            }
        }
    }
    order();
    return s[0];
}

// Compass pattern search. Polishes a near-optimum to machine scale where
// Nelder-Mead stalls on flat or non-smooth objectives.
inline std::array<double, 2> polish2d(
    const std::function<double(double, double)>& f, std::array<double, 2> x,
    double step = 1e-3, double step_min = 1e-13) {
    double fx = f(x[0], x[1]);
    while (step > step_min) {
        bool improved = false;
        for (int dx = -1; dx <= 1 && !improved; ++dx)
            for (int dy = -1; dy <= 1 && !improved; ++dy) {
                if (dx == 0 && dy == 0) continue;
                const double tx = x[0] + step * dx, ty = x[1] + step * dy;
                const double ft = f(tx, ty);
                if (ft < fx) {
                    x = {tx, ty};
                    fx = ft;
                    improved = true;
                }
            }
        if (!improved) step /= 2.0;
    }
    return x;
}

}  // namespace hypercut
