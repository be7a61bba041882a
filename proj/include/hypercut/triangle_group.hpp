#pragma once

// Cocompact triangle groups: signatures, the reflection triangle, and the
// quadrilateral / hexagonal fundamental domains with their side pairings.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "hypercut/disc.hpp"
#include "hypercut/errors.hpp"
#include "hypercut/geodesic.hpp"
#include "hypercut/util.hpp"

namespace hypercut {

class Signature {
public:
    Signature(int m1, int m2, int m3) : m_{m1, m2, m3} {
        for (int m : m_)
            if (m < 3)
                throw InvalidSignature(
                    "Signature: orders below 3 are rejected (an order-2 "
                    "rotation is its own inverse)");
        // 1/m1 + 1/m2 + 1/m3 < 1, tested in exact integer arithmetic.
        const long long p12 = 1LL * m1 * m2, p13 = 1LL * m1 * m3,
                        p23 = 1LL * m2 * m3;
        if (p23 + p13 + p12 >= 1LL * m1 * m2 * m3)
            throw InvalidSignature("Signature: 1/m1 + 1/m2 + 1/m3 >= 1");
    }

    int m(int i) const { return m_[i]; }
    int m1() const { return m_[0]; }
    int m2() const { return m_[1]; }
    int m3() const { return m_[2]; }
    int max_order() const { return std::max({m_[0], m_[1], m_[2]}); }

    // Area of any fundamental domain, by Gauss-Bonnet.
    double orbifold_area() const {
        return 2.0 * M_PI *
               (1.0 - 1.0 / m_[0] - 1.0 / m_[1] - 1.0 / m_[2]);
    }

private:
    std::array<int, 3> m_;
};

enum class DomainKind { Quadrilateral, Hexagonal };

struct Side {
    int from;
    int to;
    Geodesic carrier;  // oriented from -> to, based at 'from'
    double length;

    Side(int f, int t, const DiscPoint& a, const DiscPoint& b)
        : from(f), to(t), carrier(Geodesic::through(a, b)), length(dist(a, b)) {}
};

// map sends side[from] onto side[to].
struct Pairing {
    int from;
    int to;
    Mobius map;
};

inline Complex klein(Complex z) { return 2.0 * z / (1.0 + std::norm(z)); }

// Interior angle of a counterclockwise polygon at 'at', reflex-aware:
// pi minus the left turn of the boundary.
inline double interior_angle(const DiscPoint& prev, const DiscPoint& at,
                             const DiscPoint& next) {
    const Geodesic in = Geodesic::through(prev, at);
    const Complex din = in.tangent(dist(prev, at));
    const Complex dout = Geodesic::through(at, next).tangent(0.0);
    return M_PI - std::arg(dout / din);
}

inline Mobius mobius_pow(const Mobius& g, int n) {
    Mobius r;
    for (int i = 0; i < n; ++i) r = r * g;
    return r;
}

struct FundamentalDomain {
    DomainKind kind;
    Signature signature;
    std::vector<DiscPoint> vertices;  // counterclockwise
    std::vector<double> internal_angles;
    std::vector<Side> sides;  // side i joins vertices[i] -> vertices[i+1]
    std::vector<Pairing> pairings;
    DiscPoint center;
    double inradius = 0.0;
    double diameter = 0.0;

    FundamentalDomain(DomainKind k, Signature s) : kind(k), signature(s) {}

    double area() const {
        double total = 0.0;
        for (double a : internal_angles) total += a;
        return (static_cast<double>(vertices.size()) - 2.0) * M_PI - total;
    }

    // Signed letter -> pairing map: +k is pairings[k-1].map, -k its inverse.
    Mobius letter(int s) const {
        return s > 0 ? pairings[s - 1].map : pairings[-s - 1].map.inverse();
    }

    Mobius word_to_mobius(const std::vector<int>& w) const {
        Mobius g;
        for (int s : w) g = g * letter(s);
        return g;
    }

    // One signed letter per distinct group element among the pairing maps
    // and their inverses (quadrilateral pairings contain inverse pairs).
    std::vector<int> letter_alphabet() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(pairings.size()); ++i) {
            bool dup = false;
            for (int j : out) {
                const Mobius& seen = pairings[std::abs(j) - 1].map;
                if (pairings[i].map.approx_equal(seen) ||
                    pairings[i].map.approx_equal(seen.inverse()))
                    dup = true;
            }
            if (!dup) {
                out.push_back(i + 1);
                out.push_back(-(i + 1));
            }
        }
        return out;
    }

    // Membership of the closed polygon, via the Klein model where sides are
    // Euclidean segments (even-odd ray cast).
    bool contains(const DiscPoint& p) const {
        const Complex kp = klein(p.value());
        bool inside = false;
        const std::size_t n = vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Complex a = klein(vertices[i].value());
            const Complex b = klein(vertices[(i + 1) % n].value());
            const bool straddles = (a.imag() > kp.imag()) != (b.imag() > kp.imag());
            if (!straddles) continue;
            const double xc = a.real() + (kp.imag() - a.imag()) /
                                             (b.imag() - a.imag()) *
                                             (b.real() - a.real());
            if (kp.real() < xc) inside = !inside;
        }
        return inside;
    }

    // Hyperbolic distance to the nearest boundary side segment.
    double boundary_distance(const DiscPoint& p) const {
        double best = std::numeric_limits<double>::infinity();
        for (const Side& s : sides) {
            const GeodesicCoords c = s.carrier.coords(p);
            best = std::min(best, Geodesic::dist_to_segment(c, 0.0, s.length));
        }
        return best;
    }

    bool strictly_inside(const DiscPoint& p, double margin = 1e-9) const {
        return contains(p) && boundary_distance(p) > margin;
    }

    bool contains_closed(const DiscPoint& p, double tolerance = 1e-7) const {
        return contains(p) || boundary_distance(p) < tolerance;
    }
};

struct Triangle {
    std::array<DiscPoint, 3> vertices;
    std::array<double, 3> side_lengths;  // side i joins vertices i, i+1
};

// Reflection triangle with angles pi/m1 at the origin, pi/m2 on the positive
// real axis, pi/m3 above; side lengths from the hyperbolic law of cosines
// cosh(c) = (cos A cos B + cos C) / (sin A sin B).
inline Triangle build_triangle(const Signature& sig) {
    const double A = M_PI / sig.m1(), B = M_PI / sig.m2(), C = M_PI / sig.m3();
    const auto opposite = [](double a, double b, double c) {
        return std::acosh((std::cos(a) * std::cos(b) + std::cos(c)) /
                          (std::sin(a) * std::sin(b)));
    };
    const double c = opposite(A, B, C);  // v0 -- v1
    const double a = opposite(B, C, A);  // v1 -- v2
    const double b = opposite(C, A, B);  // v2 -- v0
    Triangle tri{{DiscPoint(), DiscPoint(std::tanh(c / 2.0), 0.0),
                  DiscPoint(std::polar(std::tanh(b / 2.0), A))},
                 {c, a, b}};
    if (std::abs(dist(tri.vertices[1], tri.vertices[2]) - a) > 1e-9)
        throw ConstructionFailed("build_triangle: side closure failed");
    return tri;
}

namespace detail {

// Equidistant point from a family of carrier geodesics, by variance descent
// plus compass polish. Returns (point, mean distance, spread).
inline std::tuple<DiscPoint, double, double> equidistant_point(
    const std::vector<Geodesic>& carriers, std::array<double, 2> start) {
    const auto distances = [&](double x, double y) {
        std::vector<double> d;
        d.reserve(carriers.size());
        const DiscPoint p(x, y);
        for (const Geodesic& k : carriers)
            d.push_back(std::abs(k.signed_distance(p)));
        return d;
    };
    const auto objective = [&](double x, double y) {
        if (x * x + y * y >= 0.998) return 1e3 + x * x + y * y;
        const auto d = distances(x, y);
        double mean = 0.0;
        for (double v : d) mean += v;
        mean /= static_cast<double>(d.size());
        double var = 0.0;
        for (double v : d) var += (v - mean) * (v - mean);
        return var;
    };
    std::array<double, 2> x = start;
    for (double scale : {0.1, 1e-2, 1e-4}) x = minimize2d(objective, x, scale);
    x = polish2d(objective, x, 1e-5);
    const DiscPoint p(x[0], x[1]);
    const auto d = distances(x[0], x[1]);
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());
    return {p, mean, *hi - *lo};
}

inline double polygon_diameter(const std::vector<DiscPoint>& v) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::max(best, dist(v[i], v[j]));
    return best;
}

inline void fill_angles_and_validate(FundamentalDomain& dom,
                                     const std::vector<double>& expected,
                                     double angle_tol) {
    const std::size_t n = dom.vertices.size();
    dom.internal_angles.clear();
    for (std::size_t i = 0; i < n; ++i) {
        const DiscPoint& prev = dom.vertices[(i + n - 1) % n];
        const DiscPoint& next = dom.vertices[(i + 1) % n];
        dom.internal_angles.push_back(
            interior_angle(prev, dom.vertices[i], next));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (expected[i] > 0.0 &&
            std::abs(dom.internal_angles[i] - expected[i]) > angle_tol)
            throw ConstructionFailed("domain: internal angle mismatch");
        if (dom.internal_angles[i] <= 0.0)
            throw ConstructionFailed("domain: non-positive internal angle");
    }
    if (std::abs(dom.area() - dom.signature.orbifold_area()) > 1e-8)
        throw ConstructionFailed("domain: Gauss-Bonnet area mismatch");
}

// Orients a rotation about p so that it carries src to dst.
inline Mobius oriented_rotation(const DiscPoint& p, double theta,
                                const DiscPoint& src, const DiscPoint& dst,
                                const char* what) {
    for (double sgn : {1.0, -1.0}) {
        const Mobius r = rotation_about(p, sgn * theta);
        if (dist(r.apply(src), dst) < 1e-9) return r;
    }
    throw ConstructionFailed(what);
}

}  // namespace detail

// The recomputed incenter of a built domain: the interior point equidistant
// from all side carrier geodesics, with the common distance.
inline std::pair<DiscPoint, double> center_and_inradius(
    const FundamentalDomain& dom) {
    std::vector<Geodesic> carriers;
    for (const Side& s : dom.sides) carriers.push_back(s.carrier);
    Complex centroid(0.0, 0.0);
    for (const DiscPoint& v : dom.vertices) centroid += v.value();
    centroid /= static_cast<double>(dom.vertices.size());
    auto [p, mu, spread] =
        detail::equidistant_point(carriers, {centroid.real(), centroid.imag()});
    if (spread > 1e-6)
        throw NoIncenter("center_and_inradius: equidistance residual too large");
    return {p, mu};
}

// Double of the reflection triangle across the side joining its pi/m1 and
// pi/m2 vertices. Vertices counterclockwise, v4 = the 2pi/m1 vertex at the
// origin; internal angles (pi/m3, 2pi/m2, pi/m3, 2pi/m1) at (v1, v2, v3, v4).
inline FundamentalDomain build_quadrilateral(const Signature& sig) {
    const Triangle tri = build_triangle(sig);
    const DiscPoint v2 = tri.vertices[1];
    const DiscPoint v3 = tri.vertices[2];
    const DiscPoint v1(std::conj(v3.value()));
    const DiscPoint v4;

    FundamentalDomain dom(DomainKind::Quadrilateral, sig);
    dom.vertices = {v1, v2, v3, v4};

    const Mobius T2 = detail::oriented_rotation(
        v2, 2.0 * M_PI / sig.m2(), v3, v1, "build_quadrilateral: T2 sense");
    const Mobius T4 = detail::oriented_rotation(
        v4, 2.0 * M_PI / sig.m1(), v1, v3, "build_quadrilateral: T4 sense");
    const Mobius T1 = T2.inverse(), T3 = T4.inverse();
    dom.pairings = {{0, 1, T1}, {1, 0, T2}, {2, 3, T3}, {3, 2, T4}};

    for (int i = 0; i < 4; ++i)
        dom.sides.emplace_back(i, (i + 1) % 4, dom.vertices[i],
                               dom.vertices[(i + 1) % 4]);

    detail::fill_angles_and_validate(
        dom,
        {M_PI / sig.m3(), 2.0 * M_PI / sig.m2(), M_PI / sig.m3(),
         2.0 * M_PI / sig.m1()},
        1e-9);
    if (!mobius_pow(T2, sig.m2()).is_identity(1e-8) ||
        !mobius_pow(T4, sig.m1()).is_identity(1e-8) ||
        !mobius_pow(T2 * T4, sig.m3()).is_identity(1e-8))
        throw ConstructionFailed("build_quadrilateral: relation failure");
    if (dist((T2 * T4).apply(v1), v1) > 1e-9)
        throw ConstructionFailed("build_quadrilateral: T2*T4 must fix v1");

    auto [center, mu] = center_and_inradius(dom);
    dom.center = center;
    dom.inradius = mu;
    dom.diameter = detail::polygon_diameter(dom.vertices);
    return dom;
}

// Hexagonal fundamental domain, built as the Dirichlet domain about the
// point x equidistant from its three rotated images U_i(x). The elliptic
// vertices carry angles 2pi/m_i independently of x; the accidental vertices
// are triple Voronoi points, so their angles sum to 2pi; tangency of
// B(x, inradius) to all six sides holds because bisector feet are midpoints.
inline FundamentalDomain build_hexagon(const Signature& sig) {
    const Triangle tri = build_triangle(sig);
    const DiscPoint Q1 = tri.vertices[0], Q2 = tri.vertices[1],
                    Q3 = tri.vertices[2];

    const Isometry s12 = Geodesic::through(Q1, Q2).reflection();
    const Isometry s23 = Geodesic::through(Q2, Q3).reflection();
    const Isometry s31 = Geodesic::through(Q3, Q1).reflection();
    const Mobius U1 = s31.compose(s12).mobius();
    const Mobius U2 = s12.compose(s23).mobius();
    const Mobius U3 = s23.compose(s31).mobius();
    const std::array<Mobius, 3> U = {U1, U2, U3};
    const std::array<DiscPoint, 3> Q = {Q1, Q2, Q3};
    for (int i = 0; i < 3; ++i) {
        if (dist(U[i].apply(Q[i]), Q[i]) > 1e-9 ||
            !mobius_pow(U[i], sig.m(i)).is_identity(1e-8))
            throw ConstructionFailed("build_hexagon: rotation generators");
    }

    // Equalize d(x, U_i x) across i.
    const auto objective = [&](double x, double y) {
        if (x * x + y * y >= 0.998) return 1e3 + x * x + y * y;
        const DiscPoint p(x, y);
        const double d1 = dist(p, U1.apply(p)), d2 = dist(p, U2.apply(p)),
                     d3 = dist(p, U3.apply(p));
        const double m = (d1 + d2 + d3) / 3.0;
        return (d1 - m) * (d1 - m) + (d2 - m) * (d2 - m) + (d3 - m) * (d3 - m);
    };
    const Complex c0 = (Q1.value() + Q2.value() + Q3.value()) / 3.0;
    std::array<double, 2> x = {c0.real(), c0.imag()};
    for (double scale : {0.1, 1e-2, 1e-4}) x = minimize2d(objective, x, scale);
    x = polish2d(objective, x, 1e-5);
    const DiscPoint xc(x[0], x[1]);
    {
        const double d1 = dist(xc, U1.apply(xc)), d2 = dist(xc, U2.apply(xc)),
                     d3 = dist(xc, U3.apply(xc));
        if (std::max({d1, d2, d3}) - std::min({d1, d2, d3}) > 1e-9)
            throw ConstructionFailed("build_hexagon: no equidistant point");
        if (std::min({d1, d2, d3}) < 1e-6)
            throw ConstructionFailed("build_hexagon: center degenerates");
    }
    const double mu = dist(xc, U1.apply(xc)) / 2.0;

    // Perpendicular bisector sides of [x, g(x)], ordered counterclockwise
    // around x by the outgoing direction towards g(x).
    struct Wall {
        Mobius g;
        double direction;
        std::optional<Geodesic> bis;
    };
    std::vector<Wall> walls;
    for (const Mobius& g : {U1, U1.inverse(), U2, U2.inverse(), U3,
                            U3.inverse()}) {
        const DiscPoint y = g.apply(xc);
        const Geodesic seg = Geodesic::through(xc, y);
        const double half = dist(xc, y) / 2.0;
        const DiscPoint mid = seg.point(half);
        Geodesic bis = Geodesic::from_direction(
            mid, Complex(0, 1) * seg.tangent(half));
        if (bis.signed_distance(xc) < 0.0)
            bis = Geodesic::from_direction(mid,
                                           Complex(0, -1) * seg.tangent(half));
        walls.push_back({g, std::arg(seg.tangent(0.0)), bis});
    }
    std::sort(walls.begin(), walls.end(),
              [](const Wall& a, const Wall& b) {
                  return a.direction < b.direction;
              });

    std::vector<DiscPoint> verts;  // verts[i] between walls i and i+1
    for (int i = 0; i < 6; ++i) {
        const auto p = walls[i].bis->intersect(*walls[(i + 1) % 6].bis);
        if (!p)
            throw ConstructionFailed("build_hexagon: walls do not close up");
        verts.push_back(*p);
    }

    // Identify the elliptic vertices and rotate the labels so the cycle
    // reads v1, a1, v2, a2, v3, a3.
    std::array<int, 3> at = {-1, -1, -1};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 3; ++j)
            if (dist(verts[i], Q[j]) < 1e-6) at[j] = i;
    if (at[0] < 0 || at[1] < 0 || at[2] < 0 ||
        (at[1] - at[0] + 6) % 6 != 2 || (at[2] - at[1] + 6) % 6 != 2)
        throw ConstructionFailed("build_hexagon: vertex cycle mismatch");

    FundamentalDomain dom(DomainKind::Hexagonal, sig);
    // Order: v1, a1, v2, a2, v3, a3 with the elliptic positions snapped.
    for (int j = 0; j < 3; ++j) {
        dom.vertices.push_back(Q[j]);
        dom.vertices.push_back(verts[(at[j] + 1) % 6]);
    }
    const DiscPoint a1 = dom.vertices[1], a2 = dom.vertices[3],
                    a3 = dom.vertices[5];

    // Pairing senses fixed by U1(a1) = a3, U2(a2) = a1, U3(a2) = a3.
    const auto oriented = [&](const Mobius& g, const DiscPoint& src,
                              const DiscPoint& dst) {
        if (dist(g.apply(src), dst) < 1e-8) return g;
        if (dist(g.inverse().apply(src), dst) < 1e-8) return g.inverse();
        throw ConstructionFailed("build_hexagon: pairing sense");
    };
    const Mobius W1 = oriented(U1, a1, a3);
    const Mobius W2 = oriented(U2, a2, a1);
    const Mobius W3 = oriented(U3, a2, a3);
    dom.pairings = {{0, 5, W1}, {2, 1, W2}, {3, 4, W3}};

    for (int i = 0; i < 6; ++i)
        dom.sides.emplace_back(i, (i + 1) % 6, dom.vertices[i],
                               dom.vertices[(i + 1) % 6]);

    // Elliptic angles pinned; accidental angles free but must sum to 2pi.
    detail::fill_angles_and_validate(
        dom,
        {2.0 * M_PI / sig.m1(), -1.0, 2.0 * M_PI / sig.m2(), -1.0,
         2.0 * M_PI / sig.m3(), -1.0},
        1e-8);
    const double accidental = dom.internal_angles[1] + dom.internal_angles[3] +
                              dom.internal_angles[5];
    if (std::abs(accidental - 2.0 * M_PI) > 1e-8)
        throw ConstructionFailed("build_hexagon: accidental angle sum");

    // Pairings must map whole sides: check both endpoints.
    for (const Pairing& p : dom.pairings) {
        const Side& sf = dom.sides[p.from];
        const Side& st = dom.sides[p.to];
        const DiscPoint i1 = p.map.apply(dom.vertices[sf.from]);
        const DiscPoint i2 = p.map.apply(dom.vertices[sf.to]);
        const double direct = std::max(dist(i1, dom.vertices[st.from]),
                                       dist(i2, dom.vertices[st.to]));
        const double flipped = std::max(dist(i1, dom.vertices[st.to]),
                                        dist(i2, dom.vertices[st.from]));
        if (std::min(direct, flipped) > 1e-8)
            throw ConstructionFailed("build_hexagon: pairing endpoints");
    }

    dom.center = xc;
    dom.inradius = mu;
    for (const Side& s : dom.sides)
        if (std::abs(std::abs(s.carrier.signed_distance(xc)) - mu) > 1e-6)
            throw ConstructionFailed("build_hexagon: tangency residual");
    dom.diameter = detail::polygon_diameter(dom.vertices);
    return dom;
}

inline FundamentalDomain build_domain(const Signature& sig, DomainKind kind) {
    return kind == DomainKind::Quadrilateral ? build_quadrilateral(sig)
                                             : build_hexagon(sig);
}

}  // namespace hypercut
