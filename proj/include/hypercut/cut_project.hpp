#pragma once

// The cut-and-project engine: one-sided geodesic tubes, windowed projection
// of orbit points, Delone diagnostics, periodic references and the rho
// search.
//
// Far tube parameters are numerically hostile twice over. First, the
// perpendicular offset of an orbit point near parameter t sits at relative
// scale e^{-t} inside any global matrix for its group element, below double
// precision past t ~ 36; orbit elements are therefore carried in moving-frame
// form gamma = F T(tau) R, with F the tube frame, T(tau) the axis translation
// by the stored shift tau and R a moderate-entry matrix renormalized during
// the search. Second, errors in the walk and in the defining data are
// stretched by the geodesic flow, a factor e^{dt} per step along the tube,
// so the walk runs in quad precision and the defining data (generator
// matrices, and tube endpoints where an exact description exists) is
// reconstructed in quad from closed forms rather than taken from the double
// pipeline. The offset error is then about 5 eps128 e^{|t|}, under 1e-11 for
// |t| <= 55. Tubes given only by double-precision endpoints are computed
// exactly for the geodesic those endpoints define.

#include <quadmath.h>

#include <array>
#include <cmath>
#include <deque>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "hypercut/orbit.hpp"
#include "hypercut/side_walk.hpp"
#include "hypercut/triangle_group.hpp"

namespace hypercut {

namespace detail {

using f128 = __float128;

struct Cq {
    f128 re, im;
};

// quadmath.h's pi constant needs a GNU literal extension; evaluate instead.
inline const f128 qpi = atan2q(0.0, -1.0);

inline Cq operator+(Cq x, Cq y) { return {x.re + y.re, x.im + y.im}; }
inline Cq operator-(Cq x, Cq y) { return {x.re - y.re, x.im - y.im}; }
inline Cq operator*(Cq x, Cq y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}
inline Cq operator*(f128 x, Cq y) { return {x * y.re, x * y.im}; }
inline Cq qconj(Cq z) { return {z.re, -z.im}; }
inline f128 qabs2(Cq z) { return z.re * z.re + z.im * z.im; }
inline Cq operator/(Cq x, Cq y) { return (1.0 / qabs2(y)) * (x * qconj(y)); }

inline Cq to_quad(Complex z) { return {z.real(), z.imag()}; }
inline Complex to_double(Cq z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}
inline Cq unit(Cq z) { return (1.0 / sqrtq(qabs2(z))) * z; }

// [[a, conj b], [b, conj a]] with |a|^2 - |b|^2 = 1, quad precision.
struct QMat {
    Cq a, b;
};

inline QMat qmul(const QMat& m, const QMat& n) {
    QMat r{m.a * n.a + qconj(m.b) * n.b, m.b * n.a + qconj(m.a) * n.b};
    const f128 f = 1.0 / sqrtq(qabs2(r.a) - qabs2(r.b));
    r.a = f * r.a;
    r.b = f * r.b;
    return r;
}

inline QMat qinv(const QMat& m) { return {qconj(m.a), {-m.b.re, -m.b.im}}; }

inline Cq qapply(const QMat& m, Cq z) {
    return (m.a * z + qconj(m.b)) / (m.b * z + qconj(m.a));
}

// Translation along the real-axis geodesic by hyperbolic distance d.
inline QMat qtranslation(f128 d) {
    return {{coshq(d / 2.0), 0.0}, {sinhq(d / 2.0), 0.0}};
}

// Translation along the geodesic through 0 and p taking 0 to p.
inline QMat qtranslation_to(Cq p) {
    const f128 f = 1.0 / sqrtq(1.0 - qabs2(p));
    return {{f, 0.0}, f * qconj(p)};
}

inline QMat qrotation(f128 theta) {
    return {{cosq(theta / 2.0), sinq(theta / 2.0)}, {0.0, 0.0}};
}

struct QCoords {
    f128 t, s;
};

// Coordinates relative to the real-axis geodesic through 0, for a point
// given in frame-local disc coordinates. Re((1+w)/(1-w)) > 0 on the disc,
// and tan(arg u) = Im u / Re u.
inline QCoords real_axis_coords(Cq w) {
    const Cq u = (Cq{1.0, 0.0} + w) / (Cq{1.0, 0.0} - w);
    return {0.5 * logq(qabs2(u)), asinhq(u.im / u.re)};
}

// Distance between two points given in Fermi coordinates of a geodesic.
inline double fermi_dist(const GeodesicCoords& p, const GeodesicCoords& q) {
    const double c = std::cosh(p.s) * std::cosh(q.s) * std::cosh(p.t - q.t) -
                     std::sinh(p.s) * std::sinh(q.s);
    return std::acosh(std::max(1.0, c));
}

// Frame of the geodesic with ideal endpoints u (t = -inf) and v (t = +inf),
// with t = 0 at the point of the geodesic nearest to `base`. Endpoints are
// renormalized to the unit circle; `base` itself need only be double-close
// to the geodesic.
inline QMat quad_frame(Cq u, Cq v, Complex base) {
    u = unit(u);
    v = unit(v);
    const Cq b = to_quad(base);
    Cq foot, dir;
    const f128 det = u.re * v.im - u.im * v.re;
    if (fabsq(det) < 1e-14) {
        // Diameter. The Euclidean foot of b lies exactly on it.
        foot = (b.re * v.re + b.im * v.im) * v;
        dir = v;
    } else {
        // Center of the circle orthogonal to the unit circle through u, v:
        // solve Re(conj(xi) c) = 1 for both endpoints.
        const Cq c{(v.im - u.im) / det, (u.re - v.re) / det};
        const f128 r = sqrtq(qabs2(c) - 1.0);
        Cq radial = b - c;
        radial = (r / sqrtq(qabs2(radial))) * radial;
        foot = c + radial;
        dir = {-radial.im, radial.re};
    }
    QMat F = qmul(qtranslation_to(foot), qrotation(atan2q(dir.im, dir.re)));
    if (qabs2(qapply(F, {1.0, 0.0}) - v) > qabs2(qapply(F, {1.0, 0.0}) - u))
        F = qmul(F, qrotation(qpi));
    if (static_cast<double>(qabs2(qapply(F, {1.0, 0.0}) - v)) > 1e-12)
        throw Error("quad_frame: endpoint reconstruction failed");
    return F;
}

// Quad-precision copy of a side-pairing generator. Every generator of both
// domain kinds is a rotation by +-2 pi / m_i about a vertex of the base
// triangle, so it has a closed form; the double letter only selects which.
inline QMat quad_letter(const FundamentalDomain& dom, int letter) {
    const Mobius g = dom.letter(letter);
    const f128 A = qpi / dom.signature.m1();
    const f128 B = qpi / dom.signature.m2();
    const f128 C = qpi / dom.signature.m3();
    const auto opposite = [](f128 a, f128 b, f128 c) {
        return acoshq((cosq(a) * cosq(b) + cosq(c)) / (sinq(a) * sinq(b)));
    };
    const std::array<Cq, 3> verts = {
        Cq{0.0, 0.0}, Cq{tanhq(opposite(A, B, C) / 2.0), 0.0},
        tanhq(opposite(C, A, B) / 2.0) * Cq{cosq(A), sinq(A)}};
    const std::array<int, 3> orders = {dom.signature.m1(), dom.signature.m2(),
                                       dom.signature.m3()};
    for (const Cq& p : verts) {
        const QMat t = qtranslation_to(p);
        for (int m : orders) {
            for (int sgn : {1, -1}) {
                const QMat cand = qmul(
                    qmul(t, qrotation(sgn * 2.0 * qpi / m)), qinv(t));
                const Complex da = to_double(cand.a), db = to_double(cand.b);
                if (std::abs(da - g.a()) + std::abs(db - g.b()) < 1e-9 ||
                    std::abs(da + g.a()) + std::abs(db + g.b()) < 1e-9)
                    return cand;
            }
        }
    }
    throw Error("quad_letter: generator is not a base-triangle rotation");
}

inline QMat quad_word(const FundamentalDomain& dom,
                      const std::vector<int>& word) {
    QMat m{{1.0, 0.0}, {0.0, 0.0}};
    for (int s : word) m = qmul(m, quad_letter(dom, s));
    return m;
}

// Fixed points (repelling, attracting) of a hyperbolic element, on the unit
// circle: (i Im(a) -+ sqrt(Re(a)^2 - 1)) / b with the Re(a) > 0 sign.
inline std::pair<Cq, Cq> quad_axis_endpoints(QMat h) {
    if (h.a.re < 0.0) {
        h.a = {-h.a.re, -h.a.im};
        h.b = {-h.b.re, -h.b.im};
    }
    if (h.a.re <= 1.0)
        throw NotHyperbolic("quad_axis_endpoints: element is not hyperbolic");
    const f128 s = sqrtq(h.a.re * h.a.re - 1.0);
    return {unit(Cq{-s, h.a.im} / h.b), unit(Cq{s, h.a.im} / h.b)};
}

struct QEndpoints {
    Cq minus, plus;
};

}  // namespace detail

struct TubeSpec {
    Geodesic geodesic;
    double rho;
    // Quad-exact ideal endpoints, for carriers with an algebraic description
    // sharper than the double geodesic (closed boundary geodesics, axes).
    std::optional<detail::QEndpoints> refined = std::nullopt;
};

enum class TubeSide { Inside, PositiveBoundary, Outside };

// One-sided closure: the boundary band is included on the positive side of
// the oriented geodesic only.
inline TubeSide tube_side_of(double signed_distance, double rho,
                             double tolerance = 1e-9) {
    if (std::abs(signed_distance) < rho - tolerance) return TubeSide::Inside;
    if (signed_distance >= rho - tolerance &&
        signed_distance <= rho + tolerance)
        return TubeSide::PositiveBoundary;
    return TubeSide::Outside;
}

inline TubeSide tube_membership(const TubeSpec& tube, const DiscPoint& z) {
    if (tube.rho <= 0.0) throw DegenerateInput("tube_membership: rho <= 0");
    return tube_side_of(tube.geodesic.signed_distance(z), tube.rho);
}

struct CutProjectMeta {
    int m1 = 0, m2 = 0, m3 = 0;
    DomainKind kind = DomainKind::Quadrilateral;
    double rho = 0.0;
    double base_re = 0.0, base_im = 0.0;
    double depth_radius = 0.0;
};

struct CutProjectSet {
    std::vector<double> points;  // strictly increasing tube parameters
    double t_min = 0.0, t_max = 0.0;
    CutProjectMeta meta;
};

// S^+ window: tube parameters of the orbit points of x lying in the
// one-sided closed tube, restricted to the window, multiplicity-collapsed.
inline CutProjectSet cut_project(const FundamentalDomain& dom,
                                 const DiscPoint& x, const TubeSpec& tube,
                                 std::pair<double, double> window,
                                 double depth_radius,
                                 std::size_t node_budget = 1'000'000) {
    const auto [t0, t1] = window;
    if (tube.rho <= 0.0) throw DegenerateInput("cut_project: rho <= 0");
    if (!std::isfinite(t0) || !std::isfinite(t1) || t0 >= t1)
        throw DegenerateInput("cut_project: bad window");
    if (!dom.strictly_inside(x, 1e-12))
        throw DegenerateInput("cut_project: base point not in domain interior");

    const detail::Cq em = tube.refined
                              ? tube.refined->minus
                              : detail::to_quad(tube.geodesic.xi_minus());
    const detail::Cq ep = tube.refined
                              ? tube.refined->plus
                              : detail::to_quad(tube.geodesic.xi_plus());
    const detail::QMat Finv =
        detail::qinv(detail::quad_frame(em, ep, tube.geodesic.base().value()));

    const detail::Cq xv = detail::to_quad(x.value());
    const auto as_double = [](detail::QCoords c) {
        return GeodesicCoords{static_cast<double>(c.t),
                              static_cast<double>(c.s)};
    };
    const GeodesicCoords cx =
        as_double(detail::real_axis_coords(detail::qapply(Finv, xv)));
    const double need =
        std::max(detail::fermi_dist(cx, {t0, 0.0}),
                 detail::fermi_dist(cx, {t1, 0.0})) +
        tube.rho + 0.5;
    if (depth_radius < need)
        throw InsufficientDepth(
            "cut_project: depth_radius does not cover the tube-over-window "
            "region");

    // Corridor wide enough to stay path-connected from x's tile to every
    // tile meeting the tube over the window.
    const double corridor =
        std::max(Geodesic::dist_to_segment(cx, t0, t1), tube.rho) +
        2.0 * dom.diameter + 1.0;

    struct Node {
        detail::f128 tau;
        detail::QMat R;  // gamma = F T(tau) R
    };
    const std::vector<int> alphabet = dom.letter_alphabet();
    std::vector<detail::QMat> letters;
    for (int s : alphabet) letters.push_back(detail::quad_letter(dom, s));

    const auto locate = [&](const Node& n) {
        detail::QCoords c = detail::real_axis_coords(detail::qapply(n.R, xv));
        c.t += n.tau;
        return as_double(c);
    };

    QuantSet<2> visited(tol::kOrbitDedup);
    std::deque<Node> frontier;
    std::vector<double> hits;

    const auto admit = [&](Node n) {
        const GeodesicCoords c = locate(n);
        if (!visited.insert({c.t, c.s})) return;
        if (Geodesic::dist_to_segment(c, t0, t1) > corridor) return;
        if (detail::fermi_dist(c, cx) > depth_radius) return;
        if (c.t >= t0 && c.t <= t1 &&
            tube_side_of(c.s, tube.rho) != TubeSide::Outside)
            hits.push_back(c.t);
        frontier.push_back(std::move(n));
    };

    admit({0.0, Finv});
    std::size_t expanded = 0;
    while (!frontier.empty()) {
        const Node cur = std::move(frontier.front());
        frontier.pop_front();
        if (++expanded > node_budget)
            throw BudgetExceeded("cut_project: node budget exhausted");
        for (const detail::QMat& g : letters) {
            Node next{cur.tau, detail::qmul(cur.R, g)};
            // Renormalize the stored shift so the local picture stays near
            // the frame origin.
            const detail::f128 drift =
                detail::real_axis_coords(detail::qapply(next.R, xv)).t;
            if (fabsq(drift) > 1.0) {
                next.R = detail::qmul(detail::qtranslation(-drift), next.R);
                next.tau += drift;
            }
            admit(std::move(next));
        }
    }

    std::sort(hits.begin(), hits.end());
    CutProjectSet out;
    for (double t : hits)
        if (out.points.empty() || t - out.points.back() > 1e-9)
            out.points.push_back(t);
    out.t_min = t0;
    out.t_max = t1;
    out.meta = {dom.signature.m1(), dom.signature.m2(), dom.signature.m3(),
                dom.kind,           tube.rho,           x.re(),
                x.im(),             depth_radius};
    return out;
}

// Tube around the complete geodesic carrying a side of the base domain. When
// the extension stays on the edge network it is a closed boundary geodesic,
// the axis of the cycle word found by the side walk; its endpoints are then
// attached in quad precision, which the far window demands (an endpoint
// perturbation eps tilts the geodesic by eps e^{|t|} at parameter t).
inline TubeSpec extended_side_tube(const FundamentalDomain& dom,
                                   int side_index, double rho,
                                   int walk_depth = 256) {
    const Side& s = dom.sides[side_index];
    TubeSpec tube{s.carrier, rho};
    const SideWalkResult walk =
        detail::walk_direction(dom, s.from, s.to, walk_depth);
    if (!walk.cycle) return tube;
    auto [rep, att] = detail::quad_axis_endpoints(
        detail::quad_word(dom, *walk.cycle));
    const Complex dm = tube.geodesic.xi_minus(), dp = tube.geodesic.xi_plus();
    if (std::abs(detail::to_double(att) - dm) < 1e-6 &&
        std::abs(detail::to_double(rep) - dp) < 1e-6)
        std::swap(rep, att);
    if (std::abs(detail::to_double(rep) - dm) > 1e-6 ||
        std::abs(detail::to_double(att) - dp) > 1e-6)
        throw Error("extended_side_tube: cycle axis does not match carrier");
    tube.refined = detail::QEndpoints{rep, att};
    return tube;
}

struct DeloneReport {
    double min_gap = 0.0;
    double max_gap = 0.0;
    int count = 0;
    double separation_bound = 0.0;  // 2 (inj - rho)
};

// Gap statistics; the first and last gap touch the window truncation and are
// excluded from the covering estimate.
inline DeloneReport delone_stats(const CutProjectSet& s, double inj,
                                 double rho) {
    const auto& p = s.points;
    if (p.size() < 2)
        throw TooFewPoints("delone_stats: need at least two points");
    std::vector<double> gaps;
    for (std::size_t i = 1; i < p.size(); ++i) gaps.push_back(p[i] - p[i - 1]);
    DeloneReport r;
    r.count = static_cast<int>(p.size());
    r.separation_bound = 2.0 * (inj - rho);
    r.min_gap = *std::min_element(gaps.begin(), gaps.end());
    if (gaps.size() >= 3)
        r.max_gap = *std::max_element(gaps.begin() + 1, gaps.end() - 1);
    else
        r.max_gap = *std::max_element(gaps.begin(), gaps.end());
    return r;
}

// Distinct gap lengths with multiplicities, clustered within cluster_tol.
inline std::vector<std::pair<double, int>> tile_lengths(
    const CutProjectSet& s, double cluster_tol = 1e-7) {
    const auto& p = s.points;
    if (p.size() < 2)
        throw TooFewPoints("tile_lengths: need at least two points");
    std::vector<double> gaps;
    for (std::size_t i = 1; i < p.size(); ++i) gaps.push_back(p[i] - p[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    std::vector<std::pair<double, int>> out;
    std::size_t i = 0;
    while (i < gaps.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < gaps.size() && gaps[j] - gaps[i] <= cluster_tol)
            sum += gaps[j++];
        out.emplace_back(sum / static_cast<double>(j - i),
                         static_cast<int>(j - i));
        i = j;
    }
    return out;
}

// N_r relation: each point of one set inside (-r, r) lies within 1/r of a
// point of the other, both ways.
inline bool nr_test(const std::vector<double>& s1,
                    const std::vector<double>& s2, double r) {
    if (r <= 0.0) throw DegenerateInput("nr_test: r must be positive");
    const auto covered = [&](const std::vector<double>& a,
                             const std::vector<double>& b) {
        for (double t : a) {
            if (t <= -r || t >= r) continue;
            const auto it = std::lower_bound(b.begin(), b.end(), t);
            double best = std::numeric_limits<double>::infinity();
            if (it != b.end()) best = std::min(best, std::abs(*it - t));
            if (it != b.begin()) best = std::min(best, std::abs(*(it - 1) - t));
            if (best > 1.0 / r) return false;
        }
        return true;
    };
    return covered(s1, s2) && covered(s2, s1);
}

// Tube around the axis of a hyperbolic group element, given as a word in
// the side pairings so the ideal endpoints carry quad precision.
inline TubeSpec axis_tube(const FundamentalDomain& dom,
                          const std::vector<int>& word, double rho) {
    const Mobius g = dom.word_to_mobius(word);
    if (g.classify() != MobiusKind::Hyperbolic)
        throw NotHyperbolic("axis_tube: element is not hyperbolic");
    const Geodesic k = axis(g);
    auto [rep, att] =
        detail::quad_axis_endpoints(detail::quad_word(dom, word));
    if (std::abs(detail::to_double(rep) - k.xi_minus()) > 1e-6 ||
        std::abs(detail::to_double(att) - k.xi_plus()) > 1e-6)
        throw Error("axis_tube: axis reconstruction mismatch");
    return {k, rho, detail::QEndpoints{rep, att}};
}

// Cut-and-project along the axis of a hyperbolic group element; the result
// is periodic with the element's translation length.
inline std::pair<CutProjectSet, double> periodic_reference(
    const FundamentalDomain& dom, const DiscPoint& x,
    const std::vector<int>& word, double rho,
    std::pair<double, double> window, std::size_t node_budget = 1'000'000) {
    const TubeSpec tube = axis_tube(dom, word, rho);
    const GeodesicCoords cx = tube.geodesic.coords(x);
    const double depth =
        std::max(detail::fermi_dist(cx, {window.first, 0.0}),
                 detail::fermi_dist(cx, {window.second, 0.0})) +
        rho + 1.0;
    return {cut_project(dom, x, tube, window, depth, node_budget),
            dom.word_to_mobius(word).translation_length()};
}

// Deterministic pseudo-random geodesic meeting the domain interior: two
// independent ideal endpoints, rejection-sampled.
inline Geodesic geodesic_sampler(const FundamentalDomain& dom, int seed) {
    std::mt19937_64 gen(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int tries = 0; tries < 100000; ++tries) {
        const double a1 = angle(gen), a2 = angle(gen);
        const Complex e1 = std::polar(1.0, a1), e2 = std::polar(1.0, a2);
        if (std::abs(e1 - e2) < 1e-6) continue;
        const Geodesic k = Geodesic::from_endpoints(e1, e2);
        for (double t = -6.0; t <= 6.0; t += 0.05)
            if (dom.strictly_inside(k.point(t), 1e-9)) return k;
    }
    throw DegenerateInput("geodesic_sampler: rejection sampling failed");
}

struct RhoLadderEntry {
    double rho;
    int samples_hit;
};

struct RhoSearchReport {
    double rho = 0.0;  // chosen value; valid when found
    bool found = false;
    double inradius = 0.0;
    int n_samples = 0;
    int seed = 0;
    std::vector<RhoLadderEntry> ladder;
};

// Descending ladder search for a tube width such that every sampled geodesic
// through the domain meets the orbit of B(center, rho). Sampling evidence
// only; the side-extension gate is the theorem-backed part.
inline RhoSearchReport find_rho(const FundamentalDomain& dom, int n_samples,
                                int seed, std::size_t node_budget = 1'000'000) {
    if (!all_extended_sides_hit(dom))
        throw SideExtensionObstruction(
            "find_rho: an extended side stays on the tile boundary network; "
            "no valid rho exists");
    RhoSearchReport report;
    report.inradius = dom.inradius;
    report.n_samples = n_samples;
    report.seed = seed;

    std::vector<Geodesic> samples;
    for (int i = 0; i < n_samples; ++i)
        samples.push_back(geodesic_sampler(dom, seed + i));

    const double T = 3.0 * dom.diameter + 2.0;
    for (double f : {0.99, 0.95, 0.9, 0.85, 0.8, 0.7, 0.6, 0.5}) {
        const double rho = f * dom.inradius;
        int hit = 0;
        for (const Geodesic& k : samples) {
            const GeodesicCoords cx = k.coords(dom.center);
            const double depth =
                std::max(detail::fermi_dist(cx, {-T, 0.0}),
                         detail::fermi_dist(cx, {T, 0.0})) +
                rho + 1.0;
            const CutProjectSet s = cut_project(dom, dom.center, {k, rho},
                                                {-T, T}, depth, node_budget);
            if (!s.points.empty()) ++hit;
        }
        report.ladder.push_back({rho, hit});
        if (hit == n_samples) {
            report.rho = rho;
            report.found = true;
            return report;
        }
    }
    throw NoCandidateFound(
        "find_rho: no ladder candidate was hit by every sampled geodesic");
}

}  // namespace hypercut
