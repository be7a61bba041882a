#pragma once

// Oriented unit-speed geodesics of the Poincaré disc, with a numerically
// stable parameter/offset coordinate system that stays usable far beyond
// the range where raw disc coordinates saturate against the boundary.

#include <cmath>
#include <optional>

#include "hypercut/disc.hpp"

namespace hypercut {

// General 2x2 complex linear-fractional map z -> (p z + q)/(r z + s).
// Used for composed coordinate maps that are not disc isometries.
struct Mat2 {
    Complex p, q, r, s;

    static Mat2 from_mobius(const Mobius& g) {
        return {g.a(), std::conj(g.b()), g.b(), std::conj(g.a())};
    }

    Mat2 compose(const Mat2& o) const {
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r,
                r * o.q + s * o.s};
    }

    // Evaluates without dividing, returning numerator and denominator.
    std::pair<Complex, Complex> apply_parts(Complex z) const {
        return {p * z + q, r * z + s};
    }
};

// Position of a point relative to an oriented geodesic: t is the arclength
// parameter of its orthogonal projection, s the signed perpendicular
// distance (positive on the left of the orientation).
struct GeodesicCoords {
    double t;
    double s;
};

// Oriented geodesic, represented by its two ideal endpoints and the interior
// point taken as parameter zero. Internally carries the Möbius frame F with
// kappa(t) = F(tanh(t/2)), F(-1) = xi_minus, F(+1) = xi_plus.
class Geodesic {
public:
    // Geodesic through z oriented towards w, based at z.
    static Geodesic through(const DiscPoint& z, const DiscPoint& w) {
        if (dist(z, w) < tol::kEq)
            throw DegenerateInput("Geodesic::through: coincident points");
        const Mobius t = Mobius::translation_to(z);
        const Complex w_local = t.inverse().apply(w).value();
        return from_direction(z, w_local / std::abs(w_local));
    }

    // Geodesic with kappa(0) = p and Euclidean tangent direction dir
    // (conformality makes dir the hyperbolic direction as well).
    static Geodesic from_direction(const DiscPoint& p, Complex dir) {
        const double m = std::abs(dir);
        if (m < tol::kEq)
            throw DegenerateInput("Geodesic::from_direction: zero direction");
        Geodesic g;
        g.frame_ = Mobius::translation_to(p) * Mobius::rotation(std::arg(dir));
        g.base_ = p;
        g.xi_plus_ = g.frame_.apply_ideal(Complex(1.0, 0.0));
        g.xi_minus_ = g.frame_.apply_ideal(Complex(-1.0, 0.0));
        return g;
    }

    // Geodesic between two ideal endpoints, based at its point nearest the
    // origin (canonical base).
    static Geodesic from_endpoints(Complex xi_m, Complex xi_p) {
        auto [base, dir] = endpoint_geometry(xi_m, xi_p, std::nullopt);
        return oriented_from(base, dir, xi_m, xi_p);
    }

    // Same, with an explicit base point that must lie on the geodesic.
    static Geodesic from_endpoints_base(Complex xi_m, Complex xi_p,
                                        const DiscPoint& base) {
        auto [b, dir] = endpoint_geometry(xi_m, xi_p, base);
        return oriented_from(b, dir, xi_m, xi_p);
    }

    Complex xi_minus() const { return xi_minus_; }
    Complex xi_plus() const { return xi_plus_; }
    const DiscPoint& base() const { return base_; }
    const Mobius& frame() const { return frame_; }

    DiscPoint point(double t) const {
        return frame_.apply(DiscPoint(Complex(std::tanh(t / 2.0), 0.0)));
    }

    // Euclidean unit tangent at parameter t.
    Complex tangent(double t) const {
        const Complex d = frame_.derivative(Complex(std::tanh(t / 2.0), 0.0));
        return d / std::abs(d);
    }

    // Stable (t, s) coordinates of g(x); composes matrices before dividing so
    // the result stays accurate when g(x) is Euclidean-close to the boundary.
    GeodesicCoords coords(const Mobius& g, const DiscPoint& x) const {
        const Mat2 m = rhp_map().compose(Mat2::from_mobius(g));
        auto [num, den] = m.apply_parts(x.value());
        const double t = std::log(std::abs(num)) - std::log(std::abs(den));
        double phi = std::arg(num) - std::arg(den);
        if (phi > M_PI) phi -= 2.0 * M_PI;
        if (phi < -M_PI) phi += 2.0 * M_PI;
        constexpr double kHalfPi = M_PI / 2.0;
        if (phi >= kHalfPi) phi = std::nextafter(kHalfPi, 0.0);
        if (phi <= -kHalfPi) phi = std::nextafter(-kHalfPi, 0.0);
        return {t, std::asinh(std::tan(phi))};
    }

    GeodesicCoords coords(const DiscPoint& z) const {
        return coords(Mobius::identity(), z);
    }

    // Orthogonal projection: foot parameter and foot point.
    std::pair<double, DiscPoint> project(const DiscPoint& z) const {
        const double t = coords(z).t;
        return {t, point(t)};
    }

    // Signed perpendicular distance, positive on the left of the orientation.
    double signed_distance(const DiscPoint& z) const { return coords(z).s; }

    // Distance from a point (given by its geodesic coordinates) to the
    // parameter segment [t0, t1]. Hyperbolic Pythagoras off the ends.
    static double dist_to_segment(const GeodesicCoords& c, double t0,
                                  double t1) {
        if (c.t >= t0 && c.t <= t1) return std::abs(c.s);
        const double dt = (c.t < t0) ? t0 - c.t : c.t - t1;
        return std::acosh(std::cosh(c.s) * std::cosh(dt));
    }

    // d(0, kappa(t)) without materialising the (possibly boundary-saturated)
    // point.
    double dist_origin_to_point(double t) const {
        const GeodesicCoords o = coords(DiscPoint());
        return std::acosh(std::cosh(o.s) * std::cosh(t - o.t));
    }

    // Orientation-reversing involution fixing this geodesic pointwise.
    Isometry reflection() const {
        const Mobius conj_frame(std::conj(frame_.a()), std::conj(frame_.b()));
        return Isometry(frame_ * conj_frame.inverse(), true);
    }

    // Exact pushforward: base maps to g(base), so parameters are preserved.
    Geodesic transformed(const Mobius& g) const {
        return from_endpoints_base(g.apply_ideal(xi_minus_),
                                   g.apply_ideal(xi_plus_), g.apply(base_));
    }

    // Same geodesic re-based at its point nearest the origin; returns the
    // parameter offset a with rebased(t) = original(t + a).
    std::pair<Geodesic, double> rebase_canonical() const {
        Geodesic g = from_endpoints(xi_minus_, xi_plus_);
        const double a = coords(g.base()).t;
        return {g, a};
    }

    bool same_unoriented(const Geodesic& o, double eps = 1e-9) const {
        const bool fwd = std::abs(xi_minus_ - o.xi_minus_) < eps &&
                         std::abs(xi_plus_ - o.xi_plus_) < eps;
        const bool rev = std::abs(xi_minus_ - o.xi_plus_) < eps &&
                         std::abs(xi_plus_ - o.xi_minus_) < eps;
        return fwd || rev;
    }

    // Transversal intersection with another geodesic, if any.
    std::optional<DiscPoint> intersect(const Geodesic& o) const {
        // Work in this geodesic's frame: self becomes the real-axis diameter.
        const Mobius inv = frame_.inverse();
        const Complex e1 = inv.apply_ideal(o.xi_minus_);
        const Complex e2 = inv.apply_ideal(o.xi_plus_);
        if (std::abs(e1 + e2) < 1e-9) {
            // Diameter in local coordinates; meets the real axis at 0 unless
            // the two geodesics coincide.
            if (std::abs(e1.imag()) < 1e-9) return std::nullopt;
            return frame_.apply(DiscPoint());
        }
        const auto c = circle_center(e1, e2);
        if (!c) return std::nullopt;
        const double cx = c->real();
        const double disc = cx * cx - 1.0;
        if (disc <= 0.0) return std::nullopt;
        // Roots of x^2 - 2 cx x + 1; their product is 1, take the inner one.
        const double root = cx - std::copysign(std::sqrt(disc), cx);
        if (std::abs(root) >= 1.0) return std::nullopt;
        return frame_.apply(DiscPoint(Complex(root, 0.0)));
    }

private:
    Geodesic() : frame_(), base_(), xi_minus_(-1.0, 0.0), xi_plus_(1.0, 0.0) {}

    // Map to the right half-plane: u = (1 + F^{-1} z) / (1 - F^{-1} z).
    Mat2 rhp_map() const {
        const Mat2 fi = Mat2::from_mobius(frame_.inverse());
        const Mat2 cayley{Complex(1, 0), Complex(1, 0), Complex(-1, 0),
                          Complex(1, 0)};
        return cayley.compose(fi);
    }

    // Center of the Euclidean circle orthogonal to the unit circle through
    // two boundary points; nullopt for the (anti)diametral degenerate case.
    static std::optional<Complex> circle_center(Complex xi1, Complex xi2) {
        const double det =
            xi1.real() * xi2.imag() - xi1.imag() * xi2.real();
        if (std::abs(det) < 1e-12) return std::nullopt;
        // Solve Re(conj(xi_i) c) = 1.
        const double cx = (xi2.imag() - xi1.imag()) / det;
        const double cy = (xi1.real() - xi2.real()) / det;
        return Complex(cx, cy);
    }

    static std::pair<DiscPoint, Complex> endpoint_geometry(
        Complex xi_m, Complex xi_p, std::optional<DiscPoint> base) {
        if (std::abs(xi_m - xi_p) < tol::kEq)
            throw DegenerateInput("Geodesic: coincident ideal endpoints");
        const auto c = circle_center(xi_m, xi_p);
        if (!c) {
            // Diameter code path.
            const DiscPoint b = base.value_or(DiscPoint());
            const double cross = b.re() * xi_p.imag() - b.im() * xi_p.real();
            if (std::abs(cross) > 1e-6)
                throw DegenerateInput("Geodesic: base point not on diameter");
            return {b, xi_p - xi_m};
        }
        const double r = std::sqrt(std::norm(*c) - 1.0);
        DiscPoint b = base.value_or(
            DiscPoint(*c * (1.0 - r / std::abs(*c))));
        const Complex radial = b.value() - *c;
        if (std::abs(std::abs(radial) - r) > 1e-6)
            throw DegenerateInput("Geodesic: base point not on geodesic");
        return {b, Complex(0, 1) * radial};
    }

    static Geodesic oriented_from(const DiscPoint& base, Complex dir,
                                  Complex xi_m, Complex xi_p) {
        Geodesic g = from_direction(base, dir);
        if (std::abs(g.xi_plus_ - xi_p) > 1e-6)
            g = from_direction(base, -dir);
        if (std::abs(g.xi_plus_ - xi_p) > 1e-6 ||
            std::abs(g.xi_minus_ - xi_m) > 1e-6)
            throw DegenerateInput("Geodesic: inconsistent endpoints/base");
        return g;
    }

    Mobius frame_;
    DiscPoint base_;
    Complex xi_minus_, xi_plus_;
};

// Axis of a hyperbolic element, oriented from the repelling to the
// attracting fixed point, based at its point nearest the origin.
inline Geodesic axis(const Mobius& g) {
    if (g.classify() != MobiusKind::Hyperbolic)
        throw NotHyperbolic("axis: element is not hyperbolic");
    // Fixed points (i Im(a) +- sqrt(Re(a)^2 - 1)) / b on the unit circle.
    // With the sign representative Re(a) > 0, the + root is attracting.
    const double alpha = g.a().real();
    const double beta = g.a().imag();
    const double s = std::sqrt(alpha * alpha - 1.0);
    const Complex attract = (Complex(0, beta) + s) / g.b();
    const Complex repel = (Complex(0, beta) - s) / g.b();
    return Geodesic::from_endpoints(repel / std::abs(repel),
                                    attract / std::abs(attract));
}

inline Isometry reflect_across(const Geodesic& k) { return k.reflection(); }

// Unsigned angle in [0, pi/2] between two geodesics at a common point.
inline double angle_between(const Geodesic& k1, const Geodesic& k2,
                            const DiscPoint& at) {
    const Complex t1 = k1.tangent(k1.coords(at).t);
    const Complex t2 = k2.tangent(k2.coords(at).t);
    double a = std::abs(std::arg(t2 / t1));
    if (a > M_PI / 2.0) a = M_PI - a;
    return a;
}

// Interior angle at p of the hyperbolic triangle/polygon corner (q, p, r),
// in [0, pi].
inline double vertex_angle(const DiscPoint& p, const DiscPoint& q,
                           const DiscPoint& r) {
    const Complex t1 = Geodesic::through(p, q).tangent(0.0);
    const Complex t2 = Geodesic::through(p, r).tangent(0.0);
    return std::abs(std::arg(t2 / t1));
}

}  // namespace hypercut
