#pragma once

// Poincaré disc model: points, orientation-preserving Möbius isometries and
// the reflection helper needed to assemble triangle reflection groups.

#include <cmath>
#include <complex>
#include <cstdint>

#include "hypercut/errors.hpp"

namespace hypercut {

using Complex = std::complex<double>;

namespace tol {
// Equality of points / matrices.
inline constexpr double kEq = 1e-9;
// Strict boundary exclusion for disc membership.
inline constexpr double kBoundary = 1e-12;
// Point-level orbit dedup bucket.
inline constexpr double kOrbitDedup = 1e-7;
}  // namespace tol

// A point of the open unit disc.
class DiscPoint {
public:
    DiscPoint() : z_(0.0, 0.0) {}
    explicit DiscPoint(Complex z) : z_(z) {
        if (std::abs(z) >= 1.0 - tol::kBoundary)
            throw DegenerateInput("DiscPoint: |z| >= 1 - 1e-12");
    }
    DiscPoint(double re, double im) : DiscPoint(Complex(re, im)) {}

    Complex value() const { return z_; }
    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }

private:
    Complex z_;
};

// Hyperbolic distance, d(z,w) = 2 artanh(|z-w| / |1 - conj(w) z|).
inline double dist(const DiscPoint& z, const DiscPoint& w) {
    const Complex num = z.value() - w.value();
    const Complex den = 1.0 - std::conj(w.value()) * z.value();
    const double q = std::abs(num) / std::abs(den);
    return 2.0 * std::atanh(q);
}

enum class MobiusKind { Identity, Elliptic, Parabolic, Hyperbolic };

// Orientation-preserving isometry z -> (a z + conj(b)) / (b z + conj(a))
// with |a|^2 - |b|^2 = 1, identified up to global sign (PSL).
class Mobius {
public:
    Mobius() : a_(1.0, 0.0), b_(0.0, 0.0) {}

    Mobius(Complex a, Complex b) : a_(a), b_(b) {
        renormalize();
        canonicalize_sign();
    }

    static Mobius identity() { return Mobius(); }

    // Rotation by theta about the origin.
    static Mobius rotation(double theta) {
        return Mobius(std::polar(1.0, theta / 2.0), Complex(0.0, 0.0));
    }

    // The translation along the geodesic through 0 and p taking 0 to p.
    static Mobius translation_to(const DiscPoint& p) {
        const double s = std::sqrt(1.0 - std::norm(p.value()));
        return Mobius(Complex(1.0 / s, 0.0), std::conj(p.value()) / s);
    }

    Complex a() const { return a_; }
    Complex b() const { return b_; }

    // Real trace of the SU(1,1) matrix representative.
    double trace() const { return 2.0 * a_.real(); }

    DiscPoint apply(const DiscPoint& z) const {
        Complex w = apply_ideal_or_interior(z.value());
        // Guard against roundoff pushing images marginally outside.
        const double m = std::abs(w);
        if (m >= 1.0 - tol::kBoundary) w *= (1.0 - 2.0 * tol::kBoundary) / m;
        return DiscPoint(w);
    }

    // Action on boundary (or interior) points without disc clamping.
    Complex apply_ideal(Complex z) const { return apply_ideal_or_interior(z); }

    // Derivative gamma'(z) = 1 / (b z + conj(a))^2.
    Complex derivative(Complex z) const {
        const Complex d = b_ * z + std::conj(a_);
        return 1.0 / (d * d);
    }

    Mobius inverse() const { return Mobius(std::conj(a_), -b_); }

    Mobius compose(const Mobius& h) const {
        // Matrix product [[a, conj(b)],[b, conj(a)]] * [[h.a, ...],...].
        return Mobius(a_ * h.a_ + std::conj(b_) * h.b_,
                      b_ * h.a_ + std::conj(a_) * h.b_);
    }

    Mobius operator*(const Mobius& h) const { return compose(h); }

    bool is_identity(double eps = tol::kEq) const {
        return std::abs(a_ - Complex(1.0, 0.0)) < eps && std::abs(b_) < eps;
    }

    // Equality up to global sign. The stored sign is canonical, but values
    // straddling the canonicalization boundary still need the -h check.
    bool approx_equal(const Mobius& h, double eps = tol::kEq) const {
        const bool plus =
            std::abs(a_ - h.a_) < eps && std::abs(b_ - h.b_) < eps;
        const bool minus =
            std::abs(a_ + h.a_) < eps && std::abs(b_ + h.b_) < eps;
        return plus || minus;
    }

    MobiusKind classify(double eps = tol::kEq) const {
        if (is_identity(eps)) return MobiusKind::Identity;
        const double t = std::abs(trace());
        if (t < 2.0 - eps) return MobiusKind::Elliptic;
        if (t > 2.0 + eps) return MobiusKind::Hyperbolic;
        return MobiusKind::Parabolic;
    }

    // l(g) = 2 log(lambda) = 2 arccosh(|trace| / 2) for hyperbolic g.
    double translation_length() const {
        if (classify() != MobiusKind::Hyperbolic)
            throw NotHyperbolic("translation_length: element is not hyperbolic");
        return 2.0 * std::acosh(std::abs(trace()) / 2.0);
    }

private:
    Complex apply_ideal_or_interior(Complex z) const {
        return (a_ * z + std::conj(b_)) / (b_ * z + std::conj(a_));
    }

    void renormalize() {
        const double det = std::norm(a_) - std::norm(b_);
        const double mag = std::norm(a_) + std::norm(b_);
        // For large entries the determinant is evaluated with catastrophic
        // cancellation; products of unit-determinant factors are unit to
        // machine precision, so leave them alone rather than inject noise.
        if (std::abs(det - 1.0) <= 1e-11 * mag) return;
        if (det <= 0.0) throw DegenerateInput("Mobius: |a|^2 - |b|^2 <= 0");
        const double s = std::sqrt(det);
        a_ /= s;
        b_ /= s;
    }

    // Store the sign representative with Re(a) > 0, ties broken by Im(a),
    // then Re(b), then Im(b).
    void canonicalize_sign() {
        const double keys[4] = {a_.real(), a_.imag(), b_.real(), b_.imag()};
        for (double k : keys) {
            if (k > tol::kBoundary) return;
            if (k < -tol::kBoundary) {
                a_ = -a_;
                b_ = -b_;
                return;
            }
        }
    }

    Complex a_, b_;
};

// Rotation by theta about an arbitrary point: conjugate of a rotation
// about 0 by the translation taking 0 to p.
inline Mobius rotation_about(const DiscPoint& p, double theta) {
    const Mobius t = Mobius::translation_to(p);
    return t * Mobius::rotation(theta) * t.inverse();
}

// Possibly orientation-reversing isometry: z -> mobius(conj(z)) when
// reversing, else z -> mobius(z).
class Isometry {
public:
    Isometry() : mobius_(), reversing_(false) {}
    Isometry(Mobius m, bool reversing) : mobius_(m), reversing_(reversing) {}

    static Isometry direct(Mobius m) { return Isometry(m, false); }

    const Mobius& mobius() const { return mobius_; }
    bool reversing() const { return reversing_; }

    DiscPoint apply(const DiscPoint& z) const {
        const Complex w = reversing_ ? std::conj(z.value()) : z.value();
        return mobius_.apply(DiscPoint(w));
    }

    Complex apply_ideal(Complex z) const {
        return mobius_.apply_ideal(reversing_ ? std::conj(z) : z);
    }

    Isometry compose(const Isometry& h) const {
        // (this . h): conjugation commutes past a Mobius by conjugating
        // its coefficients.
        Mobius m = h.mobius_;
        if (reversing_) m = Mobius(std::conj(m.a()), std::conj(m.b()));
        return Isometry(mobius_ * m, reversing_ != h.reversing_);
    }

private:
    Mobius mobius_;
    bool reversing_;
};

}  // namespace hypercut
