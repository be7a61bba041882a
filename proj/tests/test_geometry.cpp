#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hypercut/disc.hpp"
#include "hypercut/geodesic.hpp"

using namespace hypercut;

namespace {

std::mt19937_64 rng(20240811ull);

DiscPoint random_point(double rmax = 0.85) {
    std::uniform_real_distribution<double> ur(0.0, rmax);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
    return DiscPoint(std::polar(ur(rng), ua(rng)));
}

Mobius random_mobius() {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const Complex b(u(rng), u(rng));
    const double phase = u(rng);
    const Complex a = std::polar(std::sqrt(1.0 + std::norm(b)), phase);
    return Mobius(a, b);
}

// Independent oracle: numerical integration of ds = 2|dz|/(1-|z|^2) along
// the Euclidean segment from 0 to r (the radius is the geodesic).
double radial_length_by_quadrature(double r, int n = 200000) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * r / n;
        acc += 2.0 / (1.0 - x * x) * (r / n);
    }
    return acc;
}

// Independent oracle: golden-section minimisation of s -> d(z, kappa(s)).
double golden_section_foot(const Geodesic& k, const DiscPoint& z, double lo,
                           double hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    for (int i = 0; i < 100; ++i) {
        if (dist(z, k.point(c)) < dist(z, k.point(d)))
            b = d;
        else
            a = c;
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    // Polish past the sqrt(eps) floor of value comparisons: bisect on the
    // central-difference slope.
    const double h = 1e-5;
    double lo2 = (a + b) / 2.0 - 1e-4, hi2 = (a + b) / 2.0 + 1e-4;
    auto slope = [&](double t) {
        return dist(z, k.point(t + h)) - dist(z, k.point(t - h));
    };
    for (int i = 0; i < 80; ++i) {
        const double mid = (lo2 + hi2) / 2.0;
        if (slope(mid) > 0.0)
            hi2 = mid;
        else
            lo2 = mid;
    }
    return (lo2 + hi2) / 2.0;
}

}  // namespace

TEST_CASE("distance basics") {
    CHECK(dist(DiscPoint(), DiscPoint()) == doctest::Approx(0.0));
    CHECK(dist(DiscPoint(0.5, 0.0), DiscPoint()) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    // Quadrature oracle along the radius.
    CHECK(std::abs(dist(DiscPoint(0.5, 0.0), DiscPoint()) -
                   radial_length_by_quadrature(0.5)) < 1e-8);

    // dist(0.3, 0.3i) via the move-to-origin route.
    const DiscPoint z(0.3, 0.0), w(0.0, 0.3);
    const Mobius t = Mobius::translation_to(z).inverse();
    CHECK(std::abs(dist(z, w) - dist(DiscPoint(), t.apply(w))) < 1e-10);
}

TEST_CASE("mobius apply") {
    const DiscPoint half(0.5, 0.0);
    CHECK(std::abs(Mobius::rotation(M_PI).apply(half).value() -
                   Complex(-0.5, 0.0)) < 1e-12);
    for (int i = 0; i < 20; ++i) {
        const DiscPoint z = random_point();
        CHECK(std::abs(Mobius::identity().apply(z).value() - z.value()) <
              1e-12);
    }
    const Mobius push(Complex(std::cosh(1.0), 0.0),
                      Complex(std::sinh(1.0), 0.0));
    const DiscPoint img = push.apply(DiscPoint());
    CHECK(std::abs(img.value() - Complex(std::tanh(1.0), 0.0)) < 1e-12);
    CHECK(dist(DiscPoint(), img) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("isometry property") {
    for (int i = 0; i < 50; ++i) {
        const Mobius g = random_mobius();
        const DiscPoint z = random_point(), w = random_point();
        CHECK(std::abs(dist(g.apply(z), g.apply(w)) - dist(z, w)) < 1e-9);
    }
}

TEST_CASE("compose and inverse") {
    const Mobius g = random_mobius();
    CHECK((Mobius::identity() * g).approx_equal(g, 1e-12));
    CHECK((g * g.inverse()).is_identity(1e-12));

    // Rotations about 0 are abelian with additive angles.
    const Mobius r1 = Mobius::rotation(0.7), r2 = Mobius::rotation(1.1);
    CHECK((r1 * r2).approx_equal(Mobius::rotation(1.8), 1e-12));

    for (int i = 0; i < 100; ++i) {
        const Mobius a = random_mobius(), b = random_mobius();
        const DiscPoint z = random_point();
        CHECK(std::abs((a * b).apply(z).value() -
                       a.apply(b.apply(z)).value()) < 1e-10);
    }
}

TEST_CASE("psl sign identification") {
    const Mobius g = random_mobius();
    const Mobius neg(-g.a(), -g.b());
    for (int i = 0; i < 100; ++i) {
        const DiscPoint z = random_point();
        CHECK(std::abs(g.apply(z).value() - neg.apply(z).value()) < 1e-12);
    }
    CHECK(g.approx_equal(neg, 1e-12));
}

TEST_CASE("classification") {
    CHECK(Mobius::rotation(M_PI / 3.0).classify() == MobiusKind::Elliptic);
    CHECK(std::abs(Mobius::rotation(M_PI / 3.0).trace()) ==
          doctest::Approx(2.0 * std::cos(M_PI / 6.0)));
    const Mobius push(Complex(std::cosh(1.0), 0.0),
                      Complex(std::sinh(1.0), 0.0));
    CHECK(push.classify() == MobiusKind::Hyperbolic);
    CHECK(Mobius::identity().classify() == MobiusKind::Identity);
}

TEST_CASE("translation length") {
    const Mobius push(Complex(std::cosh(1.0), 0.0),
                      Complex(std::sinh(1.0), 0.0));
    CHECK(push.translation_length() == doctest::Approx(2.0).epsilon(1e-12));

    // Diagonal element with eigenvalue lambda = 2: trace 2 cosh(log 2) = 2.5.
    // Its axis is the diameter through 0 and 3i/5.
    const double lam = 2.0;
    const double c = (lam + 1.0 / lam) / 2.0, s = (lam - 1.0 / lam) / 2.0;
    const Mobius diag(Complex(c, 0.0), Complex(0.0, -s));
    CHECK(diag.translation_length() ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    const Geodesic ax = axis(diag);
    const DiscPoint marked(0.0, (lam * lam - 1.0) / (lam * lam + 1.0));
    CHECK(std::abs(ax.signed_distance(marked)) < 1e-9);
    CHECK(std::abs(ax.signed_distance(DiscPoint())) < 1e-9);

    const Mobius h = random_mobius();
    CHECK((h * push * h.inverse()).translation_length() ==
          doctest::Approx(2.0).epsilon(1e-9));

    CHECK_THROWS_AS(Mobius::rotation(1.0).translation_length(),
                    NotHyperbolic);
}

TEST_CASE("rotation about a point") {
    const Mobius r = Mobius::rotation(0.9);
    CHECK(std::abs(r.a() - std::polar(1.0, 0.45)) < 1e-12);
    CHECK(std::abs(r.b()) < 1e-12);

    for (int i = 0; i < 10; ++i) {
        const DiscPoint p = random_point();
        const Mobius g = rotation_about(p, 2.0 * M_PI / 6.0);
        CHECK(std::abs(g.apply(p).value() - p.value()) < 1e-10);
        Mobius acc = Mobius::identity();
        for (int j = 0; j < 6; ++j) acc = acc * g;
        CHECK(acc.is_identity(1e-9));
        // Derivative at the fixed point has argument theta.
        CHECK(std::arg(g.derivative(p.value())) ==
              doctest::Approx(2.0 * M_PI / 6.0).epsilon(1e-9));
    }
}

TEST_CASE("geodesic through points") {
    const Geodesic diam =
        Geodesic::through(DiscPoint(-0.5, 0.0), DiscPoint(0.5, 0.0));
    CHECK(std::abs(diam.xi_minus() - Complex(-1.0, 0.0)) < 1e-9);
    CHECK(std::abs(diam.xi_plus() - Complex(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(diam.base().value() - Complex(-0.5, 0.0)) < 1e-12);

    const Geodesic up = Geodesic::from_direction(DiscPoint(), Complex(0, 1));
    CHECK(std::abs(up.xi_plus() - Complex(0.0, 1.0)) < 1e-9);
    CHECK(std::abs(up.xi_minus() - Complex(0.0, -1.0)) < 1e-9);

    // Generic arc: orthogonality |center|^2 = 1 + radius^2 plus incidence.
    const DiscPoint z(0.3, 0.0), w(0.2, 0.4);
    const Geodesic k = Geodesic::through(z, w);
    const Complex e1 = k.xi_minus(), e2 = k.xi_plus();
    const double det = e1.real() * e2.imag() - e1.imag() * e2.real();
    REQUIRE(std::abs(det) > 1e-9);
    const Complex c((e2.imag() - e1.imag()) / det,
                    (e1.real() - e2.real()) / det);
    const double r2 = std::norm(c) - 1.0;
    REQUIRE(r2 > 0.0);
    CHECK(std::abs(std::norm(z.value() - c) - r2) < 1e-9);
    CHECK(std::abs(std::norm(w.value() - c) - r2) < 1e-9);

    CHECK_THROWS_AS(Geodesic::through(z, z), DegenerateInput);
}

TEST_CASE("geodesic parametrization") {
    const Geodesic k =
        Geodesic::through(DiscPoint(), DiscPoint(0.5, 0.0));
    CHECK(std::abs(k.point(1.0).value() - Complex(std::tanh(0.5), 0.0)) <
          1e-12);
    CHECK(std::abs(k.point(0.0).value() - k.base().value()) < 1e-12);

    for (int i = 0; i < 30; ++i) {
        const Geodesic g = Geodesic::through(random_point(), random_point());
        std::uniform_real_distribution<double> ut(-3.0, 3.0);
        const double t = ut(rng);
        CHECK(std::abs(dist(g.point(0.0), g.point(t)) - std::abs(t)) < 1e-9);
        // Unit speed: finite-difference derivative in the hyperbolic metric.
        const double h = 1e-5;
        const Complex dz = g.point(t + h).value() - g.point(t).value();
        const double speed =
            2.0 * std::abs(dz) / (1.0 - std::norm(g.point(t).value())) / h;
        CHECK(std::abs(speed - 1.0) < 1e-4);
    }
}

TEST_CASE("projection") {
    const Geodesic k =
        Geodesic::through(DiscPoint(-0.5, 0.0), DiscPoint(0.5, 0.0));
    auto [t, foot] = k.project(DiscPoint(0.0, 0.4));
    // Base is -0.5, so the foot over the origin sits at parameter d(-0.5, 0).
    CHECK(foot.value().real() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(foot.value().imag()) < 1e-10);
    CHECK(t == doctest::Approx(dist(DiscPoint(-0.5, 0.0), DiscPoint())));

    for (int i = 0; i < 25; ++i) {
        const Geodesic g = Geodesic::through(random_point(), random_point());
        const DiscPoint z = random_point();
        auto [tz, fz] = g.project(z);
        // Idempotence.
        auto [tf, ff] = g.project(fz);
        CHECK(std::abs(tf - tz) < 1e-9);
        CHECK(std::abs(ff.value() - fz.value()) < 1e-9);
        // Golden-section oracle.
        const double ts = golden_section_foot(g, z, tz - 2.0, tz + 2.0);
        CHECK(std::abs(ts - tz) < 1e-8);
        // Perpendicularity at the foot (when z is off the geodesic).
        if (dist(z, fz) > 1e-3) {
            const Geodesic drop = Geodesic::through(fz, z);
            CHECK(std::abs(angle_between(g, drop, fz) - M_PI / 2.0) < 1e-7);
        }
        // |signed distance| agrees with the distance to the foot.
        CHECK(std::abs(std::abs(g.signed_distance(z)) - dist(z, fz)) < 1e-9);
    }
}

TEST_CASE("signed distance orientation") {
    const Geodesic k =
        Geodesic::through(DiscPoint(-0.5, 0.0), DiscPoint(0.5, 0.0));
    CHECK(k.signed_distance(k.point(0.7)) == doctest::Approx(0.0));
    CHECK(k.signed_distance(DiscPoint(0.0, 0.4)) > 0.0);
    CHECK(k.signed_distance(DiscPoint(0.0, -0.4)) < 0.0);
}

TEST_CASE("axis of hyperbolic elements") {
    const Mobius push(Complex(std::cosh(1.0), 0.0),
                      Complex(std::sinh(1.0), 0.0));
    const Geodesic ax = axis(push);
    CHECK(std::abs(ax.xi_minus() - Complex(-1.0, 0.0)) < 1e-9);
    CHECK(std::abs(ax.xi_plus() - Complex(1.0, 0.0)) < 1e-9);

    const Mobius rot = Mobius::rotation(M_PI / 2.0);
    const Geodesic ax2 = axis(rot * push * rot.inverse());
    CHECK(std::abs(ax2.xi_plus() - Complex(0.0, 1.0)) < 1e-9);
    CHECK(std::abs(ax2.xi_minus() - Complex(0.0, -1.0)) < 1e-9);

    for (int i = 0; i < 20; ++i) {
        Mobius g = random_mobius();
        if (g.classify() != MobiusKind::Hyperbolic) continue;
        const Geodesic a = axis(g);
        const double len = g.translation_length();
        std::uniform_real_distribution<double> ut(-2.0, 2.0);
        const double t = ut(rng);
        CHECK(std::abs(g.apply(a.point(t)).value() -
                       a.point(t + len).value()) < 1e-8);
    }
}

TEST_CASE("reflection") {
    const Geodesic k =
        Geodesic::through(DiscPoint(-0.5, 0.0), DiscPoint(0.5, 0.0));
    const Isometry r = reflect_across(k);
    for (int i = 0; i < 20; ++i) {
        const DiscPoint z = random_point();
        CHECK(std::abs(r.apply(z).value() - std::conj(z.value())) < 1e-10);
        // Involution.
        CHECK(std::abs(r.apply(r.apply(z)).value() - z.value()) < 1e-10);
    }
    const Geodesic g = Geodesic::through(random_point(), random_point());
    const Isometry rg = reflect_across(g);
    for (int i = 0; i < 10; ++i) {
        std::uniform_real_distribution<double> ut(-2.0, 2.0);
        const DiscPoint on = g.point(ut(rng));
        CHECK(std::abs(rg.apply(on).value() - on.value()) < 1e-10);
        const DiscPoint z = random_point();
        CHECK(std::abs(rg.apply(rg.apply(z)).value() - z.value()) < 1e-9);
        CHECK(std::abs(dist(rg.apply(z), rg.apply(on)) - dist(z, on)) < 1e-9);
    }
}

TEST_CASE("hyperbolic law of cosines closure") {
    // Triangles built from three pairwise-intersecting geodesics.
    int built = 0;
    while (built < 10) {
        const Geodesic g1 = Geodesic::through(random_point(0.5), random_point(0.5));
        const Geodesic g2 = Geodesic::through(random_point(0.5), random_point(0.5));
        const Geodesic g3 = Geodesic::through(random_point(0.5), random_point(0.5));
        const auto p12 = g1.intersect(g2);
        const auto p23 = g2.intersect(g3);
        const auto p31 = g3.intersect(g1);
        if (!p12 || !p23 || !p31) continue;
        if (dist(*p12, *p23) < 0.05 || dist(*p23, *p31) < 0.05 ||
            dist(*p31, *p12) < 0.05)
            continue;
        ++built;
        // Vertices: A at p12? Name C at p12, A at p23, B at p31.
        const DiscPoint vc = *p12, va = *p23, vb = *p31;
        const double A = vertex_angle(va, vb, vc);
        const double B = vertex_angle(vb, va, vc);
        const double C = vertex_angle(vc, va, vb);
        const double c = dist(va, vb);
        const double rhs = (std::cos(A) * std::cos(B) + std::cos(C)) /
                           (std::sin(A) * std::sin(B));
        CHECK(std::abs(std::cosh(c) - rhs) < 1e-8);
    }
}

TEST_CASE("stable coordinates far along a geodesic") {
    const Geodesic k =
        Geodesic::through(DiscPoint(0.1, 0.05), DiscPoint(0.3, -0.2));
    // Push a point 18 units along by an axis translation and check that the
    // coordinate machinery still reports parameters accurately. The raw disc
    // point is within 1e-8 of the boundary here; the matrix-composed route
    // keeps ~e^{-l} of headroom above roundoff.
    const double l = 18.0;
    const Mobius push(Complex(std::cosh(l / 2.0), 0.0),
                      Complex(std::sinh(l / 2.0), 0.0));
    // Conjugate the real-axis translation onto k.
    const Mobius f = k.frame();
    const Mobius along = f * push * f.inverse();
    const GeodesicCoords c0 = k.coords(Mobius::identity(), k.base());
    const GeodesicCoords c1 = k.coords(along, k.base());
    CHECK(std::abs(c1.t - (c0.t + l)) < 1e-6);
    CHECK(std::abs(c1.s - c0.s) < 1e-6);
    CHECK(std::abs(k.dist_origin_to_point(0.0) - dist(DiscPoint(), k.base())) <
          1e-9);
}

TEST_CASE("geodesic transforms and rebasing") {
    const Geodesic k = Geodesic::through(random_point(), random_point());
    const Mobius g = random_mobius();
    const Geodesic kg = k.transformed(g);
    for (double t : {-1.3, 0.0, 0.8}) {
        CHECK(std::abs(kg.point(t).value() - g.apply(k.point(t)).value()) <
              1e-9);
    }
    auto [canon, a] = kg.rebase_canonical();
    CHECK(canon.same_unoriented(kg));
    for (double t : {-0.9, 0.4}) {
        CHECK(std::abs(canon.point(t).value() - kg.point(t + a).value()) <
              1e-9);
    }
}
