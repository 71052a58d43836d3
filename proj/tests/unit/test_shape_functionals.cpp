#include "bubbles/shape_functionals.hpp"

#include <doctest.h>

using namespace bubbles;

TEST_CASE("sphere functionals are exact")
{
    for (double r : {1.0, 0.01}) {
        ShapeFunctionals f = compute_functionals(BubbleShape::sphere(r), 3);
        CHECK(f.cap == doctest::Approx(4 * pi * r).epsilon(1e-10));
        CHECK(f.aHat == doctest::Approx(-8 * pi * r * r / 3).epsilon(1e-10));
        CHECK(f.volume == doctest::Approx(4 * pi * r * r * r / 3).epsilon(1e-12));
        CHECK(f.surfaceArea == doctest::Approx(4 * pi * r * r).epsilon(1e-12));
        CHECK(f.centroidOffset.norm() < 1e-10 * r);
    }
}

TEST_CASE("A is constant on a sphere")
{
    SurfaceQuadrature q = build_quadrature(BubbleShape::sphere(0.5, Vec3(1, 2, 3)), 2);
    for (double v : compute_A_values(q)) CHECK(v == doctest::Approx(-8 * pi * 0.25 / 3).epsilon(1e-13));
    CHECK_THROWS_AS(compute_A_function(q, q.size()), Error);
}

TEST_CASE("ellipsoid functionals converge to reference values")
{
    // Reference: independent adaptive quadrature of the closed-form ellipsoid integrals.
    const double cap = 9.140913388459154, aHat = -4.07841915465966, area = 6.641378673215237, vol = 1.4660765716752366;
    BubbleShape e = BubbleShape::ellipsoid(Vec3(1, 0.7, 0.5));
    double prevCap = 1e9, prevA = 1e9;
    for (int order = 2; order <= 4; ++order) {
        ShapeFunctionals f = compute_functionals(e, order);
        double ec = std::abs(f.cap / cap - 1), ea = std::abs(f.aHat / aHat - 1);
        CHECK(ec < prevCap);
        CHECK(ea < prevA);
        prevCap = ec;
        prevA = ea;
    }
    ShapeFunctionals f = compute_functionals(e, 4);
    CHECK(f.cap == doctest::Approx(cap).epsilon(1e-2));
    CHECK(f.aHat == doctest::Approx(aHat).epsilon(1e-2));
    CHECK(f.surfaceArea == doctest::Approx(area).epsilon(1e-2));
    CHECK(f.volume == doctest::Approx(vol).epsilon(1e-2));
    CHECK(compute_volume(e) == doctest::Approx(vol).epsilon(1e-15));
}

TEST_CASE("functionals scale as delta, delta^2, delta^3")
{
    BubbleShape e = BubbleShape::ellipsoid(Vec3(1, 0.7, 0.5));
    ShapeFunctionals ref = compute_functionals(e, 2);
    for (double delta : {1e-1, 1e-2, 1e-3}) {
        BubbleShape s = e;
        s.scale = delta;
        ShapeFunctionals f = compute_functionals(s, 2);
        CHECK(f.cap / (delta * ref.cap) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(f.aHat / (delta * delta * ref.aHat) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(f.volume / (delta * delta * delta * ref.volume) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("volume moment of a symmetric body vanishes")
{
    SurfaceQuadrature q = build_quadrature(BubbleShape::ellipsoid(Vec3(1, 0.7, 0.5), Vec3(3, 0, 0)), 2);
    CHECK(compute_volume_moment(q).norm() < 1e-12);
}
