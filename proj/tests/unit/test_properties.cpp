#include "bubbles/fields.hpp"
#include "bubbles/shape_functionals.hpp"

#include <doctest.h>

using namespace bubbles;

namespace {

// Icosphere with radius 1 + sum of a few random low-order modes, amplitude small enough to stay star-shaped.
TriMesh random_star_mesh(Rng& rng)
{
    TriMesh m = icosphere(2);
    Vec3 k1(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    Vec3 k2(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double a1 = rng.uniform(0, 0.25), a2 = rng.uniform(0, 0.15), ph = rng.uniform(0, 2 * pi);
    for (auto& v : m.vertices) v *= 1 + a1 * std::sin(2 * k1.dot(v) + ph) + a2 * std::cos(3 * k2.dot(v));
    return m;
}

}  // namespace

TEST_CASE("random star-shaped bodies have negative aHat and sandwiched capacitance")
{
    Rng rng(2024);
    for (int i = 0; i < 20; ++i) {
        CAPTURE(i);
        BubbleShape s = BubbleShape::from_mesh(random_star_mesh(rng));
        ShapeFunctionals f = compute_functionals(s, 1);
        CHECK(f.aHat < 0);
        CHECK(f.volume > 0);
        CHECK(f.cap >= 4 * pi * s.inner_radius() * 0.99);
        CHECK(f.cap <= 4 * pi * s.outer_radius() * 1.01);
    }
}

TEST_CASE("random ellipsoids: functionals scale with size")
{
    Rng rng(77);
    for (int i = 0; i < 5; ++i) {
        BubbleShape e = BubbleShape::ellipsoid(Vec3(1, rng.uniform(0.4, 1), rng.uniform(0.3, 1)));
        ShapeFunctionals ref = compute_functionals(e, 1);
        for (double delta : {1e-1, 1e-2, 1e-3}) {
            BubbleShape s = e;
            s.scale = delta;
            ShapeFunctionals f = compute_functionals(s, 1);
            CHECK(std::abs(f.cap / (delta * ref.cap) - 1) <= 1e-8);
            CHECK(std::abs(f.aHat / (delta * delta * ref.aHat) - 1) <= 1e-8);
            CHECK(std::abs(f.volume / (delta * delta * delta * ref.volume) - 1) <= 1e-8);
        }
    }
}

TEST_CASE("generated clusters: symmetric systems, thread-independent patterns, translation covariance")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ClusterSpec spec;
        spec.a = 0.01;
        spec.s = 1.0;
        spec.t = 0.4;
        spec.seed = seed;
        Cluster c = generate_cluster(spec);
        MediumSpec med;
        med.perBubble.assign(c.size(), Material{1e-4, 1e-4});
        med.omega = 2.0;
        ShapeFunctionals f = compute_functionals(c.bubbles[0], 2);
        std::vector<ScatterCoefficient> co(c.size(), leading_coefficient(f, med, 0));
        Vec3 theta = Vec3(1, 1, 1).normalized();
        FoldyLaxSystem sys = solve(assemble(c, co, med, theta));
        CHECK((sys.matrix - sys.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);

        auto dirs = fibonacci_sphere(64);
        set_threads(1);
        FarFieldPattern p1 = far_field(sys, c, dirs);
        set_threads(4);
        FarFieldPattern p4 = far_field(sys, c, dirs);
        set_threads(1);
        CHECK(p1.values == p4.values);
        CHECK(p1.crossSection == p4.crossSection);

        Vec3 shift(0.25, -0.5, 2.0);
        std::vector<BubbleShape> moved = c.bubbles;
        for (auto& b : moved) b.center += shift;
        Cluster cm = make_cluster(moved);
        FoldyLaxSystem sm = solve(assemble(cm, co, med, theta));
        FarFieldPattern pm = far_field(sm, cm, dirs);
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            cplx phase = std::exp(I * sys.kappa0 * (theta - dirs[j]).dot(shift));
            CHECK(std::abs(pm.values[j] - phase * p1.values[j]) <= 1e-9 * std::abs(p1.values[j]));
        }
    }
}
