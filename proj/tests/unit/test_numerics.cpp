#include "bubbles/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace bubbles;

TEST_CASE("gauss_legendre matches reference nodes and weights")
{
    // numpy.polynomial.legendre.leggauss(5)
    const double x[] = {-0.906179845938664, -0.5384693101056831, 0.0, 0.5384693101056831, 0.906179845938664};
    const double w[] = {0.23692688505618942, 0.4786286704993662, 0.568888888888889, 0.4786286704993662, 0.23692688505618942};
    GaussRule g = gauss_legendre(5);
    REQUIRE(g.x.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(g.x[i] == doctest::Approx(x[i]).epsilon(1e-14));
        CHECK(g.w[i] == doctest::Approx(w[i]).epsilon(1e-14));
    }
}

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly")
{
    for (int n : {1, 4, 13, 50}) {
        GaussRule g = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; k += 1 + n / 5) {
            double q = 0;
            for (int i = 0; i < n; ++i) q += g.w[i] * std::pow(g.x[i], k);
            double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("pairwise_sum is exact on integers and close to the naive sum")
{
    std::vector<double> v(1001);
    std::iota(v.begin(), v.end(), 0.0);
    CHECK(pairwise_sum(v) == 500500.0);
    std::vector<cplx> c(17, cplx(1, -2));
    CHECK(pairwise_sum(c) == cplx(17, -34));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("complex expm1 keeps relative accuracy near zero")
{
    cplx z(1e-12, -3e-12);
    cplx e = bubbles::expm1(z);
    CHECK(std::abs(e - (z + z * z / 2.0)) < 1e-30);
    cplx big(0.7, 2.0);
    CHECK(std::abs(bubbles::expm1(big) - (std::exp(big) - 1.0)) < 1e-15);
}

TEST_CASE("fibonacci_sphere gives unit vectors with vanishing mean")
{
    auto pts = fibonacci_sphere(590);
    REQUIRE(pts.size() == 590);
    Vec3 mean = Vec3::Zero();
    for (const auto& p : pts) {
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
        mean += p;
    }
    CHECK((mean / 590.0).norm() < 1e-2);
}

TEST_CASE("product_sphere_rule integrates spherical polynomials")
{
    SphereRule r = product_sphere_rule(20, 40);
    double area = 0, z2 = 0, xy = 0;
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        area += r.weights[i];
        z2 += r.weights[i] * r.points[i].z() * r.points[i].z();
        xy += r.weights[i] * r.points[i].x() * r.points[i].y();
    }
    CHECK(area == doctest::Approx(4 * pi).epsilon(1e-13));
    CHECK(z2 == doctest::Approx(4 * pi / 3).epsilon(1e-13));
    CHECK(std::abs(xy) < 1e-13);
}

TEST_CASE("Rng is deterministic and in [0, 1)")
{
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("least_squares_slope recovers a power law")
{
    std::vector<double> x, y;
    for (double a : {1e-2, 5e-3, 2.5e-3}) {
        x.push_back(std::log(a));
        y.push_back(std::log(3.0 * a * a));
    }
    CHECK(least_squares_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(least_squares_slope({1.0}, {1.0}), Error);
}

TEST_CASE("Error carries kind and module")
{
    Error e(ErrorKind::infeasible_regime, "geometry", "t >= s/3");
    CHECK(e.kind() == ErrorKind::infeasible_regime);
    CHECK(e.module() == "geometry");
    CHECK(std::string(e.what()).find("infeasible-regime") != std::string::npos);
}
