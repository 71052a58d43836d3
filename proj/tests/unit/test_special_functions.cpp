#include "bubbles/special_functions.hpp"

#include <doctest.h>

#include <cmath>

using namespace bubbles;

TEST_CASE("spherical Bessel functions match reference values")
{
    struct Row {
        int l;
        double x, j, y;
    };
    const Row rows[] = {
        {0, 0.001, 0.9999998333333416, -999.9995000000416},
        {1, 0.5, 0.1625370306360667, -4.469181324769897},
        {5, 2.0, 0.0026351697702441186, -18.591445311190984},
        {10, 3.3, 8.770954766465532e-06, -1734.1340525844325},
        {30, 10.0, 2.512057384998957e-13, -6908318646.094518},
        {60, 25.0, 6.654036253029903e-19, -545589678579479.06},
        {40, 1.0, 1.5382103742442343e-61, -8.028450850854059e+58},
    };
    for (const auto& r : rows) {
        CAPTURE(r.l);
        CAPTURE(r.x);
        CHECK(spherical_bessel_j(r.l, r.x)[r.l] == doctest::Approx(r.j).epsilon(1e-12));
        CHECK(spherical_bessel_y(r.l, r.x)[r.l] == doctest::Approx(r.y).epsilon(1e-12));
    }
}

TEST_CASE("Wronskian and derivative")
{
    for (double x : {0.05, 1.0, 7.5, 30.0}) {
        auto j = spherical_bessel_j(21, x), y = spherical_bessel_y(21, x);
        auto dj = spherical_derivative(j, 20, x), dy = spherical_derivative(y, 20, x);
        for (int l = 0; l <= 20; ++l) {
            double w = j[l] * dy[l] - dj[l] * y[l];
            CHECK(w * x * x == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    auto j = spherical_bessel_j(3, 2.0);
    const double h = 1e-6;
    double fd = (spherical_bessel_j(3, 2.0 + h)[1] - spherical_bessel_j(3, 2.0 - h)[1]) / (2 * h);
    CHECK(spherical_derivative(j, 2, 2.0)[1] == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("Legendre polynomials")
{
    auto p = legendre_p(4, 0.3);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == doctest::Approx(0.3));
    CHECK(p[2] == doctest::Approx(0.5 * (3 * 0.09 - 1)));
    CHECK(p[4] == doctest::Approx((35 * std::pow(0.3, 4) - 30 * 0.09 + 3) / 8));
    for (int l = 0; l <= 10; ++l) CHECK(legendre_p(10, 1.0)[l] == doctest::Approx(1.0));
}
