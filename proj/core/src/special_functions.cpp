#include "bubbles/special_functions.hpp"

#include "bubbles/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace bubbles {

namespace {

const char* kModule = "special_functions";

void check(int lMax, double x)
{
    if (lMax < 0) throw Error(ErrorKind::invalid_argument, kModule, "negative order");
    if (!(x > 0) || !std::isfinite(x)) throw Error(ErrorKind::invalid_argument, kModule, "argument must be positive and finite");
}

}  // namespace

std::vector<double> spherical_bessel_j(int lMax, double x)
{
    check(lMax, x);
    // Ratios r_l = j_l / j_{l-1} from the backward continued fraction, then forward from j_0.
    const int start = lMax + 40 + static_cast<int>(std::ceil(x));
    std::vector<double> ratio(static_cast<std::size_t>(lMax) + 1, 0.0);
    double r = 0.0;
    for (int l = start; l >= 1; --l) {
        r = x / (2 * l + 1 - x * r);
        if (l <= lMax) ratio[l] = r;
    }
    std::vector<double> j(static_cast<std::size_t>(lMax) + 1);
    j[0] = x < 1e-4 ? 1 - x * x / 6 + x * x * x * x / 120 : std::sin(x) / x;
    for (int l = 1; l <= lMax; ++l) j[l] = ratio[l] * j[l - 1];
    return j;
}

std::vector<double> spherical_bessel_y(int lMax, double x)
{
    check(lMax, x);
    std::vector<double> y(static_cast<std::size_t>(lMax) + 1);
    y[0] = -std::cos(x) / x;
    if (lMax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int l = 1; l < lMax; ++l) y[l + 1] = (2 * l + 1) / x * y[l] - y[l - 1];
    return y;
}

std::vector<double> spherical_derivative(const std::vector<double>& f, int lMax, double x)
{
    if (static_cast<int>(f.size()) < lMax + 2) throw Error(ErrorKind::invalid_argument, kModule, "derivative needs order lMax + 1");
    std::vector<double> d(static_cast<std::size_t>(lMax) + 1);
    d[0] = -f[1];
    for (int l = 1; l <= lMax; ++l) d[l] = f[l - 1] - (l + 1) / x * f[l];
    return d;
}

std::vector<double> legendre_p(int lMax, double x)
{
    std::vector<double> p(static_cast<std::size_t>(std::max(lMax, 1)) + 1);
    p[0] = 1;
    p[1] = x;
    for (int l = 1; l < lMax; ++l) p[l + 1] = ((2 * l + 1) * x * p[l] - l * p[l - 1]) / (l + 1);
    p.resize(static_cast<std::size_t>(lMax) + 1);
    return p;
}

}  // namespace bubbles
