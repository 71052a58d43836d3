#include "bubbles/numerics.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bubbles {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::config: return "config";
    case ErrorKind::infeasible_regime: return "infeasible-regime";
    case ErrorKind::degenerate_mesh: return "degenerate-mesh";
    case ErrorKind::singular_system: return "singular-system";
    case ErrorKind::numerically_singular: return "numerically-singular";
    case ErrorKind::non_positive_resonance: return "non-positive-resonance";
    case ErrorKind::at_resonance: return "at-resonance";
    case ErrorKind::division_degenerate: return "division-degenerate";
    case ErrorKind::unreachable_frequency: return "unreachable-frequency";
    case ErrorKind::coincident_points: return "coincident-points";
    case ErrorKind::mixed_sign_coefficients: return "mixed-sign-coefficients";
    case ErrorKind::point_inside_exclusion_zone: return "point-inside-exclusion-zone";
    case ErrorKind::truncation_insufficient: return "truncation-insufficient";
    case ErrorKind::resolution_insufficient: return "resolution-insufficient";
    case ErrorKind::oracle_infeasible: return "oracle-infeasible";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + to_string(kind) + ": " + message),
      kind_(kind),
      module_(std::move(module))
{
}

namespace {

template <class T>
T tree_sum(const T* x, std::size_t n)
{
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t h = n / 2;
    return tree_sum(x, h) + tree_sum(x + h, n - h);
}

}  // namespace

double pairwise_sum(const double* x, std::size_t n) { return tree_sum(x, n); }
cplx pairwise_sum(const cplx* x, std::size_t n) { return tree_sum(x, n); }

cplx expm1(cplx z)
{
    double re = std::expm1(z.real());
    double s = std::sin(0.5 * z.imag());
    double cm1 = -2.0 * s * s;
    double c = std::cos(z.imag());
    return {re * c + cm1, (re + 1.0) * std::sin(z.imag())};
}

GaussRule gauss_legendre(int n)
{
    if (n < 1) throw Error(ErrorKind::invalid_argument, "numerics", "Gauss-Legendre order must be >= 1");
    // Returns P_n(x) and P_n'(x).
    auto legendre = [n](double x) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (x * p1 - p0) / (x * x - 1)};
    };
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double dp = legendre(x).second;
        double w = 2 / ((1 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

std::vector<Vec3> fibonacci_sphere(int n)
{
    if (n < 1) throw Error(ErrorKind::invalid_argument, "numerics", "direction count must be >= 1");
    std::vector<Vec3> out(n);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        out[i] = Vec3(r * std::cos(phi), r * std::sin(phi), z);
    }
    return out;
}

SphereRule product_sphere_rule(int nTheta, int nPhi)
{
    GaussRule g = gauss_legendre(nTheta);
    SphereRule r;
    r.points.reserve(static_cast<std::size_t>(nTheta) * nPhi);
    r.weights.reserve(r.points.capacity());
    double dphi = 2 * pi / nPhi;
    for (int i = 0; i < nTheta; ++i) {
        double ct = g.x[i];
        double st = std::sqrt(std::max(0.0, 1 - ct * ct));
        for (int j = 0; j < nPhi; ++j) {
            double phi = (j + 0.5) * dphi;
            r.points.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
            r.weights.push_back(g.w[i] * dphi);
        }
    }
    return r;
}

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n)
{
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorKind::invalid_argument, "numerics", "slope fit needs >= 2 matching points");
    double n = static_cast<double>(x.size());
    double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw Error(ErrorKind::invalid_argument, "numerics", "slope fit needs distinct abscissae");
    return sxy / sxx;
}

}  // namespace bubbles
