#include "bubbles/oracle.hpp"

#include "bubbles/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace bubbles {

namespace {

const char* kModule = "oracle";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

constexpr double kTailRatio = 1e-12;
constexpr int kMaxOrder = 200;

struct Coefficients {
    std::vector<cplx> a, b;
};

Coefficients transmission_coefficients(int lMax, double x0, double xb, double q)
{
    const auto j0 = spherical_bessel_j(lMax + 1, x0);
    const auto y0 = spherical_bessel_y(lMax + 1, x0);
    const auto jb = spherical_bessel_j(lMax + 1, xb);
    const auto dj0 = spherical_derivative(j0, lMax, x0);
    const auto dy0 = spherical_derivative(y0, lMax, x0);
    const auto djb = spherical_derivative(jb, lMax, xb);
    Coefficients c;
    c.a.assign(static_cast<std::size_t>(lMax) + 1, 0.0);
    c.b.assign(static_cast<std::size_t>(lMax) + 1, 0.0);
    for (int l = 0; l <= lMax; ++l) {
        const cplx h(j0[l], y0[l]), dh(dj0[l], dy0[l]);
        const cplx den = jb[l] * dh - q * djb[l] * h;
        const cplx num = q * djb[l] * j0[l] - jb[l] * dj0[l];
        cplx a = num / den, b = I / (x0 * x0) / den;
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) a = 0.0;
        if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) b = 0.0;
        c.a[l] = a;
        c.b[l] = b;
    }
    return c;
}

bool tail_ok(const std::vector<cplx>& a)
{
    double mx = 0;
    for (const cplx& v : a) mx = std::max(mx, std::abs(v));
    return mx == 0 || std::abs(a.back()) / mx < kTailRatio;
}

}  // namespace

PartialWaveSolution mie_sphere(double radius, double rhoB, double kB, const MediumSpec& medium, int lMax, const Vec3& center, const Vec3& theta)
{
    if (!(radius > 0)) fail(ErrorKind::invalid_argument, "radius must be positive");
    if (!(rhoB > 0 && kB > 0)) fail(ErrorKind::invalid_argument, "bubble density and modulus must be positive");
    if (std::abs(theta.norm() - 1) > 1e-12) fail(ErrorKind::invalid_argument, "incident direction must be a unit vector");
    PartialWaveSolution s;
    s.radius = radius;
    s.center = center;
    s.rhoB = rhoB;
    s.kB = kB;
    s.kappa0 = medium.kappa0();
    s.kappaB = medium.omega * std::sqrt(rhoB / kB);
    s.omega = medium.omega;
    s.theta = theta;
    const double x0 = s.kappa0 * radius, xb = s.kappaB * radius;
    const double q = s.kappaB * medium.rho0 / (s.kappa0 * rhoB);

    Coefficients c;
    if (lMax >= 0) {
        c = transmission_coefficients(lMax, x0, xb, q);
        if (!tail_ok(c.a)) fail(ErrorKind::truncation_insufficient, "partial-wave tail above 1e-12 at lMax = " + std::to_string(lMax));
    } else {
        lMax = std::max(4, static_cast<int>(std::ceil(x0)) + 10);
        for (;;) {
            c = transmission_coefficients(lMax, x0, xb, q);
            if (tail_ok(c.a)) break;
            if (lMax >= kMaxOrder) fail(ErrorKind::truncation_insufficient, "partial-wave tail does not decay by order " + std::to_string(kMaxOrder));
            lMax = std::min(kMaxOrder, lMax + 10);
        }
    }
    s.lMax = lMax;
    s.exteriorCoeffs = std::move(c.a);
    s.interiorCoeffs = std::move(c.b);
    return s;
}

cplx oracle_far_field_value(const PartialWaveSolution& s, const Vec3& xhat)
{
    if (s.exteriorCoeffs.empty()) return 0.0;
    const auto p = legendre_p(s.lMax, std::clamp(xhat.dot(s.theta), -1.0, 1.0));
    std::vector<cplx> parts(s.exteriorCoeffs.size());
    for (std::size_t l = 0; l < parts.size(); ++l) parts[l] = static_cast<double>(2 * l + 1) * s.exteriorCoeffs[l] * p[l];
    const cplx phase = std::exp(I * s.kappa0 * (s.theta - xhat).dot(s.center));
    return 4 * pi * pairwise_sum(parts) / (I * s.kappa0) * phase;
}

std::size_t BemSolution::unknowns() const
{
    std::size_t n = 0;
    for (const auto& q : surfaces) n += 2 * q.size();
    return n;
}

BemSolution bem_solve(const Cluster& cluster, const MediumSpec& medium, const Vec3& theta, int order)
{
    const std::size_t M = cluster.size();
    if (M == 0) fail(ErrorKind::invalid_argument, "empty cluster");
    if (M > kBemMaxBubbles) fail(ErrorKind::oracle_infeasible, "boundary-element oracle handles at most 5 bubbles, got " + std::to_string(M));
    if (order < 1) fail(ErrorKind::resolution_insufficient, "boundary-element order must be at least 1");
    if (std::abs(theta.norm() - 1) > 1e-12) fail(ErrorKind::invalid_argument, "incident direction must be a unit vector");
    if (medium.perBubble.size() != M) fail(ErrorKind::invalid_argument, "need one material per bubble");
    const double a = cluster.realizedStats.a;
    for (std::size_t i = 0; i < M; ++i) {
        if (cluster.bubbles[i].kind != ShapeKind::sphere) fail(ErrorKind::oracle_infeasible, "boundary-element oracle requires spherical bubbles");
        for (std::size_t j = i + 1; j < M; ++j) {
            double gap = surface_distance(cluster.bubbles[i], cluster.bubbles[j]);
            if (gap <= 3 * a)
                fail(ErrorKind::resolution_insufficient,
                     "bubbles " + std::to_string(i) + " and " + std::to_string(j) + " closer than 3a; cross-interaction quadrature is unresolved");
        }
    }

    BemSolution sol;
    sol.kappa0 = medium.kappa0();
    sol.omega = medium.omega;
    sol.theta = theta;
    sol.order = order;
    std::vector<Eigen::Index> base(M), n(M);
    Eigen::Index total = 0;
    for (std::size_t l = 0; l < M; ++l) {
        sol.surfaces.push_back(build_quadrature(cluster.bubbles[l], order, l));
        n[l] = static_cast<Eigen::Index>(sol.surfaces[l].size());
        base[l] = total;
        total += 2 * n[l];
    }

    const cplx k0 = sol.kappa0;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(total, total);
    Eigen::VectorXcd b(total);
    for (std::size_t l = 0; l < M; ++l) {
        const SurfaceQuadrature& q = sol.surfaces[l];
        const cplx kl = medium.kappa(l);
        const double ratio = medium.rho0 / medium.perBubble[l].rho;
        const Eigen::Index r1 = base[l], r2 = base[l] + n[l];
        const Eigen::Index cphi = base[l], cpsi = base[l] + n[l];
        const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n[l], n[l]);

        A.block(r1, cpsi, n[l], n[l]) = assemble_layer(q, LayerKind::singleLayer, kl).nystrom();
        A.block(r1, cphi, n[l], n[l]) = -assemble_layer(q, LayerKind::singleLayer, k0).nystrom();
        A.block(r2, cpsi, n[l], n[l]) = ratio * (0.5 * eye + assemble_layer(q, LayerKind::adjointDoubleLayer, kl).nystrom());
        A.block(r2, cphi, n[l], n[l]) = -(-0.5 * eye + assemble_layer(q, LayerKind::adjointDoubleLayer, k0).nystrom());
        for (std::size_t m = 0; m < M; ++m) {
            if (m == l) continue;
            const SurfaceQuadrature& src = sol.surfaces[m];
            A.block(r1, base[m], n[l], n[m]) = -assemble_cross(q, src, LayerKind::singleLayer, k0);
            A.block(r2, base[m], n[l], n[m]) = -assemble_cross(q, src, LayerKind::adjointDoubleLayer, k0);
        }
        for (Eigen::Index i = 0; i < n[l]; ++i) {
            const cplx ui = std::exp(I * k0 * theta.dot(q.nodes[i]));
            b[r1 + i] = ui;
            b[r2 + i] = I * k0 * theta.dot(q.normals[i]) * ui;
        }
    }

    for (Eigen::Index i = 0; i < total; ++i) {
        double s = A.row(i).cwiseAbs().maxCoeff();
        if (!(s > 0) || !std::isfinite(s)) fail(ErrorKind::numerically_singular, "boundary-element row " + std::to_string(i) + " is degenerate");
        A.row(i) /= s;
        b[i] /= s;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    sol.conditionEstimate = 1.0 / std::max(lu.rcond(), 1e-300);
    Eigen::VectorXcd x = lu.solve(b);
    sol.residual = (A * x - b).norm() / b.norm();
    if (!std::isfinite(sol.residual) || sol.residual > 1e-8)
        fail(ErrorKind::numerically_singular, "boundary-element residual " + std::to_string(sol.residual) + " (condition estimate " +
                                                  std::to_string(sol.conditionEstimate) + ")");
    for (std::size_t l = 0; l < M; ++l) {
        sol.phi.push_back(x.segment(base[l], n[l]));
        sol.psi.push_back(x.segment(base[l] + n[l], n[l]));
    }
    return sol;
}

cplx oracle_far_field_value(const BemSolution& s, const Vec3& xhat)
{
    std::vector<cplx> parts;
    parts.reserve(s.unknowns() / 2);
    for (std::size_t l = 0; l < s.surfaces.size(); ++l) {
        const SurfaceQuadrature& q = s.surfaces[l];
        for (std::size_t i = 0; i < q.size(); ++i)
            parts.push_back(q.weights[i] * std::exp(-I * s.kappa0 * xhat.dot(q.nodes[i])) * s.phi[l][static_cast<Eigen::Index>(i)]);
    }
    return pairwise_sum(parts);
}

namespace {

template <class S>
FarFieldPattern pattern_of(const S& s, const std::vector<Vec3>& directions, std::size_t M, const char* source)
{
    FarFieldPattern out;
    out.directions = directions;
    out.theta = s.theta;
    out.omega = s.omega;
    out.M = M;
    out.source = source;
    out.values.assign(directions.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < static_cast<long>(directions.size()); ++j) out.values[j] = oracle_far_field_value(s, directions[j]);
    out.crossSection = cross_section([&](const Vec3& d) { return oracle_far_field_value(s, d); });
    return out;
}

}  // namespace

FarFieldPattern oracle_far_field(const PartialWaveSolution& solution, const std::vector<Vec3>& directions)
{
    return pattern_of(solution, directions, 1, "oracle:mie");
}

FarFieldPattern oracle_far_field(const BemSolution& solution, const std::vector<Vec3>& directions)
{
    return pattern_of(solution, directions, solution.surfaces.size(), "oracle:bem");
}

}  // namespace bubbles
