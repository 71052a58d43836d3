#include "bubbles/fields.hpp"

#include <cmath>

namespace bubbles {

namespace {

const char* kModule = "fields";

}  // namespace

cplx incident_field(const MediumSpec& medium, const Vec3& theta, const Vec3& x)
{
    if (std::abs(theta.norm() - 1) > 1e-12) throw Error(ErrorKind::invalid_argument, kModule, "incident direction must be a unit vector");
    return std::exp(I * medium.kappa0() * theta.dot(x));
}

cplx scattered_near_field(const FoldyLaxSystem& solution, const Cluster& cluster, const Vec3& x)
{
    if (!solution.solved) throw Error(ErrorKind::invalid_argument, kModule, "system has not been solved");
    const double a = cluster.realizedStats.a;
    std::vector<cplx> parts(solution.size());
    for (std::size_t m = 0; m < parts.size(); ++m) {
        double r = (x - solution.centers[m]).norm();
        if (r <= a)
            throw Error(ErrorKind::point_inside_exclusion_zone, kModule,
                        "evaluation point within distance a of bubble " + std::to_string(m));
        parts[m] = std::exp(I * solution.kappa0 * r) / (4 * pi * r) * solution.Q[static_cast<Eigen::Index>(m)];
    }
    return pairwise_sum(parts);
}

cplx point_far_field(const std::vector<Vec3>& centers, const Eigen::VectorXcd& q, double kappa0, const Vec3& xhat)
{
    std::vector<cplx> parts(centers.size());
    for (std::size_t m = 0; m < centers.size(); ++m) parts[m] = std::polar(1.0, -kappa0 * xhat.dot(centers[m])) * q[static_cast<Eigen::Index>(m)];
    return pairwise_sum(parts);
}

const SphereRule& cross_section_rule()
{
    static const SphereRule rule = product_sphere_rule(50, 100);
    return rule;
}

FarFieldPattern far_field(const FoldyLaxSystem& solution, const Cluster& cluster, const std::vector<Vec3>& directions)
{
    if (!solution.solved) throw Error(ErrorKind::invalid_argument, kModule, "system has not been solved");
    FarFieldPattern out;
    out.directions = directions;
    out.M = cluster.size();
    out.theta = solution.theta;
    out.omega = solution.omega;
    out.values.assign(directions.size(), 0.0);
    const long n = static_cast<long>(directions.size());
#pragma omp parallel for schedule(static)
    for (long j = 0; j < n; ++j) out.values[j] = point_far_field(solution.centers, solution.Q, solution.kappa0, directions[j]);
    out.crossSection = cross_section([&](const Vec3& d) { return point_far_field(solution.centers, solution.Q, solution.kappa0, d); });
    return out;
}

double l2_difference(const std::vector<cplx>& u, const std::vector<cplx>& v)
{
    if (u.size() != v.size() || u.empty()) throw Error(ErrorKind::invalid_argument, kModule, "patterns must share a non-empty grid");
    std::vector<double> parts(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) parts[i] = std::norm(u[i] - v[i]);
    return std::sqrt(pairwise_sum(parts) / static_cast<double>(u.size()));
}

double l2_norm(const std::vector<cplx>& u)
{
    return l2_difference(u, std::vector<cplx>(u.size(), 0.0));
}

}  // namespace bubbles
