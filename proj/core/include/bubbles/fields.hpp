#pragma once

#include "bubbles/foldy_lax.hpp"

#include <string>
#include <vector>

namespace bubbles {

// u^s = e^{i k0 |x|}/|x| * u^inf/(4 pi) + O(|x|^-2): point sources radiate e^{-i k0 xhat . z} Q with the 1/(4 pi) dropped.
struct FarFieldPattern {
    std::vector<Vec3> directions;
    Vec3 theta = Vec3::UnitZ();
    std::vector<cplx> values;
    double crossSection = 0.0;
    double omega = 0.0;
    std::size_t M = 0;
    std::string source = "foldy-lax";
};

cplx incident_field(const MediumSpec& medium, const Vec3& theta, const Vec3& x);

cplx scattered_near_field(const FoldyLaxSystem& solution, const Cluster& cluster, const Vec3& x);

// Pattern on `directions`; the cross-section always uses the fixed product rule.
FarFieldPattern far_field(const FoldyLaxSystem& solution, const Cluster& cluster, const std::vector<Vec3>& directions);

// Integral of |u^inf|^2 over the unit sphere for an arbitrary pattern evaluator.
template <class F>
double cross_section(F&& pattern);

// Evaluates sum_m e^{-i k0 xhat . z_m} q_m at one direction.
cplx point_far_field(const std::vector<Vec3>& centers, const Eigen::VectorXcd& q, double kappa0, const Vec3& xhat);

const SphereRule& cross_section_rule();

// sqrt(mean |u - v|^2) over the shared grid.
double l2_difference(const std::vector<cplx>& u, const std::vector<cplx>& v);
double l2_norm(const std::vector<cplx>& u);

template <class F>
double cross_section(F&& pattern)
{
    const SphereRule& rule = cross_section_rule();
    std::vector<double> parts(rule.points.size());
#pragma omp parallel for schedule(static)
    for (long j = 0; j < static_cast<long>(parts.size()); ++j) parts[j] = rule.weights[j] * std::norm(pattern(rule.points[j]));
    return pairwise_sum(parts);
}

}  // namespace bubbles
