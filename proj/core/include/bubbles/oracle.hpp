#pragma once

#include "bubbles/fields.hpp"

#include <vector>

namespace bubbles {

// Exterior field sum_l (2l+1) i^l [j_l + a_l h_l] P_l, interior sum_l (2l+1) i^l b_l j_l(kappaB r) P_l,
// both about `center` and relative to the incident phase at the center.
struct PartialWaveSolution {
    int lMax = 0;
    std::vector<cplx> exteriorCoeffs;
    std::vector<cplx> interiorCoeffs;
    double radius = 0.0;
    Vec3 center = Vec3::Zero();
    double rhoB = 1.0;
    double kB = 1.0;
    double kappa0 = 0.0;
    double kappaB = 0.0;
    double omega = 0.0;
    Vec3 theta = Vec3::UnitZ();
};

// lMax < 0 picks the truncation automatically.
PartialWaveSolution mie_sphere(double radius, double rhoB, double kB, const MediumSpec& medium, int lMax = -1,
                               const Vec3& center = Vec3::Zero(), const Vec3& theta = Vec3::UnitZ());

struct BemSolution {
    std::vector<SurfaceQuadrature> surfaces;
    std::vector<Eigen::VectorXcd> phi;
    std::vector<Eigen::VectorXcd> psi;
    double residual = 0.0;
    double conditionEstimate = 0.0;
    double kappa0 = 0.0;
    double omega = 0.0;
    Vec3 theta = Vec3::UnitZ();
    int order = 0;

    std::size_t unknowns() const;
};

inline constexpr std::size_t kBemMaxBubbles = 5;

BemSolution bem_solve(const Cluster& cluster, const MediumSpec& medium, const Vec3& theta, int order);

cplx oracle_far_field_value(const PartialWaveSolution& solution, const Vec3& xhat);
cplx oracle_far_field_value(const BemSolution& solution, const Vec3& xhat);

FarFieldPattern oracle_far_field(const PartialWaveSolution& solution, const std::vector<Vec3>& directions);
FarFieldPattern oracle_far_field(const BemSolution& solution, const std::vector<Vec3>& directions);

}  // namespace bubbles
