#pragma once

#include "bubbles/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace bubbles {

enum class QuadratureFamily { sphereSpectral, flatPanel };

struct SurfaceQuadrature {
    QuadratureFamily family = QuadratureFamily::flatPanel;
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<Vec3> normals;
    std::size_t bubbleRef = 0;
    Vec3 center = Vec3::Zero();
    double radius = 0.0;                          // sphereSpectral only
    int bandLimit = 0;                            // sphereSpectral only: harmonics integrated exactly in pairs
    std::vector<std::array<Vec3, 3>> panels;      // flatPanel only, one per node

    std::size_t size() const { return nodes.size(); }
    double area() const;
    Vec3 surface_centroid() const;
};

// Spheres: Gauss-Legendre x trapezoid with 4(order+1) x 8(order+1) nodes.
// Ellipsoids: icosphere refined `order` times, mapped onto the ellipsoid, flat panels.
// Meshes: input triangles subdivided `order` times, flat panels.
SurfaceQuadrature build_quadrature(const BubbleShape& shape, int order, std::size_t bubbleRef = 0);

enum class LayerKind { singleLayer, adjointDoubleLayer, doubleLayer };

const char* to_string(LayerKind kind);

// Kernel matrix G over the nodes; the discrete operator acts as (G * diag(w)) phi.
struct LayerOperator {
    LayerKind kind = LayerKind::singleLayer;
    cplx wavenumber = 0.0;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd weights;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& density) const;
    Eigen::MatrixXcd nystrom() const;
};

cplx single_layer_kernel(cplx kappa, const Vec3& x, const Vec3& y);
// d/dnu_x of the single layer kernel.
cplx adjoint_double_layer_kernel(cplx kappa, const Vec3& x, const Vec3& nx, const Vec3& y);
// d/dnu_y of the single layer kernel.
cplx double_layer_kernel(cplx kappa, const Vec3& x, const Vec3& y, const Vec3& ny);

// Exact surface integrals over a sphere of radius R for a point on the sphere.
cplx sphere_single_layer_of_one(double R, cplx kappa);
cplx sphere_adjoint_double_layer_of_one(double R, cplx kappa);

// Integral of 1/|y - x| over a flat triangle, closed form, any x.
double triangle_inverse_distance(const std::array<Vec3, 3>& tri, const Vec3& x);
// Integral of the Helmholtz kernel over a flat triangle for x in its interior (polar desingularization).
cplx panel_self_single_layer(const std::array<Vec3, 3>& tri, const Vec3& x, cplx kappa);

// Eigenvalues of S and K* on a sphere of radius R for the degree-l harmonics, l = 0..L (real kappa).
std::vector<cplx> sphere_layer_eigenvalues(LayerKind kind, double R, double kappa, int L);

// Sphere self-blocks are built spectrally through the addition theorem; flat panels use exact static
// self-integrals plus a smooth remainder.
LayerOperator assemble_layer(const SurfaceQuadrature& quad, LayerKind kind, cplx kappa);

// Target/source kernel block across two surfaces (already weighted by source weights).
Eigen::MatrixXcd assemble_cross(const SurfaceQuadrature& target, const SurfaceQuadrature& source, LayerKind kind, cplx kappa);

struct SingleLayerSolve {
    Eigen::VectorXd density;
    double residual = 0.0;
    double conditionEstimate = 0.0;
};

SingleLayerSolve solve_single_layer_report(const LayerOperator& op, const Eigen::VectorXd& rhs);
Eigen::VectorXd solve_single_layer(const LayerOperator& op, const Eigen::VectorXd& rhs);

// Row-major (re, im) float64 pairs, little-endian, preceded by rows and cols as uint64.
void write_matrix_binary(const Eigen::MatrixXcd& m, const std::string& path);

}  // namespace bubbles
