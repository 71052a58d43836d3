#include "bubbles/shape_functionals.hpp"

#include <cmath>

namespace bubbles {

namespace {

const char* kModule = "shape_functionals";

// Newton potential of the unit-density body at s.
double newton_potential(const SurfaceQuadrature& q, const Vec3& s)
{
    if (q.family == QuadratureFamily::sphereSpectral) {
        double r2 = (s - q.center).squaredNorm();
        return 2 * pi * q.radius * q.radius - (2 * pi / 3) * r2;
    }
    // Divergence theorem: integral over D of 1/|s-y| = 1/2 sum_T h_T * integral over T of 1/|s-y|.
    std::vector<double> parts(q.panels.size(), 0.0);
    for (std::size_t k = 0; k < q.panels.size(); ++k) {
        const auto& tri = q.panels[k];
        double h = (tri[0] - s).dot(q.normals[k]);
        double scale = (tri[1] - tri[0]).norm();
        if (std::abs(h) <= 1e-13 * scale) continue;
        parts[k] = 0.5 * h * triangle_inverse_distance(tri, s);
    }
    return pairwise_sum(parts);
}

}  // namespace

double compute_A_function(const SurfaceQuadrature& quad, std::size_t node)
{
    if (node >= quad.size()) throw Error(ErrorKind::invalid_argument, kModule, "node index out of range");
    return -2.0 * newton_potential(quad, quad.nodes[node]);
}

std::vector<double> compute_A_values(const SurfaceQuadrature& quad)
{
    std::vector<double> out(quad.size());
    const long n = static_cast<long>(quad.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) out[i] = -2.0 * newton_potential(quad, quad.nodes[i]);
    return out;
}

double compute_a_hat(const SurfaceQuadrature& quad)
{
    std::vector<double> a = compute_A_values(quad);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= quad.weights[i];
    return pairwise_sum(a) / quad.area();
}

double compute_capacitance(const SurfaceQuadrature& quad)
{
    LayerOperator s0 = assemble_layer(quad, LayerKind::singleLayer, 0.0);
    Eigen::VectorXd g = solve_single_layer(s0, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(quad.size())));
    std::vector<double> parts(quad.size());
    for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = quad.weights[i] * g[i];
    double cap = pairwise_sum(parts);
    if (!(cap > 0)) throw Error(ErrorKind::singular_system, kModule, "non-positive capacitance");
    return cap;
}

double compute_volume(const SurfaceQuadrature& quad)
{
    std::vector<double> parts(quad.size());
    for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = quad.weights[i] * (quad.nodes[i] - quad.center).dot(quad.normals[i]);
    return pairwise_sum(parts) / 3.0;
}

double compute_volume(const BubbleShape& shape)
{
    double s3 = shape.scale * shape.scale * shape.scale;
    switch (shape.kind) {
    case ShapeKind::sphere: return 4.0 * pi / 3.0 * std::pow(shape.radius, 3) * s3;
    case ShapeKind::ellipsoid: return 4.0 * pi / 3.0 * shape.semiAxes.prod() * s3;
    case ShapeKind::mesh: return mesh_signed_volume(*shape.mesh) * s3;
    }
    return 0;
}

Vec3 compute_volume_moment(const SurfaceQuadrature& quad)
{
    // integral over D of (x - z)_k = 1/2 * surface integral of (x - z)_k^2 nu_k
    Vec3 out;
    std::vector<double> parts(quad.size());
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            double xk = quad.nodes[i][k] - quad.center[k];
            parts[i] = 0.5 * quad.weights[i] * xk * xk * quad.normals[i][k];
        }
        out[k] = pairwise_sum(parts);
    }
    return out;
}

ShapeFunctionals compute_functionals(const BubbleShape& shape, int order)
{
    SurfaceQuadrature q = build_quadrature(shape, order);
    ShapeFunctionals f;
    f.surfaceArea = q.area();
    f.volume = compute_volume(q);
    f.aHat = compute_a_hat(q);
    f.cap = compute_capacitance(q);
    f.centroidOffset = q.surface_centroid() - shape.center;
    f.volumeCentroidOffset = compute_volume_moment(q) / f.volume;
    if (!(f.aHat < 0) || !(f.volume > 0)) throw Error(ErrorKind::degenerate_mesh, kModule, "shape functionals out of range (aHat >= 0 or volume <= 0)");
    return f;
}

}  // namespace bubbles
