#pragma once

#include "bubbles/boundary_ops.hpp"

#include <vector>

namespace bubbles {

struct ShapeFunctionals {
    double aHat = 0.0;
    double cap = 0.0;
    double volume = 0.0;
    double surfaceArea = 0.0;
    Vec3 centroidOffset = Vec3::Zero();
    // |D|^{-1} * integral over D of (x - z); used by the invertibility diagnostics.
    Vec3 volumeCentroidOffset = Vec3::Zero();
};

// -2 * integral over D of 1/|s - y| dy for the node s.
double compute_A_function(const SurfaceQuadrature& quad, std::size_t node);
std::vector<double> compute_A_values(const SurfaceQuadrature& quad);
double compute_a_hat(const SurfaceQuadrature& quad);
double compute_capacitance(const SurfaceQuadrature& quad);
double compute_volume(const SurfaceQuadrature& quad);
double compute_volume(const BubbleShape& shape);
Vec3 compute_volume_moment(const SurfaceQuadrature& quad);

ShapeFunctionals compute_functionals(const BubbleShape& shape, int order);

}  // namespace bubbles
