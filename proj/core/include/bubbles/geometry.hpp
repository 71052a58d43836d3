#pragma once

#include "bubbles/numerics.hpp"

#include <array>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace bubbles {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

// Unit-radius icosahedral sphere mesh, outward oriented.
TriMesh icosphere(int refinement);
// Splits every triangle into four at edge midpoints (geometry unchanged).
TriMesh subdivide(const TriMesh& mesh);
// Closed, consistently and outwardly oriented, no triangle smaller than minArea.
void validate_mesh(const TriMesh& mesh, double minArea);
double mesh_signed_volume(const TriMesh& mesh);

// ASCII: vertex count, "x y z" lines, triangle count, 0-based "i j k" lines.
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const TriMesh& mesh);

enum class ShapeKind { sphere, ellipsoid, mesh };

const char* to_string(ShapeKind kind);

// Reference shape about the origin, scaled by `scale` and translated to `center`.
struct BubbleShape {
    ShapeKind kind = ShapeKind::sphere;
    double radius = 1.0;
    Vec3 semiAxes = Vec3(1, 1, 1);
    std::shared_ptr<const TriMesh> mesh;
    Vec3 center = Vec3::Zero();
    double scale = 1.0;

    static BubbleShape sphere(double radius, const Vec3& center = Vec3::Zero());
    static BubbleShape ellipsoid(const Vec3& semiAxes, const Vec3& center = Vec3::Zero());
    static BubbleShape from_mesh(TriMesh mesh, const Vec3& center = Vec3::Zero());

    double diameter() const;
    // Largest ball about `center` inside the shape, smallest ball about `center` containing it.
    double inner_radius() const;
    double outer_radius() const;
    Vec3 to_world(const Vec3& reference) const { return center + scale * reference; }
    BubbleShape moved_to(const Vec3& c) const;
    BubbleShape with_diameter(double d) const;
};

// Pairwise surface gap; exact for two spheres, a lower bound through circumscribed balls otherwise.
double surface_distance(const BubbleShape& a, const BubbleShape& b);

struct Box {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Ones();
};

struct Occupancy {
    enum class Rule { fixed, bernoulli };
    Rule rule = Rule::fixed;
    int count = 1;
    double p = 0.5;
};

struct ClusterSpec {
    Box domainBox;
    double a = 0.1;
    double s = 0.0;
    double t = 0.0;
    Occupancy occupancy;
    std::uint64_t seed = 1;
    double dMinFactor = 0.1;
    double dMaxFactor = 10.0;
    double mMax = 4.0;
    // Fraction of the free span of each subcube used for random placement; 0 pins bubbles to subcube centers.
    double jitter = 1.0;
    double zetaMin = 0.05;
    BubbleShape prototype = BubbleShape::sphere(1.0);
};

struct RealizedStats {
    std::size_t M = 0;
    double a = 0.0;
    double d = std::numeric_limits<double>::infinity();
};

struct Cluster {
    std::vector<BubbleShape> bubbles;
    RealizedStats realizedStats;
    double s = 0.0;
    double t = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return bubbles.size(); }
    std::vector<Vec3> centers() const;
};

struct ClusterStatistics : RealizedStats {
    std::vector<double> centroidOffsets;
};

// alpha from 3*alpha*t = s; 1 when s = t = 0.
double alpha_exponent(double s, double t);
void check_regime(const ClusterSpec& spec);

Cluster generate_cluster(const ClusterSpec& spec);
// Wraps explicitly placed bubbles; recomputes realized statistics.
Cluster make_cluster(std::vector<BubbleShape> bubbles, double s = 0.0, double t = 0.0);

double distance_sum(const Cluster& cluster, std::size_t j, double k);
// Growth law of distance_sum in the minimum distance d, up to a constant.
double counting_bound(double d, double alpha, double k);
ClusterStatistics cluster_stats(const Cluster& cluster, int quadratureOrder = 2);

}  // namespace bubbles
