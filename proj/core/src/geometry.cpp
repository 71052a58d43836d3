#include "bubbles/geometry.hpp"

#include "bubbles/boundary_ops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace bubbles {

namespace {

const char* kModule = "geometry";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) { return 0.5 * (b - a).cross(c - a).norm(); }

// Closest point on triangle abc to p.
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c)
{
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return a;
    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return b;
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return c;
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

const char* to_string(ShapeKind kind)
{
    switch (kind) {
    case ShapeKind::sphere: return "sphere";
    case ShapeKind::ellipsoid: return "ellipsoid";
    case ShapeKind::mesh: return "mesh";
    }
    return "unknown";
}

TriMesh icosphere(int refinement)
{
    if (refinement < 0) fail(ErrorKind::invalid_argument, "icosphere refinement must be >= 0");
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    m.vertices = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                  {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
    for (auto& v : m.vertices) v.normalize();
    m.triangles = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int r = 0; r < refinement; ++r) {
        m = subdivide(m);
        for (auto& v : m.vertices) v.normalize();
    }
    return m;
}

TriMesh subdivide(const TriMesh& mesh)
{
    TriMesh out;
    out.vertices = mesh.vertices;
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int i, int j) {
        auto key = std::minmax(i, j);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        int idx = static_cast<int>(out.vertices.size());
        out.vertices.push_back(0.5 * (mesh.vertices[i] + mesh.vertices[j]));
        mid.emplace(key, idx);
        return idx;
    };
    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
        int a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
        out.triangles.push_back({t[0], a, c});
        out.triangles.push_back({t[1], b, a});
        out.triangles.push_back({t[2], c, b});
        out.triangles.push_back({a, b, c});
    }
    return out;
}

double mesh_signed_volume(const TriMesh& mesh)
{
    std::vector<double> parts;
    parts.reserve(mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
        parts.push_back(a.dot(b.cross(c)) / 6.0);
    }
    return pairwise_sum(parts);
}

void validate_mesh(const TriMesh& mesh, double minArea)
{
    if (mesh.vertices.size() < 4 || mesh.triangles.size() < 4) fail(ErrorKind::degenerate_mesh, "mesh has too few elements to be closed");
    const int nv = static_cast<int>(mesh.vertices.size());
    std::map<std::pair<int, int>, int> directed;
    for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
        const auto& t = mesh.triangles[f];
        for (int k = 0; k < 3; ++k)
            if (t[k] < 0 || t[k] >= nv) fail(ErrorKind::degenerate_mesh, "triangle " + std::to_string(f) + " has an out-of-range vertex index");
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) fail(ErrorKind::degenerate_mesh, "triangle " + std::to_string(f) + " repeats a vertex");
        double area = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        if (!(area > minArea)) fail(ErrorKind::degenerate_mesh, "triangle " + std::to_string(f) + " is degenerate (area " + std::to_string(area) + ")");
        for (int k = 0; k < 3; ++k) {
            auto e = std::pair{t[k], t[(k + 1) % 3]};
            if (++directed[e] > 1) fail(ErrorKind::degenerate_mesh, "inconsistent orientation or non-manifold edge at triangle " + std::to_string(f));
        }
    }
    for (const auto& [e, n] : directed)
        if (!directed.count({e.second, e.first})) fail(ErrorKind::degenerate_mesh, "mesh is not closed (boundary edge " + std::to_string(e.first) + "-" + std::to_string(e.second) + ")");
    if (!(mesh_signed_volume(mesh) > 0)) fail(ErrorKind::degenerate_mesh, "mesh orientation is inward (non-positive enclosed volume)");
}

TriMesh read_mesh(std::istream& in)
{
    TriMesh m;
    long nv = -1, nt = -1;
    if (!(in >> nv) || nv < 0) fail(ErrorKind::io, "mesh: missing vertex count");
    m.vertices.resize(nv);
    for (long i = 0; i < nv; ++i)
        if (!(in >> m.vertices[i].x() >> m.vertices[i].y() >> m.vertices[i].z())) fail(ErrorKind::io, "mesh: bad vertex line " + std::to_string(i));
    if (!(in >> nt) || nt < 0) fail(ErrorKind::io, "mesh: missing triangle count");
    m.triangles.resize(nt);
    for (long i = 0; i < nt; ++i)
        if (!(in >> m.triangles[i][0] >> m.triangles[i][1] >> m.triangles[i][2])) fail(ErrorKind::io, "mesh: bad triangle line " + std::to_string(i));
    return m;
}

TriMesh read_mesh_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const TriMesh& mesh)
{
    out.precision(17);
    out << mesh.vertices.size() << '\n';
    for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    out << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

BubbleShape BubbleShape::sphere(double radius, const Vec3& center)
{
    if (!(radius > 0)) fail(ErrorKind::invalid_argument, "sphere radius must be positive");
    BubbleShape b;
    b.kind = ShapeKind::sphere;
    b.radius = radius;
    b.center = center;
    return b;
}

BubbleShape BubbleShape::ellipsoid(const Vec3& semiAxes, const Vec3& center)
{
    if (!(semiAxes.minCoeff() > 0)) fail(ErrorKind::invalid_argument, "ellipsoid semi-axes must be positive");
    BubbleShape b;
    b.kind = ShapeKind::ellipsoid;
    b.semiAxes = semiAxes;
    b.center = center;
    return b;
}

BubbleShape BubbleShape::from_mesh(TriMesh mesh, const Vec3& center)
{
    double span = 0;
    for (const auto& v : mesh.vertices) span = std::max(span, v.norm());
    validate_mesh(mesh, 1e-12 * 4 * span * span);
    BubbleShape b;
    b.kind = ShapeKind::mesh;
    b.mesh = std::make_shared<const TriMesh>(std::move(mesh));
    b.center = center;
    return b;
}

double BubbleShape::diameter() const
{
    switch (kind) {
    case ShapeKind::sphere: return 2 * radius * scale;
    case ShapeKind::ellipsoid: return 2 * semiAxes.maxCoeff() * scale;
    case ShapeKind::mesh: {
        const auto& v = mesh->vertices;
        double best = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, (v[i] - v[j]).squaredNorm());
        return std::sqrt(best) * scale;
    }
    }
    return 0;
}

double BubbleShape::inner_radius() const
{
    switch (kind) {
    case ShapeKind::sphere: return radius * scale;
    case ShapeKind::ellipsoid: return semiAxes.minCoeff() * scale;
    case ShapeKind::mesh: {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : mesh->triangles) {
            Vec3 q = closest_on_triangle(Vec3::Zero(), mesh->vertices[t[0]], mesh->vertices[t[1]], mesh->vertices[t[2]]);
            best = std::min(best, q.norm());
        }
        return best * scale;
    }
    }
    return 0;
}

double BubbleShape::outer_radius() const
{
    switch (kind) {
    case ShapeKind::sphere: return radius * scale;
    case ShapeKind::ellipsoid: return semiAxes.maxCoeff() * scale;
    case ShapeKind::mesh: {
        double best = 0;
        for (const auto& v : mesh->vertices) best = std::max(best, v.norm());
        return best * scale;
    }
    }
    return 0;
}

BubbleShape BubbleShape::moved_to(const Vec3& c) const
{
    BubbleShape b = *this;
    b.center = c;
    return b;
}

BubbleShape BubbleShape::with_diameter(double d) const
{
    BubbleShape b = *this;
    double ref = diameter() / scale;
    b.scale = d / ref;
    return b;
}

double surface_distance(const BubbleShape& a, const BubbleShape& b)
{
    return (a.center - b.center).norm() - a.outer_radius() - b.outer_radius();
}

std::vector<Vec3> Cluster::centers() const
{
    std::vector<Vec3> c;
    c.reserve(bubbles.size());
    for (const auto& b : bubbles) c.push_back(b.center);
    return c;
}

double alpha_exponent(double s, double t)
{
    if (t == 0.0) {
        if (s != 0.0) fail(ErrorKind::infeasible_regime, "t = 0 requires s = 0 (3*alpha*t = s has no solution)");
        return 1.0;
    }
    return s / (3.0 * t);
}

void check_regime(const ClusterSpec& spec)
{
    auto bad = [](const std::string& what) { fail(ErrorKind::infeasible_regime, "violated: " + what); };
    if (!(spec.a > 0)) fail(ErrorKind::invalid_argument, "a must be positive");
    if (!(spec.t >= 0 && spec.t < 0.5)) bad("0 <= t < 1/2 (t = " + std::to_string(spec.t) + ")");
    if (!(spec.s >= 0 && spec.s <= 1.5)) bad("0 <= s <= 3/2 (s = " + std::to_string(spec.s) + ")");
    if (spec.t < spec.s / 3.0 - 1e-12) bad("t >= s/3 (s = " + std::to_string(spec.s) + ", t = " + std::to_string(spec.t) + ")");
    if (spec.t == 0.0 && spec.s > 0.0) bad("t = 0 requires s = 0");
    if ((spec.domainBox.hi - spec.domainBox.lo).minCoeff() <= 0) fail(ErrorKind::invalid_argument, "domain box must have positive extent");
    if (spec.occupancy.rule == Occupancy::Rule::fixed && (spec.occupancy.count < 0 || spec.occupancy.count > 4))
        fail(ErrorKind::invalid_argument, "fixed occupancy count must be in 0..4");
    if (spec.occupancy.rule == Occupancy::Rule::bernoulli && !(spec.occupancy.p >= 0 && spec.occupancy.p <= 1))
        fail(ErrorKind::invalid_argument, "Bernoulli occupancy p must be in [0, 1]");
    if (!(spec.dMinFactor > 0 && spec.dMaxFactor > spec.dMinFactor)) fail(ErrorKind::invalid_argument, "need 0 < dMinFactor < dMaxFactor");
    if (!(spec.jitter >= 0 && spec.jitter <= 1)) fail(ErrorKind::invalid_argument, "jitter must be in [0, 1]");
    if (!(spec.mMax > 0)) fail(ErrorKind::invalid_argument, "mMax must be positive");
}

namespace {

RealizedStats realize(const std::vector<BubbleShape>& bubbles)
{
    RealizedStats st;
    st.M = bubbles.size();
    for (const auto& b : bubbles) st.a = std::max(st.a, b.diameter());
    for (std::size_t i = 0; i < bubbles.size(); ++i)
        for (std::size_t j = i + 1; j < bubbles.size(); ++j) st.d = std::min(st.d, surface_distance(bubbles[i], bubbles[j]));
    return st;
}

}  // namespace

Cluster make_cluster(std::vector<BubbleShape> bubbles, double s, double t)
{
    if (bubbles.empty()) fail(ErrorKind::infeasible_regime, "cluster must contain at least one bubble");
    Cluster c;
    c.bubbles = std::move(bubbles);
    c.s = s;
    c.t = t;
    c.realizedStats = realize(c.bubbles);
    if (!(c.realizedStats.d > 0)) fail(ErrorKind::infeasible_regime, "bubbles overlap (minimum surface distance " + std::to_string(c.realizedStats.d) + ")");
    return c;
}

Cluster generate_cluster(const ClusterSpec& spec)
{
    check_regime(spec);
    const double alpha = alpha_exponent(spec.s, spec.t);
    const double a = spec.a;
    const double dTarget = std::pow(a, spec.t);
    const double dLow = spec.dMinFactor * dTarget, dHigh = spec.dMaxFactor * dTarget;
    const double cubeTarget = a / 2 + std::pow(dTarget, alpha);

    BubbleShape proto = spec.prototype.with_diameter(a);
    double zeta = proto.inner_radius() / (a / 2);
    if (zeta < spec.zetaMin) fail(ErrorKind::infeasible_regime, "sandwich ratio " + std::to_string(zeta) + " below zetaMin " + std::to_string(spec.zetaMin));

    Vec3 extent = spec.domainBox.hi - spec.domainBox.lo;
    std::array<int, 3> n{};
    Vec3 side;
    for (int k = 0; k < 3; ++k) {
        n[k] = std::max(1, static_cast<int>(std::floor(extent[k] / cubeTarget + 1e-9)));
        side[k] = extent[k] / n[k];
        if (side[k] < a) fail(ErrorKind::infeasible_regime, "subcube side smaller than bubble diameter");
    }

    Rng rng(spec.seed);
    std::vector<BubbleShape> placed;
    const double r = proto.outer_radius();
    for (int ix = 0; ix < n[0]; ++ix)
        for (int iy = 0; iy < n[1]; ++iy)
            for (int iz = 0; iz < n[2]; ++iz) {
                int count = spec.occupancy.count;
                if (spec.occupancy.rule == Occupancy::Rule::bernoulli) count = rng.uniform() < spec.occupancy.p ? 1 : 0;
                Vec3 cellLo = spec.domainBox.lo + Vec3(ix * side[0], iy * side[1], iz * side[2]);
                Vec3 cellMid = cellLo + 0.5 * side;
                for (int b = 0; b < count; ++b) {
                    int rejections = 0;
                    for (;;) {
                        Vec3 c;
                        for (int k = 0; k < 3; ++k) {
                            double span = spec.jitter * std::max(0.0, side[k] - 2 * r);
                            c[k] = cellMid[k] + span * (rng.uniform() - 0.5);
                        }
                        BubbleShape cand = proto.moved_to(c);
                        bool ok = true;
                        for (const auto& q : placed)
                            if (surface_distance(cand, q) < dLow) {
                                ok = false;
                                break;
                            }
                        if (ok) {
                            placed.push_back(cand);
                            break;
                        }
                        if (++rejections >= 10000)
                            fail(ErrorKind::infeasible_regime, "packing impossible: 10^4 rejections placing bubble " + std::to_string(placed.size()) +
                                                                   " with d_min*a^t = " + std::to_string(dLow));
                    }
                }
            }
    if (placed.empty()) fail(ErrorKind::infeasible_regime, "occupancy rule placed no bubbles (M = 0)");

    Cluster c;
    c.bubbles = std::move(placed);
    c.s = spec.s;
    c.t = spec.t;
    c.seed = spec.seed;
    c.realizedStats = realize(c.bubbles);
    double mCap = spec.mMax * std::pow(a, -spec.s);
    if (static_cast<double>(c.size()) > mCap * (1 + 1e-12))
        fail(ErrorKind::infeasible_regime, "M = " + std::to_string(c.size()) + " exceeds M_max*a^-s = " + std::to_string(mCap));
    if (c.size() > 1 && c.realizedStats.d > dHigh)
        fail(ErrorKind::infeasible_regime, "realized minimum distance " + std::to_string(c.realizedStats.d) + " exceeds d_max*a^t = " + std::to_string(dHigh));
    return c;
}

double distance_sum(const Cluster& cluster, std::size_t j, double k)
{
    if (cluster.size() < 2) fail(ErrorKind::invalid_argument, "distance_sum needs M >= 2");
    if (j >= cluster.size()) fail(ErrorKind::invalid_argument, "bubble index out of range");
    if (!(k >= 0)) fail(ErrorKind::invalid_argument, "exponent k must be >= 0");
    std::vector<double> terms;
    terms.reserve(cluster.size() - 1);
    const Vec3& zj = cluster.bubbles[j].center;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        if (i == j) continue;
        terms.push_back(std::pow((cluster.bubbles[i].center - zj).norm(), -k));
    }
    return pairwise_sum(terms);
}

double counting_bound(double d, double alpha, double k)
{
    if (std::abs(k - 3.0) < 1e-12) return std::pow(d, -3.0) + std::pow(d, -3.0 * alpha) * std::abs(std::log(d));
    if (k < 3.0) return std::pow(d, -k) + std::pow(d, -3.0 * alpha);
    return std::pow(d, -k) + std::pow(d, -alpha * k);
}

ClusterStatistics cluster_stats(const Cluster& cluster, int quadratureOrder)
{
    ClusterStatistics st;
    static_cast<RealizedStats&>(st) = realize(cluster.bubbles);
    st.centroidOffsets.reserve(cluster.size());
    for (std::size_t m = 0; m < cluster.size(); ++m) {
        SurfaceQuadrature q = build_quadrature(cluster.bubbles[m], quadratureOrder, m);
        st.centroidOffsets.push_back((q.surface_centroid() - cluster.bubbles[m].center).norm());
    }
    return st;
}

}  // namespace bubbles
