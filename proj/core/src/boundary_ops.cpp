#include "bubbles/boundary_ops.hpp"

#include "bubbles/special_functions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace bubbles {

namespace {

const char* kModule = "boundary_ops";

constexpr double inv4pi = 1.0 / (4.0 * pi);

std::array<Vec3, 3> tri_of(const TriMesh& m, const std::array<int, 3>& t, const BubbleShape& s, const Vec3& axes)
{
    std::array<Vec3, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = s.to_world(axes.cwiseProduct(m.vertices[t[k]]));
    return out;
}

void add_panels(SurfaceQuadrature& q, const TriMesh& m, const BubbleShape& s, const Vec3& axes)
{
    q.nodes.reserve(m.triangles.size());
    for (const auto& t : m.triangles) {
        auto tri = tri_of(m, t, s, axes);
        Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        double area = 0.5 * n.norm();
        if (!(area > 0)) throw Error(ErrorKind::degenerate_mesh, kModule, "zero-area panel");
        q.nodes.push_back((tri[0] + tri[1] + tri[2]) / 3.0);
        q.weights.push_back(area);
        q.normals.push_back(n.normalized());
        q.panels.push_back(tri);
    }
}

// (e^{i k r} - 1 - i k r) / (i k), accurate for small k r.
cplx radiation_remainder(cplx kappa, double r)
{
    cplx z = I * kappa * r;
    if (std::abs(z) < 1e-3) {
        cplx z2 = z * z;
        return r * (z / 2.0 + z2 / 6.0 + z2 * z / 24.0 + z2 * z2 / 120.0);
    }
    return (bubbles::expm1(z) - z) / (I * kappa);
}

}  // namespace

const char* to_string(LayerKind kind)
{
    switch (kind) {
    case LayerKind::singleLayer: return "singleLayer";
    case LayerKind::adjointDoubleLayer: return "adjointDoubleLayer";
    case LayerKind::doubleLayer: return "doubleLayer";
    }
    return "unknown";
}

double SurfaceQuadrature::area() const { return pairwise_sum(weights); }

Vec3 SurfaceQuadrature::surface_centroid() const
{
    Vec3 c = Vec3::Zero();
    std::vector<double> part(size());
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < size(); ++i) part[i] = weights[i] * (nodes[i][k] - center[k]);
        c[k] = pairwise_sum(part);
    }
    return center + c / area();
}

SurfaceQuadrature build_quadrature(const BubbleShape& shape, int order, std::size_t bubbleRef)
{
    if (order < 0) throw Error(ErrorKind::invalid_argument, kModule, "quadrature order must be >= 0");
    SurfaceQuadrature q;
    q.bubbleRef = bubbleRef;
    q.center = shape.center;
    switch (shape.kind) {
    case ShapeKind::sphere: {
        q.family = QuadratureFamily::sphereSpectral;
        const double R = shape.radius * shape.scale;
        q.radius = R;
        int nt = 4 * (order + 1);
        q.bandLimit = nt - 1;
        SphereRule rule = product_sphere_rule(nt, 2 * nt);
        q.nodes.reserve(rule.points.size());
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
            q.nodes.push_back(shape.center + R * rule.points[i]);
            q.normals.push_back(rule.points[i]);
            q.weights.push_back(R * R * rule.weights[i]);
        }
        break;
    }
    case ShapeKind::ellipsoid: {
        q.family = QuadratureFamily::flatPanel;
        add_panels(q, icosphere(order), shape, shape.semiAxes);
        break;
    }
    case ShapeKind::mesh: {
        q.family = QuadratureFamily::flatPanel;
        if (!shape.mesh) throw Error(ErrorKind::degenerate_mesh, kModule, "mesh shape without mesh data");
        TriMesh m = *shape.mesh;
        for (int r = 0; r < order; ++r) m = subdivide(m);
        add_panels(q, m, shape, Vec3::Ones());
        break;
    }
    }
    return q;
}

cplx single_layer_kernel(cplx kappa, const Vec3& x, const Vec3& y)
{
    double r = (x - y).norm();
    return std::exp(I * kappa * r) * (inv4pi / r);
}

cplx adjoint_double_layer_kernel(cplx kappa, const Vec3& x, const Vec3& nx, const Vec3& y)
{
    Vec3 d = x - y;
    double r = d.norm();
    cplx ikr = I * kappa * r;
    return std::exp(ikr) * (ikr - 1.0) * (inv4pi * d.dot(nx) / (r * r * r));
}

cplx double_layer_kernel(cplx kappa, const Vec3& x, const Vec3& y, const Vec3& ny)
{
    Vec3 d = y - x;
    double r = d.norm();
    cplx ikr = I * kappa * r;
    return std::exp(ikr) * (ikr - 1.0) * (inv4pi * d.dot(ny) / (r * r * r));
}

cplx sphere_single_layer_of_one(double R, cplx kappa)
{
    if (kappa == 0.0) return R;
    cplx z = 2.0 * I * kappa * R;
    if (std::abs(z) < 1e-4) return R * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    return R * bubbles::expm1(z) / z;
}

cplx sphere_adjoint_double_layer_of_one(double R, cplx kappa)
{
    (void)R;
    if (kappa == 0.0) return -0.5;
    cplx z = 2.0 * I * kappa * R;
    if (std::abs(z) < 1e-3) {
        cplx z2 = z * z;
        return -0.5 + z2 / 12.0 + z2 * z / 24.0 + z2 * z2 / 80.0 + z2 * z2 * z / 360.0;
    }
    cplx e = bubbles::expm1(z);
    return 0.5 + e * (0.5 - 1.0 / z);
}

double triangle_inverse_distance(const std::array<Vec3, 3>& tri, const Vec3& x)
{
    Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
    double w0 = (x - tri[0]).dot(n);
    double aw = std::abs(w0);
    Vec3 p = x - w0 * n;
    double total = 0;
    for (int k = 0; k < 3; ++k) {
        const Vec3& va = tri[k];
        const Vec3& vb = tri[(k + 1) % 3];
        Vec3 e = (vb - va).normalized();
        Vec3 u = e.cross(n);
        double t0 = (va - p).dot(u);
        double lm = (va - p).dot(e), lp = (vb - p).dot(e);
        double r02 = t0 * t0 + w0 * w0;
        double rm = std::sqrt(lm * lm + r02), rp = std::sqrt(lp * lp + r02);
        if (std::abs(t0) > 0) {
            // R + l, rewritten when l < 0 to avoid cancellation.
            double sp = lp >= 0 ? rp + lp : r02 / (rp - lp);
            double sm = lm >= 0 ? rm + lm : r02 / (rm - lm);
            total += t0 * std::log(sp / sm);
        }
        if (aw > 0) total -= aw * (std::atan(t0 * lp / (r02 + aw * rp)) - std::atan(t0 * lm / (r02 + aw * rm)));
    }
    return total;
}

cplx panel_self_single_layer(const std::array<Vec3, 3>& tri, const Vec3& x, cplx kappa)
{
    static const GaussRule g = gauss_legendre(24);
    cplx total = 0;
    for (int k = 0; k < 3; ++k) {
        const Vec3& va = tri[k];
        const Vec3& vb = tri[(k + 1) % 3];
        Vec3 e = (vb - va).normalized();
        double l1 = (va - x).dot(e), l2 = (vb - x).dot(e);
        double h = ((va - x) - l1 * e).norm();
        total += h * (std::asinh(l2 / h) - std::asinh(l1 / h));
        if (kappa != 0.0) {
            double p1 = std::atan(l1 / h), p2 = std::atan(l2 / h);
            double half = 0.5 * (p2 - p1), mid = 0.5 * (p2 + p1);
            cplx acc = 0;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                double phi = mid + half * g.x[i];
                acc += g.w[i] * radiation_remainder(kappa, h / std::cos(phi));
            }
            total += half * acc;
        }
    }
    return total * inv4pi;
}

std::vector<cplx> sphere_layer_eigenvalues(LayerKind kind, double R, double kappa, int L)
{
    if (kind == LayerKind::doubleLayer) throw Error(ErrorKind::invalid_argument, kModule, "sphere eigenvalues are provided for S and K* only");
    if (!(R > 0) || L < 0) throw Error(ErrorKind::invalid_argument, kModule, "sphere eigenvalues need R > 0 and L >= 0");
    std::vector<cplx> out(static_cast<std::size_t>(L) + 1);
    auto static_value = [&](int l) -> cplx { return kind == LayerKind::singleLayer ? R / (2.0 * l + 1) : -0.5 / (2.0 * l + 1); };
    const double x = kappa * R;
    if (x == 0) {
        for (int l = 0; l <= L; ++l) out[l] = static_value(l);
        return out;
    }
    auto j = spherical_bessel_j(L + 1, x), y = spherical_bessel_y(L + 1, x);
    auto dj = spherical_derivative(j, L, x), dy = spherical_derivative(y, L, x);
    for (int l = 0; l <= L; ++l) {
        cplx v;
        if (kind == LayerKind::singleLayer) v = I * kappa * R * R * j[l] * cplx(j[l], y[l]);
        else v = I * x * x * j[l] * cplx(dj[l], dy[l]) + 0.5;
        // j_l underflows or y_l overflows only far inside the static regime.
        out[l] = std::isfinite(v.real()) && std::isfinite(v.imag()) && j[l] != 0 ? v : static_value(l);
    }
    return out;
}

LayerOperator assemble_layer(const SurfaceQuadrature& quad, LayerKind kind, cplx kappa)
{
    if (!std::isfinite(kappa.real()) || !std::isfinite(kappa.imag())) throw Error(ErrorKind::invalid_argument, kModule, "wavenumber must be finite");
    const Eigen::Index n = static_cast<Eigen::Index>(quad.size());
    LayerOperator op;
    op.kind = kind;
    op.wavenumber = kappa;
    op.matrix.resize(n, n);
    op.weights = Eigen::Map<const Eigen::VectorXd>(quad.weights.data(), n);

    auto kernel = [&](Eigen::Index i, Eigen::Index j) -> cplx {
        switch (kind) {
        case LayerKind::singleLayer: return single_layer_kernel(kappa, quad.nodes[i], quad.nodes[j]);
        case LayerKind::adjointDoubleLayer: return adjoint_double_layer_kernel(kappa, quad.nodes[i], quad.normals[i], quad.nodes[j]);
        case LayerKind::doubleLayer: return double_layer_kernel(kappa, quad.nodes[i], quad.nodes[j], quad.normals[j]);
        }
        return 0.0;
    };

    const bool sphere = quad.family == QuadratureFamily::sphereSpectral;
    if (sphere && kind != LayerKind::doubleLayer && kappa.imag() == 0 && quad.bandLimit > 0) {
        const int L = quad.bandLimit;
        // Node samples outside the band-limited space get the degree L+1 eigenvalue so the block stays invertible.
        std::vector<cplx> c = sphere_layer_eigenvalues(kind, quad.radius, kappa.real(), L + 1);
        const cplx rest = c[L + 1];
        c.pop_back();
        for (int l = 0; l <= L; ++l) c[l] = (c[l] - rest) * ((2.0 * l + 1) / (4 * pi * quad.radius * quad.radius));
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double mu = std::clamp(quad.normals[i].dot(quad.normals[j]), -1.0, 1.0);
                double p0 = 1, p1 = mu;
                cplx acc = c[0] + c[1] * mu;
                for (int l = 1; l < L; ++l) {
                    double p2 = ((2 * l + 1) * mu * p1 - l * p0) / (l + 1);
                    acc += c[l + 1] * p2;
                    p0 = p1;
                    p1 = p2;
                }
                op.matrix(i, j) = acc;
            }
        for (Eigen::Index i = 0; i < n; ++i) op.matrix(i, i) += rest / quad.weights[i];
        return op;
    }
    cplx sphereMean = 0;
    if (sphere)
        sphereMean = kind == LayerKind::singleLayer ? sphere_single_layer_of_one(quad.radius, kappa)
                                                    : sphere_adjoint_double_layer_of_one(quad.radius, kappa);

#pragma omp parallel
    {
        std::vector<cplx> row(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 8)
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) {
                    row[j] = 0.0;
                    continue;
                }
                cplx v = kernel(i, j);
                op.matrix(i, j) = v;
                row[j] = v * quad.weights[j];
            }
            if (sphere) {
                op.matrix(i, i) = (sphereMean - pairwise_sum(row)) / quad.weights[i];
            } else if (kind == LayerKind::singleLayer) {
                op.matrix(i, i) = panel_self_single_layer(quad.panels[i], quad.nodes[i], kappa) / quad.weights[i];
            } else {
                op.matrix(i, i) = 0.0;  // (x - y) . nu vanishes on a flat panel
            }
        }
    }
    return op;
}

Eigen::MatrixXcd assemble_cross(const SurfaceQuadrature& target, const SurfaceQuadrature& source, LayerKind kind, cplx kappa)
{
    const Eigen::Index nt = static_cast<Eigen::Index>(target.size()), ns = static_cast<Eigen::Index>(source.size());
    Eigen::MatrixXcd m(nt, ns);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < ns; ++j) {
            cplx v = 0;
            switch (kind) {
            case LayerKind::singleLayer: v = single_layer_kernel(kappa, target.nodes[i], source.nodes[j]); break;
            case LayerKind::adjointDoubleLayer: v = adjoint_double_layer_kernel(kappa, target.nodes[i], target.normals[i], source.nodes[j]); break;
            case LayerKind::doubleLayer: v = double_layer_kernel(kappa, target.nodes[i], source.nodes[j], source.normals[j]); break;
            }
            m(i, j) = v * source.weights[j];
        }
    return m;
}

Eigen::VectorXcd LayerOperator::apply(const Eigen::VectorXcd& density) const
{
    return matrix * (weights.cast<cplx>().cwiseProduct(density));
}

Eigen::MatrixXcd LayerOperator::nystrom() const { return matrix * weights.cast<cplx>().asDiagonal(); }

SingleLayerSolve solve_single_layer_report(const LayerOperator& op, const Eigen::VectorXd& rhs)
{
    if (op.kind != LayerKind::singleLayer || op.wavenumber != 0.0)
        throw Error(ErrorKind::invalid_argument, kModule, "solve_single_layer needs the single layer at zero wavenumber");
    const Eigen::Index n = op.matrix.rows();
    if (rhs.size() != n) throw Error(ErrorKind::invalid_argument, kModule, "right-hand side size mismatch");
    SingleLayerSolve out;
    double rn = rhs.norm();
    if (rn == 0) {
        out.density = Eigen::VectorXd::Zero(n);
        return out;
    }
    // Symmetric form W^{1/2} G W^{1/2} h = W^{1/2} rhs with g = W^{-1/2} h.
    Eigen::VectorXd sw = op.weights.cwiseSqrt();
    Eigen::MatrixXd a = sw.asDiagonal() * op.matrix.real() * sw.asDiagonal();
    a = 0.5 * (a + a.transpose()).eval();
    Eigen::VectorXd b = sw.cwiseProduct(rhs);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    Eigen::VectorXd h;
    if (llt.info() == Eigen::Success) {
        h = llt.solve(b);
        out.conditionEstimate = 1.0 / std::max(llt.rcond(), 1e-300);
    } else {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        out.conditionEstimate = 1.0 / std::max(lu.rcond(), 1e-300);
        h = lu.solve(b);
    }
    out.density = h.cwiseQuotient(sw);
    Eigen::VectorXd res = op.matrix.real() * op.weights.cwiseProduct(out.density) - rhs;
    out.residual = res.norm() / rn;
    if (!std::isfinite(out.residual) || out.residual > 1e-8)
        throw Error(ErrorKind::singular_system, kModule,
                    "single layer solve residual " + std::to_string(out.residual) + " (condition estimate " + std::to_string(out.conditionEstimate) + ")");
    return out;
}

Eigen::VectorXd solve_single_layer(const LayerOperator& op, const Eigen::VectorXd& rhs) { return solve_single_layer_report(op, rhs).density; }

void write_matrix_binary(const Eigen::MatrixXcd& m, const std::string& path)
{
    static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, kModule, "cannot write '" + path + "'");
    std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v[2] = {m(i, j).real(), m(i, j).imag()};
            out.write(reinterpret_cast<const char*>(v), sizeof v);
        }
}

}  // namespace bubbles
