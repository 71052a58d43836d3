#include "bubbles/foldy_lax.hpp"

#include <algorithm>
#include <cmath>

namespace bubbles {

namespace {

const char* kModule = "foldy_lax";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

}  // namespace

const char* to_string(Regime r)
{
    switch (r) {
    case Regime::negativeCm: return "negativeCm";
    case Regime::positiveCmTau: return "positiveCmTau";
    case Regime::positiveCmSmall: return "positiveCmSmall";
    }
    return "unknown";
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "unknown";
}

cplx fundamental_solution(cplx kappa, const Vec3& x, const Vec3& y)
{
    double r = (x - y).norm();
    if (r == 0) fail(ErrorKind::coincident_points, "fundamental solution evaluated at coincident points");
    if (kappa.imag() == 0) return std::polar(1.0 / (4 * pi * r), kappa.real() * r);
    return std::exp(I * kappa * r) / (4 * pi * r);
}

double compute_tau(const std::vector<Vec3>& centers, double kappa0)
{
    double tau = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j) tau = std::min(tau, std::cos(kappa0 * (centers[i] - centers[j]).norm()));
    return tau;
}

FoldyLaxSystem assemble(const Cluster& cluster, const std::vector<ScatterCoefficient>& coefficients, const MediumSpec& medium, const Vec3& theta,
                        cplx amplitude, const SolveOptions& options)
{
    const std::size_t M = cluster.size();
    if (coefficients.size() != M) fail(ErrorKind::invalid_argument, "need one scattering coefficient per bubble");
    if (std::abs(theta.norm() - 1) > 1e-12) fail(ErrorKind::invalid_argument, "incident direction must be a unit vector");
    FoldyLaxSystem sys;
    sys.centers = cluster.centers();
    sys.kappa0 = medium.kappa0();
    sys.omega = medium.omega;
    sys.theta = theta;
    const Eigen::Index n = static_cast<Eigen::Index>(M);
    sys.diagonal.resize(n);
    sys.rhs.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        sys.diagonal[m] = coefficients[m].cMinv;
        sys.rhs[m] = -amplitude * std::exp(I * sys.kappa0 * theta.dot(sys.centers[m]));
    }
    sys.tau = compute_tau(sys.centers, sys.kappa0);
    sys.matrixFree = M > options.denseLimit;
    if (!sys.matrixFree) {
        sys.matrix.resize(n, n);
        const double k0 = sys.kappa0;
#pragma omp parallel for schedule(dynamic, 16)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) sys.matrix(i, j) = i == j ? sys.diagonal[i] : fundamental_solution(k0, sys.centers[i], sys.centers[j]);
    }
    return sys;
}

Eigen::VectorXcd FoldyLaxSystem::apply(const Eigen::VectorXcd& q) const
{
    if (!matrixFree) return matrix * q;
    const Eigen::Index n = static_cast<Eigen::Index>(centers.size());
    Eigen::VectorXcd out(n);
#pragma omp parallel
    {
        std::vector<cplx> row(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 64)
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) row[j] = i == j ? diagonal[i] * q[i] : fundamental_solution(kappa0, centers[i], centers[j]) * q[j];
            out[i] = pairwise_sum(row);
        }
    }
    return out;
}

GmresResult gmres(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, const Eigen::VectorXcd& b, double tolerance, int maxIterations)
{
    GmresResult out;
    const Eigen::Index n = b.size();
    out.x = Eigen::VectorXcd::Zero(n);
    double bn = b.norm();
    if (bn == 0) {
        out.converged = true;
        return out;
    }
    const int kmax = std::max(1, std::min<int>(maxIterations, static_cast<int>(n)));
    std::vector<Eigen::VectorXcd> V;
    V.reserve(kmax + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(kmax + 1, kmax);
    std::vector<cplx> cs(kmax), sn(kmax);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(kmax + 1);
    V.push_back(b / bn);
    g[0] = bn;
    int k = 0;
    for (; k < kmax; ++k) {
        Eigen::VectorXcd w = apply(V[k]);
        for (int j = 0; j <= k; ++j) {
            H(j, k) = V[j].dot(w);
            w -= H(j, k) * V[j];
        }
        const double hk = w.norm();
        H(k + 1, k) = hk;
        for (int j = 0; j < k; ++j) {
            cplx t = std::conj(cs[j]) * H(j, k) + std::conj(sn[j]) * H(j + 1, k);
            H(j + 1, k) = -sn[j] * H(j, k) + cs[j] * H(j + 1, k);
            H(j, k) = t;
        }
        double den = std::hypot(std::abs(H(k, k)), std::abs(H(k + 1, k)));
        if (den == 0) break;
        cs[k] = H(k, k) / den;
        sn[k] = H(k + 1, k) / den;
        H(k, k) = den;
        H(k + 1, k) = 0;
        g[k + 1] = -sn[k] * g[k];
        g[k] = std::conj(cs[k]) * g[k];
        out.relativeResidual = std::abs(g[k + 1]) / bn;
        if (out.relativeResidual <= tolerance || hk == 0.0) {
            ++k;
            break;
        }
        V.push_back(w / hk);
    }
    out.iterations = k;
    if (k > 0) {
        Eigen::VectorXcd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        for (int j = 0; j < k; ++j) out.x += y[j] * V[j];
    }
    out.relativeResidual = (apply(out.x) - b).norm() / bn;
    out.converged = out.relativeResidual <= tolerance;
    return out;
}

FoldyLaxSystem solve(FoldyLaxSystem sys, const SolveOptions& options)
{
    const Eigen::Index n = sys.rhs.size();
    double bn = sys.rhs.norm();
    if (bn == 0) {
        sys.Q = Eigen::VectorXcd::Zero(n);
        sys.residualNorm = 0;
        sys.conditionEstimate = sys.matrixFree ? std::numeric_limits<double>::quiet_NaN() : 1.0;
        sys.solved = true;
        sys.method = "trivial";
        return sys;
    }
    if (!sys.matrixFree) {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
        double rc = lu.rcond();
        sys.conditionEstimate = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        double minPivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(minPivot > 0) || !(rc > 1e-16))
            fail(ErrorKind::numerically_singular, "pivot collapse (condition estimate " + std::to_string(sys.conditionEstimate) + ")");
        sys.Q = lu.solve(sys.rhs);
        Eigen::VectorXcd r = sys.rhs - sys.matrix * sys.Q;
        sys.residualNorm = r.norm() / bn;
        if (sys.residualNorm > options.tolerance) {
            sys.Q += lu.solve(r);
            sys.residualNorm = (sys.rhs - sys.matrix * sys.Q).norm() / bn;
        }
        sys.method = "dense-lu";
        sys.iterations = 0;
    } else {
        GmresResult g = gmres([&sys](const Eigen::VectorXcd& v) { return sys.apply(v); }, sys.rhs, options.tolerance, options.maxIterations);
        sys.Q = g.x;
        sys.residualNorm = g.relativeResidual;
        sys.iterations = g.iterations;
        sys.method = "gmres";
    }
    if (!std::isfinite(sys.residualNorm) || sys.residualNorm > options.tolerance)
        fail(ErrorKind::numerically_singular, "residual " + std::to_string(sys.residualNorm) + " above tolerance (method " + sys.method +
                                                  ", condition estimate " + std::to_string(sys.conditionEstimate) + ")");
    sys.solved = true;
    return sys;
}

InvertibilityReport invertibility_report(const Cluster& cluster, const std::vector<ScatterCoefficient>& coefficients,
                                         const std::vector<ShapeFunctionals>& functionals, const MediumSpec& medium, const InvertibilityParams& params)
{
    const std::size_t M = cluster.size();
    if (coefficients.size() != M || functionals.size() != M) fail(ErrorKind::invalid_argument, "need coefficients and functionals per bubble");
    InvertibilityReport rep;
    std::size_t pos = 0, neg = 0;
    double minRe = std::numeric_limits<double>::infinity(), maxAbs = 0;
    for (const auto& c : coefficients) {
        double re = c.cM.real();
        if (re > 0) ++pos;
        else if (re < 0) ++neg;
        minRe = std::min(minRe, std::abs(re));
        maxAbs = std::max(maxAbs, std::abs(c.cM));
    }
    if (pos != M && neg != M) fail(ErrorKind::mixed_sign_coefficients, std::to_string(pos) + " positive and " + std::to_string(neg) + " negative Re C_m among " + std::to_string(M));
    rep.minReC = minRe;
    rep.maxAbsC = maxAbs;
    rep.tau = compute_tau(cluster.centers(), medium.kappa0());
    rep.d = cluster.realizedStats.d;
    rep.alpha = alpha_exponent(params.s, params.t);
    rep.lhs = minRe / (maxAbs * maxAbs);

    if (neg == M) rep.regime = Regime::negativeCm;
    else rep.regime = rep.tau > 0 ? Regime::positiveCmTau : Regime::positiveCmSmall;
    if (params.forcedRegime) {
        bool positive = pos == M;
        if (positive == (*params.forcedRegime == Regime::negativeCm)) fail(ErrorKind::invalid_argument, "forced regime contradicts the sign of Re C_m");
        rep.regime = *params.forcedRegime;
    }

    for (const auto& f : functionals) rep.shapeFactor = std::max(rep.shapeFactor, f.volumeCentroidOffset.norm());

    if (M == 1) {
        rep.rhs = 0;
        rep.satisfied = Verdict::yes;
        rep.note = "single bubble: no off-diagonal coupling";
        rep.qNormBound = 2 * maxAbs / (minRe / maxAbs);
        return rep;
    }

    const double d = rep.d, al = rep.alpha, C = params.constant;
    const double a = cluster.realizedStats.a;
    const double sqrtMM = std::sqrt(static_cast<double>(M) * params.mMax);
    rep.interactionFactor = std::sqrt(std::pow(d, -2.0) + std::pow(d, -3.0 * al));
    rep.gradientFactor = std::sqrt(std::pow(d, -4.0) + std::pow(d, -5.0 * al));
    double tail = rep.shapeFactor * C * sqrtMM * rep.gradientFactor + C * std::pow(a, 2 - params.gamma) * sqrtMM * rep.gradientFactor +
                  C * std::pow(a, 3 - params.gamma) * M * params.mMax * rep.interactionFactor * rep.gradientFactor;
    if (rep.regime == Regime::positiveCmTau) rep.rhs = 3 * std::max(rep.tau, 0.0) / (5 * pi * d) + tail;
    else rep.rhs = C * sqrtMM * rep.interactionFactor + tail;

    if (rep.lhs >= 10 * rep.rhs) rep.satisfied = Verdict::yes;
    else if (rep.lhs * 10 <= rep.rhs) rep.satisfied = Verdict::no;
    else rep.satisfied = Verdict::indeterminate;
    if (rep.regime == Regime::positiveCmTau && !(rep.tau > 0)) {
        rep.satisfied = Verdict::no;
        rep.note = "tau <= 0 violates the positivity precondition of this regime";
    }

    rep.diagnosticTerm = rep.rhs * maxAbs;
    double margin = minRe / maxAbs - rep.diagnosticTerm;
    // Unit plane wave: |u^I(z_m)| = 1, so the right-hand side has norm sqrt(M).
    if (margin > 0) rep.qNormBound = 2 * maxAbs * std::sqrt(static_cast<double>(M)) / margin;
    return rep;
}

}  // namespace bubbles
