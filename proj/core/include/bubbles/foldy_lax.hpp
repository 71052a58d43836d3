#pragma once

#include "bubbles/physics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bubbles {

cplx fundamental_solution(cplx kappa, const Vec3& x, const Vec3& y);

struct SolveOptions {
    std::size_t denseLimit = 20000;
    double tolerance = 1e-10;
    int maxIterations = 500;
};

// C_m^{-1} Q_m + sum_{l != m} Phi(z_l, z_m) Q_l = -u^I(z_m).
// Above the dense limit the matrix is not stored and products are formed on the fly.
struct FoldyLaxSystem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd diagonal;
    std::vector<Vec3> centers;
    double kappa0 = 0.0;
    double omega = 0.0;
    Vec3 theta = Vec3::UnitZ();
    Eigen::VectorXcd rhs;
    Eigen::VectorXcd Q;
    double residualNorm = std::numeric_limits<double>::quiet_NaN();
    double conditionEstimate = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    bool matrixFree = false;
    bool solved = false;
    std::string method;
    int iterations = 0;

    std::size_t size() const { return centers.size(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& q) const;
};

// min over pairs of cos(kappa0 |z_m - z_j|); +inf for a single bubble.
double compute_tau(const std::vector<Vec3>& centers, double kappa0);

FoldyLaxSystem assemble(const Cluster& cluster, const std::vector<ScatterCoefficient>& coefficients, const MediumSpec& medium,
                        const Vec3& theta, cplx amplitude = 1.0, const SolveOptions& options = {});
FoldyLaxSystem solve(FoldyLaxSystem system, const SolveOptions& options = {});

struct GmresResult {
    Eigen::VectorXcd x;
    double relativeResidual = 0.0;
    int iterations = 0;
    bool converged = false;
};
GmresResult gmres(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, const Eigen::VectorXcd& b, double tolerance,
                  int maxIterations);

enum class Regime { negativeCm, positiveCmTau, positiveCmSmall };
enum class Verdict { yes, no, indeterminate };

const char* to_string(Regime r);
const char* to_string(Verdict v);

struct InvertibilityParams {
    double mMax = 1.0;
    double s = 0.0;
    double t = 0.0;
    double gamma = 1.0;
    double constant = 1.0;
    std::optional<Regime> forcedRegime;
};

struct InvertibilityReport {
    Regime regime = Regime::negativeCm;
    double lhs = 0.0;
    double rhs = 0.0;
    Verdict satisfied = Verdict::indeterminate;
    double tau = 0.0;
    double d = 0.0;
    double alpha = 1.0;
    double minReC = 0.0;
    double maxAbsC = 0.0;
    double interactionFactor = 0.0;   // [d^-2 + d^-3alpha]^{1/2}
    double gradientFactor = 0.0;      // [d^-4 + d^-5alpha]^{1/2}
    double shapeFactor = 0.0;         // max |D|^{-1} |integral of (x - z)|
    double diagnosticTerm = 0.0;      // rhs * max|C|
    double qNormBound = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

InvertibilityReport invertibility_report(const Cluster& cluster, const std::vector<ScatterCoefficient>& coefficients,
                                         const std::vector<ShapeFunctionals>& functionals, const MediumSpec& medium,
                                         const InvertibilityParams& params);

}  // namespace bubbles
