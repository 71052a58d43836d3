#pragma once

#include "bubbles/config.hpp"
#include "bubbles/oracle.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bubbles {

// Shape functionals are translation invariant, so identical reference shapes at the same scale share one evaluation.
class FunctionalCache {
public:
    const ShapeFunctionals& get(const BubbleShape& shape, int order);
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    std::map<std::string, ShapeFunctionals> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

struct Prepared {
    double a = 0.0;
    Cluster cluster;
    MediumSpec medium;
    std::vector<ShapeFunctionals> functionals;
    std::vector<double> omegaM;
    std::vector<ScatterCoefficient> coefficients;
};

Cluster build_cluster(const RunConfig& cfg, double a);
// Frequency from the configured mode; sweep mode needs an explicit omega.
Prepared prepare(const RunConfig& cfg, double a, FunctionalCache& cache, std::optional<double> omega = std::nullopt);

struct RegimeCheck {
    std::string group;
    std::string inequality;
    bool pass = false;
};

struct RegimeAssessment {
    std::string frequencyRegime;   // "away" or "near"
    double shift = 0.0;            // 1 - omegaM^2 / omega^2
    double lM = 0.0;
    double h1 = 0.0;
    double gamma = 0.0;
    std::vector<RegimeCheck> checks;
    // Per invertibility case (1a, 1b, 2a, 2b): all hypotheses hold.
    std::map<std::string, bool> cases;
};

RegimeAssessment regime_checks(const RunConfig& cfg, const Prepared& prep, double tau);

struct RunResult {
    Prepared prep;
    FoldyLaxSystem system;
    std::optional<InvertibilityReport> report;
    std::string reportError;
    RegimeAssessment regime;
    FarFieldPattern pattern;
};

InvertibilityParams invertibility_params(const RunConfig& cfg);
RunResult run(const RunConfig& cfg);

struct ConvergenceStudy {
    std::vector<double> aValues;
    std::vector<double> omegas;
    std::vector<std::size_t> bubbleCounts;
    // L2 over the direction grid, normalized by the unit incident amplitude.
    std::vector<double> errors;
    // Same, divided by the oracle pattern norm.
    std::vector<double> relativeErrors;
    std::vector<double> oracleNorms;
    double fittedSlope = 0.0;
    double fittedRelativeSlope = 0.0;
    double predictedSlope = 0.0;
    double exponentFirst = 0.0;
    double exponentSecond = 0.0;
    bool ambiguous = false;
    bool slopeOK = false;
    std::string oracle;
};

inline constexpr double kSlopeTolerance = 0.3;
inline constexpr double kAmbiguityGap = 0.25;

// Error exponents of the theorem for the configured frequency regime and coefficient variant.
std::pair<double, double> predicted_exponents(const RunConfig& cfg);
ConvergenceStudy convergence_study(const RunConfig& cfg, const std::vector<double>& aValues, StudySpec::Oracle oracle);

struct SweepPoint {
    double omega = 0.0;
    double crossSection = 0.0;
    cplx cInv = 0.0;
    cplx dominatingCInv = 0.0;
    std::string status = "ok";
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double omegaM = 0.0;
    double binWidth = 0.0;
    double argmaxOmega = 0.0;
    bool peakWithinBin = false;
    std::vector<double> signChangeOmegas;
    bool signChangeWithinBin = false;
};

SweepResult resonance_sweep(const RunConfig& cfg);

// Runs one CLI subcommand and writes its files into outDir.
void run_command(const std::string& command, const RunConfig& cfg, const std::string& outDir);

int exit_code(ErrorKind kind);

}  // namespace bubbles
