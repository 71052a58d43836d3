#pragma once

#include "bubbles/foldy_lax.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bubbles {

struct FrequencySpec {
    enum class Mode { fixed, relativeToResonance, sweep };
    Mode mode = Mode::fixed;
    double omega = 1.0;
    double lM = 0.0;
    double h1 = 0.5;
    double omegaMin = 0.0;
    double omegaMax = 0.0;
    int count = 0;
};

const char* to_string(FrequencySpec::Mode m);

struct StudySpec {
    enum class Oracle { mie, bem };
    std::vector<double> aValues;
    Oracle oracle = Oracle::mie;
    int bemOrder = 3;
};

struct RunConfig {
    ClusterSpec cluster;
    // Explicit placement replaces the generator; bubbles take the prototype shape at diameter a.
    std::vector<Vec3> centers;
    // Explicit per-bubble materials replace the contrast law.
    std::vector<Material> materials;
    double rho0 = 1.0;
    double k0 = 1.0;
    double omegaMax = std::numeric_limits<double>::infinity();
    ContrastLaw contrast;
    FrequencySpec frequency;
    CoefficientVariant coefficientVariant = CoefficientVariant::leading;
    Vec3 incidentDirection = Vec3::UnitZ();
    int directionsN = 590;
    int quadratureOrder = 3;
    std::optional<Regime> forcedRegime;
    double invertibilityConstant = 1.0;
    StudySpec study;
    std::string outDir = ".";
    bool dumpMatrix = false;
};

// Key-path aware: errors name the offending key, unknown keys are rejected.
// Relative mesh paths resolve against baseDir.
RunConfig parse_config(const std::string& text, const std::string& baseDir = ".");
RunConfig load_config(const std::string& path);

}  // namespace bubbles
