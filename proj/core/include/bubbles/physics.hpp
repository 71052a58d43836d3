#pragma once

#include "bubbles/shape_functionals.hpp"

#include <limits>
#include <vector>

namespace bubbles {

struct Material {
    double rho = 1.0;
    double k = 1.0;
};

struct MediumSpec {
    double rho0 = 1.0;
    double k0 = 1.0;
    std::vector<Material> perBubble;
    double omega = 1.0;
    double omegaMax = std::numeric_limits<double>::infinity();
    double speedRatioMin = 0.5;
    double speedRatioMax = 2.0;

    double kappa0() const;
    double kappa(std::size_t m) const;
    void validate() const;
};

struct ContrastLaw {
    double cRho = 1.0;
    double beta = 2.0;
    double speedRatio = 1.0;

    double gamma() const { return beta - 1.0; }
    // rho = cRho * a^beta * rho0, k such that kappa_m / kappa_0 = speedRatio.
    Material material(double a, double rho0, double k0) const;
};

enum class CoefficientVariant { leading, refined, dominating };

const char* to_string(CoefficientVariant v);

struct ScatterCoefficient {
    cplx cM = 0.0;
    cplx cMinv = 0.0;
    CoefficientVariant variant = CoefficientVariant::leading;
};

double minnaert_frequency(const ShapeFunctionals& f, double rhoB, double kB, double rho0);

// rho_m/(rho_m - rho0) - kappa_m^2 * aHat / (8 pi); vanishes at the Minnaert frequency.
double leading_denominator(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m);

ScatterCoefficient leading_coefficient(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m);
ScatterCoefficient refined_inverse_coefficient(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m);
// Scale-free near-resonance form driven by lM * a^h1 = 1 - omegaM^2/omega^2.
ScatterCoefficient dominating_coefficient(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m, double lM, double h1, double a);
ScatterCoefficient scatter_coefficient(CoefficientVariant v, const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m);

double near_resonance_omega(double omegaM, double lM, double h1, double a);

}  // namespace bubbles
