#include "bubbles/physics.hpp"

#include <cmath>

namespace bubbles {

namespace {

const char* kModule = "physics";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

void check_index(const MediumSpec& medium, std::size_t m)
{
    if (m >= medium.perBubble.size()) fail(ErrorKind::invalid_argument, "bubble index " + std::to_string(m) + " has no material");
}

}  // namespace

const char* to_string(CoefficientVariant v)
{
    switch (v) {
    case CoefficientVariant::leading: return "leading";
    case CoefficientVariant::refined: return "refined";
    case CoefficientVariant::dominating: return "dominating";
    }
    return "unknown";
}

double MediumSpec::kappa0() const { return omega * std::sqrt(rho0 / k0); }

double MediumSpec::kappa(std::size_t m) const
{
    check_index(*this, m);
    return omega * std::sqrt(perBubble[m].rho / perBubble[m].k);
}

void MediumSpec::validate() const
{
    if (!(rho0 > 0 && k0 > 0)) fail(ErrorKind::invalid_argument, "background density and modulus must be positive");
    if (!(omega > 0)) fail(ErrorKind::invalid_argument, "omega must be positive");
    if (omega > omegaMax) fail(ErrorKind::invalid_argument, "omega " + std::to_string(omega) + " exceeds omegaMax " + std::to_string(omegaMax));
    for (std::size_t m = 0; m < perBubble.size(); ++m) {
        if (!(perBubble[m].rho > 0 && perBubble[m].k > 0)) fail(ErrorKind::invalid_argument, "bubble " + std::to_string(m) + ": density and modulus must be positive");
        double ratio = kappa(m) / kappa0();
        if (ratio < speedRatioMin || ratio > speedRatioMax)
            fail(ErrorKind::invalid_argument, "bubble " + std::to_string(m) + ": kappa_m/kappa_0 = " + std::to_string(ratio) + " outside configured bounds");
    }
}

Material ContrastLaw::material(double a, double rho0, double k0) const
{
    if (!(beta > 0)) fail(ErrorKind::invalid_argument, "beta must be positive");
    if (!(cRho > 0)) fail(ErrorKind::invalid_argument, "cRho must be positive");
    if (!(speedRatio > 0)) fail(ErrorKind::invalid_argument, "speedRatio must be positive");
    Material mat;
    mat.rho = cRho * std::pow(a, beta) * rho0;
    mat.k = mat.rho * k0 / (rho0 * speedRatio * speedRatio);
    return mat;
}

double minnaert_frequency(const ShapeFunctionals& f, double rhoB, double kB, double rho0)
{
    if (!(f.aHat < 0)) fail(ErrorKind::non_positive_resonance, "aHat must be negative");
    if (!(rhoB < rho0)) fail(ErrorKind::non_positive_resonance, "bubble density must be below the background density");
    return std::sqrt(8 * pi * kB / ((rhoB - rho0) * f.aHat));
}

double leading_denominator(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m)
{
    double rho = medium.perBubble.at(m).rho;
    double km = medium.kappa(m);
    return rho / (rho - medium.rho0) - km * km * f.aHat / (8 * pi);
}

ScatterCoefficient leading_coefficient(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m)
{
    check_index(medium, m);
    double rho = medium.perBubble[m].rho;
    if (rho == medium.rho0) fail(ErrorKind::division_degenerate, "bubble density equals background density");
    double km = medium.kappa(m);
    double t1 = rho / (rho - medium.rho0), t2 = km * km * f.aHat / (8 * pi);
    double den = t1 - t2;
    if (std::abs(den) < 1e-12 * (std::abs(t1) + std::abs(t2)))
        fail(ErrorKind::at_resonance, "coefficient denominator vanishes (omega at the Minnaert frequency)");
    double num = km * km * f.volume;
    ScatterCoefficient c;
    c.variant = CoefficientVariant::leading;
    c.cM = num / den;
    c.cMinv = den / num;
    return c;
}

ScatterCoefficient refined_inverse_coefficient(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m)
{
    check_index(medium, m);
    const double rho = medium.perBubble[m].rho, rho0 = medium.rho0;
    if (rho == rho0) fail(ErrorKind::division_degenerate, "bubble density equals background density");
    const double k0 = medium.kappa0(), km = medium.kappa(m);
    if (km == 0) fail(ErrorKind::division_degenerate, "zero interior wavenumber");
    const double km2 = km * km, k02 = k0 * k0;
    const double D = f.volume, A = f.aHat, cap = f.cap;
    const double d1 = km2 + (rho / rho0) * (km2 - k02);
    if (d1 == 0) fail(ErrorKind::division_degenerate, "kappa_m^2 + (rho_m/rho_0)(kappa_m^2 - kappa_0^2) vanishes");

    const double id = (rho / (rho - rho0) + (-km2 - (rho / rho0) * (km2 - k02)) * A / (8 * pi)) / D;
    const cplx is = I * (km2 * km / (4 * pi) - (k0 - km) * km2 * A * cap / (32 * pi * pi * D));
    const double j = (rho0 / (rho - rho0)) * (k0 - km) * km2 * (1 + A * cap / (8 * pi * D)) * cap / (4 * pi);

    ScatterCoefficient c;
    c.variant = CoefficientVariant::refined;
    c.cMinv = (id - I * id * j / d1) / d1 + (is - id * j * j / (km2 * km2)) / km2;
    if (c.cMinv == 0.0) fail(ErrorKind::division_degenerate, "refined inverse coefficient vanishes");
    c.cM = 1.0 / c.cMinv;
    return c;
}

ScatterCoefficient dominating_coefficient(const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m, double lM, double h1, double a)
{
    check_index(medium, m);
    if (!(a > 0)) fail(ErrorKind::invalid_argument, "a must be positive");
    const double k0 = medium.kappa0(), km = medium.kappa(m);
    // Unit-size representative B with D = a B: Abar = aHat/a^2, |B| = |D|/a^3, Cap(B) = Cap/a.
    const double abar = f.aHat / (a * a), vb = f.volume / (a * a * a), capb = f.cap / a;
    ScatterCoefficient c;
    c.variant = CoefficientVariant::dominating;
    c.cMinv = -lM * abar * std::pow(a, h1 - 1) / (8 * pi * vb) + I * (km / (4 * pi) - (k0 - km) * abar * capb / (32 * pi * pi * vb));
    if (c.cMinv == 0.0) fail(ErrorKind::division_degenerate, "dominating inverse coefficient vanishes");
    c.cM = 1.0 / c.cMinv;
    return c;
}

ScatterCoefficient scatter_coefficient(CoefficientVariant v, const ShapeFunctionals& f, const MediumSpec& medium, std::size_t m)
{
    switch (v) {
    case CoefficientVariant::leading: return leading_coefficient(f, medium, m);
    case CoefficientVariant::refined: return refined_inverse_coefficient(f, medium, m);
    case CoefficientVariant::dominating: break;
    }
    fail(ErrorKind::invalid_argument, "dominating coefficient needs (lM, h1, a); use dominating_coefficient");
}

double near_resonance_omega(double omegaM, double lM, double h1, double a)
{
    if (!(omegaM > 0)) fail(ErrorKind::invalid_argument, "omegaM must be positive");
    if (!(h1 > 0 && h1 <= 1)) fail(ErrorKind::invalid_argument, "h1 must lie in (0, 1]");
    double shift = lM * std::pow(a, h1);
    if (shift >= 1) fail(ErrorKind::unreachable_frequency, "lM * a^h1 = " + std::to_string(shift) + " >= 1");
    return omegaM / std::sqrt(1 - shift);
}

}  // namespace bubbles
