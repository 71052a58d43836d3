#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubbles {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
    invalid_argument,
    config,
    infeasible_regime,
    degenerate_mesh,
    singular_system,
    numerically_singular,
    non_positive_resonance,
    at_resonance,
    division_degenerate,
    unreachable_frequency,
    coincident_points,
    mixed_sign_coefficients,
    point_inside_exclusion_zone,
    truncation_insufficient,
    resolution_insufficient,
    oracle_infeasible,
    io,
};

const char* to_string(ErrorKind kind);

// Every failure surfaces as this type; `module` names the component that raised it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);
    ErrorKind kind() const { return kind_; }
    const std::string& module() const { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

// Order-independent of thread count: fixed binary tree over the input order.
double pairwise_sum(const double* x, std::size_t n);
cplx pairwise_sum(const cplx* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }
inline cplx pairwise_sum(const std::vector<cplx>& x) { return pairwise_sum(x.data(), x.size()); }

// e^z - 1 without cancellation for small |z|.
cplx expm1(cplx z);

struct GaussRule {
    std::vector<double> x, w;
};
// n-point Gauss-Legendre on [-1, 1].
GaussRule gauss_legendre(int n);

std::vector<Vec3> fibonacci_sphere(int n);

struct SphereRule {
    std::vector<Vec3> points;
    std::vector<double> weights;
};
// Gauss-Legendre in cos(theta) times trapezoid in phi; integrates over the unit sphere.
SphereRule product_sphere_rule(int nTheta, int nPhi);

// Platform-independent uniform doubles from a 64-bit Mersenne twister.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

int max_threads();
void set_threads(int n);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bubbles
