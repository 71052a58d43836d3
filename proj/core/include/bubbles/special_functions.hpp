#pragma once

#include <vector>

namespace bubbles {

// Spherical Bessel functions of the first and second kind, orders 0..lMax, real x > 0.
std::vector<double> spherical_bessel_j(int lMax, double x);
std::vector<double> spherical_bessel_y(int lMax, double x);
// f_l' = f_{l-1} - (l+1)/x f_l, f_0' = -f_1; `f` must hold orders 0..lMax+1.
std::vector<double> spherical_derivative(const std::vector<double>& f, int lMax, double x);

std::vector<double> legendre_p(int lMax, double x);

}  // namespace bubbles
