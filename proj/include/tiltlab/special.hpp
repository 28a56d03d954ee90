#pragma once

#include <functional>

namespace tiltlab {

// Airy function of the first kind on the real line.
double airy_ai(double x);
// Magnitude of the first (least negative) zero of Ai, about 2.33811.
double airy_first_zero();

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

// One-point law of the area-tilted excursion with strength a:
// density proportional to Ai((2a)^{1/3} x - first_zero)^2 on x >= 0.
double fs_density(double x, double a = 2.0);
double fs_cdf(double x, double a = 2.0);
double fs_quantile(double u, double a = 2.0);
// Leading tail rate, 2 sqrt(2a)/3 * t^{3/2}.
double fs_tail_exponent(double t, double a = 2.0);

}  // namespace tiltlab
