#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tiltlab/core.hpp"

namespace tiltlab {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Inner and outer x-coordinates where lines through (T, -alpha T^2) touch t -> -a t^2.
std::pair<double, double> tangency_location(double T, double alpha, double a);

// Macroscopic shape of X - t^2 for the ensemble with boundary slopes (L, R).
double hydro_limit_shape(const SlopePair& pair, double t);

int n0_threshold(double T, double lambda);

struct HydroGeometry {
  HydroGeometry(double T, double K, double lambda, double delta = 0.02, double err_const = 1.0);
  double T, K, lambda, delta;
  int n0;
  double beta;
  double gamma;
  double err_const;

  // lambda^(k-1) t^2
  double parabola(int k, double t) const;
};

struct Piecewise {
  std::vector<double> breaks;
  std::function<double(double)> f;
  double operator()(double t) const { return f(t); }
};

struct LightScaffold {
  double S;
  double bracket_lo, bracket_hi;  // interval holding xi
  double xi;
  double xi_bar;
  double path_touch;  // where the path's tangent lines meet the parabola
  Piecewise floor;
  Piecewise path;
  Piecewise hat_path;  // path without the constant lift
};

double start_offset(const HydroGeometry& g, int k);
double tangency_point(const HydroGeometry& g, int k);
LightScaffold light_path_scaffold(const HydroGeometry& g, int k);
// separation of the hat path and hat floor at the midpoint xi_bar
double scaffold_gap(const HydroGeometry& g, int k);

std::pair<double, double> err_bounds(const HydroGeometry& g, int k, double t);
Piecewise heavy_envelope(const HydroGeometry& g, int k, double H);

}  // namespace tiltlab
