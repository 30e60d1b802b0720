#pragma once

#include <functional>
#include <vector>

namespace lcm::numerics {

double normal_pdf(double x);
double normal_cdf(double x);
// Upper tail 1 - Phi(x) without cancellation.
double normal_sf(double x);
double normal_quantile(double u);
// exp(z^2) erfc(z) for z >= 0.
double erfcx(double z);

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

using Fn = std::function<double(double)>;

// Adaptive 61-point Gauss-Kronrod on [a, b]. Bisection stops once a cell's
// error estimate is below rel_tol times its value or its share of abs_tol.
Integral integrate(const Fn& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-15);

// Sum of integrate() over consecutive points; points must be sorted.
Integral integrate_pieces(const Fn& f, const std::vector<double>& points, double rel_tol = 1e-12);

// Double-exponential rule for integrands with endpoint singularities.
Integral integrate_endpoint_singular(const Fn& f, double a, double b, double rel_tol = 1e-11);

// Roots of g in (a, b) detected as sign changes on a uniform scan of n_scan
// cells, each refined by bracketed root-finding.
std::vector<double> sign_changes(const Fn& g, double a, double b, int n_scan);

// Root of g on [a, b] given g(a), g(b) of opposite sign; |bracket| <= abs_tol on exit.
double bracketed_root(const Fn& g, double a, double b, double abs_tol = 1e-13);

// Sorted, deduplicated copy of points restricted to [lo, hi], with lo and hi included.
std::vector<double> partition(std::vector<double> points, double lo, double hi);

}  // namespace lcm::numerics
