// 1D integration engines: adaptive Gauss-Kronrod on finite intervals,
// composite Gauss-Legendre panels, and a monotone substitution for
// semi-infinite ranges. Everything else in the library integrates
// through these entry points.
#pragma once

#include <functional>
#include <vector>

namespace dynheat {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
  int panel_order = 15;  // nodes per Gauss-Legendre panel

  void validate() const;  // throws std::invalid_argument on a bad field
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7/K15 pair, bisection of the worst segment).
// Returns converged=false when the subdivision budget runs out; throws
// std::domain_error if the integrand produces a non-finite value.
QuadratureResult integrate_finite(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec = {});

// Maps (lo, inf) to [0,1) via xi = lo + u/(1-u) and delegates to
// integrate_finite. Requires f to decay at least exponentially.
QuadratureResult integrate_semi_infinite(const Integrand& f, double lo,
                                         const QuadratureSpec& spec = {});

// Gauss-Legendre nodes/weights on [-1,1], order >= 2 (Newton on the
// Legendre recurrence).
void gauss_legendre_nodes(int order, std::vector<double>& nodes,
                          std::vector<double>& weights);

// Fixed composite Gauss-Legendre with `panels` equal panels of `order`
// nodes each. No error estimate; used for brute-force reference values.
double composite_gauss_legendre(const Integrand& f, double lo, double hi,
                                int panels, int order);

// Error function pair, implemented by rational approximations validated
// against the quadrature oracle; independent of the platform libm.
double erf(double x);
double erfc(double x);

}  // namespace dynheat
