// Closed-form heat and Poisson kernels on the half-space, the boundary
// reflection, the memory term H of the dynamical boundary condition (two
// interchangeable quadrature representations), and the fundamental
// solution G = Gamma(x-y) - Gamma(x-y*) + H.
#pragma once

#include <vector>

#include "dynheat/quadrature.hpp"

namespace dynheat {

// Point of the closed half-space {x_N >= 0}; tangential part is empty for
// dimension 1.
struct HalfSpacePoint {
  std::vector<double> tangential;  // x'
  double height = 0.0;             // x_N >= 0

  int dim() const { return static_cast<int>(tangential.size()) + 1; }
  bool on_boundary() const { return height == 0.0; }
  HalfSpacePoint reflected() const;  // (x', -x_N)
};

// The 4-tuple that fully determines G, H, and the envelope kernels:
// rho = |x'-y'|, a = x_N, b = y_N, plus the dimension.
struct ReducedKernelQuery {
  int dim = 1;
  double rho = 0.0;
  double a = 0.0;
  double b = 0.0;
  double t = 0.0;

  // |x - y*|^2 = rho^2 + (a+b)^2.
  double reflected_dist_sq() const { return rho * rho + (a + b) * (a + b); }
  void validate() const;  // throws std::domain_error when outside the domain
};

ReducedKernelQuery reduce(const HalfSpacePoint& x, const HalfSpacePoint& y, double t);

struct KernelValue {
  double value = 0.0;
  double quadrature_error = 0.0;  // zero for closed-form parts
  bool converged = true;
};

// Gauss kernel (4 pi t)^{-d/2} exp(-r^2/(4t)); exact 0 when the exponent
// underflows. d = 0 is the empty tangential factor (identically 1 at r=0).
double gauss_kernel(int d, double r, double t);

// d(Gamma_d)/dx_N at tangential distance r_tangential and height-coordinate
// h, i.e. -(h/(2t)) Gamma_d(sqrt(r^2+h^2), t).
double gauss_kernel_dheight(double r_tangential, double h, double t, int d);

// Normalization constant of the half-space Poisson kernel; closed forms for
// N <= 3, computed once by quadrature and memoized for larger N.
double poisson_constant(int dim);

// P_N(x-y*, t) = c_N (a+b+t) (rho^2+(a+b+t)^2)^{-N/2}; identically 1 for N=1.
double poisson_kernel_translated(const ReducedKernelQuery& q);

// H via the direct time integral over (0, t).
KernelValue h_correction(const ReducedKernelQuery& q, const QuadratureSpec& spec = {});

// H via the substituted eta-integral (z = x - y* + t e_N); agrees with
// h_correction within combined error estimates.
KernelValue h_correction_zform(const ReducedKernelQuery& q, const QuadratureSpec& spec = {});

// Representation switch: zform where its integrand is well conditioned
// (t <= |z|^2 and a+b+t moderate), direct form elsewhere.
KernelValue h_correction_auto(const ReducedKernelQuery& q, const QuadratureSpec& spec = {});

// The two Gauss terms of G (nonnegative, closed form).
double gauss_dipole(const ReducedKernelQuery& q);

// G(x,y,t) in reduced coordinates; symmetric in (a,b) by construction.
KernelValue fundamental_solution(const ReducedKernelQuery& q, const QuadratureSpec& spec = {});
KernelValue fundamental_solution(const HalfSpacePoint& x, const HalfSpacePoint& y, double t,
                                 const QuadratureSpec& spec = {});

// Interior mass of the Gauss dipole: erf(b / (2 sqrt(t))).
double interior_dipole_mass(double b, double t);

}  // namespace dynheat
