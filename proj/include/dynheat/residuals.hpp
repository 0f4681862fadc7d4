// Finite-difference residual probes of the defining equations of G and
// the initial-trace limits; shared by the verification CLI and the tests.
#pragma once

#include <functional>

#include "dynheat/kernel.hpp"

namespace dynheat {

// |d_t G - d_aa G| at an interior reduced query (dim 1), central
// differences with the given step.
double interior_pde_residual(const ReducedKernelQuery& q, double fd_step,
                             const QuadratureSpec& spec = {});

// |d_t G - d_a G| at a = 0 (the dynamical condition d_t G + d_nu G = 0 with
// d_nu = -d_{x_N}); one-sided second-order stencil in the height.
double boundary_residual(const ReducedKernelQuery& q, double fd_step,
                         const QuadratureSpec& spec = {});

// | int_Omega G(x,y,t) zeta(x) dx - zeta(y) | for dim 1 via adaptive
// quadrature over the support [lo, hi] of zeta.
double initial_trace_error(double b, double t, const std::function<double(double)>& zeta,
                           double zeta_at_b, double lo, double hi,
                           const QuadratureSpec& spec = {});

}  // namespace dynheat
