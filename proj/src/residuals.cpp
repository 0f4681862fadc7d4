#include "dynheat/residuals.hpp"

#include <cmath>
#include <stdexcept>

namespace dynheat {

namespace {
QuadratureSpec tighten(const QuadratureSpec& spec) {
  QuadratureSpec s = spec;
  s.abs_tol = std::min(spec.abs_tol, 1e-12);
  s.rel_tol = std::min(spec.rel_tol, 1e-12);
  return s;
}
}  // namespace

double interior_pde_residual(const ReducedKernelQuery& q, double fd_step,
                             const QuadratureSpec& spec) {
  if (q.dim != 1) throw std::invalid_argument("interior_pde_residual: probe is built for dim 1");
  if (!(q.a - fd_step > 0.0)) {
    throw std::invalid_argument("interior_pde_residual: needs a - fd_step > 0");
  }
  const QuadratureSpec s = tighten(spec);
  auto G = [&](double a, double t) {
    return fundamental_solution({q.dim, q.rho, a, q.b, t}, s).value;
  };
  const double e = fd_step;
  const double dt = (G(q.a, q.t + e) - G(q.a, q.t - e)) / (2.0 * e);
  const double daa = (G(q.a + e, q.t) - 2.0 * G(q.a, q.t) + G(q.a - e, q.t)) / (e * e);
  return std::abs(dt - daa);
}

double boundary_residual(const ReducedKernelQuery& q, double fd_step,
                         const QuadratureSpec& spec) {
  if (q.dim != 1) throw std::invalid_argument("boundary_residual: probe is built for dim 1");
  if (q.a != 0.0) throw std::invalid_argument("boundary_residual: evaluated at a = 0");
  const QuadratureSpec s = tighten(spec);
  auto G = [&](double a, double t) {
    return fundamental_solution({q.dim, q.rho, a, q.b, t}, s).value;
  };
  const double e = fd_step;
  const double dt = (G(0.0, q.t + e) - G(0.0, q.t - e)) / (2.0 * e);
  const double da = (-3.0 * G(0.0, q.t) + 4.0 * G(e, q.t) - G(2.0 * e, q.t)) / (2.0 * e);
  return std::abs(dt - da);
}

double initial_trace_error(double b, double t, const std::function<double(double)>& zeta,
                           double zeta_at_b, double lo, double hi, const QuadratureSpec& spec) {
  const QuadratureSpec s = tighten(spec);
  const auto r = integrate_finite(
      [&](double x) {
        return fundamental_solution({1, 0.0, x, b, t}, s).value * zeta(x);
      },
      lo, hi, s);
  return std::abs(r.value - zeta_at_b);
}

}  // namespace dynheat
