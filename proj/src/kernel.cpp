#include "dynheat/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dynheat {

namespace {
// Below this exponent exp() underflows; return exact 0 instead of
// subnormal noise so downstream sums stay well-scaled.
constexpr double kExpUnderflow = -745.0;
}  // namespace

HalfSpacePoint HalfSpacePoint::reflected() const {
  HalfSpacePoint r = *this;
  r.height = -r.height;
  return r;
}

void ReducedKernelQuery::validate() const {
  if (dim < 1) throw std::domain_error("ReducedKernelQuery: dim must be >= 1");
  if (!(rho >= 0.0)) throw std::domain_error("ReducedKernelQuery: rho must be >= 0");
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("ReducedKernelQuery: heights must be >= 0");
  if (!(t > 0.0)) throw std::domain_error("ReducedKernelQuery: t must be > 0");
}

ReducedKernelQuery reduce(const HalfSpacePoint& x, const HalfSpacePoint& y, double t) {
  if (x.dim() != y.dim()) throw std::domain_error("reduce: dimension mismatch");
  double rho2 = 0.0;
  for (size_t i = 0; i < x.tangential.size(); ++i) {
    const double d = x.tangential[i] - y.tangential[i];
    rho2 += d * d;
  }
  return ReducedKernelQuery{x.dim(), std::sqrt(rho2), x.height, y.height, t};
}

double gauss_kernel(int d, double r, double t) {
  if (d < 0) throw std::domain_error("gauss_kernel: dimension must be >= 0");
  if (!(t > 0.0)) throw std::domain_error("gauss_kernel: t must be > 0");
  const double e = -r * r / (4.0 * t);
  if (e < kExpUnderflow) return 0.0;
  return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(e);
}

double gauss_kernel_dheight(double r_tangential, double h, double t, int d) {
  if (!(t > 0.0)) throw std::domain_error("gauss_kernel_dheight: t must be > 0");
  const double r = std::sqrt(r_tangential * r_tangential + h * h);
  return -(h / (2.0 * t)) * gauss_kernel(d, r, t);
}

double poisson_constant(int dim) {
  if (dim < 1) throw std::domain_error("poisson_constant: dim must be >= 1");
  if (dim == 1) return 1.0;
  if (dim == 2) return 1.0 / M_PI;
  if (dim == 3) return 1.0 / (2.0 * M_PI);

  static std::map<int, double> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;

  // 1 = c_N * omega_{N-2} * int_0^inf r^{N-2} (r^2+1)^{-N/2} dr at height 1.
  const double omega =
      2.0 * std::pow(M_PI, 0.5 * (dim - 1)) / std::tgamma(0.5 * (dim - 1));
  QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-13;
  const auto radial = integrate_semi_infinite(
      [dim](double r) {
        return std::pow(r, dim - 2) * std::pow(r * r + 1.0, -0.5 * dim);
      },
      0.0, spec);
  const double c = 1.0 / (omega * radial.value);
  cache[dim] = c;
  return c;
}

double poisson_kernel_translated(const ReducedKernelQuery& q) {
  q.validate();
  if (q.dim == 1) return 1.0;
  const double zn = q.a + q.b + q.t;
  const double z2 = q.rho * q.rho + zn * zn;
  return poisson_constant(q.dim) * zn * std::pow(z2, -0.5 * q.dim);
}

KernelValue h_correction(const ReducedKernelQuery& q, const QuadratureSpec& spec) {
  q.validate();
  const double s = q.a + q.b;
  const double rho2 = q.rho * q.rho;
  const int n = q.dim;
  const double log4pi = std::log(4.0 * M_PI);

  const Integrand g = [s, rho2, n, log4pi, t = q.t](double tau) {
    const double rem = t - tau;
    const double h = s + tau;
    if (rem <= 0.0 || h <= 0.0) return 0.0;
    const double loga = -0.5 * n * log4pi + std::log(h) - (0.5 * n + 1.0) * std::log(rem) -
                        (h * h + rho2) / (4.0 * rem);
    if (loga < kExpUnderflow) return 0.0;
    return std::exp(loga);
  };

  const QuadratureResult r = integrate_finite(g, 0.0, q.t, spec);
  return KernelValue{r.value, r.error_estimate, r.converged};
}

KernelValue h_correction_zform(const ReducedKernelQuery& q, const QuadratureSpec& spec) {
  q.validate();
  const double zn = q.a + q.b + q.t;
  const double z2 = q.rho * q.rho + zn * zn;
  const double upper = q.t / z2;
  const int n = q.dim;

  // Prefactor exp(zn/2) is folded into the integrand exponent, which is then
  // <= (zn - |z|)/2 <= 0 throughout.
  const Integrand g = [zn, z2, n](double eta) {
    if (eta <= 0.0) return 0.0;
    const double loga = 0.5 * zn - 0.25 / eta - 0.25 * z2 * eta -
                        0.5 * (n + 2.0) * std::log(eta);
    if (loga < kExpUnderflow) return 0.0;
    const double lin = 1.0 - z2 * eta / zn;  // in [ (a+b)/zn, 1 ] on (0, t/|z|^2)
    return lin * std::exp(loga);
  };

  const QuadratureResult r = integrate_finite(g, 0.0, upper, spec);
  const double pre = std::pow(4.0 * M_PI, -0.5 * n) * zn * std::pow(z2, -0.5 * n);
  return KernelValue{pre * r.value, pre * r.error_estimate, r.converged};
}

KernelValue h_correction_auto(const ReducedKernelQuery& q, const QuadratureSpec& spec) {
  const double zn = q.a + q.b + q.t;
  const double z2 = q.rho * q.rho + zn * zn;
  if (q.t <= z2 && zn <= 30.0) return h_correction_zform(q, spec);
  return h_correction(q, spec);
}

double gauss_dipole(const ReducedKernelQuery& q) {
  q.validate();
  const double d = std::abs(q.a - q.b);
  const double s = q.a + q.b;
  const double rho2 = q.rho * q.rho;
  return gauss_kernel(q.dim, std::sqrt(rho2 + d * d), q.t) -
         gauss_kernel(q.dim, std::sqrt(rho2 + s * s), q.t);
}

KernelValue fundamental_solution(const ReducedKernelQuery& q, const QuadratureSpec& spec) {
  const KernelValue h = h_correction_auto(q, spec);
  return KernelValue{gauss_dipole(q) + h.value, h.quadrature_error, h.converged};
}

KernelValue fundamental_solution(const HalfSpacePoint& x, const HalfSpacePoint& y, double t,
                                 const QuadratureSpec& spec) {
  return fundamental_solution(reduce(x, y, t), spec);
}

double interior_dipole_mass(double b, double t) {
  if (!(t > 0.0)) throw std::domain_error("interior_dipole_mass: t must be > 0");
  return erf(b / (2.0 * std::sqrt(t)));
}

}  // namespace dynheat
