// The discretized evolution operator G(t) on paired interior/boundary
// data, plus the executable decay, contractivity, composition, lower-bound
// and operator-norm suites built on it.
//
// For dim = 1 the reduced kernel depends on the heights only through
// |a-b| and a+b, so the dense (heights x heights) kernel matrix is a
// Toeplitz-minus-Hankel structure determined by two O(M) vectors; the
// per-(t, grid) cache of those vectors is what makes apply() a cheap
// structured matrix-vector product.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynheat/grid.hpp"
#include "dynheat/kernel.hpp"

namespace dynheat {

// Cached kernel slices for one (t, grid) pair, dim = 1:
//   gamma[k] = Gamma_1(k h, t),  eta[k] = H(a+b = k h, t),  k = 0..2M.
struct KernelCache {
  double t = 0.0;
  double h = 0.0;
  int m = 0;
  std::vector<double> gamma;
  std::vector<double> eta;
  std::vector<double> hankel;  // eta[k] - gamma[k]
  int band_gamma = 0;          // last k with gamma[k] != 0
  int band_hankel = 0;         // last k with hankel[k] != 0

  // Registry lookup; builds and memoizes on first use.
  static const KernelCache& get(double t, const GridSpec& g, const QuadratureSpec& spec);
  static void clear_registry();
};

// [G(t) phi] restricted to the grid, with its boundary trace. The
// truncation_warning flag is set when the Gaussian tail of the data past
// the truncation L exceeds ~1e-9.
PairedField apply(double t, const PairedField& phi, const GridSpec& g,
                  const QuadratureSpec& spec = {});

// Pointwise Chapman-Kolmogorov defect |G(x,y,t+s) - sum_z G(x,z,t)G(z,y,s)|
// with the z-integral on the grid. Plain trapezoid by default so the
// O(h^2) refinement study is visible.
double compose_check(double t, double s, const HalfSpacePoint& y, const HalfSpacePoint& x,
                     const GridSpec& g, const QuadratureSpec& spec = {},
                     GridRule rule = GridRule::Trapezoid);

// --- kernel-slice norms (reduced coordinates, any dimension) ---

// sup_x G(x, y, t) for y = (0', b): the maximum sits at rho = 0, scanned
// plus golden-section refined over the height.
double kernel_sup(int dim, double b, double t, const QuadratureSpec& spec = {});

// ||G(.,y,t)||_{L^q(Omega)} + ||G(.,y,t)||_{L^q(boundary)} for y=(0',b).
// q = 1 uses the exact tangential reduction to the dim=1 mass integral;
// q = inf uses kernel_sup; other q by nested radial quadrature.
double kernel_pair_norm(int dim, double b, double t, double q,
                        const QuadratureSpec& spec = {});

// --- suites ---

struct DecayRow {
  double t = 0.0;
  double norm = 0.0;      // ||G(t) phi||_{L^r x L^r}
  double envelope = 0.0;  // (t^{-N/2 d} + t^{-(N-1) d}) ||phi||_q, d = 1/q - 1/r
  double ratio = 0.0;     // norm / envelope; bounded by the committed constant
};

// Committed decay constant per dimension (regression fixture from the
// baseline scans; the paper's C1 is existential).
double decay_constant_baseline(int dim);

// Grid-field decay table for dim = 1.
std::vector<DecayRow> decay_suite(const PairedField& phi, double q, double r,
                                  const std::vector<double>& times, const GridSpec& g,
                                  const QuadratureSpec& spec = {});

// Near-delta boundary-data decay table (any dim, q = 1): the norm column is
// ||G(., y_boundary, t)||_r per unit input mass.
std::vector<DecayRow> decay_suite_boundary_delta(int dim, double q, double r,
                                                 const std::vector<double>& times,
                                                 const QuadratureSpec& spec = {});

struct LowerGaussianReport {
  double t = 0.0;
  double c2 = 0.0;         // committed constant used
  double min_ratio = 0.0;  // min over probe points of LHS / (Gaussian RHS)
  bool pass = false;
};

// Committed lower-Gaussian constant per dimension.
double lower_gaussian_baseline(int dim);

// Checks [G(t) phi](x) >= C2 * (reflected Gaussian at t/2 applied to phi)
// at the probe points; requires t >= 1 and phi >= 0.
LowerGaussianReport lower_gaussian_check(const PairedField& phi, double t,
                                         const std::vector<double>& probe_heights,
                                         const GridSpec& g, const QuadratureSpec& spec = {});

struct OperatorNormFit {
  double small_t_slope = 0.0;
  double large_t_slope = 0.0;
  double fit_residual = 0.0;
  double t_range_small[2] = {0.0, 0.0};
  double t_range_large[2] = {0.0, 0.0};
};

// Lower estimates of ||G(t)||_{q->r} from kernel slices at boundary-adjacent
// heights (the norm quotient ||G(.,y,2t)||_r / ||G(.,y,t)||_q), fitted in
// log-log separately on t <= 1 and t > 1. Needs >= 4 usable times per
// regime.
OperatorNormFit operator_norm_fit(int dim, double q, double r,
                                  const std::vector<double>& times,
                                  const QuadratureSpec& spec = {});

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    double* residual_rms = nullptr);

}  // namespace dynheat
