// Two-sided envelope machinery for the memory term H: the space-time
// region partition D1-D4, the upper/lower envelope kernels, and the
// empirical sandwich scan that pins finite constants per dimension.
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dynheat/kernel.hpp"

namespace dynheat {

enum class Region { D1, D2, D3, D4 };

const char* region_name(Region r);

// Partition of D = closure(Omega)^2 x (0,inf):
//   D1: |x-y*|^2 <  2(N+2)t, t <  4(N+2)
//   D2: |x-y*|^2 <  2(N+2)t, t >= 4(N+2)
//   D3: |x-y*|^2 >= 2(N+2)t, a+b+t <  1
//   D4: |x-y*|^2 >= 2(N+2)t, a+b+t >= 1
Region classify(const ReducedKernelQuery& q);

// Piecewise envelopes: P_N(x-y*,t) on D1; Gamma_N(x-y*,t) (upper) or
// Gamma_N(x-y*,t/2) (lower) on D2/D4, with the extra (a+b+t) factor on D3.
double envelope_upper(const ReducedKernelQuery& q);
double envelope_lower(const ReducedKernelQuery& q);

// Empirical constants frozen from the committed baseline scan (10^4
// log-uniform samples, seed 20240901); regression fixtures, not theorems.
struct SandwichBaseline {
  double max_upper_ratio;  // max H / envelope_upper observed
  double min_lower_ratio;  // min H / envelope_lower observed
};
SandwichBaseline sandwich_baseline(int dim);

struct SandwichReport {
  int dim = 1;
  long samples = 0;
  long skipped = 0;  // quadrature non-convergence or two-sided underflow
  double max_upper_ratio = 0.0;
  double min_lower_ratio = 0.0;
  ReducedKernelQuery worst_query_upper;
  ReducedKernelQuery worst_query_lower;
  // Per-region extrema, indexed by Region.
  double region_max_upper[4] = {0, 0, 0, 0};
  double region_min_lower[4] = {0, 0, 0, 0};
  long region_count[4] = {0, 0, 0, 0};

  std::string to_json() const;
};

// Query distribution for scans: log-uniform t over [1e-3, 1e4], rho/a/b
// log-uniform over [1e-3, 1e2] with forced boundary cases (a=0, b=0, both).
class QuerySampler {
 public:
  QuerySampler(int dim, std::uint64_t seed);
  ReducedKernelQuery next();

 private:
  double uniform01();
  int dim_;
  std::mt19937_64 rng_;
};

// Evaluates H at n sampled queries and records the extremal ratios against
// the envelopes, overall and per region.
SandwichReport sandwich_scan(QuerySampler& sampler, long n, const QuadratureSpec& spec = {});

}  // namespace dynheat
