#include "dynheat/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace dynheat {

namespace {

std::map<std::tuple<long long, long long, int>, KernelCache> g_registry;
std::mutex g_registry_mutex;

long long bits(double x) {
  long long b;
  std::memcpy(&b, &x, sizeof(b));
  return b;
}

int last_nonzero(const std::vector<double>& v) {
  for (int k = static_cast<int>(v.size()) - 1; k >= 0; --k) {
    if (v[k] != 0.0) return k;
  }
  return 0;
}

}  // namespace

const KernelCache& KernelCache::get(double t, const GridSpec& g, const QuadratureSpec& spec) {
  if (!(t > 0.0)) throw std::domain_error("KernelCache: t must be > 0");
  g.validate();
  if (g.dim != 1) throw std::invalid_argument("KernelCache: grid apply is built for dim 1");

  const auto key = std::make_tuple(bits(t), bits(g.spacing), g.intervals());
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  auto it = g_registry.find(key);
  if (it != g_registry.end()) return it->second;

  KernelCache c;
  c.t = t;
  c.h = g.spacing;
  c.m = g.intervals();
  const int top = 2 * c.m;
  c.gamma.resize(top + 1);
  c.eta.resize(top + 1);
  c.hankel.resize(top + 1);
  for (int k = 0; k <= top; ++k) {
    const double s = k * c.h;
    c.gamma[k] = gauss_kernel(1, s, t);
    // eta[k] = H at a+b = s; stop once the Gaussian suppression zeroes it.
    if ((s * s) / (4.0 * t) > 750.0) {
      c.eta[k] = 0.0;
    } else {
      c.eta[k] = h_correction_auto({1, 0.0, s, 0.0, t}, spec).value;
    }
    c.hankel[k] = c.eta[k] - c.gamma[k];
  }
  c.band_gamma = last_nonzero(c.gamma);
  c.band_hankel = last_nonzero(c.hankel);
  auto [pos, inserted] = g_registry.emplace(key, std::move(c));
  (void)inserted;
  return pos->second;
}

void KernelCache::clear_registry() {
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  g_registry.clear();
}

PairedField apply(double t, const PairedField& phi, const GridSpec& g,
                  const QuadratureSpec& spec) {
  const KernelCache& c = KernelCache::get(t, g, spec);
  const int m = c.m;
  if (static_cast<int>(phi.interior.size()) != m + 1) {
    throw std::invalid_argument("apply: field does not match the grid");
  }
  const auto w = grid_weights(g, GridRule::Gregory);

  // Weighted input absorbs the quadrature weights once.
  std::vector<double> wphi(m + 1);
  for (int j = 0; j <= m; ++j) wphi[j] = w[j] * phi.interior[j];

  PairedField out = PairedField::zeros(g);
  const int bg = c.band_gamma;
  const int bh = c.band_hankel;
  for (int i = 0; i <= m; ++i) {
    double acc = 0.0;
    const int j0 = std::max(0, i - bg);
    const int j1 = std::min(m, i + bg);
    for (int j = j0; j <= j1; ++j) acc += c.gamma[std::abs(i - j)] * wphi[j];
    const int j2 = std::min(m, bh - i);
    for (int j = 0; j <= j2; ++j) acc += c.hankel[i + j] * wphi[j];
    out.interior[i] = acc + c.eta[i] * phi.boundary;
  }
  double accb = 0.0;
  for (int j = 0; j <= std::min(m, c.band_hankel); ++j) accb += c.eta[j] * wphi[j];
  // At a = 0 the Gauss terms cancel, so the boundary row is eta alone.
  out.boundary = accb + c.eta[0] * phi.boundary;

  // Tail estimate: reflected-Gaussian mass of the farthest support point
  // past the truncation.
  int support_top = 0;
  for (int j = m; j >= 0; --j) {
    if (phi.interior[j] != 0.0) {
      support_top = j;
      break;
    }
  }
  const double gap = g.truncation - g.node(support_top);
  const double tail = 0.5 * erfc(gap / (2.0 * std::sqrt(t)));
  out.truncation_warning = phi.truncation_warning || tail > 1e-9;
  return out;
}

double compose_check(double t, double s, const HalfSpacePoint& y, const HalfSpacePoint& x,
                     const GridSpec& g, const QuadratureSpec& spec, GridRule rule) {
  if (!(t > 0.0) || !(s > 0.0)) throw std::domain_error("compose_check: t, s must be > 0");
  if (x.dim() != 1 || y.dim() != 1 || g.dim != 1) {
    throw std::invalid_argument("compose_check: probe is built for dim 1");
  }
  const auto w = grid_weights(g, rule);
  const int m = g.intervals();

  const double lhs = fundamental_solution({1, 0.0, x.height, y.height, t + s}, spec).value;
  double rhs = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double z = g.node(k);
    rhs += w[k] * fundamental_solution({1, 0.0, x.height, z, t}, spec).value *
           fundamental_solution({1, 0.0, z, y.height, s}, spec).value;
  }
  rhs += fundamental_solution({1, 0.0, x.height, 0.0, t}, spec).value *
         fundamental_solution({1, 0.0, 0.0, y.height, s}, spec).value;
  return std::abs(lhs - rhs);
}

double kernel_sup(int dim, double b, double t, const QuadratureSpec& spec) {
  // G decreases in rho, so the sup over x sits at rho = 0; scan the height
  // on a log+linear grid, then refine by golden section.
  auto value = [&](double a) {
    return fundamental_solution({dim, 0.0, a, b, t}, spec).value;
  };
  const double scale = std::max(1.0, 4.0 * std::sqrt(t)) + b + t;
  double best_a = 0.0;
  double best = value(0.0);
  auto consider = [&](double a) {
    const double v = value(a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  };
  for (int i = 1; i <= 40; ++i) consider(scale * i / 40.0);
  for (int i = 1; i <= 30; ++i) consider(b * i / 15.0);  // resolve the direct peak near a=b
  for (int i = -20; i <= 20; ++i) consider(std::max(0.0, b + i * std::sqrt(t) / 5.0));

  double lo = std::max(0.0, best_a - scale / 20.0);
  double hi = best_a + scale / 20.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
  double f1 = value(c1), f2 = value(c2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + gr * (hi - lo);
      f2 = value(c2);
    } else {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - gr * (hi - lo);
      f1 = value(c1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

namespace {

// Surface area of the unit sphere in R^d.
double sphere_area(int d) {
  return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

// (integral over Omega of G^q, integral over boundary of G^q) for y=(0',b).
// The tangential direction is reduced to a radial quadrature.
std::pair<double, double> kernel_power_integrals(int dim, double b, double t, double q,
                                                 const QuadratureSpec& spec) {
  QuadratureSpec inner = spec;
  inner.abs_tol = std::max(spec.abs_tol, 1e-9);
  inner.rel_tol = std::max(spec.rel_tol, 1e-9);

  auto slice_pow = [&](double rho, double a) {
    return std::pow(fundamental_solution({dim, rho, a, b, t}, inner).value, q);
  };
  if (dim == 1) {
    const auto in = integrate_semi_infinite([&](double a) { return slice_pow(0.0, a); }, 0.0, inner);
    return {in.value, slice_pow(0.0, 0.0)};
  }
  const double omega = sphere_area(dim - 1);
  auto radial = [&](double a) {
    const auto r = integrate_semi_infinite(
        [&](double rho) { return std::pow(rho, dim - 2) * slice_pow(rho, a); }, 0.0, inner);
    return omega * r.value;
  };
  const auto in = integrate_semi_infinite(radial, 0.0, inner);
  return {in.value, radial(0.0)};
}

}  // namespace

double kernel_pair_norm(int dim, double b, double t, double q, const QuadratureSpec& spec) {
  if (std::isinf(q)) {
    // sup over the closure; the boundary value is included in the height scan.
    return kernel_sup(dim, b, t, spec);
  }
  if (q == 1.0) {
    // The tangential factors integrate to unit mass, so the pair-L1 norm of
    // the dim-N slice equals the dim-1 mass integral.
    QuadratureSpec tight = spec;
    tight.abs_tol = std::min(spec.abs_tol, 1e-11);
    const auto in = integrate_semi_infinite(
        [&](double a) { return fundamental_solution({1, 0.0, a, b, t}, tight).value; }, 0.0,
        tight);
    return in.value + fundamental_solution({1, 0.0, 0.0, b, t}, tight).value;
  }
  if (!(q > 1.0)) throw std::invalid_argument("kernel_pair_norm: q must be in [1, inf]");
  const auto [in, bd] = kernel_power_integrals(dim, b, t, q, spec);
  return std::pow(in, 1.0 / q) + std::pow(bd, 1.0 / q);
}

double decay_constant_baseline(int dim) {
  // Regression fixture: worst observed norm/envelope ratio was 0.374 over
  // the committed scans (grid fields for dim 1, near-delta data for
  // dim 2/3), with headroom.
  switch (dim) {
    case 1: return 0.55;
    case 2: return 0.55;
    case 3: return 0.55;
  }
  throw std::domain_error("decay_constant_baseline: covers dim 1..3");
}

namespace {
double decay_envelope_shape(int dim, double q, double r, double t) {
  const double d = (std::isinf(q) ? 0.0 : 1.0 / q) - (std::isinf(r) ? 0.0 : 1.0 / r);
  return std::pow(t, -0.5 * dim * d) + std::pow(t, -(dim - 1.0) * d);
}
}  // namespace

std::vector<DecayRow> decay_suite(const PairedField& phi, double q, double r,
                                  const std::vector<double>& times, const GridSpec& g,
                                  const QuadratureSpec& spec) {
  if (!(q <= r)) throw std::invalid_argument("decay_suite: requires q <= r");
  const double phi_q = norm_lr(phi, g, q);
  std::vector<DecayRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const PairedField u = apply(t, phi, g, spec);
    DecayRow row;
    row.t = t;
    row.norm = norm_lr(u, g, r);
    row.envelope = decay_envelope_shape(g.dim, q, r, t) * phi_q;
    row.ratio = row.norm / row.envelope;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DecayRow> decay_suite_boundary_delta(int dim, double q, double r,
                                                 const std::vector<double>& times,
                                                 const QuadratureSpec& spec) {
  if (q != 1.0) {
    throw std::invalid_argument("decay_suite_boundary_delta: near-delta data needs q = 1");
  }
  std::vector<DecayRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    DecayRow row;
    row.t = t;
    row.norm = kernel_pair_norm(dim, 0.0, t, r, spec);
    row.envelope = decay_envelope_shape(dim, q, r, t);  // unit input mass
    row.ratio = row.norm / row.envelope;
    rows.push_back(row);
  }
  return rows;
}

double lower_gaussian_baseline(int dim) {
  // Regression fixture from near-delta probe scans over b in [0,3],
  // a in [0,5], t in [1,100]; observed minima 0.981 / 1.007 / 0.825 with
  // headroom. Pointwise ratios transfer to nonnegative fields by linearity.
  switch (dim) {
    case 1: return 0.85;
    case 2: return 0.85;
    case 3: return 0.70;
  }
  throw std::domain_error("lower_gaussian_baseline: covers dim 1..3");
}

LowerGaussianReport lower_gaussian_check(const PairedField& phi, double t,
                                         const std::vector<double>& probe_heights,
                                         const GridSpec& g, const QuadratureSpec& spec) {
  if (!(t >= 1.0)) {
    throw std::domain_error("lower_gaussian_check: the bound is stated for t >= 1");
  }
  for (double v : phi.interior) {
    if (v < 0.0) throw std::domain_error("lower_gaussian_check: phi must be nonnegative");
  }
  if (phi.boundary < 0.0) throw std::domain_error("lower_gaussian_check: phi must be nonnegative");

  const auto w = grid_weights(g);
  const int m = g.intervals();
  const double c2 = lower_gaussian_baseline(g.dim);

  LowerGaussianReport rep;
  rep.t = t;
  rep.c2 = c2;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  const PairedField u = apply(t, phi, g, spec);
  for (double x : probe_heights) {
    const int i = static_cast<int>(std::lround(x / g.spacing));
    if (i < 0 || i > m) throw std::invalid_argument("lower_gaussian_check: probe outside grid");
    // Reflected-Gaussian convolution at time t/2: distance x + y for dim 1.
    double rhs = 0.0;
    for (int j = 0; j <= m; ++j) {
      rhs += w[j] * gauss_kernel(1, g.node(i) + g.node(j), 0.5 * t) * phi.interior[j];
    }
    rhs += gauss_kernel(1, g.node(i), 0.5 * t) * phi.boundary;
    if (rhs <= 0.0) continue;
    rep.min_ratio = std::min(rep.min_ratio, u.interior[i] / rhs);
  }
  rep.pass = rep.min_ratio >= c2;
  return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    double* residual_rms) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: needs matching samples, at least 2");
  }
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  if (residual_rms) {
    const double icept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double e = std::log(y[i]) - (icept + slope * std::log(x[i]));
      rss += e * e;
    }
    *residual_rms = std::sqrt(rss / n);
  }
  return slope;
}

OperatorNormFit operator_norm_fit(int dim, double q, double r,
                                  const std::vector<double>& times,
                                  const QuadratureSpec& spec) {
  if (!(q <= r)) throw std::invalid_argument("operator_norm_fit: requires q <= r");
  const std::vector<double> probe_heights = {0.0, 0.25, 0.5, 0.9};

  std::vector<double> ts_small, es_small, ts_large, es_large;
  for (double t : times) {
    double est = 0.0;
    for (double b : probe_heights) {
      // Norm quotient: ||G(.,y,2t)||_r <= ||G(t)||_{q->r} ||G(.,y,t)||_q.
      const double num = kernel_pair_norm(dim, b, 2.0 * t, r, spec);
      const double den = kernel_pair_norm(dim, b, t, q, spec);
      if (den > 0.0) est = std::max(est, num / den);
    }
    if (!(est > 0.0)) continue;
    if (t <= 1.0) {
      ts_small.push_back(t);
      es_small.push_back(est);
    } else {
      ts_large.push_back(t);
      es_large.push_back(est);
    }
  }
  if (ts_small.size() < 4 || ts_large.size() < 4) {
    throw std::runtime_error("operator_norm_fit: needs at least 4 usable times per regime");
  }
  OperatorNormFit fit;
  double res_small = 0.0, res_large = 0.0;
  fit.small_t_slope = loglog_slope(ts_small, es_small, &res_small);
  fit.large_t_slope = loglog_slope(ts_large, es_large, &res_large);
  fit.fit_residual = std::max(res_small, res_large);
  fit.t_range_small[0] = *std::min_element(ts_small.begin(), ts_small.end());
  fit.t_range_small[1] = *std::max_element(ts_small.begin(), ts_small.end());
  fit.t_range_large[0] = *std::min_element(ts_large.begin(), ts_large.end());
  fit.t_range_large[1] = *std::max_element(ts_large.begin(), ts_large.end());
  return fit;
}

}  // namespace dynheat
