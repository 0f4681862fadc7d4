// Acceptance suite: every criterion of the build contract, run at its
// stated tolerance, one [PASS]/[FAIL] line each. Exit code is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynheat/bounds.hpp"
#include "dynheat/kernel.hpp"
#include "dynheat/report.hpp"
#include "dynheat/residuals.hpp"
#include "dynheat/semigroup.hpp"
#include "dynheat/semilinear.hpp"

using namespace dynheat;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CritResult {
  bool pass = true;
  std::string detail;
};

struct CritBuilder {
  bool pass = true;
  std::ostringstream detail;
  CritResult done() { return {pass, detail.str()}; }
};

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void check(CritBuilder& o, bool cond, const std::string& what) {
  if (!cond) {
    o.pass = false;
    o.detail << " FAILED{" << what << "}";
  }
}

const QuadratureSpec kTight = [] {
  QuadratureSpec s;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-12;
  return s;
}();

// ---------- criterion 1: mass identity and erf/erfc split ----------
CritResult criterion_mass() {
  CritBuilder o;
  const auto t0 = clock_type::now();
  double worst_total = 0.0, worst_split = 0.0;
  for (double b : {0.0, 0.5, 2.0}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const auto interior = integrate_semi_infinite(
          [&](double a) { return fundamental_solution({1, 0.0, a, b, t}, kTight).value; }, 0.0,
          kTight);
      const double boundary = fundamental_solution({1, 0.0, 0.0, b, t}, kTight).value;
      worst_total = std::max(worst_total, std::abs(interior.value + boundary - 1.0));

      const auto dip = integrate_semi_infinite(
          [&](double a) { return gauss_dipole({1, 0.0, a, b, t}); }, 0.0, kTight);
      worst_split = std::max(worst_split, std::abs(dip.value - dynheat::erf(b / (2.0 * std::sqrt(t)))));
      const auto hmass = integrate_semi_infinite(
          [&](double a) { return h_correction_auto({1, 0.0, a, b, t}, kTight).value; }, 0.0,
          kTight);
      const double hbnd = h_correction_auto({1, 0.0, 0.0, b, t}, kTight).value;
      worst_split = std::max(worst_split,
                             std::abs(hmass.value + hbnd - dynheat::erfc(b / (2.0 * std::sqrt(t)))));
    }
  }
  const double el = seconds_since(t0);
  check(o, worst_total < 1e-8, "total mass within 1e-8");
  check(o, worst_split < 1e-8, "erf/erfc split within 1e-8");
  check(o, el < 10.0, "runtime < 10 s");
  o.detail << " max total defect " << worst_total << ", max split defect " << worst_split << ", "
           << el << " s";
  return o.done();
}

// ---------- criterion 2: symmetry ----------
CritResult criterion_symmetry() {
  CritBuilder o;
  std::mt19937_64 rng(2024);
  double worst_reduced = 0.0, worst_full = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int dim = 1 + static_cast<int>(uniform01(rng) * 3);
    const double rho = dim == 1 ? 0.0 : 6.0 * uniform01(rng);
    const double a = 6.0 * uniform01(rng), b = 6.0 * uniform01(rng);
    const double t = 0.02 + 6.0 * uniform01(rng);
    worst_reduced = std::max(worst_reduced,
                             std::abs(fundamental_solution({dim, rho, a, b, t}).value -
                                      fundamental_solution({dim, rho, b, a, t}).value));

    HalfSpacePoint x, y;
    x.tangential.assign(dim - 1, 0.0);
    y.tangential.assign(dim - 1, 0.0);
    for (int d = 0; d < dim - 1; ++d) {
      x.tangential[d] = 8.0 * (uniform01(rng) - 0.5);
      y.tangential[d] = 8.0 * (uniform01(rng) - 0.5);
    }
    x.height = a;
    y.height = b;
    worst_full = std::max(worst_full, std::abs(fundamental_solution(x, y, t).value -
                                               fundamental_solution(y, x, t).value));
  }
  check(o, worst_reduced == 0.0, "reduced-coordinate swap is exact");
  check(o, worst_full == 0.0, "full-coordinate wrapper round-trip defect 0");
  o.detail << " reduced defect " << worst_reduced << ", wrapper defect " << worst_full;
  return o.done();
}

// ---------- criterion 3: representation agreement ----------
CritResult criterion_representations() {
  CritBuilder o;
  std::mt19937_64 rng(333);
  long failures = 0;
  for (int dim : {1, 2, 3}) {
    for (int i = 0; i < 500; ++i) {
      ReducedKernelQuery q;
      for (;;) {
        q.dim = dim;
        q.t = 0.01 * std::exp(uniform01(rng) * std::log(100.0));
        const double reach = std::sqrt(2.0 * (dim + 2) * q.t);
        q.rho = dim == 1 ? 0.0 : reach * uniform01(rng);
        q.a = reach * uniform01(rng);
        q.b = reach * uniform01(rng);
        if (q.reflected_dist_sq() < 2.0 * (dim + 2) * q.t) break;
      }
      const KernelValue hd = h_correction(q, kTight);
      const KernelValue hz = h_correction_zform(q, kTight);
      if (!hd.converged || !hz.converged ||
          std::abs(hd.value - hz.value) > hd.quadrature_error + hz.quadrature_error + 1e-15) {
        ++failures;
      }
    }
  }
  check(o, failures == 0, "agreement within summed error estimates");
  o.detail << " failures " << failures << " / 1500";
  return o.done();
}

// ---------- criterion 4: PDE + boundary residuals ----------
CritResult criterion_residuals() {
  CritBuilder o;
  const auto t0 = clock_type::now();
  double worst = 0.0;
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 0.5}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const double r = a == 0.0 ? boundary_residual({1, 0.0, 0.0, b, t}, 1e-3)
                                  : interior_pde_residual({1, 0.0, a, b, t}, 1e-3);
        worst = std::max(worst, r);
      }
    }
  }
  const double el = seconds_since(t0);
  check(o, worst < 1e-3, "finite-difference residuals < 1e-3");
  check(o, el < 30.0, "runtime < 30 s");
  o.detail << " max residual " << worst << ", " << el << " s";
  return o.done();
}

// ---------- criterion 5: sandwich regression ----------
CritResult criterion_sandwich() {
  CritBuilder o;
  for (int dim : {1, 2, 3}) {
    QuerySampler sampler(dim, 555);
    const SandwichReport rep = sandwich_scan(sampler, 1000);
    const SandwichBaseline base = sandwich_baseline(dim);
    check(o, rep.max_upper_ratio <= 1.1 * base.max_upper_ratio,
          "upper envelope at dim " + std::to_string(dim));
    check(o, rep.min_lower_ratio >= base.min_lower_ratio / 1.1,
          "lower envelope at dim " + std::to_string(dim));
    o.detail << " dim" << dim << "[up " << rep.max_upper_ratio << "/" << 1.1 * base.max_upper_ratio
             << ", lo " << rep.min_lower_ratio << "/" << base.min_lower_ratio / 1.1 << "]";
  }
  return o.done();
}

// ---------- criterion 6: semigroup composition ----------
CritResult criterion_compose() {
  CritBuilder o;
  GridSpec g;
  g.truncation = 40.0;
  g.spacing = 0.01;
  const HalfSpacePoint x{{}, 1.0}, y{{}, 0.0};
  const double d1 = compose_check(0.5, 0.5, y, x, g);
  GridSpec g2 = g;
  g2.spacing = 0.005;
  const double d2 = compose_check(0.5, 0.5, y, x, g2);
  check(o, d1 < 1e-4, "defect < 1e-4 at h=0.01");
  check(o, d1 / d2 >= 3.0, "defect shrinks >= 3x under h -> h/2");
  o.detail << " defect " << d1 << ", shrink factor " << d1 / d2;
  return o.done();
}

// ---------- criterion 7: contractivity ----------
CritResult criterion_contractivity() {
  CritBuilder o;
  GridSpec g;
  g.truncation = 40.0;
  g.spacing = 0.025;
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    PairedField f = PairedField::zeros(g);
    for (int b = 0; b < 5; ++b) {
      const double c = 0.2 + 5.0 * uniform01(rng);
      const double w = 0.3 + 1.7 * uniform01(rng);
      const double amp = 2.0 * uniform01(rng) - 1.0;
      for (int i = 0; i <= g.intervals(); ++i) {
        f.interior[i] += amp * bump_mass1(g.node(i), c, w);
      }
    }
    f.boundary = 2.0 * uniform01(rng) - 1.0;
    for (double t : {0.1, 1.0, 10.0}) {
      const PairedField u = apply(t, f, g);
      worst = std::max(worst, norm_l1(u, g) / norm_l1(f, g));
      worst = std::max(worst, norm_l2(u, g) / norm_l2(f, g));
      worst = std::max(worst, norm_linf(u, g) / norm_linf(f, g));
    }
  }
  check(o, worst <= 1.0 + 1e-6, "pair-norm growth <= 1 + 1e-6");
  o.detail << " worst growth factor " << worst;
  return o.done();
}

// ---------- criterion 8: two-regime operator norms ----------
CritResult criterion_operator_norms() {
  CritBuilder o;
  const auto t0 = clock_type::now();
  std::vector<double> times;
  for (int i = 0; i < 7; ++i) times.push_back(1e-3 * std::pow(100.0, i / 6.0));
  for (int i = 0; i < 7; ++i) times.push_back(10.0 * std::pow(100.0, i / 6.0));

  const OperatorNormFit f3 = operator_norm_fit(3, 1.0, kInf, times);
  check(o, std::abs(f3.small_t_slope - (-2.0)) <= 0.1, "dim 3 small-t slope -2 +- 0.1");
  check(o, std::abs(f3.large_t_slope - (-1.5)) <= 0.1, "dim 3 large-t slope -1.5 +- 0.1");

  const OperatorNormFit f2 = operator_norm_fit(2, 1.0, kInf, times);
  check(o, std::abs(f2.small_t_slope - (-1.0)) <= 0.1, "dim 2 small-t slope -1 +- 0.1");
  check(o, std::abs(f2.large_t_slope - (-1.0)) <= 0.1, "dim 2 large-t slope -1 +- 0.1");

  const double el = seconds_since(t0);
  check(o, el < 300.0, "runtime < 5 min");
  o.detail << " dim3 slopes (" << f3.small_t_slope << ", " << f3.large_t_slope << "), dim2 ("
           << f2.small_t_slope << ", " << f2.large_t_slope << "), " << el << " s";
  return o.done();
}

// ---------- criteria 9 and 10: Fujita dichotomy and global-branch decay ----------
struct FujitaResult {
  CritResult sweep;
  CritResult decay;
};

FujitaResult criterion_fujita() {
  CritBuilder o;
  const auto t0 = clock_type::now();

  const std::vector<double> ps = {2.0, 2.5, 3.0, 4.0, 6.0};
  const std::vector<double> deltas = {1e-2, 1e-3};
  const std::vector<double> ladder = {0.1, 0.05, 0.025};
  const double pf = fujita_exponent(1);

  std::vector<FujitaTable> tables;
  EvolutionTrace finest_p4_d3_trace;
  for (double h : ladder) {
    SemilinearConfig tmpl;
    tmpl.grid.truncation = 40.0;
    tmpl.grid.spacing = h;
    tmpl.t_max = 1e3;
    tmpl.blowup_threshold = 1e6;
    std::vector<EvolutionTrace> traces;
    tables.push_back(fujita_sweep(ps, deltas, tmpl, &traces));
    for (size_t i = 0; i < tables.back().cells.size(); ++i) {
      const FujitaCell& c = tables.back().cells[i];
      if (h == ladder.back() && c.p == 4.0 && c.delta == 1e-3) {
        finest_p4_d3_trace = traces[i];
      }
    }
  }

  for (const FujitaTable& table : tables) {
    for (const FujitaCell& c : table.cells) {
      if (c.p <= pf + 1e-12) {
        check(o, c.outcome == "blowup",
              "blow-up signal at p=" + format_double(c.p) + " delta=" + format_double(c.delta));
        check(o, c.certificate_n > 0,
              "certificate fired at p=" + format_double(c.p));
      } else {
        check(o, c.outcome == "global",
              "global with bounded X-norm at p=" + format_double(c.p) +
                  " delta=" + format_double(c.delta));
        check(o, c.x_norm <= c.x_ball, "X-ball bound at p=" + format_double(c.p));
      }
    }
  }
  // classification invariant across the refinement ladder
  for (size_t i = 0; i < tables[0].cells.size(); ++i) {
    const bool same01 = tables[0].cells[i].outcome == tables[1].cells[i].outcome;
    const bool same12 = tables[1].cells[i].outcome == tables[2].cells[i].outcome;
    check(o, same01 && same12,
          "ladder-invariant classification at p=" + format_double(tables[0].cells[i].p));
  }
  // calibration rule for the global branch
  for (double p : {4.0, 6.0}) {
    SemilinearConfig tmpl;
    tmpl.grid.truncation = 40.0;
    tmpl.grid.spacing = 0.1;
    tmpl.t_max = 1e3;
    const double cal = calibrate_global_delta(p, tmpl, 1e-2);
    check(o, cal == 1e-2, "delta calibration chain at p=" + format_double(p));
  }
  const double el = seconds_since(t0);
  check(o, el < 1800.0, "runtime < 30 min");
  o.detail << " " << tables[0].cells.size() << " cells x " << ladder.size() << " grids, " << el
           << " s";

  // ---- criterion 10 on the finest-grid p=4, delta=1e-3 trace ----
  CritBuilder d;
  const EvolutionTrace& tr = finest_p4_d3_trace;
  check(d, !tr.times.empty(), "trace captured");
  if (!tr.times.empty()) {
    double sup_before = 0.0, sup_after = 0.0, stepwise_worst = 0.0, prev = -1.0;
    for (size_t i = 0; i < tr.times.size(); ++i) {
      const double w = tr.x_norm_series[i] - tr.l1_norms[i];  // (1+t)^{1/2} sup
      if (tr.times[i] <= 10.0) {
        sup_before = std::max(sup_before, w);
      } else {
        sup_after = std::max(sup_after, w);
        if (prev > 0.0) stepwise_worst = std::max(stepwise_worst, w / prev);
        prev = w;
      }
    }
    check(d, std::isfinite(sup_before) && sup_before > 0.0, "weighted sup bounded");
    check(d, sup_after <= 1.05 * sup_before, "no new weighted-sup high after t=10 (5%)");
    check(d, stepwise_worst <= 1.05, "stepwise growth after t=10 within 5%");
    check(d, tr.x_norm() <= 4.0 * xnorm_constant_baseline(1) * 1e-3, "X-ball bound");
    d.detail << " sup(<=10) " << sup_before << ", sup(>10) " << sup_after << ", worst step ratio "
             << stepwise_worst;
  }
  return {o.done(), d.done()};
}

}  // namespace

int main() {
  struct Row {
    int id;
    std::string label;
    CritResult result;
  };
  std::vector<Row> rows;

  rows.push_back({1, "mass identity + erf/erfc split", criterion_mass()});
  rows.push_back({2, "symmetry", criterion_symmetry()});
  rows.push_back({3, "representation agreement", criterion_representations()});
  rows.push_back({4, "PDE + boundary residuals", criterion_residuals()});
  rows.push_back({5, "sandwich regression", criterion_sandwich()});
  rows.push_back({6, "semigroup composition", criterion_compose()});
  rows.push_back({7, "contractivity", criterion_contractivity()});
  rows.push_back({8, "two-regime operator norms", criterion_operator_norms()});
  FujitaResult fuj = criterion_fujita();
  rows.push_back({9, "Fujita dichotomy", fuj.sweep});
  rows.push_back({10, "global-branch decay", fuj.decay});

  int failures = 0;
  for (const Row& r : rows) {
    if (!r.result.pass) ++failures;
    std::printf("[%s] criterion %d (%s):%s\n", r.result.pass ? "PASS" : "FAIL", r.id,
                r.label.c_str(), r.result.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failures, rows.size());
  return failures;
}
