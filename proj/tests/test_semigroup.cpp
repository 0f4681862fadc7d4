#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "dynheat/report.hpp"
#include "dynheat/semigroup.hpp"

using namespace dynheat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridSpec test_grid(double h = 0.05, double L = 40.0) {
  GridSpec g;
  g.truncation = L;
  g.spacing = h;
  return g;
}

PairedField random_field(const GridSpec& g, std::mt19937_64& rng, bool signed_amp = true) {
  PairedField f = PairedField::zeros(g);
  for (int b = 0; b < 5; ++b) {
    const double c = 0.2 + 5.0 * uniform01(rng);
    const double w = 0.3 + 1.7 * uniform01(rng);
    double amp = uniform01(rng);
    if (signed_amp) amp = 2.0 * amp - 1.0;
    for (int i = 0; i <= g.intervals(); ++i) {
      f.interior[i] += amp * bump_mass1(g.node(i), c, w);
    }
  }
  f.boundary = signed_amp ? 2.0 * uniform01(rng) - 1.0 : uniform01(rng);
  return f;
}

}  // namespace

TEST_CASE("grid weights: positivity and exactness of the Gregory rule") {
  const GridSpec g = test_grid(0.1, 4.0);
  const auto gw = grid_weights(g, GridRule::Gregory);
  const auto tw = grid_weights(g, GridRule::Trapezoid);
  double sum_g = 0.0, sum_t = 0.0;
  for (double w : gw) {
    CHECK(w > 0.0);
    sum_g += w;
  }
  for (double w : tw) sum_t += w;
  CHECK(sum_g == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(sum_t == doctest::Approx(4.0).epsilon(1e-13));

  // quintic polynomial integrated exactly by the endpoint-corrected rule
  auto poly = [](double x) { return 1.0 + x - 0.5 * x * x + x * x * x * x * x / 40.0; };
  double exact = 4.0 + 8.0 - 0.5 * 64.0 / 3.0 + std::pow(4.0, 6.0) / 240.0;
  double got = 0.0;
  for (int i = 0; i <= g.intervals(); ++i) got += gw[i] * poly(g.node(i));
  CHECK(got == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("pair norms against closed forms") {
  const GridSpec g = test_grid(0.01, 10.0);
  PairedField f = PairedField::zeros(g);
  for (int i = 0; i <= g.intervals(); ++i) {
    f.interior[i] = std::exp(-g.node(i));
  }
  f.boundary = 0.25;
  const double m1 = 1.0 - std::exp(-10.0);
  const double m2 = std::sqrt((1.0 - std::exp(-20.0)) / 2.0);
  const double m3 = std::pow((1.0 - std::exp(-30.0)) / 3.0, 1.0 / 3.0);
  CHECK(norm_l1(f, g) == doctest::Approx(m1 + 0.25).epsilon(1e-8));
  CHECK(norm_l2(f, g) == doctest::Approx(m2 + 0.25).epsilon(1e-8));
  CHECK(norm_linf(f, g) == doctest::Approx(1.0 + 0.25));
  CHECK(norm_lr(f, g, 3.0) == doctest::Approx(m3 + 0.25).epsilon(1e-8));
  CHECK(interior_l1(f, g) == doctest::Approx(m1).epsilon(1e-8));
  CHECK(interior_linf(f) == doctest::Approx(1.0));
}

TEST_CASE("KernelCache matches pointwise kernel evaluations") {
  const GridSpec g = test_grid(0.05, 10.0);
  const QuadratureSpec spec;
  const KernelCache& c = KernelCache::get(0.7, g, spec);
  CHECK(c.gamma[3] == gauss_kernel(1, 3 * 0.05, 0.7));
  CHECK(c.eta[10] == h_correction_auto({1, 0.0, 10 * 0.05, 0.0, 0.7}, spec).value);
  CHECK(c.eta[0] == h_correction_auto({1, 0.0, 0.0, 0.0, 0.7}, spec).value);
  // registry returns the same object
  CHECK(&c == &KernelCache::get(0.7, g, spec));
}

TEST_CASE("apply: boundary delta reproduces the kernel slice") {
  const GridSpec g = test_grid();
  PairedField phi = PairedField::zeros(g);
  phi.boundary = 2.5;  // sigma({0}) = 1, so this is a boundary mass of 2.5
  const PairedField u = apply(1.0, phi, g);
  const KernelCache& c = KernelCache::get(1.0, g, {});
  for (int i = 0; i <= g.intervals(); i += 37) {
    CHECK(u.interior[i] == 2.5 * c.eta[i]);
  }
  CHECK(u.boundary == 2.5 * c.eta[0]);
}

TEST_CASE("apply: linearity, positivity, mass conservation") {
  const GridSpec g = test_grid();
  std::mt19937_64 rng(13);
  const PairedField f1 = random_field(g, rng);
  const PairedField f2 = random_field(g, rng);

  PairedField combo = PairedField::zeros(g);
  for (int i = 0; i <= g.intervals(); ++i) {
    combo.interior[i] = 0.3 * f1.interior[i] - 1.7 * f2.interior[i];
  }
  combo.boundary = 0.3 * f1.boundary - 1.7 * f2.boundary;

  const PairedField u1 = apply(0.5, f1, g);
  const PairedField u2 = apply(0.5, f2, g);
  const PairedField uc = apply(0.5, combo, g);
  double defect = std::abs(uc.boundary - (0.3 * u1.boundary - 1.7 * u2.boundary));
  for (int i = 0; i <= g.intervals(); ++i) {
    defect = std::max(defect,
                      std::abs(uc.interior[i] - (0.3 * u1.interior[i] - 1.7 * u2.interior[i])));
  }
  CHECK(defect < 1e-12);

  PairedField pos = random_field(g, rng, /*signed_amp=*/false);
  const PairedField up = apply(1.0, pos, g);
  for (double v : up.interior) CHECK(v >= -1e-12);
  CHECK(up.boundary >= -1e-12);

  for (double t : {0.1, 1.0, 10.0}) {
    const PairedField u = apply(t, pos, g);
    const double m0 = interior_l1(pos, g) + pos.boundary;
    const double m1 = interior_l1(u, g) + u.boundary;
    CHECK(std::abs(m1 - m0) < 1e-6 * m0);
    CHECK_FALSE(u.truncation_warning);
  }
}

TEST_CASE("apply: contractivity of the pair norms") {
  const GridSpec g = test_grid(0.025);
  std::mt19937_64 rng(29);
  for (int k = 0; k < 5; ++k) {
    const PairedField f = random_field(g, rng);
    for (double t : {0.1, 1.0, 10.0}) {
      const PairedField u = apply(t, f, g);
      CHECK(norm_l1(u, g) <= (1.0 + 1e-6) * norm_l1(f, g));
      CHECK(norm_l2(u, g) <= (1.0 + 1e-6) * norm_l2(f, g));
      CHECK(norm_linf(u, g) <= (1.0 + 1e-6) * norm_linf(f, g));
    }
  }
}

TEST_CASE("apply: truncation-tail warning for slowly decaying data") {
  const GridSpec g = test_grid(0.05, 8.0);
  PairedField f = PairedField::zeros(g);
  f.interior[g.intervals() - 1] = 1.0;  // mass parked next to the cut
  const PairedField u = apply(4.0, f, g);
  CHECK(u.truncation_warning);
}

TEST_CASE("semigroup property on fields") {
  const GridSpec g = test_grid(0.025);
  std::mt19937_64 rng(31);
  const PairedField f = random_field(g, rng, /*signed_amp=*/false);
  for (auto [t, s] :
       std::initializer_list<std::pair<double, double>>{{0.5, 0.5}, {1.0, 2.0}, {0.1, 0.3}}) {
    const PairedField two = apply(t, apply(s, f, g), g);
    const PairedField one = apply(t + s, f, g);
    double defect = std::abs(two.boundary - one.boundary);
    for (int i = 0; i <= g.intervals(); ++i) {
      defect = std::max(defect, std::abs(two.interior[i] - one.interior[i]));
    }
    CHECK(defect < 1e-6);
  }
}

TEST_CASE("compose_check: probe defect, refinement, swap symmetry") {
  const HalfSpacePoint x{{}, 1.0}, y{{}, 0.0};
  const GridSpec g = test_grid(0.01);
  const double d = compose_check(0.5, 0.5, y, x, g);
  CHECK(d < 1e-4);

  GridSpec g2 = test_grid(0.005);
  const double d2 = compose_check(0.5, 0.5, y, x, g2);
  CHECK(d / d2 >= 3.0);

  // t -> 0 consistency: the near-delta factor dominates the defect budget
  CHECK(compose_check(1e-3, 0.5, y, x, g) < 1e-2);

  // swapping (x, y) at t = s gives the identical defect by symmetry of G
  const double ds = compose_check(0.5, 0.5, x, y, g);
  CHECK(d == ds);
}

TEST_CASE("kernel_pair_norm: mass and sup routes") {
  // q = 1 is the mass identity in every dimension (tangential mass is 1)
  for (int dim : {1, 2, 3}) {
    CHECK(kernel_pair_norm(dim, 0.5, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  }
  // q = inf at a boundary source equals the classified sup near x = 0
  const double sup = kernel_pair_norm(1, 0.0, 0.1, kInf);
  CHECK(sup >= fundamental_solution({1, 0.0, 0.0, 0.0, 0.1}).value);
  // intermediate exponent: bounded between the endpoints' scales
  const double n2 = kernel_pair_norm(1, 0.5, 1.0, 2.0);
  CHECK(n2 > 0.0);
  CHECK(n2 < 2.0);
}

TEST_CASE("decay_suite: q = r reduces to contractivity") {
  const GridSpec g = test_grid(0.05);
  std::mt19937_64 rng(41);
  const PairedField f = random_field(g, rng, /*signed_amp=*/false);
  const auto rows = decay_suite(f, 2.0, 2.0, {0.1, 1.0, 10.0}, g);
  for (const auto& row : rows) {
    // envelope shape is identically 2 at q = r, so the ratio is at most 1/2
    CHECK(row.ratio <= 0.5 * (1.0 + 1e-6));
    CHECK(row.ratio <= decay_constant_baseline(1));
  }
}

TEST_CASE("decay_suite_boundary_delta: two-regime slopes at dim 3") {
  std::vector<double> small_t, large_t;
  for (int i = 0; i < 7; ++i) {
    small_t.push_back(1e-3 * std::pow(100.0, i / 6.0));
    large_t.push_back(10.0 * std::pow(100.0, i / 6.0));
  }
  const auto rows_small = decay_suite_boundary_delta(3, 1.0, kInf, small_t);
  const auto rows_large = decay_suite_boundary_delta(3, 1.0, kInf, large_t);
  std::vector<double> ns, nl;
  for (const auto& r : rows_small) {
    ns.push_back(r.norm);
    CHECK(r.ratio <= decay_constant_baseline(3));
  }
  for (const auto& r : rows_large) nl.push_back(r.norm);
  CHECK(std::abs(loglog_slope(small_t, ns) - (-2.0)) < 0.1);
  CHECK(std::abs(loglog_slope(large_t, nl) - (-1.5)) < 0.1);
  CHECK_THROWS_AS(decay_suite_boundary_delta(3, 2.0, kInf, small_t), std::invalid_argument);
}

TEST_CASE("lower_gaussian_check: probe bound, trivial data, contract") {
  const GridSpec g = test_grid(0.025);
  PairedField phi = sample_bump(g, 1.0, 1.5, 1.0);
  phi.boundary = 1.0;
  const auto rep = lower_gaussian_check(phi, 1.0, {0.0, 0.5, 1.0, 2.0}, g);
  CHECK(rep.pass);
  CHECK(rep.min_ratio >= rep.c2);

  const PairedField zero = PairedField::zeros(g);
  CHECK(lower_gaussian_check(zero, 1.0, {0.0, 1.0}, g).pass);

  CHECK_THROWS_AS(lower_gaussian_check(phi, 0.5, {0.0}, g), std::domain_error);
  PairedField neg = phi;
  neg.interior[5] = -1.0;
  CHECK_THROWS_AS(lower_gaussian_check(neg, 1.0, {0.0}, g), std::domain_error);
}

TEST_CASE("operator_norm_fit: exponent regimes") {
  std::vector<double> times;
  for (int i = 0; i < 6; ++i) times.push_back(1e-3 * std::pow(100.0, i / 5.0));
  for (int i = 0; i < 6; ++i) times.push_back(10.0 * std::pow(100.0, i / 5.0));

  // dim 2, q=1, r=inf: both regimes decay like 1/t
  const auto fit2 = operator_norm_fit(2, 1.0, kInf, times);
  CHECK(std::abs(fit2.small_t_slope - (-1.0)) < 0.1);
  CHECK(std::abs(fit2.large_t_slope - (-1.0)) < 0.1);

  // q = r: contractive regime, flat
  const auto fit_eq = operator_norm_fit(1, 2.0, 2.0, times);
  CHECK(std::abs(fit_eq.small_t_slope) < 0.05);
  CHECK(std::abs(fit_eq.large_t_slope) < 0.05);

  CHECK_THROWS_AS(operator_norm_fit(1, 1.0, kInf, {0.1, 0.2, 0.3, 10.0, 20.0, 30.0, 40.0}),
                  std::runtime_error);
  CHECK_THROWS_AS(operator_norm_fit(1, 2.0, 1.0, times), std::invalid_argument);
}

TEST_CASE("mass exchange: boundary source fills the interior erfc share") {
  const GridSpec g = test_grid(0.025);
  PairedField phi = PairedField::zeros(g);
  phi.boundary = 1.0;
  for (double t : {0.5, 1.0, 4.0}) {
    const PairedField u = apply(t, phi, g);
    const double h00 = h_correction_auto({1, 0.0, 0.0, 0.0, t}).value;
    // total erfc(0) = 1 splits into the boundary value and the interior mass
    CHECK(std::abs(u.boundary - h00) < 1e-9);
    CHECK(std::abs(interior_l1(u, g) - (1.0 - h00)) < 1e-6);
  }
}
