#include "dynheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynheat {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
  if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  if (panel_order < 2) throw std::invalid_argument("QuadratureSpec: panel_order must be >= 2");
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  double value;
  double error;
};

double eval_checked(const Integrand& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw std::domain_error("integrate: integrand returned a non-finite value at x=" +
                            std::to_string(x));
  }
  return v;
}

// One G7/K15 panel with the QUADPACK error heuristic.
Segment gauss_kronrod_15(const Integrand& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);

  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[2 * i] = eval_checked(f, mid - half * kXgk[i]);
    fv[2 * i + 1] = eval_checked(f, mid + half * kXgk[i]);
  }
  fv[14] = eval_checked(f, mid);

  double resk = kWgk[7] * fv[14];
  double resabs = std::abs(resk);
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[2 * i] + fv[2 * i + 1]);
    resabs += kWgk[i] * (std::abs(fv[2 * i]) + std::abs(fv[2 * i + 1]));
  }
  double resg = kWg[3] * fv[14];
  for (int i = 0; i < 4 - 1; ++i) {
    // Gauss nodes sit at the odd Kronrod indices 1,3,5.
    resg += kWg[i] * (fv[2 * (2 * i + 1)] + fv[2 * (2 * i + 1) + 1]);
  }

  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fv[14] - reskh);
  for (int i = 0; i < 7; ++i) {
    resasc += kWgk[i] * (std::abs(fv[2 * i] - reskh) + std::abs(fv[2 * i + 1] - reskh));
  }

  double err = std::abs((resk - resg) * half);
  resasc *= std::abs(half);
  resabs *= std::abs(half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50) {
    err = std::max(eps50 * resabs, err);
  }
  return Segment{lo, hi, resk * half, err};
}

}  // namespace

QuadratureResult integrate_finite(const Integrand& f, double lo, double hi,
                                  const QuadratureSpec& spec) {
  spec.validate();
  if (!(lo <= hi)) throw std::invalid_argument("integrate_finite: requires lo <= hi");

  QuadratureResult out;
  if (lo == hi) {
    out.converged = true;
    return out;
  }

  std::vector<Segment> segs;
  segs.reserve(static_cast<size_t>(spec.max_subdivisions) + 1);
  segs.push_back(gauss_kronrod_15(f, lo, hi));

  double total = segs[0].value;
  double total_err = segs[0].error;
  int used = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) &&
         used < spec.max_subdivisions) {
    size_t worst = 0;
    for (size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].error > segs[worst].error) worst = i;
    }
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.lo + s.hi);
    if (mid <= s.lo || mid >= s.hi) break;  // interval at floating-point resolution
    segs[worst] = gauss_kronrod_15(f, s.lo, mid);
    segs.push_back(gauss_kronrod_15(f, mid, s.hi));
    ++used;

    total = 0.0;
    total_err = 0.0;
    for (const Segment& seg : segs) {
      total += seg.value;
      total_err += seg.error;
    }
  }

  out.value = total;
  out.error_estimate = total_err;
  out.subdivisions_used = used;
  out.converged = total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return out;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double lo,
                                         const QuadratureSpec& spec) {
  const Integrand g = [&f, lo](double u) {
    const double om = 1.0 - u;
    const double xi = lo + u / om;
    const double fx = f(xi);
    if (fx == 0.0) return 0.0;  // avoid 0 * huge at the far end
    return fx / (om * om);
  };
  return integrate_finite(g, 0.0, 1.0, spec);
}

void gauss_legendre_nodes(int order, std::vector<double>& nodes,
                          std::vector<double>& weights) {
  if (order < 2) throw std::invalid_argument("gauss_legendre_nodes: order must be >= 2");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

double composite_gauss_legendre(const Integrand& f, double lo, double hi,
                                int panels, int order) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
  std::vector<double> x, w;
  gauss_legendre_nodes(order, x, w);
  const double dx = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * dx;
    const double mid = a + 0.5 * dx;
    double panel = 0.0;
    for (int i = 0; i < order; ++i) panel += w[i] * f(mid + 0.5 * dx * x[i]);
    sum += 0.5 * dx * panel;
  }
  return sum;
}

// Rational approximations after W. J. Cody (as in netlib SPECFUN), accurate
// to ~1e-16 relative; keeps results independent of the platform libm.
namespace {

constexpr double kErfA[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                             3.77485237685302021e02, 3.20937758913846947e03,
                             1.85777706184603153e-1};
constexpr double kErfB[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                             1.28261652607737228e03, 2.84423683343917062e03};
constexpr double kErfC[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                             6.61191906371416295e01, 2.98635138197400131e02,
                             8.81952221241769090e02, 1.71204761263407058e03,
                             2.05107837782607147e03, 1.23033935479799725e03,
                             2.15311535474403846e-8};
constexpr double kErfD[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                             5.37181101862009858e02, 1.62138957456669019e03,
                             3.29079923573345963e03, 4.36261909014324716e03,
                             3.43936767414372164e03, 1.23033935480374942e03};
constexpr double kErfP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                             1.25781726111229246e-1, 1.60837851487422766e-2,
                             6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kErfQ[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                             5.27905102951428412e-1, 6.05183413124413191e-2,
                             2.33520497626869185e-3};
constexpr double kInvSqrtPi = 0.56418958354775628695;

// erfc(y) for y > 0.46875 with the exponential split against premature
// underflow.
double erfc_large_positive(double y) {
  double result;
  if (y <= 4.0) {
    double num = kErfC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfC[i]) * y;
      den = (den + kErfD[i]) * y;
    }
    result = (num + kErfC[7]) / (den + kErfD[7]);
  } else {
    if (y >= 26.6) return 0.0;
    const double ysq = 1.0 / (y * y);
    double num = kErfP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + kErfP[i]) * ysq;
      den = (den + kErfQ[i]) * ysq;
    }
    double r = ysq * (num + kErfP[4]) / (den + kErfQ[4]);
    result = (kInvSqrtPi - r) / y;
  }
  const double ynear = std::floor(y * 16.0) / 16.0;
  const double del = (y - ynear) * (y + ynear);
  return std::exp(-ynear * ynear) * std::exp(-del) * result;
}

}  // namespace

double erf(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.46875) {
    const double z = x * x;
    double num = kErfA[4] * z;
    double den = z;
    for (int i = 0; i < 3; ++i) {
      num = (num + kErfA[i]) * z;
      den = (den + kErfB[i]) * z;
    }
    return x * (num + kErfA[3]) / (den + kErfB[3]);
  }
  const double r = erfc_large_positive(ax);
  return x > 0.0 ? 1.0 - r : r - 1.0;
}

double erfc(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.46875) return 1.0 - erf(x);
  const double r = erfc_large_positive(ax);
  return x > 0.0 ? r : 2.0 - r;
}

}  // namespace dynheat
