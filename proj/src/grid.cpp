#include "dynheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynheat {

int GridSpec::intervals() const {
  const double m = truncation / spacing;
  const int mi = static_cast<int>(std::lround(m));
  if (std::abs(m - mi) > 1e-9 * std::max(1.0, m)) {
    throw std::invalid_argument("GridSpec: truncation / spacing must be an integer");
  }
  return mi;
}

void GridSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("GridSpec: dim must be >= 1");
  if (!(spacing > 0.0) || !(truncation > spacing)) {
    throw std::invalid_argument("GridSpec: requires 0 < spacing < truncation");
  }
  if (intervals() < 11) throw std::invalid_argument("GridSpec: needs at least 7 intervals");
}

std::vector<double> grid_weights(const GridSpec& g, GridRule rule) {
  g.validate();
  const int m = g.intervals();
  const double h = g.spacing;
  std::vector<double> w(m + 1, h);
  if (rule == GridRule::Trapezoid) {
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
  }
  // Gregory endpoint corrections through the fourth difference: positive
  // weights, O(h^6) on smooth integrands.
  const double end[5] = {95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0, 793.0 / 720.0,
                         157.0 / 160.0};
  for (int k = 0; k < 5; ++k) {
    w[k] = end[k] * h;
    w[m - k] = end[k] * h;
  }
  return w;
}

PairedField PairedField::zeros(const GridSpec& g) {
  PairedField f;
  f.interior.assign(g.points(), 0.0);
  return f;
}

namespace {
void check_sizes(const PairedField& f, const GridSpec& g) {
  if (static_cast<int>(f.interior.size()) != g.points()) {
    throw std::invalid_argument("PairedField does not match the grid");
  }
}
}  // namespace

double norm_l1(const PairedField& f, const GridSpec& g) {
  check_sizes(f, g);
  const auto w = grid_weights(g);
  double s = 0.0;
  for (size_t i = 0; i < f.interior.size(); ++i) s += w[i] * std::abs(f.interior[i]);
  return s + std::abs(f.boundary);
}

double norm_l2(const PairedField& f, const GridSpec& g) {
  check_sizes(f, g);
  const auto w = grid_weights(g);
  double s = 0.0;
  for (size_t i = 0; i < f.interior.size(); ++i) s += w[i] * f.interior[i] * f.interior[i];
  return std::sqrt(s) + std::abs(f.boundary);
}

double norm_linf(const PairedField& f, const GridSpec& g) {
  check_sizes(f, g);
  double s = 0.0;
  for (double v : f.interior) s = std::max(s, std::abs(v));
  return s + std::abs(f.boundary);
}

double norm_lr(const PairedField& f, const GridSpec& g, double r) {
  if (r == 1.0) return norm_l1(f, g);
  if (r == 2.0) return norm_l2(f, g);
  if (std::isinf(r)) return norm_linf(f, g);
  if (!(r > 1.0)) throw std::invalid_argument("norm_lr: r must be in [1, inf]");
  check_sizes(f, g);
  const auto w = grid_weights(g);
  double s = 0.0;
  for (size_t i = 0; i < f.interior.size(); ++i) s += w[i] * std::pow(std::abs(f.interior[i]), r);
  return std::pow(s, 1.0 / r) + std::abs(f.boundary);
}

double interior_l1(const PairedField& f, const GridSpec& g) {
  check_sizes(f, g);
  const auto w = grid_weights(g);
  double s = 0.0;
  for (size_t i = 0; i < f.interior.size(); ++i) s += w[i] * std::abs(f.interior[i]);
  return s;
}

double interior_linf(const PairedField& f) {
  double s = 0.0;
  for (double v : f.interior) s = std::max(s, std::abs(v));
  return s;
}

double bump_mass1(double x, double center, double width) {
  const double u = (x - center) / width;
  if (std::abs(u) >= 0.5) return 0.0;
  const double c = std::cos(M_PI * u);
  return (2.0 / width) * c * c;
}

PairedField sample_bump(const GridSpec& g, double center, double width, double scale) {
  PairedField f = PairedField::zeros(g);
  for (int i = 0; i <= g.intervals(); ++i) {
    f.interior[i] = scale * bump_mass1(g.node(i), center, width);
  }
  f.boundary = scale * bump_mass1(0.0, center, width);
  return f;
}

}  // namespace dynheat
