// Uniform truncated grids on the half-line and the paired
// interior/boundary state the dynamical-BC semigroup acts on.
#pragma once

#include <vector>

namespace dynheat {

struct GridSpec {
  int dim = 1;
  double truncation = 40.0;  // domain [0, L] in the height coordinate
  double spacing = 0.05;
  bool tangential_reduction = true;  // radial data in x' for dim >= 2

  int intervals() const;            // L / h, validated as an integer
  int points() const { return intervals() + 1; }
  double node(int i) const { return i * spacing; }
  void validate() const;
};

// Quadrature weights on the grid nodes. Gregory is the endpoint-corrected
// trapezoid rule (weights 3/8, 7/6, 23/24 at each end): positive weights,
// O(h^4) for smooth integrands. Plain trapezoid is kept for refinement
// studies where the O(h^2) signal is the point.
enum class GridRule { Trapezoid, Gregory };
std::vector<double> grid_weights(const GridSpec& g, GridRule rule = GridRule::Gregory);

// Discretized pair (phi^i on Omega, phi^b on the boundary). For dim = 1 the
// boundary is the single point {0} with sigma({0}) = 1.
struct PairedField {
  std::vector<double> interior;
  double boundary = 0.0;
  bool truncation_warning = false;

  static PairedField zeros(const GridSpec& g);
};

// Pair norms ||f||_{L^r} + ||g||_{L^r(boundary)} via grid quadrature.
double norm_l1(const PairedField& f, const GridSpec& g);
double norm_l2(const PairedField& f, const GridSpec& g);
double norm_linf(const PairedField& f, const GridSpec& g);
// r in [1, inf]; dispatches to the three above or the general power form.
double norm_lr(const PairedField& f, const GridSpec& g, double r);

// Interior-only norms (the X-norm of the semilinear contraction argument
// weighs interior quantities).
double interior_l1(const PairedField& f, const GridSpec& g);
double interior_linf(const PairedField& f);

// Smooth compactly supported bump, mass 1: (2/w) cos^2(pi (x-c)/w) on
// |x-c| < w/2. Building block for test data.
double bump_mass1(double x, double center, double width);

// Samples c * bump(center,width) on the grid, with the boundary component
// set to the trace value at 0.
PairedField sample_bump(const GridSpec& g, double center, double width, double scale);

}  // namespace dynheat
