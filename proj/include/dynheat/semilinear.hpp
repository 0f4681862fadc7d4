// The semilinear problem u_t = Laplace(u) + u^p under the dynamical
// boundary condition, run as a desk-scale experiment: exponential-Euler
// steps of the Duhamel equation, the annulus-eigenfunction blow-up
// certificate, and the Fujita dichotomy sweep around p_F = 1 + 2/N.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynheat/grid.hpp"
#include "dynheat/quadrature.hpp"

namespace dynheat {

double fujita_exponent(int dim);  // 1 + 2/N

struct SemilinearConfig {
  double p = 2.0;
  double dt = 0.05;  // base step; the schedule is min(dt, 0.1/||u||^{p-1})
  double t_max = 1e3;
  double blowup_threshold = 1e6;
  GridSpec grid;
  QuadratureSpec spec;
  std::vector<int> certificate_ns = {1, 2, 3, 4};
  double tmax_multiplier = 1.0;  // 10x budget for the critical exponent
  void validate(double initial_sup) const;
};

// First Dirichlet eigenpair of the unit annulus E = {1 < |x| < 2}, scaled
// to E_n. For dim = 1 the component used is (4n, 5n) with mu = pi^2; for
// dim >= 2 the radial eigenpair comes from a shooting method.
struct AnnulusEigenpair {
  int n = 1;
  int dim = 1;
  double mu = 0.0;         // eigenvalue on the unit annulus
  double mu_scaled = 0.0;  // n^{-2} mu, the eigenvalue on E_n

  // Normalized profile psi on E (unit L1 mass over the component used);
  // argument is |x - 3n e_N| / n in (1, 2).
  double psi(double r) const;
  // psi_n at a point of E_n (dim 1: x in (4n, 5n)).
  double psi_n(double x) const;

 private:
  friend AnnulusEigenpair annulus_eigenpair(int n, int dim);
  std::vector<double> radial_samples_;  // dim >= 2
};

AnnulusEigenpair annulus_eigenpair(int n, int dim);

// Z_n(u) = integral over E_n of u psi_n (grid quadrature, dim 1). Throws
// when E_n = (4n, 5n) sticks out of the truncated grid.
double z_functional(const PairedField& u, int n, const GridSpec& g);

struct BlowupCertificate {
  int n = 0;
  double mu = 0.0;        // unit-annulus eigenvalue
  double z0 = 0.0;        // Z_n at activation
  double threshold = 0.0; // (2 mu n^{-2})^{1/(p-1)}
  double fired_at = 0.0;
};

enum class Outcome { global_to_tmax, blowup_detected, certificate_fired };
const char* outcome_name(Outcome o);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> sup_norms;      // interior+boundary sup
  std::vector<double> l1_norms;       // interior L1
  std::vector<double> x_norm_series;  // (1+t)^{N/2} sup + L1 at each time
  std::vector<BlowupCertificate> certificates;
  Outcome outcome = Outcome::global_to_tmax;
  double blowup_time = -1.0;
  bool truncation_warning = false;

  double x_norm() const;  // sup_t ||u||_L1 + sup_t (1+t)^{N/2} ||u||_inf
};

// One exponential-Euler Duhamel step: u+ = G(dt)[u + dt (u^p, 0)]. The
// nonlinear source carries 0 on the boundary component.
PairedField semilinear_step(const PairedField& u, double dt, const SemilinearConfig& cfg);

// Iterates steps until t_max, threshold crossing, or a non-finite field
// (hard error, distinct from threshold detection). Certificates are
// evaluated every step for the configured n values.
EvolutionTrace evolve(const PairedField& phi, const SemilinearConfig& cfg);

// Per-step certificate test: fires when Z_n^{p-1} > 2 mu n^{-2} for one of
// the configured n.
std::optional<BlowupCertificate> certificate_check(const PairedField& u, double t,
                                                   const SemilinearConfig& cfg,
                                                   const std::vector<int>& already_fired);

// Committed constant of the linear decay bound (Eq.-style
// ||G(t)phi||_q <= C (1+t)^{-N/2(1-1/q)} (||phi||_1 + ||phi||_inf)),
// calibrated on the discrete operator; the contraction ball is 4 C delta.
double xnorm_constant_baseline(int dim);

struct FujitaCell {
  double p = 0.0;
  double delta = 0.0;
  std::string outcome;       // "blowup" | "global" | "inconclusive"
  double t_event = -1.0;     // blow-up time, or t reached
  int certificate_n = 0;     // first fired certificate (0 = none)
  double data_amplitude = 0.0;
  double x_norm = 0.0;
  double x_ball = 0.0;       // 4 C* delta for global cells
};

struct FujitaTable {
  std::vector<FujitaCell> cells;
  bool dichotomy_ok = false;
  bool has_inconclusive = false;
};

// Initial data families. Blow-up probes place an amplified unit-mass bump
// inside the first certificate annulus E_1 = (4, 5); the theorem's
// nonexistence branch holds for every positive datum, so the probe
// amplitude trades asymptotic generality for a desk-scale observable run.
PairedField blowup_probe_data(const GridSpec& g, double amplitude);
// Global-branch data scaled so ||phi||_L1 + ||phi||_Linf (pair norms) = delta.
PairedField small_data(const GridSpec& g, double delta);

// Runs the (p, delta) matrix; p <= p_F cells use the blow-up probe,
// p > p_F cells the delta-scaled small data. Traces are optionally
// collected per cell.
FujitaTable fujita_sweep(const std::vector<double>& ps, const std::vector<double>& deltas,
                         const SemilinearConfig& tmpl,
                         std::vector<EvolutionTrace>* traces = nullptr);

// Delta calibration for the global branch: halve delta until the X-norm
// ball test passes for three consecutive halvings; returns the first
// delta of the verified chain.
double calibrate_global_delta(double p, const SemilinearConfig& tmpl, double delta_start);

}  // namespace dynheat
