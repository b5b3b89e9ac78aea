#pragma once

#include <cstdint>
#include <utility>

namespace crancap {

// Symmetric Gaussian network: M relays with per-link fronthaul capacity C
// bits per use, per-relay power P, unit receiver noise, equicorrelated
// inputs parameterized by rho in [0,1].
struct GaussianNetwork {
  int relays = 2;
  double power = 1.0;
  double fronthaul_bits = 1.0;

  void validate() const;
};

enum class ActiveConstraint { fronthaul, mac_cut, both };

struct LowerBoundResult {
  double rate_bits = 0.0;
  double rho = 0.0;
  ActiveConstraint binding = ActiveConstraint::fronthaul;
  double residual_bits = 0.0;  // |c1 - c2| at the crossing, 0 in the flat case
};

struct SolverOptions {
  double residual_tol = 1e-10;  // crossing residual target
  double rho_tol = 1e-7;        // outer refinement resolution
  int rho_grid = 512;           // coarse outer grid intervals
  int n_grid = 64;              // log-spaced inner noise candidates
  double n_min = 1e-6;
  double n_max = 1e6;
};

// Constraint pair at a given rho:
//   first  = M C - 0.5 log2(P^M / det K(rho))      (fronthaul minus coupling)
//   second = 0.5 log2(1 + P M (1+(M-1)rho))        (receiver cut)
// The first is non-increasing in rho, the second strictly increasing.
std::pair<double, double> lb_constraints(const GaussianNetwork& net, double rho);

// Best rate over rho of min(constraints): either the flat fronthaul value at
// rho = 0 or the unique crossing of the two curves found by bisection (in
// log(1-rho), which keeps the residual small even for crossings near 1).
LowerBoundResult lower_bound(const GaussianNetwork& net, const SolverOptions& opts = {});

// Right-hand side of the implicit rate inequality for auxiliary noise
// variance N >= 0:
//   M C - (M-1)/2 log2(2^(2R)+N) - 1/2 log2(1+N)
//       + M/2 log2(1+N+P(M-1)(1-rho)(1+(M-1)rho))
// Strictly decreasing in R for M >= 2; approaches M C as N -> infinity.
double ub_rhs(const GaussianNetwork& net, double rate_bits, double rho, double noise);

// Unique fixed point R = ub_rhs(R) by bisection.
double ub_fixed_point(const GaussianNetwork& net, double rho, double noise,
                      double tol = 1e-12);

struct GridStats {
  int rho_points = 0;
  int n_points = 0;
  double rho_tol = 0.0;
  std::int64_t evals = 0;  // fixed-point solves performed
};

struct UpperBoundResult {
  double rate_bits = 0.0;
  double rho = 0.0;
  double noise = 0.0;  // inner minimizer; +infinity when the N->inf limit binds
  bool cut_binding = false;
  GridStats grid;
};

// max over rho of min( inf over N of the fixed point , receiver cut ).
// Any finite set of N candidates yields a valid bound; the candidate set
// includes 0, a log grid, the analytic zero-residual choice at the current
// rho and at the lower bound's crossing, and the N -> infinity limit M C.
UpperBoundResult upper_bound(const GaussianNetwork& net, const SolverOptions& opts = {});

// Fronthaul thresholds that partition C into regimes for fixed (M, P).
struct RegimeReport {
  double c_c = 0.0;     // below: cut-set tight, capacity = M C
  double c_l = 0.0;     // start of the provably tight window
  double c_u = 0.0;     // end of the provably tight window
  double c_coop = 0.0;  // above: full cooperation, capacity = 0.5 log2(1+M^2 P)
  double rho2 = 0.0;    // correlation at which the zero-residual noise hits 0
};

RegimeReport regimes(int relays, double power);

enum class Regime { cutset_tight, gap_unknown_low, window_tight, gap_unknown_high, full_coop_tight };

Regime classify(const RegimeReport& report, double fronthaul_bits);
const char* regime_name(Regime r);

// Auxiliary noise variance that zeroes the conditional coupling of the
// inputs given U at correlation rho: N = P(1-rho)(1+(M-1)rho)/rho - 1.
// Negative means no valid choice; rho = 0 is outside the domain.
double n_choice(int relays, double power, double rho);

struct TightnessResult {
  bool tight = false;
  double gap_bits = 0.0;
  bool predicted = false;  // inside a regime where the bounds provably meet
};

TightnessResult tightness_check(const GaussianNetwork& net, double tol = 1e-4,
                                const SolverOptions& opts = {});

}  // namespace crancap
