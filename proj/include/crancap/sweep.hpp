#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "crancap/gaussian_bounds.hpp"

namespace crancap {

struct SweepRow {
  double fronthaul_bits = 0.0;
  LowerBoundResult lb;
  UpperBoundResult ub;
  Regime regime = Regime::cutset_tight;
};

// Both bounds on an even fronthaul grid with `steps` points (a single point
// at cmin when steps is 1). Rows are solved in parallel and returned in grid
// order.
std::vector<SweepRow> gaussian_sweep(int relays, double power, double cmin, double cmax, int steps,
                                     const SolverOptions& opts = {}, int threads = 0);

// Header plus one line per row: C,lb,ub,lb_rho,ub_rho,ub_N,regime.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace crancap
