#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "crancap/pmf.hpp"

namespace crancap {

// Whether a search stopped because its last sweep gained less than the
// tolerance, or because it ran out of budget while still improving.
enum class SearchStatus { converged, grid_limited };

// Achievable rate of the compress-and-forward scheme for a symmetric input
// pmf on a permutation-invariant channel:
//   max(0, min(M C - I(X_1..X_M), I(X_1..X_M; Y))).
double symmetric_rate(const DiscreteMac& mac, const SymmetricPmf& pmf, double fronthaul_bits);

struct RateSearchOptions {
  int restarts = 12;
  int max_sweeps = 60;
  double tol = 1e-10;
  std::uint64_t seed = 1;
};

struct RateSearchResult {
  double rate_bits = 0.0;
  SymmetricPmf pmf;
  SearchStatus status = SearchStatus::converged;
};

// Maximize symmetric_rate over symmetric pmfs, parameterized by one weight
// per orbit of the relay tuples. Deterministic for a fixed seed; exact ties
// resolve to the lexicographically smaller weight vector.
RateSearchResult optimize_symmetric_rate(const DiscreteMac& mac, double fronthaul_bits,
                                         const RateSearchOptions& opts = {});

// Feasibility of per-relay message/covering rate pairs in the binning inner
// region. All constraints are checked with slack tol:
//   rates[m] >= 0 and aux[m] >= 0
//   rates[m] + aux[m] <= C for every relay
//   sum_{m in S} aux[m] >= I(X_S) for every subset S
//   sum_{m in S} (rates[m] + aux[m])
//       <= I(X_S; Y | X_{S^c}) + I(X_all) - I(X_{S^c}) for every subset S
bool marton_region_feasible(const DiscreteMac& mac, const JointPmf& pmf, double fronthaul_bits,
                            std::span<const double> rates, std::span<const double> aux_rates,
                            double tol = 1e-9);

// Row-stochastic matrix; p[r * cols_n + c] = p(c | r).
struct StochasticMatrix {
  int rows_n = 0;
  int cols_n = 0;
  std::vector<double> p;

  double at(int r, int c) const {
    return p[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_n) +
             static_cast<std::size_t>(c)];
  }
  void validate(double tol = 1e-9) const;
};

// Every row puts all mass on column 0.
StochasticMatrix constant_channel(int rows, int cols);
// Row r maps to column min(r, cols - 1).
StochasticMatrix copy_channel(int rows, int cols);

// The two sides of the converse bound for a fixed coordination channel
// p(q | x_1..x_M) and a fixed receiver digest channel p(u | y):
//   first:  M C - (M-1) H(U|Q) + sum_m H(U|X_m,Q) - H(U|X_all)
//   second: min over subsets S of |S| C + I(X_{S^c}; Y | X_S, Q)
std::pair<double, double> minimax_branches(const DiscreteMac& mac, const JointPmf& pmf,
                                           const StochasticMatrix& coord,
                                           const StochasticMatrix& digest,
                                           double fronthaul_bits);

struct MinimaxOptions {
  int digest_symbols = 0;  // 0 selects the cardinality bound |Y| + 2
  int coord_symbols = 0;   // 0 selects the cardinality bound |X|^M + 2^M - 1
  int input_starts = 3;
  int rounds = 8;
  int max_sweeps = 3;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

struct MinimaxResult {
  double value_bits = 0.0;
  JointPmf input;
  SearchStatus status = SearchStatus::converged;
};

// min over digest channels of max over coordination channels of the smaller
// branch, at a fixed input pmf. Alternating warm-started search: every digest
// iterate is scored by an ascent that always includes the constant and copy
// coordination channels, so the reported value never falls below the
// symmetric_rate of the same pmf on a permutation-invariant channel.
MinimaxResult minimax_value(const DiscreteMac& mac, const JointPmf& pmf, double fronthaul_bits,
                            const MinimaxOptions& opts = {});

// Outer maximization of minimax_value over input pmfs, evaluated at warm
// starts that include the optimizer of the symmetric achievable rate.
MinimaxResult minimax_upper(const DiscreteMac& mac, double fronthaul_bits,
                            const MinimaxOptions& opts = {});

}  // namespace crancap
