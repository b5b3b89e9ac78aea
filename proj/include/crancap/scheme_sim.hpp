#pragma once

#include <cstdint>
#include <span>

#include "crancap/pmf.hpp"

namespace crancap {

// One covering-and-binning round per trial: every relay holds a codebook of
// messages x covering words drawn i.i.d. from the single-relay marginal, the
// encoder picks the first covering tuple whose empirical type matches the
// target joint, and the receiver decodes by exhaustive joint-type matching
// against the output sequence.
struct SchemeParams {
  int block_length = 8;     // guarded to [1, 20]
  double rate_bits = 0.5;   // message rate per relay
  double excess_bits = 0.0; // covering rate per relay
  double epsilon = 0.25;    // relative type slack
};

struct SchemeCounts {
  std::int64_t trials = 0;
  std::int64_t encode_failures = 0;
  std::int64_t decode_errors = 0;
};

// max(1, round(2^(n * rate))).
std::int64_t scaled_count(double rate_bits, int block_length);

// Every cell of the empirical type sits within relative slack epsilon of the
// target; cells with zero target probability must be empty.
bool strongly_typical(std::span<const int> counts, std::span<const double> target,
                      int block_length, double epsilon);

struct TrialOutcome {
  bool encode_failed = false;
  bool decode_error = false;
};

// One encode/transmit/decode round on substream (seed, trial). An encode
// failure falls back to the first covering tuple and still decodes. Survivor
// filtering drops codewords whose pairwise type with the output already
// fails; a tuple passing the joint test always passes every pairwise test at
// the same slack, so filtering never changes the outcome.
TrialOutcome run_single_trial(const DiscreteMac& mac, const SymmetricPmf& pmf,
                              const SchemeParams& params, std::uint64_t seed, std::int64_t trial,
                              bool filter_survivors = true);

// Sum of independent trials, split across threads by trial index; the
// per-trial substreams make the totals independent of the thread count.
SchemeCounts run_trials(const DiscreteMac& mac, const SymmetricPmf& pmf,
                        const SchemeParams& params, std::int64_t trials, std::uint64_t seed,
                        int threads = 0);

}  // namespace crancap
