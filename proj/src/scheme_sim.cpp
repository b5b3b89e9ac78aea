#include "crancap/scheme_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "crancap/info.hpp"
#include "crancap/rng.hpp"
#include "crancap/util.hpp"

namespace crancap {

std::int64_t scaled_count(double rate_bits, int block_length) {
  double v = std::exp2(rate_bits * block_length);
  if (!(v < 9.0e18)) throw capacity_error("codebook size overflows a 64-bit count");
  return std::max<std::int64_t>(1, std::llround(v));
}

bool strongly_typical(std::span<const int> counts, std::span<const double> target,
                      int block_length, double epsilon) {
  if (counts.size() != target.size())
    throw std::invalid_argument("type and target have different cell counts");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (target[i] == 0.0) {
      if (counts[i] != 0) return false;
    } else if (std::abs(static_cast<double>(counts[i]) / block_length - target[i]) >
               epsilon * target[i]) {
      return false;
    }
  }
  return true;
}

namespace {

struct BookShape {
  std::int64_t words = 0;  // messages per relay
  std::int64_t spread = 0; // covering words per message
};

BookShape check_scheme(const DiscreteMac& mac, const SymmetricPmf& pmf, const SchemeParams& p) {
  mac.validate();
  pmf.validate();
  if (pmf.relays != mac.relays || pmf.alphabet != mac.in_alphabet)
    throw std::invalid_argument("input pmf does not match the channel");
  if (p.block_length < 1 || p.block_length > 20)
    throw capacity_error("block length outside [1, 20]");
  if (!(p.rate_bits >= 0.0) || !(p.excess_bits >= 0.0))
    throw std::domain_error("rates must be nonnegative");
  if (!(p.epsilon > 0.0)) throw std::domain_error("type slack must be positive");
  BookShape s;
  s.words = scaled_count(p.rate_bits, p.block_length);
  s.spread = scaled_count(p.excess_bits, p.block_length);
  if (mac.relays * s.words * s.spread > (std::int64_t{1} << 22))
    throw capacity_error("codebooks exceed the stored-codeword guard");
  return s;
}

int draw_symbol(std::mt19937_64& rng, std::span<const double> dist) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
    acc += dist[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(dist.size()) - 1;
}

}  // namespace

TrialOutcome run_single_trial(const DiscreteMac& mac, const SymmetricPmf& pmf,
                              const SchemeParams& params, std::uint64_t seed, std::int64_t trial,
                              bool filter_survivors) {
  const BookShape shape = check_scheme(mac, pmf, params);
  const int n = params.block_length;
  const int m = mac.relays;
  const int k = mac.in_alphabet;
  const int ny = mac.out_alphabet;
  const std::int64_t per_relay = shape.words * shape.spread;

  auto rng = stream_rng(seed, static_cast<std::uint64_t>(trial));

  const std::vector<double> marg = pmf.marginal();
  const JointPmf joint = pmf.joint();
  const JointPmf jxy = joint_with_output(joint, mac);

  // Draw order is fixed (codebooks, messages, noise) so the outcome of a
  // trial depends only on (seed, trial).
  std::vector<std::vector<int>> books(m);
  for (int r = 0; r < m; ++r) {
    books[r].resize(static_cast<std::size_t>(per_relay) * n);
    for (std::int64_t w = 0; w < per_relay; ++w)
      for (int t = 0; t < n; ++t)
        books[r][static_cast<std::size_t>(w) * n + t] = draw_symbol(rng, marg);
  }

  std::vector<std::int64_t> msg(m);
  for (int r = 0; r < m; ++r)
    msg[r] = std::uniform_int_distribution<std::int64_t>(0, shape.words - 1)(rng);

  auto word_at = [&](int r, std::int64_t cover) {
    return books[r].data() + static_cast<std::size_t>(msg[r] * shape.spread + cover) * n;
  };

  // Encode: first covering tuple, in lexicographic order, whose joint type
  // matches the target.
  TrialOutcome out;
  std::vector<std::int64_t> cover(m, 0);
  std::vector<int> counts(joint.size());
  out.encode_failed = true;
  while (true) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int t = 0; t < n; ++t) {
      std::size_t cell = 0;
      for (int r = 0; r < m; ++r) cell = cell * k + word_at(r, cover[r])[t];
      ++counts[cell];
    }
    if (strongly_typical(counts, joint.p, n, params.epsilon)) {
      out.encode_failed = false;
      break;
    }
    int r = m - 1;
    while (r >= 0 && ++cover[r] == shape.spread) {
      cover[r] = 0;
      --r;
    }
    if (r < 0) break;
  }
  if (out.encode_failed) std::fill(cover.begin(), cover.end(), 0);

  std::vector<int> y(n);
  for (int t = 0; t < n; ++t) {
    std::size_t cell = 0;
    for (int r = 0; r < m; ++r) cell = cell * k + word_at(r, cover[r])[t];
    y[t] = draw_symbol(rng, mac.row(cell));
  }

  // Decode: survivors per relay, then an exhaustive scan of survivor tuples
  // against the joint input/output type.
  std::vector<std::vector<std::int64_t>> survivors(m);
  {
    std::vector<int> pair_counts(static_cast<std::size_t>(k) * ny);
    for (int r = 0; r < m; ++r) {
      std::vector<double> pair_target;
      if (filter_survivors) {
        const int keep[2] = {r, m};
        pair_target = jxy.marginal(keep).p;
      }
      survivors[r].reserve(static_cast<std::size_t>(per_relay));
      for (std::int64_t w = 0; w < per_relay; ++w) {
        if (filter_survivors) {
          std::fill(pair_counts.begin(), pair_counts.end(), 0);
          const int* word = books[r].data() + static_cast<std::size_t>(w) * n;
          for (int t = 0; t < n; ++t) ++pair_counts[word[t] * ny + y[t]];
          if (!strongly_typical(pair_counts, pair_target, n, params.epsilon)) continue;
        }
        survivors[r].push_back(w);
      }
    }
  }

  bool found_true = false;
  bool found_other = false;
  bool nonempty = std::all_of(survivors.begin(), survivors.end(),
                              [](const std::vector<std::int64_t>& s) { return !s.empty(); });
  if (nonempty) {
    std::vector<std::size_t> pick(m, 0);
    std::vector<int> jc(jxy.size());
    while (!found_other) {
      std::fill(jc.begin(), jc.end(), 0);
      for (int t = 0; t < n; ++t) {
        std::size_t cell = 0;
        for (int r = 0; r < m; ++r) {
          std::int64_t w = survivors[r][pick[r]];
          cell = cell * k + books[r][static_cast<std::size_t>(w) * n + t];
        }
        ++jc[cell * ny + y[t]];
      }
      if (strongly_typical(jc, jxy.p, n, params.epsilon)) {
        bool is_true = true;
        for (int r = 0; r < m; ++r)
          if (survivors[r][pick[r]] / shape.spread != msg[r]) is_true = false;
        // A survivor tuple from any other message set already decides the
        // trial: alone it decodes wrong, beside the true one it is ambiguous.
        if (is_true)
          found_true = true;
        else
          found_other = true;
      }
      int r = m - 1;
      while (r >= 0 && ++pick[r] == survivors[r].size()) {
        pick[r] = 0;
        --r;
      }
      if (r < 0) break;
    }
  }
  out.decode_error = !(found_true && !found_other);
  return out;
}

SchemeCounts run_trials(const DiscreteMac& mac, const SymmetricPmf& pmf, const SchemeParams& params,
                        std::int64_t trials, std::uint64_t seed, int threads) {
  check_scheme(mac, pmf, params);
  if (trials < 0) throw std::invalid_argument("trial count must be nonnegative");
  int want = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  want = std::clamp<int>(want, 1, 64);
  if (static_cast<std::int64_t>(want) > trials) want = std::max<std::int64_t>(trials, 1);

  std::vector<SchemeCounts> partial(want);
  auto work = [&](int id) {
    std::int64_t lo = trials * id / want;
    std::int64_t hi = trials * (id + 1) / want;
    SchemeCounts c;
    for (std::int64_t t = lo; t < hi; ++t) {
      TrialOutcome o = run_single_trial(mac, pmf, params, seed, t, true);
      ++c.trials;
      c.encode_failures += o.encode_failed ? 1 : 0;
      c.decode_errors += o.decode_error ? 1 : 0;
    }
    partial[id] = c;
  };

  std::vector<std::thread> pool;
  pool.reserve(want);
  for (int id = 1; id < want; ++id) pool.emplace_back(work, id);
  work(0);
  for (auto& th : pool) th.join();

  SchemeCounts total;
  for (const SchemeCounts& c : partial) {
    total.trials += c.trials;
    total.encode_failures += c.encode_failures;
    total.decode_errors += c.decode_errors;
  }
  return total;
}

}  // namespace crancap
