#include "crancap/discrete_bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "crancap/info.hpp"
#include "crancap/rng.hpp"
#include "crancap/util.hpp"

namespace crancap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rate_from_joint(const DiscreteMac& mac, const JointPmf& joint, double fronthaul_bits) {
  std::vector<int> all(static_cast<std::size_t>(mac.relays));
  std::iota(all.begin(), all.end(), 0);
  double coupling = multi_information(joint, all);
  double forward = input_output_mi(joint, mac);
  return std::max(0.0, std::min(mac.relays * fronthaul_bits - coupling, forward));
}

void normalize(std::vector<double>& w) {
  double s = 0.0;
  for (double& v : w) {
    if (v < 0.0) v = 0.0;
    s += v;
  }
  if (s <= 0.0) throw std::domain_error("weights sum to zero");
  for (double& v : w) v /= s;
}

// Golden-section maximum over [lo, hi] with explicit endpoint checks.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, int iters) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  double t = f1 > f2 ? x1 : x2;
  double v = std::max(f1, f2);
  double fl = f(lo), fh = f(hi);
  if (fl > v) {
    v = fl;
    t = lo;
  }
  if (fh > v) {
    v = fh;
    t = hi;
  }
  return {t, v};
}

struct WeightClimb {
  double value = 0.0;
  std::vector<double> w;
  SearchStatus status = SearchStatus::converged;
};

WeightClimb climb_weights(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> w, int max_sweeps, double tol) {
  normalize(w);
  double cur = f(w);
  int k = static_cast<int>(w.size());
  bool improving = true;
  int sweep = 0;
  for (; sweep < max_sweeps && improving; ++sweep) {
    double gain = 0.0;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        double lo = -w[static_cast<std::size_t>(j)];
        double hi = w[static_cast<std::size_t>(i)];
        if (hi - lo < 1e-14) continue;
        auto g = [&](double t) {
          std::vector<double> w2 = w;
          w2[static_cast<std::size_t>(i)] = std::max(0.0, w2[static_cast<std::size_t>(i)] - t);
          w2[static_cast<std::size_t>(j)] = std::max(0.0, w2[static_cast<std::size_t>(j)] + t);
          return f(w2);
        };
        auto [t, v] = golden_max(g, lo, hi, 30);
        if (v > cur + 1e-14) {
          w[static_cast<std::size_t>(i)] = std::max(0.0, w[static_cast<std::size_t>(i)] - t);
          w[static_cast<std::size_t>(j)] = std::max(0.0, w[static_cast<std::size_t>(j)] + t);
          normalize(w);
          double nv = f(w);
          gain += nv - cur;
          cur = nv;
        }
      }
    }
    improving = gain >= tol;
  }
  WeightClimb out;
  out.value = cur;
  out.w = std::move(w);
  out.status = improving ? SearchStatus::grid_limited : SearchStatus::converged;
  return out;
}

}  // namespace

double symmetric_rate(const DiscreteMac& mac, const SymmetricPmf& pmf, double fronthaul_bits) {
  mac.validate();
  if (!mac.symmetric()) throw std::domain_error("channel is not permutation invariant");
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");
  if (pmf.relays != mac.relays || pmf.alphabet != mac.in_alphabet)
    throw std::invalid_argument("pmf does not match the channel");
  pmf.validate();
  return rate_from_joint(mac, pmf.joint(), fronthaul_bits);
}

RateSearchResult optimize_symmetric_rate(const DiscreteMac& mac, double fronthaul_bits,
                                         const RateSearchOptions& opts) {
  mac.validate();
  if (!mac.symmetric()) throw std::domain_error("channel is not permutation invariant");
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");
  if (mac.inputs() > 4096) throw capacity_error("input table too large for the rate search");

  OrbitIndex orbits(mac.relays, mac.in_alphabet);
  int k = orbits.orbits();
  auto value_of = [&](const std::vector<double>& w) {
    std::vector<double> wn = w;
    normalize(wn);
    return rate_from_joint(mac, orbits.pmf_from_weights(wn).joint(), fronthaul_bits);
  };

  std::vector<std::vector<double>> starts;
  {
    std::vector<double> w(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      w[static_cast<std::size_t>(i)] =
          orbits.orbit_size[static_cast<std::size_t>(i)] / static_cast<double>(mac.inputs());
    starts.push_back(std::move(w));
    starts.emplace_back(static_cast<std::size_t>(k), 1.0 / k);
  }
  for (int r = 0; r + 2 < opts.restarts; ++r) {
    auto rng = stream_rng(opts.seed, static_cast<std::uint64_t>(r));
    std::exponential_distribution<double> ed(1.0);
    std::vector<double> w(static_cast<std::size_t>(k));
    for (double& v : w) v = ed(rng);
    normalize(w);
    starts.push_back(std::move(w));
  }

  bool have = false;
  WeightClimb best;
  for (auto& s : starts) {
    WeightClimb c = climb_weights(value_of, s, opts.max_sweeps, opts.tol);
    bool better = !have || c.value > best.value + 1e-12 ||
                  (c.value > best.value - 1e-12 &&
                   std::lexicographical_compare(c.w.begin(), c.w.end(), best.w.begin(), best.w.end()));
    if (better) {
      best = std::move(c);
      have = true;
    }
  }

  RateSearchResult out;
  out.pmf = orbits.pmf_from_weights(best.w);
  out.rate_bits = best.value;
  out.status = best.status;
  return out;
}

bool marton_region_feasible(const DiscreteMac& mac, const JointPmf& pmf, double fronthaul_bits,
                            std::span<const double> rates, std::span<const double> aux_rates,
                            double tol) {
  mac.validate();
  pmf.validate(1e-9);
  int m = mac.relays;
  if (pmf.axes() != m) throw std::invalid_argument("pmf arity does not match channel");
  for (int c : pmf.card)
    if (c != mac.in_alphabet) throw std::invalid_argument("pmf alphabet does not match channel");
  if (static_cast<int>(rates.size()) != m || static_cast<int>(aux_rates.size()) != m)
    throw std::invalid_argument("need one rate pair per relay");
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");

  for (int i = 0; i < m; ++i) {
    if (rates[static_cast<std::size_t>(i)] < -tol || aux_rates[static_cast<std::size_t>(i)] < -tol)
      return false;
    if (rates[static_cast<std::size_t>(i)] + aux_rates[static_cast<std::size_t>(i)] >
        fronthaul_bits + tol)
      return false;
  }

  JointPmf jxy = joint_with_output(pmf, mac);
  unsigned full = (1u << m) - 1u;
  std::vector<int> all_axes = mask_to_axes(full);
  double i_all = multi_information(pmf, all_axes);

  for (unsigned mask = 1; mask <= full; ++mask) {
    std::vector<int> s = mask_to_axes(mask);
    double cover = 0.0, load = 0.0;
    for (int a : s) {
      cover += aux_rates[static_cast<std::size_t>(a)];
      load += rates[static_cast<std::size_t>(a)] + aux_rates[static_cast<std::size_t>(a)];
    }
    if (cover < multi_information(pmf, s) - tol) return false;
    std::vector<int> sc = mask_to_axes(full & ~mask);
    double rhs = conditional_mi_with_output(jxy, s, sc) + i_all - multi_information(pmf, sc);
    if (load > rhs + tol) return false;
  }
  return true;
}

void StochasticMatrix::validate(double tol) const {
  if (rows_n < 1 || cols_n < 1) throw std::invalid_argument("empty stochastic matrix");
  if (p.size() != static_cast<std::size_t>(rows_n) * static_cast<std::size_t>(cols_n))
    throw std::invalid_argument("stochastic matrix size mismatch");
  for (int r = 0; r < rows_n; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols_n; ++c) {
      double v = at(r, c);
      if (!(v >= -tol)) throw std::domain_error("negative channel probability");
      s += v;
    }
    if (std::abs(s - 1.0) > tol) throw std::domain_error("channel row does not sum to one");
  }
}

StochasticMatrix constant_channel(int rows, int cols) {
  StochasticMatrix x{rows, cols,
                     std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  for (int r = 0; r < rows; ++r) x.p[static_cast<std::size_t>(r) * cols] = 1.0;
  return x;
}

StochasticMatrix copy_channel(int rows, int cols) {
  StochasticMatrix x{rows, cols,
                     std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  for (int r = 0; r < rows; ++r)
    x.p[static_cast<std::size_t>(r) * cols + std::min(r, cols - 1)] = 1.0;
  return x;
}

namespace {

// Joint over (X_1..X_M, Y, U, Q) built as p(x) p(y|x) p(u|y) p(q|x), so
// Q - X - Y - U holds by construction.
JointPmf aux_joint(const DiscreteMac& mac, const JointPmf& pmf, const StochasticMatrix& coord,
                   const StochasticMatrix& digest) {
  int ny = mac.out_alphabet, ku = digest.cols_n, kq = coord.cols_n;
  std::vector<int> card = pmf.card;
  card.push_back(ny);
  card.push_back(ku);
  card.push_back(kq);
  std::vector<double> p(pmf.size() * static_cast<std::size_t>(ny) * ku * kq, 0.0);
  for (std::size_t xi = 0; xi < pmf.size(); ++xi) {
    double px = pmf.p[xi];
    if (px == 0.0) continue;
    auto row = mac.row(xi);
    for (int y = 0; y < ny; ++y) {
      double pxy = px * row[static_cast<std::size_t>(y)];
      if (pxy == 0.0) continue;
      for (int u = 0; u < ku; ++u) {
        double pxyu = pxy * digest.at(y, u);
        if (pxyu == 0.0) continue;
        std::size_t base = ((xi * static_cast<std::size_t>(ny) + static_cast<std::size_t>(y)) *
                                static_cast<std::size_t>(ku) +
                            static_cast<std::size_t>(u)) *
                           static_cast<std::size_t>(kq);
        for (int q = 0; q < kq; ++q) p[base + static_cast<std::size_t>(q)] = pxyu * coord.at(xi, q);
      }
    }
  }
  return JointPmf(std::move(card), std::move(p));
}

struct EntropyMemo {
  const JointPmf& j;
  std::unordered_map<unsigned, double> h;
  double operator()(unsigned mask) {
    if (mask == 0u) return 0.0;
    auto it = h.find(mask);
    if (it != h.end()) return it->second;
    std::vector<int> axes = mask_to_axes(mask);
    double v = subset_entropy_bits(j, axes);
    h.emplace(mask, v);
    return v;
  }
};

std::pair<double, double> branches_of(int m, const JointPmf& j, double fronthaul_bits,
                                      bool want_second) {
  EntropyMemo H{j, {}};
  unsigned xall = (1u << m) - 1u;
  unsigned yb = 1u << m, ub = 1u << (m + 1), qb = 1u << (m + 2);
  double first = m * fronthaul_bits - (m - 1.0) * (H(ub | qb) - H(qb)) - (H(xall | ub) - H(xall));
  for (int i = 0; i < m; ++i) {
    unsigned xi = 1u << i;
    first += H(xi | ub | qb) - H(xi | qb);
  }
  if (!want_second) return {first, kInf};

  double second = kInf;
  double h_xall_q = H(xall | qb);
  double h_xall_yq = H(xall | yb | qb);
  for (unsigned s = 0; s <= xall; ++s) {
    double term = std::popcount(s) * fronthaul_bits + h_xall_q + H(s | yb | qb) - h_xall_yq -
                  H(s | qb);
    second = std::min(second, term);
  }
  return {first, second};
}

JointPmf dirichlet_joint(std::vector<int> card, std::uint64_t seed, std::uint64_t stream) {
  auto rng = stream_rng(seed, stream);
  std::exponential_distribution<double> ed(1.0);
  std::size_t n = 1;
  for (int c : card) n *= static_cast<std::size_t>(c);
  std::vector<double> p(n);
  double s = 0.0;
  for (double& v : p) {
    v = ed(rng);
    s += v;
  }
  for (double& v : p) v /= s;
  return JointPmf(std::move(card), std::move(p));
}

StochasticMatrix dirichlet_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t stream) {
  auto rng = stream_rng(seed, stream);
  std::exponential_distribution<double> ed(1.0);
  StochasticMatrix x{rows, cols,
                     std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int c = 0; c < cols; ++c) {
      double v = ed(rng);
      x.p[static_cast<std::size_t>(r) * cols + c] = v;
      s += v;
    }
    for (int c = 0; c < cols; ++c) x.p[static_cast<std::size_t>(r) * cols + c] /= s;
  }
  return x;
}

void check_minimax_instance(const DiscreteMac& mac, double fronthaul_bits) {
  mac.validate();
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");
  if (mac.inputs() * static_cast<std::size_t>(mac.out_alphabet) > 512)
    throw capacity_error("channel table too large for the minimax search");
}

}  // namespace

std::pair<double, double> minimax_branches(const DiscreteMac& mac, const JointPmf& pmf,
                                           const StochasticMatrix& coord,
                                           const StochasticMatrix& digest, double fronthaul_bits) {
  mac.validate();
  pmf.validate(1e-9);
  if (pmf.axes() != mac.relays) throw std::invalid_argument("pmf arity does not match channel");
  for (int c : pmf.card)
    if (c != mac.in_alphabet) throw std::invalid_argument("pmf alphabet does not match channel");
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");
  coord.validate();
  digest.validate();
  if (coord.rows_n != static_cast<int>(mac.inputs()))
    throw std::invalid_argument("coordination channel rows must match the input tuples");
  if (digest.rows_n != mac.out_alphabet)
    throw std::invalid_argument("digest channel rows must match the output alphabet");
  return branches_of(mac.relays, aux_joint(mac, pmf, coord, digest), fronthaul_bits, true);
}

MinimaxResult minimax_value(const DiscreteMac& mac, const JointPmf& pmf, double fronthaul_bits,
                            const MinimaxOptions& opts) {
  check_minimax_instance(mac, fronthaul_bits);
  pmf.validate(1e-9);
  if (pmf.axes() != mac.relays) throw std::invalid_argument("pmf arity does not match channel");
  for (int c : pmf.card)
    if (c != mac.in_alphabet) throw std::invalid_argument("pmf alphabet does not match channel");

  int ny = mac.out_alphabet;
  int nx = static_cast<int>(mac.inputs());
  int ku_cap = ny + 2;
  int kq_cap = nx + (1 << mac.relays) - 1;
  int ku = opts.digest_symbols ? opts.digest_symbols : ku_cap;
  int kq = opts.coord_symbols ? opts.coord_symbols : kq_cap;
  if (ku < 1 || ku > ku_cap)
    throw std::domain_error("digest alphabet outside its cardinality bound");
  if (kq < 1 || kq > kq_cap)
    throw std::domain_error("coordination alphabet outside its cardinality bound");

  auto eval_pair = [&](const StochasticMatrix& v, const StochasticMatrix& w) {
    auto [a, b] = branches_of(mac.relays, aux_joint(mac, pmf, v, w), fronthaul_bits, true);
    return std::min(a, b);
  };
  auto eval_first = [&](const StochasticMatrix& v, const StochasticMatrix& w) {
    return branches_of(mac.relays, aux_joint(mac, pmf, v, w), fronthaul_bits, false).first;
  };

  // One pass of pairwise column transfers over every row of x; f is evaluated
  // in maximization orientation. Returns the total signed gain.
  auto sweep_matrix = [&](StochasticMatrix& x, const std::function<double(const StochasticMatrix&)>& f,
                          double& cur) {
    double gain = 0.0;
    for (int r = 0; r < x.rows_n; ++r) {
      for (int c1 = 0; c1 < x.cols_n; ++c1) {
        for (int c2 = c1 + 1; c2 < x.cols_n; ++c2) {
          double lo = -x.at(r, c2), hi = x.at(r, c1);
          if (hi - lo < 1e-14) continue;
          auto g = [&](double t) {
            StochasticMatrix x2 = x;
            std::size_t b1 = static_cast<std::size_t>(r) * x.cols_n + c1;
            std::size_t b2 = static_cast<std::size_t>(r) * x.cols_n + c2;
            x2.p[b1] = std::max(0.0, x2.p[b1] - t);
            x2.p[b2] = std::max(0.0, x2.p[b2] + t);
            return f(x2);
          };
          auto [t, v] = golden_max(g, lo, hi, 24);
          if (v > cur + 1e-13) {
            std::size_t b1 = static_cast<std::size_t>(r) * x.cols_n + c1;
            std::size_t b2 = static_cast<std::size_t>(r) * x.cols_n + c2;
            x.p[b1] = std::max(0.0, x.p[b1] - t);
            x.p[b2] = std::max(0.0, x.p[b2] + t);
            double s = 0.0;
            for (int c = 0; c < x.cols_n; ++c) s += x.at(r, c);
            for (int c = 0; c < x.cols_n; ++c)
              x.p[static_cast<std::size_t>(r) * x.cols_n + c] /= s;
            double nv = f(x);
            gain += nv - cur;
            cur = nv;
          }
        }
      }
    }
    return gain;
  };

  StochasticMatrix coord_const = constant_channel(nx, kq);
  StochasticMatrix coord_copy = copy_channel(nx, kq);

  // Ascent over the coordination channel at a fixed digest. The constant and
  // copy channels are always scored, which keeps the result at or above the
  // closed-form achievable rate for symmetric instances.
  auto ascend = [&](const StochasticMatrix& w, const std::vector<StochasticMatrix>& climb_starts,
                    bool& budget_hit) {
    double best = -kInf;
    StochasticMatrix best_v;
    for (const auto& s : climb_starts) {
      StochasticMatrix v = s;
      double cur = eval_pair(v, w);
      bool improving = true;
      int sweep = 0;
      for (; sweep < opts.max_sweeps && improving; ++sweep) {
        auto f = [&](const StochasticMatrix& vv) { return eval_pair(vv, w); };
        improving = sweep_matrix(v, f, cur) >= opts.tol;
      }
      if (improving) budget_hit = true;
      if (cur > best) {
        best = cur;
        best_v = std::move(v);
      }
    }
    for (const auto* g : {&coord_const, &coord_copy}) {
      double v = eval_pair(*g, w);
      if (v > best) {
        best = v;
        best_v = *g;
      }
    }
    return std::pair<double, StochasticMatrix>(best, std::move(best_v));
  };

  std::vector<StochasticMatrix> digest_starts;
  digest_starts.push_back(constant_channel(ny, ku));
  digest_starts.push_back(copy_channel(ny, ku));
  if (ku >= ny + 1) {
    StochasticMatrix er{ny, ku, std::vector<double>(static_cast<std::size_t>(ny) * ku, 0.0)};
    for (int y = 0; y < ny; ++y) {
      er.p[static_cast<std::size_t>(y) * ku + y] = 0.5;
      er.p[static_cast<std::size_t>(y) * ku + (ku - 1)] = 0.5;
    }
    digest_starts.push_back(std::move(er));
  }

  double global = kInf;
  bool winner_limited = false;
  for (std::size_t di = 0; di < digest_starts.size(); ++di) {
    StochasticMatrix w = digest_starts[di];
    bool budget_hit = false;
    std::vector<StochasticMatrix> first_starts = {coord_const, coord_copy,
                                                  dirichlet_matrix(nx, kq, opts.seed, 1000 + di)};
    auto [val, v] = ascend(w, first_starts, budget_hit);
    double start_min = val;
    double prev = val;
    bool conv = opts.rounds == 0;
    for (int round = 0; round < opts.rounds; ++round) {
      double cur_a = eval_first(v, w);
      auto fdown = [&](const StochasticMatrix& ww) { return -eval_first(v, ww); };
      double neg = -cur_a;
      sweep_matrix(w, fdown, neg);
      auto [v2, vv] = ascend(w, {v}, budget_hit);
      v = std::move(vv);
      start_min = std::min(start_min, v2);
      if (std::abs(v2 - prev) < opts.tol) {
        conv = true;
        break;
      }
      prev = v2;
    }
    bool limited = budget_hit || !conv;
    if (start_min < global) {
      global = start_min;
      winner_limited = limited;
    }
  }

  MinimaxResult out;
  out.value_bits = global;
  out.input = pmf;
  out.status = winner_limited ? SearchStatus::grid_limited : SearchStatus::converged;
  return out;
}

MinimaxResult minimax_upper(const DiscreteMac& mac, double fronthaul_bits,
                            const MinimaxOptions& opts) {
  check_minimax_instance(mac, fronthaul_bits);
  std::vector<int> card(static_cast<std::size_t>(mac.relays), mac.in_alphabet);

  std::vector<JointPmf> starts;
  if (mac.symmetric()) {
    RateSearchOptions ro;
    ro.seed = opts.seed;
    starts.push_back(optimize_symmetric_rate(mac, fronthaul_bits, ro).pmf.joint());
  }
  starts.push_back(uniform_joint(card));
  for (int r = 0; static_cast<int>(starts.size()) < opts.input_starts; ++r)
    starts.push_back(dirichlet_joint(card, opts.seed, 7000 + static_cast<std::uint64_t>(r)));

  bool have = false;
  MinimaxResult best;
  for (const auto& s : starts) {
    MinimaxResult r = minimax_value(mac, s, fronthaul_bits, opts);
    if (!have || r.value_bits > best.value_bits) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace crancap
