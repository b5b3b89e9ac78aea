#include "crancap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "crancap/discrete_bounds.hpp"
#include "crancap/gaussian.hpp"
#include "crancap/gaussian_bounds.hpp"
#include "crancap/info.hpp"
#include "crancap/pmf.hpp"
#include "crancap/rng.hpp"
#include "crancap/util.hpp"

namespace crancap {

namespace {

// Partial-pivot LU determinant, the same independent route the unit tests
// use to cross-check the closed forms.
double lu_det(std::vector<double> a, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * n + c]) >
          std::abs(a[static_cast<std::size_t>(piv) * n + c]))
        piv = r;
    if (piv != c) {
      for (int k = 0; k < n; ++k)
        std::swap(a[static_cast<std::size_t>(c) * n + k], a[static_cast<std::size_t>(piv) * n + k]);
      det = -det;
    }
    double d = a[static_cast<std::size_t>(c) * n + c];
    det *= d;
    if (d == 0.0) return 0.0;
    for (int r = c + 1; r < n; ++r) {
      double f = a[static_cast<std::size_t>(r) * n + c] / d;
      for (int k = c; k < n; ++k)
        a[static_cast<std::size_t>(r) * n + k] -= f * a[static_cast<std::size_t>(c) * n + k];
    }
  }
  return det;
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> ed(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) sum += v = ed(rng);
  for (double& v : w) v /= sum;
  return w;
}

// Runs body(i) for i in [0, cases) across threads; body returns an empty
// string on success and a failure description otherwise.
void parallel_cases(SuiteResult& out, int cases,
                    const std::function<std::string(int)>& body) {
  std::vector<std::string> notes(static_cast<std::size_t>(cases));
  int want = static_cast<int>(std::thread::hardware_concurrency());
  want = std::clamp(want, 1, 16);
  want = std::min(want, cases);
  std::vector<std::thread> pool;
  auto work = [&](int id) {
    for (int i = id; i < cases; i += want) notes[static_cast<std::size_t>(i)] = body(i);
  };
  for (int id = 1; id < want; ++id) pool.emplace_back(work, id);
  work(0);
  for (auto& th : pool) th.join();
  out.checks += cases;
  for (int i = 0; i < cases; ++i)
    if (!notes[static_cast<std::size_t>(i)].empty()) {
      ++out.failures;
      out.notes.push_back(notes[static_cast<std::size_t>(i)]);
    }
}

std::string case_tag(const std::string& suite, std::uint64_t seed, int index) {
  return "suite " + suite + " seed " + std::to_string(seed) + " case " + std::to_string(index) +
         ": ";
}

SuiteResult suite_detform(std::uint64_t seed) {
  SuiteResult out{"detform", 0, 0, {}};
  parallel_cases(out, 100, [&](int i) -> std::string {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    int m = 2 + static_cast<int>(rng() % 7);
    double power = std::exp(std::uniform_real_distribution<double>(-2.3, 2.3)(rng));
    double rho = std::uniform_real_distribution<double>(0.0, 0.999)(rng);
    double closed = gaussian::det(m, power, rho);
    double viaLu = lu_det(gaussian::covariance(m, power, rho), m);
    double rel = std::abs(closed - viaLu) / std::max(std::abs(closed), 1e-300);
    if (rel <= 1e-10) return {};
    return case_tag("detform", seed, i) + "M " + std::to_string(m) + " P " + fmt12(power) +
           " rho " + fmt12(rho) + " closed " + fmt12(closed) + " lu " + fmt12(viaLu);
  });
  return out;
}

SuiteResult suite_identities(std::uint64_t seed) {
  SuiteResult out{"identities", 0, 0, {}};
  // Unconditional coupling against the LU route on the correlation matrix.
  parallel_cases(out, 100, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 1000 + static_cast<std::uint64_t>(i));
    int m = 2 + static_cast<int>(rng() % 7);
    double rho = std::uniform_real_distribution<double>(0.0, 0.995)(rng);
    double closed = gaussian::multi_information_bits(m, rho);
    double viaLu = -0.5 * std::log2(lu_det(gaussian::covariance(m, 1.0, rho), m));
    if (std::abs(closed - viaLu) <= 1e-9) return {};
    return case_tag("identities", seed, i) + "coupling M " + std::to_string(m) + " rho " +
           fmt12(rho) + " closed " + fmt12(closed) + " lu " + fmt12(viaLu);
  });
  // Conditional coupling against the conditional-covariance LU route.
  parallel_cases(out, 100, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 2000 + static_cast<std::uint64_t>(i));
    int m = 2 + static_cast<int>(rng() % 7);
    double power = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
    double rho = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
    double noise = std::uniform_real_distribution<double>(0.0, 50.0)(rng);
    double closed = gaussian::conditional_multi_information_bits(m, power, rho, noise);
    double c = power * (1.0 + (m - 1) * rho);
    double v = m * c + 1.0 + noise;
    std::vector<double> k = gaussian::covariance(m, power, rho);
    for (double& e : k) e -= c * c / v;
    double viaLu = 0.5 * (m * std::log2(power - c * c / v) - std::log2(lu_det(std::move(k), m)));
    if (std::abs(closed - viaLu) <= 1e-9) return {};
    return case_tag("identities", seed, i) + "conditional M " + std::to_string(m) + " P " +
           fmt12(power) + " rho " + fmt12(rho) + " N " + fmt12(noise) + " closed " +
           fmt12(closed) + " lu " + fmt12(viaLu);
  });
  // Chain rule across a random relay split, on random discrete instances.
  parallel_cases(out, 200, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 3000 + static_cast<std::uint64_t>(i));
    int m = 2 + static_cast<int>(rng() % 2);
    int kin = 2 + static_cast<int>(rng() % 2);
    int kout = 2 + static_cast<int>(rng() % 2);
    DiscreteMac mac{m, kin, kout, {}};
    mac.rows.reserve(mac.inputs() * static_cast<std::size_t>(kout));
    for (std::size_t r = 0; r < mac.inputs(); ++r)
      for (double v : random_simplex(rng, static_cast<std::size_t>(kout))) mac.rows.push_back(v);
    JointPmf pmf(std::vector<int>(static_cast<std::size_t>(m), kin),
                 random_simplex(rng, mac.inputs()));
    unsigned full = (1u << m) - 1u;
    unsigned s = 1u + static_cast<unsigned>(rng() % (full - 1u));  // proper nonempty
    std::vector<int> sa = mask_to_axes(s);
    std::vector<int> sc = mask_to_axes(full & ~s);
    JointPmf jxy = joint_with_output(pmf, mac);
    double whole = input_output_mi(pmf, mac);
    double split = conditional_mi_with_output(jxy, sc, {}) +
                   conditional_mi_with_output(jxy, sa, sc);
    double viaParts = multi_information(pmf, mask_to_axes(full));
    double chained = multi_information(pmf, sa) + multi_information(pmf, sc) +
                     tuple_mutual_information(pmf, sa, sc);
    if (std::abs(whole - split) <= 1e-10 && std::abs(viaParts - chained) <= 1e-10) return {};
    return case_tag("identities", seed, i) + "chain M " + std::to_string(m) + " mask " +
           std::to_string(s) + " mi " + fmt12(whole) + " split " + fmt12(split) + " coupling " +
           fmt12(viaParts) + " chained " + fmt12(chained);
  });
  return out;
}

SuiteResult suite_reduction(std::uint64_t seed) {
  SuiteResult out{"reduction", 0, 0, {}};
  parallel_cases(out, 1000, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 4000 + static_cast<std::uint64_t>(i));
    int m = 2 + static_cast<int>(rng() % 2);
    int kin = 2 + static_cast<int>(rng() % 2);
    int kout = 2 + static_cast<int>(rng() % 2);
    OrbitIndex orbits(m, kin);

    // Permutation-invariant channel: one random output row per orbit.
    DiscreteMac mac{m, kin, kout, std::vector<double>(0)};
    mac.rows.resize(mac.inputs() * static_cast<std::size_t>(kout));
    std::vector<std::vector<double>> orbit_rows;
    orbit_rows.reserve(static_cast<std::size_t>(orbits.orbits()));
    for (int o = 0; o < orbits.orbits(); ++o)
      orbit_rows.push_back(random_simplex(rng, static_cast<std::size_t>(kout)));
    for (std::size_t x = 0; x < mac.inputs(); ++x) {
      const std::vector<double>& row = orbit_rows[static_cast<std::size_t>(orbits.orbit_of[x])];
      std::copy(row.begin(), row.end(), mac.rows.begin() + x * static_cast<std::size_t>(kout));
    }

    SymmetricPmf pmf =
        orbits.pmf_from_weights(random_simplex(rng, static_cast<std::size_t>(orbits.orbits())));
    JointPmf joint = pmf.joint();
    double fronthaul = std::uniform_real_distribution<double>(0.0, 1.5)(rng);

    std::vector<int> all = mask_to_axes((1u << m) - 1u);
    double coupling = multi_information(joint, all);
    double forward = input_output_mi(joint, mac);

    for (int probe = 0; probe < 3; ++probe) {
      double r = std::uniform_real_distribution<double>(0.0, 2.5)(rng);
      double a = std::uniform_real_distribution<double>(0.0, 2.5)(rng);
      std::vector<double> rates(static_cast<std::size_t>(m), r / m);
      std::vector<double> aux(static_cast<std::size_t>(m), a / m);
      bool full = marton_region_feasible(mac, joint, fronthaul, rates, aux);
      const double tol = 1e-9;
      bool reduced = r / m + a / m <= fronthaul + tol && a >= coupling - tol &&
                     r + a <= forward + coupling + tol;
      if (full != reduced)
        return case_tag("reduction", seed, i) + "M " + std::to_string(m) + " C " +
               fmt12(fronthaul) + " r " + fmt12(r) + " a " + fmt12(a) + " full " +
               std::to_string(full) + " reduced " + std::to_string(reduced);
    }
    return {};
  });
  return out;
}

GaussianNetwork random_net(std::mt19937_64& rng) {
  GaussianNetwork net;
  net.relays = 2 + static_cast<int>(rng() % 5);
  net.power = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
  return net;
}

// Low power can leave the provably tight window empty (the zero-noise
// correlation falls below the window's lower corner), so windowed suites
// resample until the interval has width.
GaussianNetwork random_windowed_net(std::mt19937_64& rng, RegimeReport& rep) {
  while (true) {
    GaussianNetwork net = random_net(rng);
    rep = regimes(net.relays, net.power);
    if (rep.c_u > rep.c_l + 1e-9) {
      net.fronthaul_bits = std::uniform_real_distribution<double>(rep.c_l, rep.c_u)(rng);
      return net;
    }
  }
}

SuiteResult suite_sandwich(std::uint64_t seed) {
  SuiteResult out{"sandwich", 0, 0, {}};
  parallel_cases(out, 200, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 5000 + static_cast<std::uint64_t>(i));
    GaussianNetwork net = random_net(rng);
    double coop = 0.5 * std::log2(1.0 + static_cast<double>(net.relays) * net.relays * net.power);
    net.fronthaul_bits = std::uniform_real_distribution<double>(0.0, 1.2 * coop)(rng);
    double lb = lower_bound(net).rate_bits;
    double ub = upper_bound(net).rate_bits;
    double cap = std::min(net.relays * net.fronthaul_bits, coop);
    if (lb >= 0.0 && lb <= ub + 1e-9 && ub <= cap + 1e-6) return {};
    return case_tag("sandwich", seed, i) + "M " + std::to_string(net.relays) + " P " +
           fmt12(net.power) + " C " + fmt12(net.fronthaul_bits) + " lb " + fmt12(lb) + " ub " +
           fmt12(ub) + " cap " + fmt12(cap);
  });
  return out;
}

SuiteResult suite_window(std::uint64_t seed) {
  SuiteResult out{"window", 0, 0, {}};
  parallel_cases(out, 50, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 6000 + static_cast<std::uint64_t>(i));
    RegimeReport rep;
    GaussianNetwork net = random_windowed_net(rng, rep);
    TightnessResult tr = tightness_check(net);
    if (tr.predicted && tr.tight && tr.gap_bits <= 1e-4) return {};
    return case_tag("window", seed, i) + "M " + std::to_string(net.relays) + " P " +
           fmt12(net.power) + " C " + fmt12(net.fronthaul_bits) + " gap " + fmt12(tr.gap_bits) +
           " predicted " + std::to_string(tr.predicted);
  });
  return out;
}

SuiteResult suite_noise_match(std::uint64_t seed) {
  SuiteResult out{"noise-match", 0, 0, {}};
  parallel_cases(out, 20, [&](int i) -> std::string {
    auto rng = stream_rng(seed, 7000 + static_cast<std::uint64_t>(i));
    RegimeReport rep;
    GaussianNetwork net = random_windowed_net(rng, rep);
    LowerBoundResult lb = lower_bound(net);
    double noise = n_choice(net.relays, net.power, lb.rho);
    double resid = noise >= 0.0 ? gaussian::conditional_multi_information_bits(
                                      net.relays, net.power, lb.rho, noise)
                                : 1.0;
    if (noise >= 0.0 && std::abs(resid) <= 1e-9) return {};
    return case_tag("noise-match", seed, i) + "M " + std::to_string(net.relays) + " P " +
           fmt12(net.power) + " C " + fmt12(net.fronthaul_bits) + " rho " + fmt12(lb.rho) +
           " N " + fmt12(noise) + " residual " + fmt12(resid);
  });
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "reduction", "sandwich",
                                             "window",     "detform",   "noise-match"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "identities") return suite_identities(seed);
  if (name == "reduction") return suite_reduction(seed);
  if (name == "sandwich") return suite_sandwich(seed);
  if (name == "window") return suite_window(seed);
  if (name == "detform") return suite_detform(seed);
  if (name == "noise-match") return suite_noise_match(seed);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed) {
  std::vector<SuiteResult> results;
  if (name == "all") {
    for (const std::string& s : suite_names()) results.push_back(run_suite(s, seed));
  } else {
    results.push_back(run_suite(name, seed));
  }
  return results;
}

}  // namespace crancap
