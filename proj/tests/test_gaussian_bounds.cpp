#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "crancap/gaussian.hpp"
#include "crancap/gaussian_bounds.hpp"
#include "oracles.hpp"

using namespace crancap;

namespace {

// Constraint pair evaluated through the dense-covariance route: the coupling
// penalty comes from an LU determinant rather than the closed form.
std::pair<double, double> constraints_via_lu(const GaussianNetwork& net, double rho) {
  double det = oracle::lu_det(gaussian::covariance(net.relays, net.power, rho), net.relays);
  double coupling = 0.5 * std::log2(std::pow(net.power, net.relays) / det);
  double c1 = net.relays * net.fronthaul_bits - coupling;
  double c2 = 0.5 * std::log2(1.0 + net.power * net.relays * (1.0 + (net.relays - 1) * rho));
  return {c1, c2};
}

// Best achievable value by brute grid over rho.
double lower_bound_by_grid(const GaussianNetwork& net, int steps) {
  double best = 0.0;
  for (int i = 0; i < steps; ++i) {
    double rho = static_cast<double>(i) / steps;
    auto [c1, c2] = lb_constraints(net, rho);
    best = std::max(best, std::min(c1, c2));
  }
  return best;
}

}  // namespace

TEST_CASE("constraint pair frozen examples") {
  // rho = 0: no coupling penalty
  GaussianNetwork a{3, 1.0, 1.0};
  auto [c1a, c2a] = lb_constraints(a, 0.0);
  CHECK(c1a == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(c2a == doctest::Approx(0.5 * std::log2(4.0)).epsilon(1e-12));

  // M=3, P=1, C=1, rho=0.5: penalty is 0.5 bits, cut is 0.5 log2(7)
  auto [c1b, c2b] = lb_constraints(a, 0.5);
  CHECK(c1b == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(c2b == doctest::Approx(0.5 * std::log2(7.0)).epsilon(1e-12));

  // M=2, P=1, C=0.5, rho=0.5
  GaussianNetwork b{2, 1.0, 0.5};
  auto [c1c, c2c] = lb_constraints(b, 0.5);
  CHECK(c1c == doctest::Approx(1.0 - 0.5 * std::log2(4.0 / 3.0)).epsilon(1e-12));
  CHECK(c2c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constraint pair matches the LU determinant route") {
  std::mt19937_64 rng(8201);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  std::uniform_real_distribution<double> cd(0.0, 2.0);
  std::uniform_real_distribution<double> rd(0.0, 0.95);
  for (int it = 0; it < 100; ++it) {
    GaussianNetwork net{2 + static_cast<int>(rng() % 4), pd(rng), cd(rng)};
    double rho = rd(rng);
    auto [c1, c2] = lb_constraints(net, rho);
    auto [w1, w2] = constraints_via_lu(net, rho);
    CHECK(c1 == doctest::Approx(w1).epsilon(1e-9));
    CHECK(c2 == doctest::Approx(w2).epsilon(1e-9));
  }
}

TEST_CASE("constraint monotonicity in rho") {
  GaussianNetwork net{4, 2.0, 0.8};
  double prev1 = 1e300, prev2 = -1e300;
  for (int i = 0; i < 400; ++i) {
    double rho = i / 400.0;
    auto [c1, c2] = lb_constraints(net, rho);
    CHECK(c1 <= prev1 + 1e-12);
    CHECK(c2 >= prev2 - 1e-12);
    prev1 = c1;
    prev2 = c2;
  }
}

TEST_CASE("lower bound flat case") {
  // M=3, P=1, C=0.3: fronthaul 0.9 sits below the rho=0 cut of 1 bit
  GaussianNetwork net{3, 1.0, 0.3};
  LowerBoundResult r = lower_bound(net);
  CHECK(r.rate_bits == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(r.rho == 0.0);
  CHECK(r.binding == ActiveConstraint::fronthaul);

  GaussianNetwork zero{3, 1.0, 0.0};
  CHECK(lower_bound(zero).rate_bits == 0.0);
}

TEST_CASE("lower bound crossing case") {
  // M=2, P=1, C=10: crossing sits extremely close to rho=1; the rate is
  // capped by the full-correlation cut 0.5 log2(5)
  GaussianNetwork net{2, 1.0, 10.0};
  LowerBoundResult r = lower_bound(net);
  double cap = 0.5 * std::log2(5.0);
  CHECK(r.rate_bits < cap);
  CHECK(r.rate_bits == doctest::Approx(cap).epsilon(1e-6));
  CHECK(r.residual_bits <= 1e-10);
  CHECK(r.binding == ActiveConstraint::both);
  CHECK(r.rate_bits == doctest::Approx(lower_bound_by_grid(net, 1000000)).epsilon(1e-5));
}

TEST_CASE("lower bound matches dense grid scans") {
  std::mt19937_64 rng(8202);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  std::uniform_real_distribution<double> cd(0.05, 2.0);
  for (int it = 0; it < 20; ++it) {
    GaussianNetwork net{2 + static_cast<int>(rng() % 4), pd(rng), cd(rng)};
    LowerBoundResult r = lower_bound(net);
    double grid = lower_bound_by_grid(net, 1000000);
    CHECK(r.rate_bits == doctest::Approx(grid).epsilon(1e-5));
    CHECK(r.residual_bits <= 1e-10);
    if (r.rho == 0.0) CHECK(r.rate_bits == doctest::Approx(net.relays * net.fronthaul_bits).epsilon(1e-12));
    // achievable rate never exceeds the full-cooperation level
    CHECK(r.rate_bits <=
          0.5 * std::log2(1.0 + net.relays * net.relays * net.power) + 1e-9);
  }
}

TEST_CASE("upper rhs frozen example and limits") {
  GaussianNetwork net{2, 1.0, 1.0};
  // M=2, P=1, C=1, R=0, rho=0, N=0: 2 - 0 - 0 + log2(2) = 3
  CHECK(ub_rhs(net, 0.0, 0.0, 0.0) == doctest::Approx(3.0).epsilon(1e-12));
  // N -> infinity: correction terms cancel, leaving M C
  CHECK(ub_rhs(net, 0.7, 0.3, 1e12) == doctest::Approx(2.0).epsilon(1e-3));

  // strictly decreasing in R
  std::mt19937_64 rng(8203);
  std::uniform_real_distribution<double> rd(0.0, 1.0);
  std::uniform_real_distribution<double> nd(0.0, 100.0);
  for (int it = 0; it < 100; ++it) {
    double rho = rd(rng);
    double n = nd(rng);
    double r1 = 3.0 * rd(rng);
    double r2 = r1 + 0.1 + rd(rng);
    CHECK(ub_rhs(net, r2, rho, n) < ub_rhs(net, r1, rho, n));
  }
}

TEST_CASE("fixed point against a dense scan") {
  GaussianNetwork net{2, 1.0, 1.0};
  double rho = 0.5, noise = 1.0;
  double fp = ub_fixed_point(net, rho, noise);

  // locate the sign change of rhs - R at step 1e-6 around a coarse bracket
  double coarse = 0.0;
  for (double r = 0.0; r < 8.0; r += 1e-2) {
    if (ub_rhs(net, r, rho, noise) - r < 0.0) {
      coarse = r;
      break;
    }
  }
  double root = coarse;
  for (double r = coarse - 2e-2; r <= coarse + 1e-6; r += 1e-6) {
    if (ub_rhs(net, r, rho, noise) - r < 0.0) {
      root = r;
      break;
    }
  }
  CHECK(fp == doctest::Approx(root).epsilon(2e-6));

  // the fixed point solves the equation
  CHECK(ub_rhs(net, fp, rho, noise) == doctest::Approx(fp).epsilon(1e-9));

  // N -> infinity limit of the fixed point is M C
  CHECK(ub_fixed_point(net, 0.3, 1e12) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("upper bound ceilings and zero fronthaul") {
  std::mt19937_64 rng(8204);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  std::uniform_real_distribution<double> cd(0.0, 2.5);
  SolverOptions fast;
  fast.rho_grid = 128;
  for (int it = 0; it < 10; ++it) {
    GaussianNetwork net{2 + static_cast<int>(rng() % 4), pd(rng), cd(rng)};
    UpperBoundResult ub = upper_bound(net, fast);
    CHECK(ub.rate_bits <= net.relays * net.fronthaul_bits + 1e-9);
    CHECK(ub.rate_bits <=
          0.5 * std::log2(1.0 + net.relays * net.relays * net.power) + 1e-9);
    CHECK(ub.rate_bits >= -1e-12);
  }

  GaussianNetwork zero{3, 1.0, 0.0};
  CHECK(upper_bound(zero, fast).rate_bits == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bounds meet in the cut-set regime") {
  // M=3, P=1: cut-set regime runs up to C = 1/3
  for (double c : {0.05, 0.15, 0.25, 1.0 / 3.0}) {
    GaussianNetwork net{3, 1.0, c};
    LowerBoundResult lb = lower_bound(net);
    UpperBoundResult ub = upper_bound(net);
    CHECK(lb.rate_bits == doctest::Approx(3.0 * c).epsilon(1e-12));
    CHECK(ub.rate_bits == doctest::Approx(3.0 * c).epsilon(1e-6));
  }
}

TEST_CASE("bounds meet inside the provably tight window") {
  GaussianNetwork net{3, 1.0, 0.6};
  LowerBoundResult lb = lower_bound(net);
  UpperBoundResult ub = upper_bound(net);
  CHECK(ub.rate_bits >= lb.rate_bits - 1e-9);
  CHECK(ub.rate_bits - lb.rate_bits <= 1e-4);
}

TEST_CASE("sandwich on random networks") {
  std::mt19937_64 rng(8205);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  std::uniform_real_distribution<double> cd(0.0, 2.0);
  SolverOptions fast;
  fast.rho_grid = 128;
  for (int it = 0; it < 12; ++it) {
    GaussianNetwork net{2 + static_cast<int>(rng() % 4), pd(rng), cd(rng)};
    double lb = lower_bound(net, fast).rate_bits;
    double ub = upper_bound(net, fast).rate_bits;
    CHECK(lb <= ub + 1e-9);
  }
}

TEST_CASE("bounds nondecreasing in fronthaul and power") {
  SolverOptions fast;
  fast.rho_grid = 128;
  double plb = -1.0, pub = -1.0;
  for (int i = 0; i <= 10; ++i) {
    GaussianNetwork net{3, 1.0, 0.1 + 0.15 * i};
    double lb = lower_bound(net, fast).rate_bits;
    double ub = upper_bound(net, fast).rate_bits;
    CHECK(lb >= plb - 1e-9);
    CHECK(ub >= pub - 1e-9);
    plb = lb;
    pub = ub;
  }
  plb = pub = -1.0;
  for (int i = 0; i <= 8; ++i) {
    GaussianNetwork net{3, 0.2 + 0.7 * i, 0.7};
    double lb = lower_bound(net, fast).rate_bits;
    double ub = upper_bound(net, fast).rate_bits;
    CHECK(lb >= plb - 1e-9);
    CHECK(ub >= pub - 1e-9);
    plb = lb;
    pub = ub;
  }
}

TEST_CASE("regime thresholds frozen values") {
  RegimeReport r = regimes(3, 1.0);
  CHECK(r.c_c == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.rho2 == doctest::Approx(std::sqrt(8.0) / 4.0).epsilon(1e-12));
  CHECK(r.c_l == doctest::Approx(std::log2(5.5 / (0.5625 * 1.5)) / 6.0).epsilon(1e-12));
  double rr = std::sqrt(8.0) / 4.0;
  CHECK(r.c_u ==
        doctest::Approx(std::log2((1.0 + 3.0 * (1.0 + 2.0 * rr)) /
                                  ((1.0 - rr) * (1.0 - rr) * (1.0 + 2.0 * rr))) /
                        6.0)
            .epsilon(1e-12));
  CHECK(r.c_coop == doctest::Approx(0.5 * std::log2(10.0)).epsilon(1e-12));

  RegimeReport r2 = regimes(2, 1.0);
  CHECK(r2.rho2 == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
  // for two relays the tight window starts right at the cut-set threshold
  CHECK(r2.c_l == doctest::Approx(r2.c_c).epsilon(1e-12));

  // vanishing power: thresholds collapse toward 0
  RegimeReport tiny = regimes(3, 1e-8);
  CHECK(tiny.c_c == doctest::Approx(3e-8 / (2.0 * 3.0 * std::log(2.0))).epsilon(1e-4));

  // ordering across random (M, P)
  std::mt19937_64 rng(8206);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  for (int it = 0; it < 50; ++it) {
    RegimeReport rep = regimes(2 + static_cast<int>(rng() % 4), pd(rng));
    CHECK(rep.c_c <= rep.c_l + 1e-9);
    CHECK(rep.c_l <= rep.c_u + 1e-12);
    CHECK(rep.c_u <= rep.c_coop + 1e-12);
    CHECK(rep.rho2 > 0.0);
    CHECK(rep.rho2 < 1.0);
  }
}

TEST_CASE("regime classification intervals") {
  RegimeReport r = regimes(3, 1.0);
  CHECK(classify(r, 0.2) == Regime::cutset_tight);
  CHECK(classify(r, 1.0 / 3.0) == Regime::cutset_tight);
  CHECK(classify(r, 0.4) == Regime::gap_unknown_low);
  CHECK(classify(r, 0.6) == Regime::window_tight);
  CHECK(classify(r, 1.0) == Regime::gap_unknown_high);
  CHECK(classify(r, 2.0) == Regime::full_coop_tight);
}

TEST_CASE("zero-residual noise choice") {
  // frozen: M=2, P=1, rho=0.5 -> 1*0.5*1.5/0.5 - 1 = 0.5
  CHECK(n_choice(2, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // rho=1 leaves no admissible noise
  CHECK(n_choice(2, 1.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(n_choice(2, 1.0, 0.0), std::domain_error);

  // the threshold correlation is exactly where the choice hits zero
  std::mt19937_64 rng(8207);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  for (int it = 0; it < 30; ++it) {
    int m = 2 + static_cast<int>(rng() % 4);
    double p = pd(rng);
    RegimeReport rep = regimes(m, p);
    CHECK(n_choice(m, p, rep.rho2) == doctest::Approx(0.0).epsilon(1e-9));
  }

  // conditioning on the matched observation removes all input coupling
  std::uniform_real_distribution<double> rd(0.05, 0.95);
  for (int it = 0; it < 30; ++it) {
    int m = 2 + static_cast<int>(rng() % 4);
    double p = pd(rng);
    double rho = rd(rng);
    double nz = n_choice(m, p, rho);
    if (nz < 0.0) continue;
    CHECK(gaussian::conditional_multi_information_bits(m, p, rho, nz) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("crossing correlation hits the window edges") {
  std::mt19937_64 rng(8208);
  std::uniform_real_distribution<double> pd(0.25, 8.0);
  for (int it = 0; it < 10; ++it) {
    int m = 2 + static_cast<int>(rng() % 4);
    double p = pd(rng);
    RegimeReport rep = regimes(m, p);
    // at C = c_u the crossing lands on rho2
    GaussianNetwork at_cu{m, p, rep.c_u};
    CHECK(lower_bound(at_cu).rho == doctest::Approx(rep.rho2).epsilon(1e-7));
    // at C = c_l it lands on the small-correlation window edge
    if (m > 2) {
      GaussianNetwork at_cl{m, p, rep.c_l};
      double edge = (m - 2.0) / (2.0 * (m - 1.0));
      CHECK(lower_bound(at_cl).rho == doctest::Approx(edge).epsilon(1e-7));
    }
  }
}

TEST_CASE("tightness check") {
  GaussianNetwork inside{3, 1.0, 0.6};
  TightnessResult t = tightness_check(inside);
  CHECK(t.predicted);
  CHECK(t.tight);
  CHECK(std::abs(t.gap_bits) <= 1e-4);

  GaussianNetwork cut{3, 1.0, 0.2};
  TightnessResult tc = tightness_check(cut);
  CHECK(tc.predicted);
  CHECK(tc.tight);
}
