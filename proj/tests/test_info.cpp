#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "crancap/gaussian.hpp"
#include "crancap/info.hpp"
#include "crancap/pmf.hpp"
#include "oracles.hpp"

using namespace crancap;

namespace {

JointPmf random_joint(std::mt19937_64& rng, std::vector<int> card) {
  std::size_t n = 1;
  for (int c : card) n *= static_cast<std::size_t>(c);
  return JointPmf(std::move(card), oracle::random_simplex(rng, n));
}

}  // namespace

TEST_CASE("entropy basics") {
  std::vector<double> unif{0.25, 0.25, 0.25, 0.25};
  CHECK(entropy_bits(unif) == doctest::Approx(2.0).epsilon(1e-14));
  std::vector<double> det{1.0, 0.0};
  CHECK(entropy_bits(det) == doctest::Approx(0.0).epsilon(1e-14));
  std::vector<double> tri{0.25, 0.5, 0.25};
  CHECK(entropy_bits(tri) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("multi-information frozen examples") {
  // fully correlated uniform binary pair: I = 1 bit
  JointPmf corr({2, 2}, {0.5, 0.0, 0.0, 0.5});
  std::vector<int> s01{0, 1};
  CHECK(multi_information(corr, s01) == doctest::Approx(1.0).epsilon(1e-12));

  // independent uniform pair: I = 0
  JointPmf ind({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(multi_information(ind, s01) == doctest::Approx(0.0).epsilon(1e-12));

  // singletons and empty subsets carry no multi-information
  CHECK(multi_information(corr, std::vector<int>{0}) == 0.0);
  CHECK(multi_information(corr, std::vector<int>{}) == 0.0);
}

TEST_CASE("multi-information matches enumeration oracle on random joints") {
  std::mt19937_64 rng(7101);
  for (int it = 0; it < 200; ++it) {
    int m = 2 + static_cast<int>(rng() % 3);  // 2..4 relays
    int k = 2 + static_cast<int>(rng() % 2);  // alphabet 2..3
    JointPmf j = random_joint(rng, std::vector<int>(static_cast<std::size_t>(m), k));
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      std::vector<int> subset;
      for (int a = 0; a < m; ++a)
        if (mask >> a & 1u) subset.push_back(a);
      double got = multi_information(j, subset);
      double want = oracle::multi_information(j.p, j.card, subset);
      CHECK(got == doctest::Approx(want).epsilon(1e-11));
      CHECK(got >= -1e-11);
    }
  }
}

TEST_CASE("multi-information vanishes on product pmfs") {
  std::mt19937_64 rng(7102);
  for (int it = 0; it < 50; ++it) {
    int m = 2 + static_cast<int>(rng() % 3);
    auto marg = oracle::random_simplex(rng, 3);
    JointPmf j = product_joint(marg, m);
    std::vector<int> all;
    for (int a = 0; a < m; ++a) all.push_back(a);
    CHECK(multi_information(j, all) == doctest::Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("conditional multi-information") {
  std::mt19937_64 rng(7103);

  SUBCASE("independent U leaves the value unchanged") {
    for (int it = 0; it < 30; ++it) {
      JointPmf x = random_joint(rng, {2, 2, 2});
      auto u = oracle::random_simplex(rng, 3);
      std::vector<double> p;
      for (double px : x.p)
        for (double pu : u) p.push_back(px * pu);
      JointPmf xu({2, 2, 2, 3}, p);
      std::vector<int> s{0, 1, 2};
      CHECK(conditional_multi_information(xu, s) ==
            doctest::Approx(multi_information(x, s)).epsilon(1e-10));
    }
  }

  SUBCASE("U a copy of the whole tuple zeroes it") {
    JointPmf x = random_joint(rng, {2, 2});
    std::vector<double> p(x.size() * x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) p[i * x.size() + i] = x.p[i];
    JointPmf xu({2, 2, 4}, p);
    std::vector<int> s{0, 1};
    CHECK(conditional_multi_information(xu, s) == doctest::Approx(0.0).epsilon(1e-11));
  }

  SUBCASE("matches the conditional entropy expansion") {
    for (int it = 0; it < 30; ++it) {
      JointPmf xu = random_joint(rng, {2, 2, 2});  // two relays plus binary U
      std::vector<int> s{0, 1};
      double got = conditional_multi_information(xu, s);
      // sum_m H(X_m,U) - H(X_S,U) - (|S|-1)H(U), all via the oracle
      double want = oracle::subset_entropy(xu.p, xu.card, {0, 2}) +
                    oracle::subset_entropy(xu.p, xu.card, {1, 2}) -
                    oracle::subset_entropy(xu.p, xu.card, {0, 1, 2}) -
                    oracle::subset_entropy(xu.p, xu.card, {2});
      CHECK(got == doctest::Approx(want).epsilon(1e-10));
      CHECK(got >= -1e-11);
    }
  }
}

TEST_CASE("symmetrize") {
  // frozen 2x2 example: off-diagonal entries average
  JointPmf j({2, 2}, {0.5, 0.3, 0.1, 0.1});
  SymmetricPmf s = symmetrize(j);
  CHECK(s.probs[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.probs[1] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(s.probs[2] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(s.probs[3] == doctest::Approx(0.1).epsilon(1e-14));

  // symmetrize is idempotent and projects onto permutation invariance
  std::mt19937_64 rng(7104);
  for (int it = 0; it < 20; ++it) {
    JointPmf r = random_joint(rng, {3, 3, 3});
    SymmetricPmf sym = symmetrize(r);
    CHECK(sym.is_symmetric(1e-12));
    SymmetricPmf twice = symmetrize(sym.joint());
    for (std::size_t i = 0; i < sym.probs.size(); ++i)
      CHECK(twice.probs[i] == doctest::Approx(sym.probs[i]).epsilon(1e-12));
  }

  // a symmetric input is a fixed point
  JointPmf fixed({2, 2}, {0.4, 0.1, 0.1, 0.4});
  SymmetricPmf sf = symmetrize(fixed);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(sf.probs[i] == doctest::Approx(fixed.p[i]).epsilon(1e-14));
}

TEST_CASE("symmetric pmf validation catches asymmetry") {
  SymmetricPmf bad{2, 2, {0.5, 0.3, 0.1, 0.1}};
  CHECK(!bad.is_symmetric(1e-12));
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("channel helpers") {
  DiscreteMac adder = binary_adder_mac(2);
  adder.validate();
  CHECK(adder.symmetric());

  // independent uniform inputs on the adder: I(X;Y) = H(1/4,1/2,1/4) = 1.5
  JointPmf ind({2, 2}, {0.25, 0.25, 0.25, 0.25});
  CHECK(input_output_mi(ind, adder) == doctest::Approx(1.5).epsilon(1e-12));

  // fully correlated inputs: Y in {0,2} uniform, 1 bit
  JointPmf corr({2, 2}, {0.5, 0.0, 0.0, 0.5});
  CHECK(input_output_mi(corr, adder) == doctest::Approx(1.0).epsilon(1e-12));

  // an asymmetric channel is detected
  DiscreteMac asym{2, 2, 2, {1, 0, 1, 0, 0, 1, 0, 1}};
  asym.validate();
  CHECK(!asym.symmetric());
}

TEST_CASE("equicorrelated determinant closed form") {
  // frozen: M=3, P=1, rho=0.5 -> 0.25 * 2 = 0.5
  CHECK(gaussian::det(3, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  // rho = 0 -> P^M; rho = 1 -> singular
  CHECK(gaussian::det(4, 2.0, 0.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(gaussian::det(4, 2.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));

  // against the dense LU oracle
  std::mt19937_64 rng(7105);
  std::uniform_real_distribution<double> pdist(0.1, 10.0);
  std::uniform_real_distribution<double> rdist(0.0, 0.99);
  for (int it = 0; it < 100; ++it) {
    int m = 1 + static_cast<int>(rng() % 8);
    double power = pdist(rng);
    double rho = rdist(rng);
    double closed = gaussian::det(m, power, rho);
    double direct = oracle::lu_det(gaussian::covariance(m, power, rho), m);
    CHECK(closed == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("equicorrelated multi-information") {
  CHECK(gaussian::multi_information_bits(2, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  // frozen: M=2, rho=0.5 -> 0.5*log2(4/3)
  CHECK(gaussian::multi_information_bits(2, 0.5) ==
        doctest::Approx(0.5 * std::log2(4.0 / 3.0)).epsilon(1e-14));
  // frozen: M=3, rho=0.5 -> -0.5*log2(0.25*2) = 0.5
  CHECK(gaussian::multi_information_bits(3, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::isinf(gaussian::multi_information_bits(3, 1.0)));
  CHECK_THROWS_AS(gaussian::multi_information_bits(3, 1.5), std::domain_error);

  // nondecreasing in rho
  double prev = -1.0;
  for (int i = 0; i <= 50; ++i) {
    double v = gaussian::multi_information_bits(4, i / 51.0);
    CHECK(v >= prev - 1e-13);
    prev = v;
  }
}

TEST_CASE("gaussian mutual information agrees with quadrature") {
  // I(X1;X2) for the bivariate unit-variance pair with rho = 0.5, by direct
  // numerical integration of f log2(f/(f1 f2)).
  const double rho = 0.5;
  const double step = 0.01;
  const double lim = 8.0;
  double acc = 0.0;
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(1.0 - rho * rho));
  for (double x = -lim; x <= lim; x += step) {
    for (double y = -lim; y <= lim; y += step) {
      double q = (x * x - 2.0 * rho * x * y + y * y) / (2.0 * (1.0 - rho * rho));
      double f = norm * std::exp(-q);
      if (f < 1e-300) continue;
      double f1 = std::exp(-x * x / 2.0) / std::sqrt(2.0 * std::numbers::pi);
      double f2 = std::exp(-y * y / 2.0) / std::sqrt(2.0 * std::numbers::pi);
      acc += f * std::log2(f / (f1 * f2)) * step * step;
    }
  }
  CHECK(gaussian::multi_information_bits(2, rho) == doctest::Approx(acc).epsilon(1e-4));
}

TEST_CASE("conditional gaussian multi-information sanity") {
  // with no observation shrinkage as N -> infinity it approaches the
  // unconditional value
  double uncond = gaussian::multi_information_bits(3, 0.4);
  double cond = gaussian::conditional_multi_information_bits(3, 1.0, 0.4, 1e12);
  CHECK(cond == doctest::Approx(uncond).epsilon(1e-6));

  // rho = 0 leaves nonnegative residual dependence induced by conditioning
  CHECK(gaussian::conditional_multi_information_bits(2, 1.0, 0.0, 1.0) >= 0.0);
  CHECK(std::isinf(gaussian::conditional_multi_information_bits(2, 1.0, 1.0, 1.0)));
}

TEST_CASE("tuple identities on random joints") {
  std::mt19937_64 rng(7106);
  for (int it = 0; it < 200; ++it) {
    int m = 2 + static_cast<int>(rng() % 3);
    int k = 2 + static_cast<int>(rng() % 2);
    JointPmf j = random_joint(rng, std::vector<int>(static_cast<std::size_t>(m), k));
    // I(X_{S u T}) = I(X_S) + I(X_T) + I(X_S;X_T) over random disjoint S,T
    for (int rep = 0; rep < 4; ++rep) {
      unsigned sm = static_cast<unsigned>(rng() % (1u << m));
      unsigned tm = static_cast<unsigned>(rng() % (1u << m)) & ~sm;
      std::vector<int> S, T, U;
      for (int a = 0; a < m; ++a) {
        if (sm >> a & 1u) S.push_back(a);
        if (tm >> a & 1u) T.push_back(a);
        if ((sm | tm) >> a & 1u) U.push_back(a);
      }
      double lhs = multi_information(j, U);
      double rhs = multi_information(j, S) + multi_information(j, T) +
                   tuple_mutual_information(j, S, T);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    // chain over the full set: I(X_M) = sum_j I(X_{1..j};X_{j+1})
    std::vector<int> all;
    for (int a = 0; a < m; ++a) all.push_back(a);
    double chain = 0.0;
    for (int jx = 1; jx < m; ++jx) {
      std::vector<int> head(all.begin(), all.begin() + jx);
      std::vector<int> next{all[static_cast<std::size_t>(jx)]};
      chain += tuple_mutual_information(j, head, next);
    }
    CHECK(chain == doctest::Approx(multi_information(j, all)).epsilon(1e-9));
  }
}

TEST_CASE("orbit parameterization round trips") {
  OrbitIndex oi(3, 2);
  CHECK(oi.orbits() == 4);  // multisets of size 3 over {0,1}
  std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  SymmetricPmf s = oi.pmf_from_weights(w);
  s.validate(1e-12);
  auto back = oi.weights_from_pmf(s);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-12));
}
