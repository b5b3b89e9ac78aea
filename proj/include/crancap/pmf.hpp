#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crancap {

// Joint pmf over a tuple of finite variables, stored flat. Axis 0 is the
// most significant digit of the index (relay-major); an auxiliary variable
// such as a channel output or U is appended as the last, least significant
// axis.
struct JointPmf {
  std::vector<int> card;  // per-axis alphabet sizes
  std::vector<double> p;  // flat table, size = product of card

  JointPmf() = default;
  JointPmf(std::vector<int> card_, std::vector<double> p_);

  int axes() const { return static_cast<int>(card.size()); }
  std::size_t size() const { return p.size(); }

  std::size_t index(std::span<const int> tuple) const;
  std::vector<int> tuple(std::size_t index) const;

  // Sum 1 within tol, entries nonnegative.
  void validate(double tol = 1e-12) const;

  // Marginal over the given axes (ascending order kept).
  JointPmf marginal(std::span<const int> axes_keep) const;
};

JointPmf uniform_joint(std::vector<int> card);

// Product of identical single-variable marginals over `axes` axes.
JointPmf product_joint(std::span<const double> marginal, int axes);

// Joint pmf over M equal-alphabet relay inputs that is invariant under every
// permutation of the relay coordinates.
struct SymmetricPmf {
  int relays = 0;
  int alphabet = 0;
  std::vector<double> probs;  // flat, relay-major

  JointPmf joint() const;
  std::vector<double> marginal() const;  // single-relay marginal

  // Sum and permutation-invariance within tol.
  void validate(double tol = 1e-12) const;
  bool is_symmetric(double tol = 1e-12) const;

  static SymmetricPmf from_joint(const JointPmf& joint, double tol = 1e-12);
};

// Memoryless multiple-access channel p(y | x_1..x_M) with a common input
// alphabet. Rows are indexed by the relay-major input tuple.
struct DiscreteMac {
  int relays = 0;
  int in_alphabet = 0;
  int out_alphabet = 0;
  std::vector<double> rows;  // [x_index * out_alphabet + y]

  std::size_t inputs() const;
  std::span<const double> row(std::size_t x_index) const;
  void validate(double tol = 1e-12) const;

  // Invariance of p(y | x) under permutations of the input tuple.
  bool symmetric(double tol = 1e-12) const;
};

// Binary adder: Y = sum of M binary inputs, deterministic.
DiscreteMac binary_adder_mac(int relays);

// Lossless channel: Y is a copy of the full input tuple.
DiscreteMac identity_mac(int relays, int alphabet);

// All permutations of {0..m-1}; m <= 8 guarded by the caller.
std::vector<std::vector<int>> permutations(int m);

// Equivalence classes of relay tuples under coordinate permutation; a class
// is identified by the sorted tuple. Used to parameterize symmetric pmfs by
// one weight per class.
struct OrbitIndex {
  int relays = 0;
  int alphabet = 0;
  std::vector<int> orbit_of;          // tuple index -> orbit id
  std::vector<int> orbit_size;        // orbit id -> number of tuples
  std::vector<std::size_t> exemplar;  // orbit id -> one member tuple index

  OrbitIndex(int relays, int alphabet);
  int orbits() const { return static_cast<int>(orbit_size.size()); }

  // Symmetric pmf with probs[x] = weight[orbit(x)] / orbit_size.
  SymmetricPmf pmf_from_weights(std::span<const double> weights) const;
  std::vector<double> weights_from_pmf(const SymmetricPmf& pmf) const;
};

}  // namespace crancap
