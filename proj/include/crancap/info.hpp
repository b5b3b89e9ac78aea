#pragma once

#include <span>

#include "crancap/pmf.hpp"

namespace crancap {

// H(p) = -sum p log2 p, with 0 log 0 = 0. Accumulated in nats, converted
// to bits once at the end.
double entropy_bits(std::span<const double> p);

// Entropy of the marginal over the given (strictly ascending) axes.
double subset_entropy_bits(const JointPmf& pmf, std::span<const int> axes);

// I(X_S) = sum_{m in S} H(X_m) - H(X_S); zero for |S| <= 1.
double multi_information(const JointPmf& pmf, std::span<const int> subset);
double multi_information(const SymmetricPmf& pmf, std::span<const int> subset);

// I(X_S | U) for a joint table over (X_1..X_M, U) with U as the last axis:
// sum_{m in S} H(X_m | U) - H(X_S | U).
double conditional_multi_information(const JointPmf& joint_xu, std::span<const int> subset);

// I(X_A ; X_B) between disjoint tuples = H(X_A) + H(X_B) - H(X_A X_B).
double tuple_mutual_information(const JointPmf& pmf, std::span<const int> axes_a,
                                std::span<const int> axes_b);

// Joint over (X_1..X_M, Y) induced by p(x) and the channel.
JointPmf joint_with_output(const JointPmf& pmf, const DiscreteMac& mac);

// I(X_A ; Y | X_B) from a joint over (X_1..X_M, Y); A and B are disjoint
// relay-axis lists and Y is the last axis.
double conditional_mi_with_output(const JointPmf& joint_xy, std::span<const int> axes_a,
                                  std::span<const int> axes_b);

// I(X_1..X_M ; Y) for the given input pmf and channel.
double input_output_mi(const JointPmf& pmf, const DiscreteMac& mac);

// Average of the joint over all M! coordinate permutations.
SymmetricPmf symmetrize(const JointPmf& joint);

}  // namespace crancap
