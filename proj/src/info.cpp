#include "crancap/info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace crancap {

double entropy_bits(std::span<const double> p) {
  double h_nats = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::domain_error("negative or NaN probability");
    if (v > 0.0) h_nats -= v * std::log(v);
  }
  return h_nats / std::numbers::ln2;
}

double subset_entropy_bits(const JointPmf& pmf, std::span<const int> axes) {
  if (axes.empty()) return 0.0;
  JointPmf m = pmf.marginal(axes);
  return entropy_bits(m.p);
}

namespace {

void check_subset(const JointPmf& pmf, std::span<const int> subset, int max_axis) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= max_axis) throw std::domain_error("subset axis out of range");
    if (i > 0 && subset[i] <= subset[i - 1])
      throw std::invalid_argument("subset axes must be strictly ascending");
  }
  (void)pmf;
}

}  // namespace

double multi_information(const JointPmf& pmf, std::span<const int> subset) {
  check_subset(pmf, subset, pmf.axes());
  if (subset.size() <= 1) return 0.0;
  double sum_singles = 0.0;
  for (int a : subset) {
    int axis[1] = {a};
    sum_singles += subset_entropy_bits(pmf, axis);
  }
  return sum_singles - subset_entropy_bits(pmf, subset);
}

double multi_information(const SymmetricPmf& pmf, std::span<const int> subset) {
  return multi_information(pmf.joint(), subset);
}

double conditional_multi_information(const JointPmf& joint_xu, std::span<const int> subset) {
  int u_axis = joint_xu.axes() - 1;
  if (u_axis < 1) throw std::invalid_argument("joint must have at least one relay axis plus U");
  check_subset(joint_xu, subset, u_axis);
  if (subset.size() <= 1) return 0.0;

  // I(X_S|U) = sum_m H(X_m,U) - H(X_S,U) - (|S|-1) H(U)
  int uax[1] = {u_axis};
  double h_u = subset_entropy_bits(joint_xu, uax);
  double acc = 0.0;
  for (int a : subset) {
    int pair[2] = {a, u_axis};
    acc += subset_entropy_bits(joint_xu, pair);
  }
  std::vector<int> su(subset.begin(), subset.end());
  su.push_back(u_axis);
  acc -= subset_entropy_bits(joint_xu, su);
  acc -= static_cast<double>(subset.size() - 1) * h_u;
  return acc;
}

double tuple_mutual_information(const JointPmf& pmf, std::span<const int> axes_a,
                                std::span<const int> axes_b) {
  check_subset(pmf, axes_a, pmf.axes());
  check_subset(pmf, axes_b, pmf.axes());
  std::vector<int> both(axes_a.begin(), axes_a.end());
  for (int b : axes_b) {
    for (int a : axes_a)
      if (a == b) throw std::invalid_argument("tuples must be disjoint");
    both.push_back(b);
  }
  std::sort(both.begin(), both.end());
  if (axes_a.empty() || axes_b.empty()) return 0.0;
  return subset_entropy_bits(pmf, axes_a) + subset_entropy_bits(pmf, axes_b) -
         subset_entropy_bits(pmf, both);
}

JointPmf joint_with_output(const JointPmf& pmf, const DiscreteMac& mac) {
  mac.validate();
  pmf.validate(1e-9);
  if (pmf.axes() != mac.relays) throw std::invalid_argument("pmf arity does not match channel");
  for (int c : pmf.card)
    if (c != mac.in_alphabet) throw std::invalid_argument("pmf alphabet does not match channel");
  std::vector<int> card = pmf.card;
  card.push_back(mac.out_alphabet);
  std::vector<double> p(pmf.size() * static_cast<std::size_t>(mac.out_alphabet));
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    auto row = mac.row(x);
    for (int y = 0; y < mac.out_alphabet; ++y)
      p[x * static_cast<std::size_t>(mac.out_alphabet) + static_cast<std::size_t>(y)] =
          pmf.p[x] * row[static_cast<std::size_t>(y)];
  }
  return JointPmf(std::move(card), std::move(p));
}

double conditional_mi_with_output(const JointPmf& joint_xy, std::span<const int> axes_a,
                                  std::span<const int> axes_b) {
  int y_axis = joint_xy.axes() - 1;
  if (y_axis < 1) throw std::invalid_argument("joint must include an output axis");
  check_subset(joint_xy, axes_a, y_axis);
  check_subset(joint_xy, axes_b, y_axis);
  for (int a : axes_a)
    for (int b : axes_b)
      if (a == b) throw std::invalid_argument("conditioning axes overlap");
  if (axes_a.empty()) return 0.0;

  // I(X_A;Y|X_B) = H(X_B,Y) - H(X_B) - H(X_A,X_B,Y) + H(X_A,X_B)
  std::vector<int> ab(axes_a.begin(), axes_a.end());
  ab.insert(ab.end(), axes_b.begin(), axes_b.end());
  std::sort(ab.begin(), ab.end());
  std::vector<int> by(axes_b.begin(), axes_b.end());
  by.push_back(y_axis);
  std::vector<int> aby = ab;
  aby.push_back(y_axis);
  return subset_entropy_bits(joint_xy, by) - subset_entropy_bits(joint_xy, axes_b) -
         subset_entropy_bits(joint_xy, aby) + subset_entropy_bits(joint_xy, ab);
}

double input_output_mi(const JointPmf& pmf, const DiscreteMac& mac) {
  JointPmf jxy = joint_with_output(pmf, mac);
  std::vector<int> all_x(static_cast<std::size_t>(mac.relays));
  for (int a = 0; a < mac.relays; ++a) all_x[static_cast<std::size_t>(a)] = a;
  return conditional_mi_with_output(jxy, all_x, {});
}

SymmetricPmf symmetrize(const JointPmf& joint) {
  joint.validate(1e-9);
  if (joint.axes() < 1) throw std::invalid_argument("empty joint");
  for (int a = 1; a < joint.axes(); ++a)
    if (joint.card[static_cast<std::size_t>(a)] != joint.card[0])
      throw std::domain_error("relay alphabets differ");
  int m = joint.axes();
  int k = joint.card[0];
  auto perms = permutations(m);
  std::vector<double> avg(joint.size(), 0.0);
  std::vector<int> t(static_cast<std::size_t>(m));
  std::vector<int> pt(static_cast<std::size_t>(m));
  for (const auto& perm : perms) {
    for (std::size_t idx = 0; idx < joint.size(); ++idx) {
      std::size_t rem = idx;
      for (int a = m; a-- > 0;) {
        t[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(k));
        rem /= static_cast<std::size_t>(k);
      }
      for (int a = 0; a < m; ++a)
        pt[static_cast<std::size_t>(a)] = t[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
      avg[joint.index(pt)] += joint.p[idx];
    }
  }
  double inv = 1.0 / static_cast<double>(perms.size());
  for (double& v : avg) v *= inv;
  SymmetricPmf s{m, k, std::move(avg)};
  s.validate(1e-9);
  return s;
}

}  // namespace crancap
