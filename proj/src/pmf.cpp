#include "crancap/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>

#include "crancap/util.hpp"

namespace crancap {

namespace {

std::size_t checked_table_size(std::span<const int> card) {
  std::size_t n = 1;
  for (int c : card) {
    if (c < 1) throw std::invalid_argument("axis cardinality must be >= 1");
    if (n > (std::size_t{1} << 24) / static_cast<std::size_t>(c))
      throw capacity_error("joint table too large");
    n *= static_cast<std::size_t>(c);
  }
  return n;
}

}  // namespace

JointPmf::JointPmf(std::vector<int> card_, std::vector<double> p_)
    : card(std::move(card_)), p(std::move(p_)) {
  if (checked_table_size(card) != p.size())
    throw std::invalid_argument("table size does not match cardinalities");
}

std::size_t JointPmf::index(std::span<const int> tuple) const {
  if (tuple.size() != card.size()) throw std::invalid_argument("tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t a = 0; a < card.size(); ++a) {
    if (tuple[a] < 0 || tuple[a] >= card[a]) throw std::domain_error("symbol out of range");
    idx = idx * static_cast<std::size_t>(card[a]) + static_cast<std::size_t>(tuple[a]);
  }
  return idx;
}

std::vector<int> JointPmf::tuple(std::size_t index) const {
  std::vector<int> t(card.size());
  for (std::size_t a = card.size(); a-- > 0;) {
    t[a] = static_cast<int>(index % static_cast<std::size_t>(card[a]));
    index /= static_cast<std::size_t>(card[a]);
  }
  return t;
}

void JointPmf::validate(double tol) const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::domain_error("negative or NaN probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) throw std::domain_error("probabilities do not sum to 1");
}

JointPmf JointPmf::marginal(std::span<const int> axes_keep) const {
  std::vector<int> keep(axes_keep.begin(), axes_keep.end());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= axes()) throw std::domain_error("axis out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("axes must be strictly ascending");
  }
  std::vector<int> mcard(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) mcard[i] = card[keep[i]];
  JointPmf out(mcard, std::vector<double>(checked_table_size(mcard), 0.0));

  std::vector<int> t(card.size());
  std::vector<int> mt(keep.size());
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    std::size_t rem = idx;
    for (std::size_t a = card.size(); a-- > 0;) {
      t[a] = static_cast<int>(rem % static_cast<std::size_t>(card[a]));
      rem /= static_cast<std::size_t>(card[a]);
    }
    for (std::size_t i = 0; i < keep.size(); ++i) mt[i] = t[keep[i]];
    out.p[out.index(mt)] += p[idx];
  }
  return out;
}

JointPmf uniform_joint(std::vector<int> card) {
  std::size_t n = checked_table_size(card);
  return JointPmf(std::move(card), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointPmf product_joint(std::span<const double> marginal, int axes) {
  if (axes < 1) throw std::invalid_argument("need at least one axis");
  int k = static_cast<int>(marginal.size());
  std::vector<int> card(static_cast<std::size_t>(axes), k);
  std::size_t n = checked_table_size(card);
  std::vector<double> p(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    double v = 1.0;
    std::size_t rem = idx;
    for (int a = 0; a < axes; ++a) {
      v *= marginal[rem % static_cast<std::size_t>(k)];
      rem /= static_cast<std::size_t>(k);
    }
    p[idx] = v;
  }
  return JointPmf(std::move(card), std::move(p));
}

JointPmf SymmetricPmf::joint() const {
  return JointPmf(std::vector<int>(static_cast<std::size_t>(relays), alphabet), probs);
}

std::vector<double> SymmetricPmf::marginal() const {
  std::vector<double> m(static_cast<std::size_t>(alphabet), 0.0);
  std::size_t stride = 1;
  for (int a = 1; a < relays; ++a) stride *= static_cast<std::size_t>(alphabet);
  // axis 0 marginal; by symmetry every axis has the same one
  for (std::size_t idx = 0; idx < probs.size(); ++idx)
    m[idx / stride] += probs[idx];
  return m;
}

bool SymmetricPmf::is_symmetric(double tol) const {
  JointPmf j = joint();
  std::vector<int> t(static_cast<std::size_t>(relays));
  std::vector<int> pt(static_cast<std::size_t>(relays));
  for (const auto& perm : permutations(relays)) {
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      std::size_t rem = idx;
      for (int a = relays; a-- > 0;) {
        t[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(alphabet));
        rem /= static_cast<std::size_t>(alphabet);
      }
      for (int a = 0; a < relays; ++a) pt[static_cast<std::size_t>(a)] = t[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
      if (std::abs(probs[idx] - probs[j.index(pt)]) > tol) return false;
    }
  }
  return true;
}

void SymmetricPmf::validate(double tol) const {
  if (relays < 1 || alphabet < 1) throw std::invalid_argument("empty pmf");
  if (relays > 8) throw capacity_error("too many relays for permutation checks");
  joint().validate(tol);
  if (!is_symmetric(tol)) throw std::domain_error("pmf is not permutation invariant");
}

SymmetricPmf SymmetricPmf::from_joint(const JointPmf& joint, double tol) {
  if (joint.axes() < 1) throw std::invalid_argument("empty joint");
  for (int a = 1; a < joint.axes(); ++a)
    if (joint.card[static_cast<std::size_t>(a)] != joint.card[0])
      throw std::domain_error("relay alphabets differ");
  SymmetricPmf s{joint.axes(), joint.card[0], joint.p};
  s.validate(tol);
  return s;
}

std::size_t DiscreteMac::inputs() const {
  std::size_t n = 1;
  for (int a = 0; a < relays; ++a) n *= static_cast<std::size_t>(in_alphabet);
  return n;
}

std::span<const double> DiscreteMac::row(std::size_t x_index) const {
  return {rows.data() + x_index * static_cast<std::size_t>(out_alphabet),
          static_cast<std::size_t>(out_alphabet)};
}

void DiscreteMac::validate(double tol) const {
  if (relays < 1 || in_alphabet < 1 || out_alphabet < 1) throw std::invalid_argument("empty mac");
  if (relays > 8) throw capacity_error("too many relays");
  std::size_t n = inputs();
  if (rows.size() != n * static_cast<std::size_t>(out_alphabet))
    throw std::invalid_argument("row table size mismatch");
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (double v : row(x)) {
      if (!(v >= 0.0)) throw std::domain_error("negative or NaN channel probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw std::domain_error("channel row does not sum to 1");
  }
}

bool DiscreteMac::symmetric(double tol) const {
  JointPmf shape(std::vector<int>(static_cast<std::size_t>(relays), in_alphabet),
                 std::vector<double>(inputs(), 1.0 / static_cast<double>(inputs())));
  std::vector<int> t(static_cast<std::size_t>(relays));
  std::vector<int> pt(static_cast<std::size_t>(relays));
  for (const auto& perm : permutations(relays)) {
    for (std::size_t x = 0; x < inputs(); ++x) {
      std::size_t rem = x;
      for (int a = relays; a-- > 0;) {
        t[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(in_alphabet));
        rem /= static_cast<std::size_t>(in_alphabet);
      }
      for (int a = 0; a < relays; ++a) pt[static_cast<std::size_t>(a)] = t[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])];
      std::size_t px = shape.index(pt);
      for (int y = 0; y < out_alphabet; ++y)
        if (std::abs(row(x)[static_cast<std::size_t>(y)] - row(px)[static_cast<std::size_t>(y)]) > tol)
          return false;
    }
  }
  return true;
}

DiscreteMac binary_adder_mac(int relays) {
  if (relays < 1 || relays > 8) throw std::invalid_argument("relays out of range");
  DiscreteMac mac{relays, 2, relays + 1, {}};
  mac.rows.assign(mac.inputs() * static_cast<std::size_t>(mac.out_alphabet), 0.0);
  for (std::size_t x = 0; x < mac.inputs(); ++x) {
    int sum = 0;
    std::size_t rem = x;
    for (int a = 0; a < relays; ++a) {
      sum += static_cast<int>(rem % 2);
      rem /= 2;
    }
    mac.rows[x * static_cast<std::size_t>(mac.out_alphabet) + static_cast<std::size_t>(sum)] = 1.0;
  }
  return mac;
}

DiscreteMac identity_mac(int relays, int alphabet) {
  if (relays < 1 || alphabet < 1) throw std::invalid_argument("bad identity mac shape");
  DiscreteMac mac{relays, alphabet, 0, {}};
  std::size_t n = mac.inputs();
  if (n > (1u << 12)) throw capacity_error("identity mac output alphabet too large");
  mac.out_alphabet = static_cast<int>(n);
  mac.rows.assign(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) mac.rows[x * n + x] = 1.0;
  return mac;
}

std::vector<std::vector<int>> permutations(int m) {
  if (m < 1 || m > 8) throw capacity_error("permutation enumeration limited to 8 positions");
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> all;
  do {
    all.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return all;
}

OrbitIndex::OrbitIndex(int relays_, int alphabet_) : relays(relays_), alphabet(alphabet_) {
  if (relays < 1 || alphabet < 1) throw std::invalid_argument("empty orbit index");
  std::vector<int> card(static_cast<std::size_t>(relays), alphabet);
  std::size_t n = checked_table_size(card);
  orbit_of.assign(n, -1);
  std::map<std::vector<int>, int> id_of_sorted;
  std::vector<int> t(static_cast<std::size_t>(relays));
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx;
    for (int a = relays; a-- > 0;) {
      t[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(alphabet));
      rem /= static_cast<std::size_t>(alphabet);
    }
    std::vector<int> key = t;
    std::sort(key.begin(), key.end());
    auto [it, inserted] = id_of_sorted.try_emplace(key, static_cast<int>(orbit_size.size()));
    if (inserted) {
      orbit_size.push_back(0);
      exemplar.push_back(idx);
    }
    orbit_of[idx] = it->second;
    ++orbit_size[static_cast<std::size_t>(it->second)];
  }
}

SymmetricPmf OrbitIndex::pmf_from_weights(std::span<const double> weights) const {
  if (static_cast<int>(weights.size()) != orbits())
    throw std::invalid_argument("weight count does not match orbit count");
  SymmetricPmf s{relays, alphabet, std::vector<double>(orbit_of.size())};
  for (std::size_t idx = 0; idx < orbit_of.size(); ++idx) {
    int o = orbit_of[idx];
    s.probs[idx] = weights[static_cast<std::size_t>(o)] / static_cast<double>(orbit_size[static_cast<std::size_t>(o)]);
  }
  return s;
}

std::vector<double> OrbitIndex::weights_from_pmf(const SymmetricPmf& pmf) const {
  if (pmf.relays != relays || pmf.alphabet != alphabet)
    throw std::invalid_argument("pmf shape does not match orbit index");
  std::vector<double> w(static_cast<std::size_t>(orbits()), 0.0);
  for (std::size_t idx = 0; idx < orbit_of.size(); ++idx)
    w[static_cast<std::size_t>(orbit_of[idx])] += pmf.probs[idx];
  return w;
}

}  // namespace crancap
