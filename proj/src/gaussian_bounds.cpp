#include "crancap/gaussian_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "crancap/gaussian.hpp"

namespace crancap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 0.5 * log2(2^(2r) + n) without overflowing 2^(2r).
double half_log2_exp2_plus(double r, double n) {
  if (n <= 0.0) return r;
  double a = 2.0 * r;
  double b = std::log2(n);
  double hi = std::max(a, b);
  double lo = std::min(a, b);
  return 0.5 * (hi + std::log2(1.0 + std::exp2(lo - hi)));
}

// Constraints as functions of u = 1 - rho; 1+(M-1)rho = M - (M-1)u.
double fronthaul_constraint_u(const GaussianNetwork& net, double u) {
  double m = static_cast<double>(net.relays);
  return m * net.fronthaul_bits +
         0.5 * ((m - 1.0) * std::log2(u) + std::log2(m - (m - 1.0) * u));
}

double cut_constraint_u(const GaussianNetwork& net, double u) {
  double m = static_cast<double>(net.relays);
  return 0.5 * std::log2(1.0 + net.power * m * (m - (m - 1.0) * u));
}

}  // namespace

void GaussianNetwork::validate() const {
  if (relays < 2) throw std::invalid_argument("need at least two relays");
  if (!(power > 0.0)) throw std::domain_error("power must be positive");
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");
}

std::pair<double, double> lb_constraints(const GaussianNetwork& net, double rho) {
  net.validate();
  if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("rho must lie in [0,1)");
  double u = 1.0 - rho;
  return {fronthaul_constraint_u(net, u), cut_constraint_u(net, u)};
}

LowerBoundResult lower_bound(const GaussianNetwork& net, const SolverOptions& opts) {
  net.validate();
  double mc = net.relays * net.fronthaul_bits;
  double cut0 = cut_constraint_u(net, 1.0);

  // Flat case: the fronthaul line already sits below the cut at rho = 0, and
  // correlation could only lower it.
  if (mc <= cut0) {
    LowerBoundResult r;
    r.rate_bits = mc;
    r.rho = 0.0;
    r.binding = ActiveConstraint::fronthaul;
    r.residual_bits = 0.0;
    return r;
  }

  // Crossing case: bisect the difference on t = ln(u). The difference is
  // strictly increasing in u, negative as u -> 0, positive at u = 1.
  auto diff = [&](double t) {
    double u = std::exp(t);
    return fronthaul_constraint_u(net, u) - cut_constraint_u(net, u);
  };
  double t_hi = 0.0;  // u = 1
  double t_lo = -1.0;
  while (diff(t_lo) > 0.0 && t_lo > -700.0) t_lo *= 2.0;
  for (int it = 0; it < 400 && t_hi - t_lo > 1e-15; ++it) {
    double t_mid = 0.5 * (t_hi + t_lo);
    (diff(t_mid) > 0.0 ? t_hi : t_lo) = t_mid;
  }
  double t = 0.5 * (t_hi + t_lo);
  double u = std::exp(t);

  LowerBoundResult r;
  r.rate_bits = cut_constraint_u(net, u);
  r.rho = 1.0 - u;
  r.binding = ActiveConstraint::both;
  r.residual_bits = std::abs(diff(t));
  if (r.residual_bits > opts.residual_tol)
    throw std::runtime_error("crossing bisection failed to meet residual tolerance");
  return r;
}

double ub_rhs(const GaussianNetwork& net, double rate_bits, double rho, double noise) {
  net.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("rho must lie in [0,1]");
  if (!(noise >= 0.0)) throw std::domain_error("noise variance must be >= 0");
  double m = static_cast<double>(net.relays);
  double spread = net.power * (m - 1.0) * (1.0 - rho) * (1.0 + (m - 1.0) * rho);
  return m * net.fronthaul_bits - (m - 1.0) * half_log2_exp2_plus(rate_bits, noise) -
         0.5 * std::log2(1.0 + noise) + 0.5 * m * std::log2(1.0 + noise + spread);
}

double ub_fixed_point(const GaussianNetwork& net, double rho, double noise, double tol) {
  net.validate();
  double m = static_cast<double>(net.relays);
  double lo = 0.0;
  double hi = m * net.fronthaul_bits +
              0.5 * m * std::log2(1.0 + noise + m * m * net.power) + 1.0;
  if (ub_rhs(net, lo, rho, noise) <= lo) return lo;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (hi + lo);
    (ub_rhs(net, mid, rho, noise) > mid ? lo : hi) = mid;
  }
  return 0.5 * (hi + lo);
}

namespace {

struct InnerResult {
  double rate = kInf;
  double noise = kInf;
};

// inf over N of the fixed point at fixed rho, over the candidate set plus a
// golden-section polish around the best candidate. Capped by the N -> inf
// limit M C, to which the noise value +inf is assigned.
InnerResult inner_min(const GaussianNetwork& net, double rho, double rho_crossing,
                      const SolverOptions& opts, std::int64_t& evals) {
  std::vector<double> cand;
  cand.push_back(0.0);
  double lr = std::log(opts.n_min);
  double ur = std::log(opts.n_max);
  double denom = std::max(1, opts.n_grid - 1);
  for (int i = 0; i < opts.n_grid; ++i)
    cand.push_back(std::exp(lr + (ur - lr) * i / denom));
  if (rho > 0.0) {
    double nz = n_choice(net.relays, net.power, rho);
    if (nz >= 0.0 && std::isfinite(nz)) cand.push_back(nz);
  }
  if (rho_crossing > 0.0) {
    double nz = n_choice(net.relays, net.power, rho_crossing);
    if (nz >= 0.0 && std::isfinite(nz)) cand.push_back(nz);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::size_t best = 0;
  double best_rate = kInf;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    double r = ub_fixed_point(net, rho, cand[i]);
    ++evals;
    if (r < best_rate) {
      best_rate = r;
      best = i;
    }
  }

  // polish between the neighbors of the best candidate (log scale when away
  // from zero)
  double lo = best > 0 ? cand[best - 1] : 0.0;
  double hi = best + 1 < cand.size() ? cand[best + 1] : cand[best] * 4.0 + 1.0;
  bool log_scale = lo > 0.0;
  double a = log_scale ? std::log(lo) : lo;
  double b = log_scale ? std::log(hi) : hi;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  auto eval_at = [&](double t) {
    double n = log_scale ? std::exp(t) : t;
    ++evals;
    return ub_fixed_point(net, rho, n);
  };
  double f1 = eval_at(x1);
  double f2 = eval_at(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eval_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eval_at(x2);
    }
  }
  double t_best = f1 < f2 ? x1 : x2;
  double n_best = log_scale ? std::exp(t_best) : t_best;
  double r_best = std::min(f1, f2);
  if (r_best < best_rate) {
    best_rate = r_best;
    cand[best] = n_best;
  }

  InnerResult out;
  double mc = net.relays * net.fronthaul_bits;
  if (mc <= best_rate) {
    out.rate = mc;
    out.noise = kInf;
  } else {
    out.rate = best_rate;
    out.noise = cand[best];
  }
  return out;
}

}  // namespace

UpperBoundResult upper_bound(const GaussianNetwork& net, const SolverOptions& opts) {
  net.validate();
  UpperBoundResult res;
  res.grid.rho_points = opts.rho_grid + 1;
  res.grid.n_points = opts.n_grid;
  res.grid.rho_tol = opts.rho_tol;

  double rho_crossing = 0.0;
  {
    LowerBoundResult lb = lower_bound(net, opts);
    rho_crossing = lb.rho;
  }

  auto value_at = [&](double rho) {
    InnerResult inner = inner_min(net, rho, rho_crossing, opts, res.grid.evals);
    double cut = cut_constraint_u(net, 1.0 - rho);
    return std::tuple<double, double, bool>(std::min(inner.rate, cut),
                                            inner.noise, cut <= inner.rate);
  };

  int g = opts.rho_grid;
  double best_val = -kInf;
  int best_i = 0;
  for (int i = 0; i <= g; ++i) {
    double rho = static_cast<double>(i) / g;
    double v = std::get<0>(value_at(rho));
    if (v > best_val) {
      best_val = v;
      best_i = i;
    }
  }

  // golden-section refinement on the bracketing interval
  double a = best_i > 0 ? static_cast<double>(best_i - 1) / g : 0.0;
  double b = best_i < g ? static_cast<double>(best_i + 1) / g : 1.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = std::get<0>(value_at(x1));
  double f2 = std::get<0>(value_at(x2));
  while (b - a > opts.rho_tol) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = std::get<0>(value_at(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = std::get<0>(value_at(x2));
    }
  }
  double rho_ref = f1 > f2 ? x1 : x2;
  double val_ref = std::max(f1, f2);

  double rho_star = best_val >= val_ref ? static_cast<double>(best_i) / g : rho_ref;
  // The grid and the refinement both stop short of a kink by up to rho_tol,
  // so probe the constraint-crossing correlation exactly. Where the bounds
  // coincide this is the maximizer.
  if (std::get<0>(value_at(rho_star)) < std::get<0>(value_at(rho_crossing)))
    rho_star = rho_crossing;
  auto [v, n, cut] = value_at(rho_star);
  res.rate_bits = v;
  res.rho = rho_star;
  res.noise = n;
  res.cut_binding = cut;
  return res;
}

RegimeReport regimes(int relays, double power) {
  GaussianNetwork probe{relays, power, 0.0};
  probe.validate();
  double m = static_cast<double>(relays);
  RegimeReport r;
  r.c_c = std::log2(1.0 + power * m) / (2.0 * m);
  r.c_l = std::log2((1.0 + m * m * power / 2.0) /
                    (std::pow(m / (2.0 * (m - 1.0)), m - 1.0) * (m / 2.0))) /
          (2.0 * m);
  double x = m - 2.0 - 1.0 / power;
  r.rho2 = (x + std::sqrt(x * x + 4.0 * (m - 1.0))) / (2.0 * (m - 1.0));
  r.c_u = std::log2((1.0 + m * power * (1.0 + (m - 1.0) * r.rho2)) /
                    (std::pow(1.0 - r.rho2, m - 1.0) * (1.0 + (m - 1.0) * r.rho2))) /
          (2.0 * m);
  r.c_coop = 0.5 * std::log2(1.0 + m * m * power);
  return r;
}

Regime classify(const RegimeReport& report, double fronthaul_bits) {
  if (!(fronthaul_bits >= 0.0)) throw std::domain_error("fronthaul capacity must be >= 0");
  if (fronthaul_bits <= report.c_c) return Regime::cutset_tight;
  if (fronthaul_bits < report.c_l) return Regime::gap_unknown_low;
  if (fronthaul_bits <= report.c_u) return Regime::window_tight;
  if (fronthaul_bits < report.c_coop) return Regime::gap_unknown_high;
  return Regime::full_coop_tight;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::cutset_tight: return "cutset-tight";
    case Regime::gap_unknown_low: return "gap-unknown-low";
    case Regime::window_tight: return "window-tight";
    case Regime::gap_unknown_high: return "gap-unknown-high";
    case Regime::full_coop_tight: return "full-coop-tight";
  }
  return "unknown";
}

double n_choice(int relays, double power, double rho) {
  if (relays < 2) throw std::invalid_argument("need at least two relays");
  if (!(power > 0.0)) throw std::domain_error("power must be positive");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::domain_error("rho must lie in (0,1]");
  double m = static_cast<double>(relays);
  return power * (1.0 - rho) * (1.0 + (m - 1.0) * rho) / rho - 1.0;
}

TightnessResult tightness_check(const GaussianNetwork& net, double tol,
                                const SolverOptions& opts) {
  TightnessResult t;
  LowerBoundResult lb = lower_bound(net, opts);
  UpperBoundResult ub = upper_bound(net, opts);
  t.gap_bits = ub.rate_bits - lb.rate_bits;
  t.tight = std::abs(t.gap_bits) <= tol;
  RegimeReport rep = regimes(net.relays, net.power);
  Regime r = classify(rep, net.fronthaul_bits);
  t.predicted = (r == Regime::cutset_tight) || (r == Regime::window_tight);
  return t;
}

}  // namespace crancap
