#include "crancap/gaussian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crancap::gaussian {

namespace {

void check_args(int relays, double power, double rho) {
  if (relays < 1) throw std::invalid_argument("need at least one relay");
  if (!(power > 0.0)) throw std::domain_error("power must be positive");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("rho must lie in [0,1]");
}

}  // namespace

double det(int relays, double power, double rho) {
  check_args(relays, power, rho);
  return std::pow(power, relays) * std::pow(1.0 - rho, relays - 1) *
         (1.0 + (relays - 1) * rho);
}

std::vector<double> covariance(int relays, double power, double rho) {
  check_args(relays, power, rho);
  std::size_t m = static_cast<std::size_t>(relays);
  std::vector<double> k(m * m, rho * power);
  for (std::size_t i = 0; i < m; ++i) k[i * m + i] = power;
  return k;
}

double multi_information_bits(int relays, double rho) {
  check_args(relays, 1.0, rho);
  if (relays == 1) return 0.0;
  if (rho == 1.0) return std::numeric_limits<double>::infinity();
  return -0.5 * ((relays - 1) * std::log2(1.0 - rho) + std::log2(1.0 + (relays - 1) * rho));
}

double conditional_multi_information_bits(int relays, double power, double rho, double noise) {
  check_args(relays, power, rho);
  if (!(noise >= 0.0)) throw std::domain_error("noise variance must be nonnegative");
  if (relays == 1) return 0.0;
  if (rho == 1.0) return std::numeric_limits<double>::infinity();

  // cov(X_m, U) = P(1+(M-1)rho), var(U) = M P (1+(M-1)rho) + 1 + N.
  // Conditional covariance = P(1-rho) I + (P rho - c^2/v) J, so
  //   var(X_m|U)   = P - c^2/v
  //   det cond cov = (P(1-rho))^(M-1) (P(1-rho) + M (P rho - c^2/v))
  double m = static_cast<double>(relays);
  double c = power * (1.0 + (m - 1.0) * rho);
  double v = m * c + 1.0 + noise;
  double shrink = c * c / v;
  double marg = power - shrink;
  double a = power * (1.0 - rho);
  double last = a + m * (power * rho - shrink);
  return 0.5 * (m * std::log2(marg) - (m - 1.0) * std::log2(a) - std::log2(last));
}

}  // namespace crancap::gaussian
