#pragma once

#include <vector>

namespace crancap::gaussian {

// Equicorrelated covariance: diagonal P, off-diagonal rho*P. Eigenvalues are
// P(1-rho) with multiplicity M-1 and P(1+(M-1)rho), hence
//   det = P^M (1-rho)^(M-1) (1+(M-1)rho).
double det(int relays, double power, double rho);

// Dense M x M covariance with the same entries, row-major.
std::vector<double> covariance(int relays, double power, double rho);

// Multi-information of the equicorrelated vector in bits:
//   I = 0.5 log2(P^M / det) = -0.5 log2((1-rho)^(M-1) (1+(M-1)rho)).
// Independent of P. Returns +infinity at rho = 1.
double multi_information_bits(int relays, double rho);

// Multi-information of the inputs conditioned on U = sum X_m + Z + Z_N with
// unit-variance Z and independent noise Z_N of variance N, in bits. Closed
// form from the conditional covariance; +infinity at rho = 1.
double conditional_multi_information_bits(int relays, double power, double rho, double noise);

}  // namespace crancap::gaussian
