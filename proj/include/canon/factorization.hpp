#pragma once

#include <string>

#include <Eigen/Dense>

#include "canon/grid_hamiltonian.hpp"
#include "canon/spectral_measure.hpp"

namespace canon {

/// W = I + h [k((j - k) h)], the discretized Wiener-Hopf operator on L^2[0, N h].
struct DiscreteWienerHopf {
  std::size_t N = 0;
  double h = 0.0;
  Eigen::MatrixXd W;
  double c1 = 0.0, c2 = 0.0;  // essential bounds of the symbol
  double eig_min = 0.0, eig_max = 0.0;
};

/// Throws SpectralPositivityError when the smallest eigenvalue is <= 0.
DiscreteWienerHopf build_toeplitz(const SpectralMeasure& mu, std::size_t N, double h);

/// W = L L^T, L lower-triangular with positive diagonal. Throws FactorizationError if W is not PD.
Eigen::MatrixXd cholesky_oracle(const DiscreteWienerHopf& Wh);

struct ChainReport {
  double leakage = 0.0;   // max_k ||(I - P_k) A P_k||_F
  double min_diag = 0.0;  // min_k |A_kk|; nonzero means every P_k block is invertible
  bool preserves_chain(double tol = 1e-10) const { return leakage <= tol && min_diag > 0.0; }
};

/// P_k projects onto the first k coordinates.
ChainReport chain_preservation_check(const Eigen::MatrixXd& A);

/// Transform-route triangular factor: the Hamiltonian of w on N cells of [0, R/2] gives waves
/// P_t whose cell-indicator transforms are F(sum_k G_ck chi_k); A = G^{-T} and W = A^T A.
/// A is upper-triangular, i.e. A maps span(e_1..e_k) into itself for every k.
struct FactorizationReport {
  Eigen::MatrixXd A;
  Eigen::MatrixXd L;  // Cholesky oracle factor
  double residual = 0.0;         // ||W - A^T A||_F / ||W||_F
  double cond = 0.0;             // sigma_max(A) / sigma_min(A)
  double leakage = 0.0;
  double oracle_deviation = 0.0;  // ||A - L^T||_F / ||L||_F after making diag(A) positive
  double c1 = 0.0, c2 = 0.0;
  double eig_min = 0.0, eig_max = 0.0;
  bool ill_conditioned = false;

  std::string to_text() const;
};

FactorizationReport factor_via_transform(const SpectralMeasure& mu, double R, std::size_t N);

/// G with rows = eta-coefficients of P_{2 t_c}(z) = A_c(e^{2 i z dt}) for a Hamiltonian on uniform cells.
Eigen::MatrixXcd wave_coefficients(const Hamiltonian& H);

}  // namespace canon
