#include "canon/factorization.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "canon/debranges_transform.hpp"
#include "canon/errors.hpp"
#include "canon/krein_inverse.hpp"

namespace canon {

DiscreteWienerHopf build_toeplitz(const SpectralMeasure& mu, std::size_t N, double h) {
  require_absolutely_continuous(mu);
  if (N < 1 || !(h > 0.0)) throw DomainError("build_toeplitz needs N >= 1 and h > 0");
  const Weight& w = mu.density;
  DiscreteWienerHopf out;
  out.N = N;
  out.h = h;
  out.c1 = w.lower_bound();
  out.c2 = w.upper_bound();
  const auto n = static_cast<Eigen::Index>(N);
  if (w.kind() == Weight::Kind::constant) {
    out.W = w(0.0) * Eigen::MatrixXd::Identity(n, n);
  } else {
    const Accelerant k = accelerant_samples(w, h, N);
    out.W.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        out.W(i, j) = (i == j ? 1.0 : 0.0) + h * k.values[static_cast<std::size_t>(std::abs(i - j))];
      }
    }
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(out.W, Eigen::EigenvaluesOnly).eigenvalues();
  out.eig_min = ev.minCoeff();
  out.eig_max = ev.maxCoeff();
  if (!(out.eig_min > 0.0)) {
    throw SpectralPositivityError("Toeplitz matrix is not positive definite; the symbol violates c1 > 0");
  }
  return out;
}

Eigen::MatrixXd cholesky_oracle(const DiscreteWienerHopf& Wh) {
  Eigen::LLT<Eigen::MatrixXd> llt(Wh.W);
  if (llt.info() != Eigen::Success) throw FactorizationError("matrix is not positive definite");
  return llt.matrixL();
}

ChainReport chain_preservation_check(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw DomainError("chain check needs a square matrix");
  const Eigen::Index n = A.rows();
  ChainReport rep;
  // S(k) = sum of A_ij^2 over i >= k, j < k.
  double S = 0.0, best = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    S -= A.row(k).head(k).squaredNorm();
    S += A.col(k).tail(n - k - 1).squaredNorm();
    best = std::max(best, S);
  }
  rep.leakage = std::sqrt(std::max(best, 0.0));
  rep.min_diag = n > 0 ? A.diagonal().cwiseAbs().minCoeff() : 0.0;
  return rep;
}

Eigen::MatrixXcd wave_coefficients(const Hamiltonian& H) {
  require_valid(H);
  if (!H.unimodular()) throw DomainError("wave coefficients need a Hamiltonian flagged det H = 1");
  const std::size_t N = H.cell_count();
  const double w0 = H.grid().width(0);
  for (std::size_t c = 1; c < N; ++c) {
    if (std::abs(H.grid().width(c) - w0) > 1e-12 * w0) throw DomainError("wave coefficients need uniform cells");
  }
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
  const cplx I(0.0, 1.0);
  CellMatrix S = sqrt_psd_2x2(H.cell(0));
  G(0, 0) = S.h1 - I * S.h;  // a11 - i a21
  for (Eigen::Index c = 0; c + 1 < n; ++c) {
    const CellMatrix Sn = sqrt_psd_2x2(H.cell(static_cast<std::size_t>(c + 1)));
    // B = Sn S^{-1}; det S = 1 so S^{-1} = [[s2, -s], [-s, s1]].
    const double b11 = Sn.h1 * S.h2 - Sn.h * S.h, b12 = -Sn.h1 * S.h + Sn.h * S.h1;
    const double b21 = Sn.h * S.h2 - Sn.h2 * S.h, b22 = -Sn.h * S.h + Sn.h2 * S.h1;
    const cplx p = 0.5 * cplx(b11 + b22, b12 - b21);
    const cplx q = 0.5 * cplx(b11 - b22, -(b12 + b21));
    for (Eigen::Index k = 0; k <= c; ++k) {
      G(c + 1, k + 1) += p * G(c, k);
      G(c + 1, k) += q * std::conj(G(c, c - k));
    }
    S = Sn;
  }
  return G;
}

FactorizationReport factor_via_transform(const SpectralMeasure& mu, double R, std::size_t N) {
  if (!(R > 0.0) || N < 2) throw DomainError("factorization needs R > 0 and N >= 2");
  const double h = R / static_cast<double>(N);
  const DiscreteWienerHopf Wh = build_toeplitz(mu, N, h);
  const Hamiltonian H = inverse_spectral(mu, 0.5 * R, N);
  const Eigen::MatrixXcd G = wave_coefficients(H);

  const auto n = static_cast<Eigen::Index>(N);
  const Eigen::MatrixXcd Gt = G.transpose();
  Eigen::MatrixXcd Ac = Gt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(n, n));
  FactorizationReport rep;
  rep.A = Ac.real();
  rep.A.triangularView<Eigen::StrictlyLower>().setZero();

  rep.L = cholesky_oracle(Wh);
  rep.residual = (Wh.W - rep.A.transpose() * rep.A).norm() / Wh.W.norm();
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(rep.A).singularValues();
  rep.cond = sv.maxCoeff() / sv.minCoeff();
  rep.ill_conditioned = !(rep.cond <= 1e12);
  rep.leakage = chain_preservation_check(rep.A).leakage;
  Eigen::MatrixXd signed_A = rep.A;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (signed_A(i, i) < 0.0) signed_A.row(i) *= -1.0;
  }
  rep.oracle_deviation = (signed_A - rep.L.transpose()).norm() / rep.L.norm();
  rep.c1 = Wh.c1;
  rep.c2 = Wh.c2;
  rep.eig_min = Wh.eig_min;
  rep.eig_max = Wh.eig_max;
  if (rep.ill_conditioned) throw FactorizationError("triangular factor is ill-conditioned (cond > 1e12)");
  return rep;
}

std::string FactorizationReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "N=" << A.rows() << "\nresidual=" << residual << "\ncond=" << cond << "\nleakage=" << leakage
      << "\noracle_deviation=" << oracle_deviation << "\nc1=" << c1 << "\nc2=" << c2 << "\neig_min=" << eig_min
      << "\neig_max=" << eig_max << "\n";
  return out.str();
}

}  // namespace canon
