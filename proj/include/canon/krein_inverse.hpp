#pragma once

#include <optional>
#include <vector>

#include "canon/grid_hamiltonian.hpp"
#include "canon/spectral_measure.hpp"

namespace canon {

/// w_j: w on [-j, j], 1 elsewhere; bounds widened to include 1.
SpectralMeasure truncate_weight(const SpectralMeasure& mu, double j);

/// Samples k(i * step), i = 0..M-1, of k(t) = (1/2pi) int (w(x) - 1) e^{-ixt} dx.
/// Only even weights are handled, so k is real and k(-t) = k(t).
struct Accelerant {
  double step = 0.0;
  std::vector<double> values;
  std::optional<double> band_limit;  // k vanishes for |t| > band_limit

  /// Linear interpolation in |t|; zero beyond the sampled range only when band-limited.
  double at(double t) const;
  double span() const { return step * static_cast<double>(values.size() - 1); }
};

/// k on the uniform grid t_i = i * step, i < count: closed form when the weight has one,
/// otherwise Gauss-Legendre panels over the compact core of w - 1.
Accelerant accelerant_samples(const Weight& w, double step, std::size_t count);

/// M uniform samples on [0, R].
Accelerant accelerant_from_weight(const SpectralMeasure& mu, double R, std::size_t M);

struct InverseSpectralResult {
  Hamiltonian H;
  double cond = 1.0;  // spectral condition number of the discretized I + K
  bool ill_conditioned = false;
};

/// Szego recursion for the Toeplitz matrix I + h [k((i - j) h)]: Phi_{n+1} = eta Phi_n - alpha_n Phi_n^*.
struct LevinsonResult {
  std::vector<double> phi_at_one;        // orthonormal phi_n(1) = (L^{-1} 1)_n with W = L L^T
  std::vector<double> verblunsky;        // alpha_0 .. alpha_{N-2}
  std::vector<double> prediction_error;  // E_n = E_{n-1} (1 - alpha_{n-1}^2)
};

/// Throws SpectralPositivityError once |alpha_n| >= 1.
LevinsonResult levinson_szego(const Accelerant& k, std::size_t N);

/// Unimodular diagonal Hamiltonian on N uniform cells of [0, R] whose spectral density is w
/// (gauge a = 0). Cell c carries diag(phi_c^2, phi_c^-2) with phi_c = phi_c(1) from the Szego
/// recursion of the Nystrom matrix I + delta [k((i - j) delta)], delta = 2R / N.
InverseSpectralResult inverse_spectral_report(const SpectralMeasure& mu, double R, std::size_t N);

inline Hamiltonian inverse_spectral(const SpectralMeasure& mu, double R, std::size_t N) {
  return inverse_spectral_report(mu, R, N).H;
}

/// The Nystrom matrix I + h [k((i - j) h)] of size N built from an accelerant with matching step.
std::vector<double> nystrom_matrix(const Accelerant& k, std::size_t N);

}  // namespace canon
