#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "canon/grid_hamiltonian.hpp"
#include "canon/mat2.hpp"
#include "canon/spectral_measure.hpp"
#include "canon/weights_a2.hpp"

namespace canon {

/// Unique PSD square root; closed form (A + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
CellMatrix sqrt_psd_2x2(const CellMatrix& A);

/// Psi = sqrt(H(t/2)) Theta(t/2, z) and P_t(z) = e^{itz/2} (Psi+ - i Psi-).
struct KreinWave {
  double t = 0.0;
  cplx z{};
  cplx psi_plus{};
  cplx psi_minus{};
  cplx value{};
};

/// Direct evaluation through the transfer matrix. 0 <= t <= 2 * grid end, H unimodular.
KreinWave krein_wave(const Hamiltonian& H, double t, cplx z);

/// t -> P_t(z) for one z, precomputed per cell so that values and exact integrals against
/// piecewise-linear functions cost O(1) per piece. Immutable once built.
class WaveTable {
public:
  /// Only cells needed for t <= t_limit are tabulated.
  WaveTable(const Hamiltonian& H, cplx z, double t_limit = std::numeric_limits<double>::infinity());

  cplx z() const { return z_; }
  double t_max() const { return 2.0 * nodes_[coef_.size()]; }
  cplx value(double t) const;

  /// int_a^b (fa + (fb - fa)(t - a)/(b - a)) P_t dt for [a, b] inside one wave cell.
  cplx integrate_linear(std::size_t cell, double a, double b, cplx fa, cplx fb) const;

  /// Wave cells are [2 t_c, 2 t_{c+1}].
  std::size_t cell_count() const { return coef_.size(); }
  double cell_left(std::size_t c) const { return 2.0 * nodes_[c]; }
  double cell_right(std::size_t c) const { return 2.0 * nodes_[c + 1]; }
  std::size_t cell_of(double t) const;

private:
  struct CellCoefficients {
    cplx phase;  // e^{i z t_c}
    cplx A, B;   // P = phase * (A e^{kp s} + B e^{km s}), s = t/2 - t_c
    cplx kp, km;
  };
  cplx z_;
  std::vector<double> nodes_;
  std::vector<CellCoefficients> coef_;
};

/// k_{r,lambda}(z) = (1/2pi) 2 e^{ir(z - conj lambda)/2} <J Theta(r/2, z), Theta(r/2, lambda)> / (z - conj lambda),
/// with the removable point z = conj lambda handled by a z-derivative for |z - conj lambda| < 1e-6.
cplx reproducing_kernel(const Hamiltonian& H, double r, cplx z, cplx lambda);

/// Piecewise-linear function on [0, r], possibly discontinuous between segments.
struct SampledFunction {
  struct Segment {
    double a, b;
    cplx fa, fb;
  };
  std::vector<Segment> segments;

  /// Linear interpolation of values at r * k / (n - 1).
  static SampledFunction from_samples(double r, const std::vector<double>& values);
  /// Piecewise-constant function on its grid (tail ignored).
  static SampledFunction from_halfline(const HalfLineFunction& f);
  static SampledFunction indicator(double a, double b);

  double support_end() const;
  cplx operator()(double t) const;
  double norm2() const;  // ||f||^2 in L^2[0, r]
};

/// (F_mu f)(z) = (1/sqrt(2pi)) int_0^r f(t) P_t(z) dt, exact per piece.
std::vector<cplx> f_mu_apply(const Hamiltonian& H, const SampledFunction& f, double r, const std::vector<cplx>& zs);

/// Same transform for a general f, by Gauss-Legendre on pieces short enough that
/// both P_t(z) and f (oscillating at most like e^{i f_bandwidth t}) are resolved.
std::vector<cplx> f_mu_apply(const Hamiltonian& H, const std::function<cplx(double)>& f, double r,
                             const std::vector<cplx>& zs, double f_bandwidth = 0.0);

struct IsometryReport {
  double mu_norm2 = 0.0;  // int_{-X}^{X} |F f|^2 w dx
  double tail_estimate = 0.0;
  double f_norm2 = 0.0;
  double residual = 0.0;
};

/// | ||F_mu f||^2 + tail - ||f||^2 |. The tail beyond |x| = X is w_tail * <x^2 |F f|^2> / X with
/// the bracket averaged over the outermost window [X - min(X/10, 50), X] on each side.
IsometryReport isometry_report(const Hamiltonian& H, const SpectralMeasure& mu, const SampledFunction& f, double r,
                               double X);

inline double isometry_residual(const Hamiltonian& H, const SpectralMeasure& mu, const SampledFunction& f, double r,
                                double X) {
  return isometry_report(H, mu, f, r, X).residual;
}

}  // namespace canon
