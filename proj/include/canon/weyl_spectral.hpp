#pragma once

#include <vector>

#include "canon/grid_hamiltonian.hpp"
#include "canon/mat2.hpp"
#include "canon/spectral_measure.hpp"

namespace canon {

struct WeylOptions {
  /// Stop once the Weyl disk diameter drops below this.
  double tol = 1e-10;
  /// If the grid ends before the disk has shrunk, continue H past the grid end with its
  /// last cell value and take the exact limit of that constant tail.
  bool extend_tail = false;
};

/// Diameter of the Weyl disk cut out by M(t, z): 2 |det M| / |<J Theta, Theta>|.
double weyl_disk_diameter(const Mat2& M);

/// m(z) = lim Phi-(t, z) / Theta-(t, z), Im z > 0.
/// Throws ConvergenceError (carrying the last diameter) when the disk never shrinks below tol.
cplx weyl_function(const Hamiltonian& H, cplx z, const WeylOptions& opt = {});

struct DensityEstimate {
  double value = 0.0;     // Richardson-extrapolated Im m(x + i0)
  double last_eps = 0.0;  // smallest eps evaluated
  int halvings = 0;
};

/// Im m(x + i eps) refined eps -> eps/2 until the relative change is < rel_tol,
/// then extrapolated from the last two levels.
DensityEstimate spectral_density_estimate(const Hamiltonian& H, double x, double eps,
                                          const WeylOptions& opt = {}, double rel_tol = 1e-3);

inline double spectral_density(const Hamiltonian& H, double x, double eps, const WeylOptions& opt = {}) {
  return spectral_density_estimate(H, x, eps, opt).value;
}

/// log P[mu](z) - P[log w](z) with P the Poisson average at z.
double szego_K(const SpectralMeasure& mu, cplx z);

/// Im m(i y_max) / y_max; tends to the Herglotz coefficient b.
double herglotz_b_residual(const Hamiltonian& H, double y_max, const WeylOptions& opt = {});

/// The density of H sampled at xs (piecewise-linear weight, constant beyond the samples).
Weight sampled_density(const Hamiltonian& H, const std::vector<double>& xs, double eps,
                       const WeylOptions& opt = {});

}  // namespace canon
