#pragma once

#include <vector>

#include "canon/grid_hamiltonian.hpp"
#include "canon/mat2.hpp"

namespace canon {

/// Fundamental solution of J dM/dt = z H(t) M, M(0, z) = I, sampled at (t, z).
/// Columns: Theta = (Theta+, Theta-) first, Phi = (Phi+, Phi-) second.
struct TransferMatrix {
  double t = 0.0;
  cplx z{};
  Mat2 M = Mat2::identity();

  Vec2 theta() const { return M.col0(); }
  Vec2 phi() const { return M.col1(); }
};

/// exp(z * width * K) with K = -J H, the exact propagator across one cell.
/// K^2 = -det(H) I, so the exponential is cos(w) I + sin(w)/w * zK*width with w^2 = (z width)^2 det H.
Mat2 cell_propagator(const CellMatrix& H, double width, cplx z);

/// d/dz of cell_propagator.
Mat2 cell_propagator_dz(const CellMatrix& H, double width, cplx z);

/// M(t, z). Validates H; t must lie in [0, grid end].
TransferMatrix transfer_matrix(const Hamiltonian& H, double t, cplx z);

/// M(t, z) and dM/dz(t, z), computed by forward-mode differentiation of the cell product.
std::pair<Mat2, Mat2> transfer_matrix_dz(const Hamiltonian& H, double t, cplx z);

/// Propagator from t1 to t2 (t1 <= t2), so that M(t2) = block * M(t1).
Mat2 transfer_block(const Hamiltonian& H, double t1, double t2, cplx z);

/// M at every grid node t_0..t_K (no validation; callers validate once).
std::vector<Mat2> transfer_at_nodes(const Hamiltonian& H, cplx z);

/// |<J Theta(r), Theta(r)> - 2i Im z int_0^r <H Theta, Theta> dt|.
/// The integral uses per-cell Gauss-Legendre on the exact in-cell solution, order
/// doubled from 8 until the relative change drops below 1e-10.
double j_energy_residual(const Hamiltonian& H, double r, cplx z);

/// int_0^r <H(t) Theta(t,z), Theta(t,z)> dt with the same quadrature as j_energy_residual.
double theta_energy(const Hamiltonian& H, double r, cplx z);

}  // namespace canon
