#include "canon/weyl_spectral.hpp"

#include <cmath>

#include "canon/canonical_solver.hpp"
#include "canon/errors.hpp"
#include "canon/file_formats.hpp"
#include "canon/parallel.hpp"

namespace canon {

double weyl_disk_diameter(const Mat2& M) {
  const Vec2 theta = M.col0();
  const double denom = std::abs(inner(apply_J(theta), theta));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::abs(M.det()) / denom;
}

namespace {

// Limit of Phi-/Theta- when H stays equal to `tail` beyond the point where the
// transfer matrix is M. The L^2 solution is the i sqrt(det) eigenvector of -J tail.
cplx constant_tail_limit(const Mat2& M, const CellMatrix& tail) {
  const double d = tail.det();
  if (!(d > 0.0)) throw DomainError("constant-tail extension needs a nondegenerate last cell");
  const cplx v1 = tail.h2;
  const cplx v2 = cplx(-tail.h, std::sqrt(d));
  const Vec2 theta = M.col0();
  const Vec2 phi = M.col1();
  return (phi.plus * v2 - phi.minus * v1) / (theta.plus * v2 - theta.minus * v1);
}

}  // namespace

cplx weyl_function(const Hamiltonian& H, cplx z, const WeylOptions& opt) {
  if (!(z.imag() > 0.0)) throw DomainError("Weyl function needs Im z > 0");
  require_valid(H);
  const Grid& g = H.grid();
  Mat2 M = Mat2::identity();
  double diameter = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    M = cell_propagator(H.cell(i), g.width(i), z) * M;
    if (M.max_abs() > 1e100) M = M * cplx(1e-100);
    diameter = weyl_disk_diameter(M);
    if (diameter < opt.tol) return M.d / M.c;
  }
  if (opt.extend_tail) return constant_tail_limit(M, H.cell(g.cell_count() - 1));
  throw ConvergenceError("Weyl disk did not shrink below tol by the grid end: diameter=" + format_double(diameter),
                         diameter);
}

DensityEstimate spectral_density_estimate(const Hamiltonian& H, double x, double eps, const WeylOptions& opt,
                                          double rel_tol) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  DensityEstimate est;
  double previous = weyl_function(H, cplx(x, eps), opt).imag();
  double e = eps;
  double change = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 40; ++k) {
    e *= 0.5;
    const double current = weyl_function(H, cplx(x, e), opt).imag();
    change = std::abs(current - previous) / std::max(std::abs(current), 1e-300);
    if (change < rel_tol) {
      est.value = 2.0 * current - previous;
      est.last_eps = e;
      est.halvings = k;
      return est;
    }
    previous = current;
  }
  throw ConvergenceError("spectral density did not settle under eps refinement: change=" + format_double(change),
                         change);
}

double szego_K(const SpectralMeasure& mu, cplx z) {
  require_absolutely_continuous(mu);
  return std::log(poisson_average(mu.density, z)) - poisson_log_average(mu.density, z);
}

double herglotz_b_residual(const Hamiltonian& H, double y_max, const WeylOptions& opt) {
  if (!(y_max > 0.0)) throw DomainError("y_max must be positive");
  return weyl_function(H, cplx(0.0, y_max), opt).imag() / y_max;
}

Weight sampled_density(const Hamiltonian& H, const std::vector<double>& xs, double eps, const WeylOptions& opt) {
  require_valid(H);
  std::vector<double> ws(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { ws[i] = spectral_density(H, xs[i], eps, opt); });
  return Weight::sampled(xs, std::move(ws));
}

}  // namespace canon
