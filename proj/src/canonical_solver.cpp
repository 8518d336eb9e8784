#include "canon/canonical_solver.hpp"

#include <cmath>

#include "canon/errors.hpp"
#include "canon/quadrature.hpp"

namespace canon {

namespace {

Mat2 minus_J_H(const CellMatrix& H) {
  // -J H = [[0, 1], [-1, 0]] [[h1, h], [h, h2]]
  return {H.h, H.h2, -H.h1, -H.h};
}

// cos(sqrt(q)) and sin(sqrt(q))/sqrt(q), both entire in q.
void cos_sinc(cplx q, cplx& c, cplx& s) {
  if (std::abs(q) < 1e-8) {  // |sqrt q| < 1e-4
    c = 1.0 - q / 2.0 + q * q / 24.0 - q * q * q / 720.0;
    s = 1.0 - q / 6.0 + q * q / 120.0 - q * q * q / 5040.0;
    return;
  }
  const cplx r = std::sqrt(q);
  c = std::cos(r);
  s = std::sin(r) / r;
}

void check_time(const Hamiltonian& H, double t) {
  if (!(t >= 0.0) || t > H.grid().end()) throw DomainError("time outside the Hamiltonian's grid");
}

}  // namespace

Mat2 cell_propagator(const CellMatrix& H, double width, cplx z) {
  const cplx s = z * width;
  cplx c, sinc;
  cos_sinc(s * s * H.det(), c, sinc);
  const Mat2 K = minus_J_H(H);
  return Mat2{c, 0.0, 0.0, c} + K * (s * sinc);
}

Mat2 cell_propagator_dz(const CellMatrix& H, double width, cplx z) {
  return minus_J_H(H) * cplx(width) * cell_propagator(H, width, z);
}

std::vector<Mat2> transfer_at_nodes(const Hamiltonian& H, cplx z) {
  std::vector<Mat2> out;
  out.reserve(H.cell_count() + 1);
  Mat2 M = Mat2::identity();
  out.push_back(M);
  for (std::size_t i = 0; i < H.cell_count(); ++i) {
    M = cell_propagator(H.cell(i), H.grid().width(i), z) * M;
    out.push_back(M);
  }
  return out;
}

Mat2 transfer_block(const Hamiltonian& H, double t1, double t2, cplx z) {
  check_time(H, t1);
  check_time(H, t2);
  if (t2 < t1) throw DomainError("transfer_block needs t1 <= t2");
  const Grid& g = H.grid();
  Mat2 M = Mat2::identity();
  if (t2 == t1) return M;
  std::size_t i = g.cell_index(t1);
  double from = t1;
  while (from < t2) {
    const double to = std::min(t2, g.right(i));
    if (to > from) M = cell_propagator(H.cell(i), to - from, z) * M;
    from = to;
    ++i;
    if (i == g.cell_count()) break;
  }
  return M;
}

TransferMatrix transfer_matrix(const Hamiltonian& H, double t, cplx z) {
  require_valid(H);
  check_time(H, t);
  return {t, z, transfer_block(H, 0.0, t, z)};
}

std::pair<Mat2, Mat2> transfer_matrix_dz(const Hamiltonian& H, double t, cplx z) {
  require_valid(H);
  check_time(H, t);
  const Grid& g = H.grid();
  Mat2 M = Mat2::identity();
  Mat2 dM{};
  for (std::size_t i = 0; i < g.cell_count() && g.left(i) < t; ++i) {
    const double w = std::min(t, g.right(i)) - g.left(i);
    const Mat2 T = cell_propagator(H.cell(i), w, z);
    const Mat2 dT = cell_propagator_dz(H.cell(i), w, z);
    dM = dT * M + T * dM;
    M = T * M;
  }
  return {M, dM};
}

namespace {

double energy_with_order(const Hamiltonian& H, double r, cplx z, int order) {
  const Grid& g = H.grid();
  const GaussLegendre& rule = gauss_legendre(order);
  double total = 0.0;
  Vec2 theta{1.0, 0.0};
  for (std::size_t i = 0; i < g.cell_count() && g.left(i) < r; ++i) {
    const CellMatrix& c = H.cell(i);
    const double w = std::min(r, g.right(i)) - g.left(i);
    const double half = 0.5 * w;
    for (std::size_t k = 0; k < rule.order(); ++k) {
      const double tau = half + half * rule.nodes[k];
      const Vec2 v = cell_propagator(c, tau, z) * theta;
      const Vec2 Hv{c.h1 * v.plus + c.h * v.minus, c.h * v.plus + c.h2 * v.minus};
      total += rule.weights[k] * half * inner(Hv, v).real();
    }
    theta = cell_propagator(c, w, z) * theta;
  }
  return total;
}

}  // namespace

double theta_energy(const Hamiltonian& H, double r, cplx z) {
  require_valid(H);
  check_time(H, r);
  double previous = energy_with_order(H, r, z, 8);
  for (int order = 16; order <= 256; order *= 2) {
    const double current = energy_with_order(H, r, z, order);
    if (std::abs(current - previous) <= 1e-10 * std::abs(current)) return current;
    previous = current;
  }
  return previous;
}

double j_energy_residual(const Hamiltonian& H, double r, cplx z) {
  const Vec2 theta = transfer_matrix(H, r, z).theta();
  const cplx lhs = inner(apply_J(theta), theta);
  if (z.imag() == 0.0) return std::abs(lhs);
  const cplx rhs = cplx(0.0, 2.0 * z.imag()) * theta_energy(H, r, z);
  return std::abs(lhs - rhs);
}

}  // namespace canon
