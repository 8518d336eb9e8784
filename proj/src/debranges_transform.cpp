#include "canon/debranges_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "canon/canonical_solver.hpp"
#include "canon/errors.hpp"
#include "canon/parallel.hpp"
#include "canon/quadrature.hpp"

namespace canon {

using std::numbers::pi;

CellMatrix sqrt_psd_2x2(const CellMatrix& A) {
  const double tr = A.trace();
  double d = A.det();
  const double scale = std::max(1.0, tr * tr);
  if (!(A.h1 >= 0.0) || !(A.h2 >= 0.0) || d < -1e-14 * scale) throw DomainError("matrix is not positive semi-definite");
  d = std::max(d, 0.0);
  const double sd = std::sqrt(d);
  const double denom = tr + 2.0 * sd;
  if (denom == 0.0) return {0.0, 0.0, 0.0};
  const double n = std::sqrt(denom);
  return {(A.h1 + sd) / n, A.h / n, (A.h2 + sd) / n};
}

namespace {

void require_unimodular(const Hamiltonian& H) {
  if (!H.unimodular()) throw DomainError("Krein waves need a Hamiltonian flagged det H = 1");
  require_valid(H);
}

void check_wave_time(const Hamiltonian& H, double t) {
  if (!(t >= 0.0) || t > 2.0 * H.grid().end()) throw DomainError("wave time outside twice the grid span");
}

Vec2 apply_cell(const CellMatrix& S, const Vec2& v) {
  return {S.h1 * v.plus + S.h * v.minus, S.h * v.plus + S.h2 * v.minus};
}

// (e^x - 1)/x and (e^x (x - 1) + 1)/x^2, i.e. int_0^1 e^{xu} du and int_0^1 u e^{xu} du.
void exp_moments(cplx x, cplx& e1, cplx& e2) {
  if (std::abs(x) < 0.1) {
    cplx term = 1.0;
    e1 = 0.0;
    e2 = 0.0;
    double fact = 1.0;
    for (int n = 0; n < 14; ++n) {
      if (n > 0) {
        term *= x;
        fact *= n;
      }
      e1 += term / (fact * (n + 1));
      e2 += term / (fact * (n + 2));
    }
    return;
  }
  const cplx ex = std::exp(x);
  e1 = (ex - 1.0) / x;
  e2 = (ex * (x - 1.0) + 1.0) / (x * x);
}

}  // namespace

KreinWave krein_wave(const Hamiltonian& H, double t, cplx z) {
  require_unimodular(H);
  check_wave_time(H, t);
  const double half = 0.5 * t;
  const Vec2 theta = transfer_block(H, 0.0, half, z).col0();
  const Vec2 psi = apply_cell(sqrt_psd_2x2(H.at(half)), theta);
  KreinWave out;
  out.t = t;
  out.z = z;
  out.psi_plus = psi.plus;
  out.psi_minus = psi.minus;
  out.value = std::exp(cplx(0.0, half) * z) * (psi.plus - cplx(0.0, 1.0) * psi.minus);
  return out;
}

WaveTable::WaveTable(const Hamiltonian& H, cplx z, double t_limit) : z_(z) {
  require_unimodular(H);
  const Grid& g = H.grid();
  std::size_t used = g.cell_count();
  if (t_limit < 2.0 * g.end()) used = g.cell_index(0.5 * std::max(t_limit, 0.0)) + 1;
  nodes_.assign(g.nodes().begin(), g.nodes().begin() + static_cast<std::ptrdiff_t>(used) + 1);
  coef_.resize(used);
  Vec2 theta{1.0, 0.0};
  const cplx I(0.0, 1.0);
  for (std::size_t c = 0; c < used; ++c) {
    const CellMatrix& h = H.cell(c);
    const CellMatrix S = sqrt_psd_2x2(h);
    const double sd = std::sqrt(h.det());
    const Vec2 Ktheta{h.h * theta.plus + h.h2 * theta.minus, -h.h1 * theta.plus - h.h * theta.minus};
    const Vec2 s0 = apply_cell(S, theta);
    const Vec2 s1 = apply_cell(S, Ktheta);
    const cplx a0 = s0.plus - I * s0.minus;
    const cplx a1 = (s1.plus - I * s1.minus) / sd;
    const cplx omega = z * sd;
    coef_[c] = {std::exp(I * z * g.left(c)), 0.5 * a0 + a1 / (2.0 * I), 0.5 * a0 - a1 / (2.0 * I), I * (z + omega),
                I * (z - omega)};
    theta = cell_propagator(h, g.width(c), z) * theta;
  }
}

std::size_t WaveTable::cell_of(double t) const {
  const double half = 0.5 * t;
  if (half >= nodes_[coef_.size()]) return coef_.size() - 1;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), half);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

cplx WaveTable::value(double t) const {
  const std::size_t c = cell_of(t);
  const double s = 0.5 * t - nodes_[c];
  const CellCoefficients& k = coef_[c];
  return k.phase * (k.A * std::exp(k.kp * s) + k.B * std::exp(k.km * s));
}

cplx WaveTable::integrate_linear(std::size_t cell, double a, double b, cplx fa, cplx fb) const {
  const CellCoefficients& k = coef_[cell];
  const double sa = 0.5 * a - nodes_[cell];
  const double L = 0.5 * (b - a);
  cplx total = 0.0;
  for (const auto& [C, kappa] : {std::pair{k.A, k.kp}, std::pair{k.B, k.km}}) {
    cplx e1, e2;
    exp_moments(kappa * L, e1, e2);
    total += C * std::exp(kappa * sa) * L * (fa * e1 + (fb - fa) * e2);
  }
  return 2.0 * k.phase * total;
}

cplx reproducing_kernel(const Hamiltonian& H, double r, cplx z, cplx lambda) {
  require_valid(H);
  check_wave_time(H, r);
  const double s = 0.5 * r;
  const cplx lb = std::conj(lambda);
  const cplx delta = z - lb;
  const Vec2 theta_l = transfer_block(H, 0.0, s, lambda).col0();
  cplx ratio;
  if (std::abs(delta) >= 1e-6) {
    const Vec2 theta_z = transfer_block(H, 0.0, s, z).col0();
    ratio = inner(apply_J(theta_z), theta_l) / delta;
  } else {
    const auto [M, dM] = transfer_matrix_dz(H, s, 0.5 * (z + lb));
    ratio = inner(apply_J(dM.col0()), theta_l);
  }
  return std::exp(cplx(0.0, 0.5 * r) * delta) * ratio / pi;
}

SampledFunction SampledFunction::from_samples(double r, const std::vector<double>& values) {
  if (!(r > 0.0) || values.size() < 2) throw DomainError("sampled function needs r > 0 and two samples");
  SampledFunction f;
  const double n = static_cast<double>(values.size() - 1);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double b = k + 2 == values.size() ? r : r * (k + 1) / n;
    f.segments.push_back({r * k / n, b, values[k], values[k + 1]});
  }
  return f;
}

SampledFunction SampledFunction::from_halfline(const HalfLineFunction& h) {
  SampledFunction f;
  for (std::size_t c = 0; c < h.cell_count(); ++c) {
    f.segments.push_back({h.grid.left(c), h.grid.right(c), h.values[c], h.values[c]});
  }
  return f;
}

SampledFunction SampledFunction::indicator(double a, double b) {
  if (!(a >= 0.0) || !(b > a)) throw DomainError("indicator needs 0 <= a < b");
  SampledFunction f;
  f.segments.push_back({a, b, 1.0, 1.0});
  return f;
}

double SampledFunction::support_end() const {
  double e = 0.0;
  for (const auto& s : segments) e = std::max(e, s.b);
  return e;
}

cplx SampledFunction::operator()(double t) const {
  for (const auto& s : segments) {
    if (t >= s.a && t < s.b) return s.fa + (s.fb - s.fa) * ((t - s.a) / (s.b - s.a));
  }
  return 0.0;
}

double SampledFunction::norm2() const {
  double total = 0.0;
  for (const auto& s : segments) {
    total += (s.b - s.a) * (std::norm(s.fa) + (s.fa * std::conj(s.fb)).real() + std::norm(s.fb)) / 3.0;
  }
  return total;
}

namespace {

void check_support(const Hamiltonian& H, const SampledFunction& f, double r) {
  check_wave_time(H, r);
  for (const auto& s : f.segments) {
    if (!(s.a >= 0.0) || !(s.b > s.a) || s.b > r * (1.0 + 1e-14)) {
      throw DomainError("function is not supported in [0, r]");
    }
  }
}

cplx apply_one(const WaveTable& table, const SampledFunction& f) {
  cplx total = 0.0;
  for (const auto& s : f.segments) {
    for (std::size_t c = table.cell_of(s.a); c < table.cell_count() && table.cell_left(c) < s.b; ++c) {
      const double a = std::max(s.a, table.cell_left(c));
      const double b = std::min(s.b, table.cell_right(c));
      if (!(b > a)) continue;
      const double L = s.b - s.a;
      const cplx fa = s.fa + (s.fb - s.fa) * ((a - s.a) / L);
      const cplx fb = s.fa + (s.fb - s.fa) * ((b - s.a) / L);
      total += table.integrate_linear(c, a, b, fa, fb);
    }
  }
  return total / std::sqrt(2.0 * pi);
}

}  // namespace

std::vector<cplx> f_mu_apply(const Hamiltonian& H, const SampledFunction& f, double r, const std::vector<cplx>& zs) {
  require_unimodular(H);
  check_support(H, f, r);
  std::vector<cplx> out(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) { out[i] = apply_one(WaveTable(H, zs[i], r), f); });
  return out;
}

std::vector<cplx> f_mu_apply(const Hamiltonian& H, const std::function<cplx(double)>& f, double r,
                             const std::vector<cplx>& zs, double f_bandwidth) {
  require_unimodular(H);
  check_wave_time(H, r);
  const GaussLegendre& rule = gauss_legendre(20);
  std::vector<cplx> out(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) {
    const WaveTable table(H, zs[i], r);
    const double rate = std::abs(zs[i]) + std::abs(f_bandwidth) + 1.0;
    cplx total = 0.0;
    for (std::size_t c = 0; c < table.cell_count() && table.cell_left(c) < r; ++c) {
      const double a = table.cell_left(c);
      const double b = std::min(r, table.cell_right(c));
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) * rate)));
      const double w = (b - a) / pieces;
      for (int p = 0; p < pieces; ++p) {
        const double lo = a + p * w;
        const double half = 0.5 * w;
        for (std::size_t k = 0; k < rule.order(); ++k) {
          const double t = lo + half + half * rule.nodes[k];
          total += rule.weights[k] * half * f(t) * table.value(t);
        }
      }
    }
    out[i] = total / std::sqrt(2.0 * pi);
  });
  return out;
}

IsometryReport isometry_report(const Hamiltonian& H, const SpectralMeasure& mu, const SampledFunction& f, double r,
                               double X) {
  require_absolutely_continuous(mu);
  if (!(X > 0.0)) throw DomainError("truncation X must be positive");
  check_support(H, f, r);
  const Weight& w = mu.density;

  std::vector<double> cuts{-X, X};
  for (double b : w.breakpoints()) {
    if (b > -X && b < X) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  const double panel = std::min(2.0, 4.0 / r);
  const GaussLegendre& rule = gauss_legendre(16);
  std::vector<double> xs, gw;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double width = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double half = 0.5 * width;
      const double mid = a + p * width + half;
      for (std::size_t k = 0; k < rule.order(); ++k) {
        xs.push_back(mid + half * rule.nodes[k]);
        gw.push_back(half * rule.weights[k]);
      }
    }
  }
  const std::vector<cplx> F = f_mu_apply(H, f, r, std::vector<cplx>(xs.begin(), xs.end()));

  IsometryReport rep;
  const double window = std::min(X / 10.0, 50.0);
  double left_sum = 0.0, left_w = 0.0, right_sum = 0.0, right_w = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a2 = std::norm(F[i]);
    rep.mu_norm2 += gw[i] * a2 * w(xs[i]);
    if (xs[i] >= X - window) {
      right_sum += gw[i] * xs[i] * xs[i] * a2;
      right_w += gw[i];
    } else if (xs[i] <= -X + window) {
      left_sum += gw[i] * xs[i] * xs[i] * a2;
      left_w += gw[i];
    }
  }
  rep.tail_estimate = (w.right_tail() * right_sum / right_w + w.left_tail() * left_sum / left_w) / X;
  rep.f_norm2 = f.norm2();
  rep.residual = std::abs(rep.mu_norm2 + rep.tail_estimate - rep.f_norm2);
  return rep;
}

}  // namespace canon
