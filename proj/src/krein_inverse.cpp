#include "canon/krein_inverse.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "canon/errors.hpp"
#include "canon/parallel.hpp"
#include "canon/quadrature.hpp"

namespace canon {

using std::numbers::pi;

SpectralMeasure truncate_weight(const SpectralMeasure& mu, double j) {
  require_absolutely_continuous(mu);
  SpectralMeasure out(Weight::truncated(mu.density, j));
  out.herglotz_a = mu.herglotz_a;
  out.herglotz_b = mu.herglotz_b;
  return out;
}

double Accelerant::at(double t) const {
  const double a = std::abs(t);
  if (values.empty()) return 0.0;
  if (a > span()) {
    if (band_limit && a >= *band_limit) return 0.0;
    throw DomainError("accelerant evaluated outside its sampled range");
  }
  const double u = a / step;
  const std::size_t i = std::min(static_cast<std::size_t>(u), values.size() - 1);
  if (i + 1 >= values.size()) return values.back();
  const double f = u - static_cast<double>(i);
  return values[i] + f * (values[i + 1] - values[i]);
}

namespace {

double numeric_accelerant(const Weight& w, double t) {
  const double X = w.core_radius();
  std::vector<double> cuts{0.0, X};
  for (double b : w.breakpoints()) {
    if (b > 0.0 && b < X) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * (1.0 + std::abs(t)) / 2.0)));
    total += integrate_panels([&](double x) { return (w(x) - 1.0) * std::cos(x * t); }, a, b, panels, 16);
  }
  return total / pi;
}

}  // namespace

Accelerant accelerant_samples(const Weight& w, double step, std::size_t count) {
  if (!(step > 0.0) || count < 1) throw DomainError("accelerant grid needs step > 0 and at least one sample");
  if (!w.has_accelerant()) throw DomainError("w - 1 is not integrable; truncate the weight first");
  if (!w.is_even()) throw UnsupportedError("only even weights are supported by the inverse problem");
  Accelerant k;
  k.step = step;
  k.values.resize(count);
  k.band_limit = w.band_limit();
  if (w.closed_form_accelerant(0.0)) {
    for (std::size_t i = 0; i < count; ++i) k.values[i] = w.closed_form_accelerant(step * i)->real();
  } else {
    if (!std::isfinite(w.core_radius())) {
      throw UnsupportedError("numeric accelerant needs w - 1 with compact support");
    }
    parallel_for(count, [&](std::size_t i) { k.values[i] = numeric_accelerant(w, step * i); });
  }
  return k;
}

Accelerant accelerant_from_weight(const SpectralMeasure& mu, double R, std::size_t M) {
  require_absolutely_continuous(mu);
  if (!(R > 0.0) || M < 2) throw DomainError("accelerant_from_weight needs R > 0 and M >= 2");
  return accelerant_samples(mu.density, R / static_cast<double>(M - 1), M);
}

LevinsonResult levinson_szego(const Accelerant& k, std::size_t N) {
  if (k.values.size() < N) throw DomainError("accelerant has fewer samples than the recursion length");
  auto r = [&](std::size_t j) { return (j == 0 ? 1.0 : 0.0) + k.step * k.values[j]; };
  LevinsonResult out;
  out.phi_at_one.resize(N);
  out.verblunsky.resize(N > 0 ? N - 1 : 0);
  out.prediction_error.resize(N);
  std::vector<double> a{1.0}, next;  // monic Phi_n, coefficient of eta^j at index j
  double E = r(0);
  double at_one = 1.0;
  if (!(E > 0.0)) throw SpectralPositivityError("discretized I + K is not positive definite");
  for (std::size_t n = 0; n < N; ++n) {
    out.prediction_error[n] = E;
    out.phi_at_one[n] = at_one / std::sqrt(E);
    if (n + 1 == N) break;
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) acc += a[j] * r(j + 1);
    const double alpha = acc / E;
    if (!(std::abs(alpha) < 1.0)) throw SpectralPositivityError("discretized I + K is not positive definite");
    out.verblunsky[n] = alpha;
    next.assign(n + 2, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
      next[j + 1] += a[j];
      next[j] -= alpha * a[n - j];
    }
    a.swap(next);
    E *= (1.0 - alpha) * (1.0 + alpha);
    at_one *= 1.0 - alpha;
  }
  return out;
}

std::vector<double> nystrom_matrix(const Accelerant& k, std::size_t N) {
  if (k.values.size() < N) throw DomainError("accelerant has fewer samples than the matrix dimension");
  std::vector<double> W(N * N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t d = i > j ? i - j : j - i;
      W[i * N + j] = (i == j ? 1.0 : 0.0) + k.step * k.values[d];
    }
  }
  return W;
}

InverseSpectralResult inverse_spectral_report(const SpectralMeasure& mu, double R, std::size_t N) {
  require_absolutely_continuous(mu);
  if (!(R > 0.0) || N < 2) throw DomainError("inverse_spectral needs R > 0 and N >= 2");
  const Weight& w = mu.density;
  if (!(w.lower_bound() > 0.0)) throw SpectralPositivityError("weight must be bounded below by a positive constant");
  if (!w.is_even()) throw UnsupportedError("only even weights are supported by the inverse problem");

  const Grid grid = Grid::uniform(R, N);
  if (w.kind() == Weight::Kind::constant) {
    const double c = w(0.0);
    return {Hamiltonian(grid, std::vector<CellMatrix>(N, CellMatrix{1.0 / c, 0.0, c}), true), 1.0, false};
  }

  const double delta = 2.0 * R / static_cast<double>(N);
  const Accelerant k = accelerant_samples(w, delta, N);
  const LevinsonResult lev = levinson_szego(k, N);

  std::vector<CellMatrix> cells(N);
  for (std::size_t c = 0; c < N; ++c) {
    const double p2 = lev.phi_at_one[c] * lev.phi_at_one[c];
    cells[c] = CellMatrix{p2, 0.0, 1.0 / p2};
  }
  const std::vector<double> data = nystrom_matrix(k, N);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> W(
      data.data(), static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(W, Eigen::EigenvaluesOnly).eigenvalues();
  InverseSpectralResult out{Hamiltonian(grid, std::move(cells), true), ev.maxCoeff() / ev.minCoeff(), false};
  out.ill_conditioned = !(out.cond <= 1e12);
  return out;
}

}  // namespace canon
