#include "canon/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "canon/canonical_solver.hpp"
#include "canon/debranges_transform.hpp"
#include "canon/errors.hpp"
#include "canon/factorization.hpp"
#include "canon/krein_inverse.hpp"
#include "canon/weights_a2.hpp"
#include "canon/weyl_spectral.hpp"

namespace canon {

namespace {

std::string kv(const char* key, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.3e ", key, v);
  return buf;
}

Hamiltonian random_unimodular(std::mt19937_64& rng, std::size_t cells, double max_width) {
  std::uniform_real_distribution<double> width(0.1, max_width), logd(-1.0, 1.0), off(-1.0, 1.0);
  std::vector<double> nodes{0.0};
  std::vector<CellMatrix> cs;
  for (std::size_t i = 0; i < cells; ++i) {
    nodes.push_back(nodes.back() + width(rng));
    const double h1 = std::exp(logd(rng));
    const double h = off(rng);
    cs.push_back({h1, h, (1.0 + h * h) / h1});
  }
  return Hamiltonian(Grid(std::move(nodes)), std::move(cs), true);
}

WeylOptions tail_options() {
  WeylOptions o;
  o.extend_tail = true;
  return o;
}

// Band-limited bump 1 + 0.5 (sin x / x)^2.
SpectralMeasure bump_measure() { return SpectralMeasure(Weight::sinc2_bump(0.5, 1.0)); }

double round_trip_error(const Hamiltonian& H, const Weight& w) {
  double err = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double x = -5.0 + 0.25 * i;
    const double d = spectral_density(H, x, 0.05, tail_options());
    err = std::max(err, std::abs(d / w(x) - 1.0));
  }
  return err;
}

SampledFunction random_smooth_f(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double a[4];
  for (double& c : a) c = coef(rng);
  std::vector<double> v(101);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double t = r * static_cast<double>(i) / 100.0;
    const double envelope = std::pow(std::sin(M_PI * t / r), 2);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += a[k] * std::cos(k * M_PI * t / r);
    v[i] = envelope * s;
  }
  return SampledFunction::from_samples(r, v);
}

CriterionResult free_system(std::uint64_t) {
  CriterionResult res{1, "free-system exactness", false, {}};
  const auto start = std::chrono::steady_clock::now();
  const Hamiltonian H = Hamiltonian::constant({1.0, 0.0, 1.0}, 10.0, 100);
  double worst = 0.0;
  for (int a = -8; a <= 8; ++a) {
    for (int b = -8; b <= 8; ++b) {
      const cplx z(0.625 * a, 0.625 * b);
      if (std::abs(z) > 5.0) continue;
      for (int k = 0; k <= 40; ++k) {
        const double t = 0.25 * k;
        const Mat2 M = transfer_matrix(H, t, z).M;
        const cplx c = std::cos(z * t), s = std::sin(z * t);
        const Mat2 exact{c, s, -s, c};
        worst = std::max(worst, (M - exact).max_abs() / std::max(1.0, exact.max_abs()));
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.passed = worst <= 1e-10 && seconds < 1.0;
  res.detail = kv("max_rel_err", worst) + kv("seconds", seconds);
  return res;
}

CriterionResult unimodularity(std::uint64_t seed) {
  CriterionResult res{2, "unimodularity of M", false, {}};
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(-1.0, 1.0), u(0.0, 1.0);
  double worst = 0.0;
  for (int h = 0; h < 20; ++h) {
    const Hamiltonian H = random_unimodular(rng, 8, 0.5);
    for (int k = 0; k < 25; ++k) {
      const double t = u(rng) * H.grid().end();
      const cplx z(re(rng), im(rng));
      worst = std::max(worst, std::abs(transfer_matrix(H, t, z).M.det() - 1.0));
    }
  }
  res.passed = worst <= 1e-9;
  res.detail = kv("max_det_dev", worst);
  return res;
}

CriterionResult dilation(std::uint64_t seed) {
  CriterionResult res{3, "dilation identity m^y(z) = m(yz)", false, {}};
  std::mt19937_64 rng(seed + 3);
  const std::vector<Hamiltonian> hs{
      inverse_spectral(bump_measure(), 10.0, 128), random_unimodular(rng, 8, 1.0),
      Hamiltonian(Grid({0.0, 1.0, 2.5}), {{2.0, 0.0, 0.5}, {0.25, 0.0, 4.0}}, true)};
  const std::vector<cplx> zs{{0.5, 1.0}, {-1.0, 0.5}, {2.0, 2.0}, {0.0, 0.25}, {3.0, 1.0}};
  double worst = 0.0;
  for (const Hamiltonian& H : hs) {
    for (double y : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const Hamiltonian Hy = dilate(H, y);
      for (cplx z : zs) {
        worst = std::max(worst, std::abs(weyl_function(Hy, z, tail_options()) - weyl_function(H, y * z, tail_options())));
      }
    }
  }
  res.passed = worst <= 1e-6;
  res.detail = kv("max_abs_diff", worst);
  return res;
}

CriterionResult round_trip(std::uint64_t) {
  CriterionResult res{4, "inverse/forward round trip", false, {}};
  const SpectralMeasure mu = bump_measure();
  const double e256 = round_trip_error(inverse_spectral(mu, 20.0, 256), mu.density);
  const double e512 = round_trip_error(inverse_spectral(mu, 20.0, 512), mu.density);
  const double ratio = e256 / e512;
  res.passed = e512 <= 1e-3 && ratio >= 1.5 && mu.density.lower_bound() >= 0.5;
  res.detail = kv("rel_err_256", e256) + kv("rel_err_512", e512) + kv("ratio", ratio);
  return res;
}

double kernel_gap(const Hamiltonian& H, double r) {
  const std::vector<cplx> grid{{0.5, 0.2}, {-1.0, 0.5}, {2.0, -0.3}, {0.1, 1.0}};
  double worst = 0.0;
  for (cplx z : grid) {
    for (cplx l : grid) {
      const WaveTable wl(H, l);
      const auto lhs = f_mu_apply(H, [&](double t) { return std::conj(wl.value(t)); }, r, {z}, std::abs(l))[0] /
                       std::sqrt(2.0 * M_PI);
      worst = std::max(worst, std::abs(lhs - reproducing_kernel(H, r, z, l)));
    }
  }
  return worst;
}

CriterionResult kernel_identity(std::uint64_t) {
  CriterionResult res{5, "reproducing kernel identity", false, {}};
  const double free = kernel_gap(Hamiltonian::constant({1.0, 0.0, 1.0}, 10.0, 10, true), 2.0);
  const double recovered = kernel_gap(inverse_spectral(bump_measure(), 20.0, 512), 2.0);
  res.passed = free <= 1e-8 && recovered <= 1e-8;
  res.detail = kv("free_gap", free) + kv("recovered_gap", recovered);
  return res;
}

CriterionResult isometry(std::uint64_t seed) {
  CriterionResult res{6, "isometry of F_mu", false, {}};
  std::mt19937_64 rng(seed + 6);
  const Hamiltonian free = Hamiltonian::constant({1.0, 0.0, 1.0}, 10.0, 10, true);
  const SpectralMeasure lebesgue(Weight::constant(1.0));
  const SpectralMeasure bump = bump_measure();
  const Hamiltonian recovered = inverse_spectral(bump, 20.0, 512);
  double worst_free = 0.0, worst_bump = 0.0;
  for (int i = 0; i < 5; ++i) {
    const SampledFunction f = random_smooth_f(rng, 2.0);
    worst_free = std::max(worst_free, isometry_residual(free, lebesgue, f, 2.0, 1e3));
    worst_bump = std::max(worst_bump, isometry_residual(recovered, bump, f, 2.0, 1e3));
  }
  res.passed = worst_free <= 1e-8 && worst_bump <= 1e-3;
  res.detail = kv("plancherel_residual", worst_free) + kv("bump_residual", worst_bump);
  return res;
}

CriterionResult factorization(std::uint64_t) {
  CriterionResult res{7, "triangular factorization W = A^T A", false, {}};
  bool ok = true;
  std::string detail;
  const std::pair<const char*, Weight> weights[] = {{"step", Weight::step(2.0, 1.0)},
                                                    {"bump", Weight::sinc2_bump(0.5, 1.0)}};
  for (const auto& [name, w] : weights) {
    const SpectralMeasure mu(w);
    const FactorizationReport a = factor_via_transform(mu, 20.0, 256);
    const FactorizationReport b = factor_via_transform(mu, 20.0, 512);
    const double bound = 1.2 * a.c2 / a.c1;
    ok = ok && a.leakage <= 1e-10 && b.leakage <= 1e-10 && a.residual <= 1e-2 && b.residual <= 5e-3 &&
         a.oracle_deviation <= 2e-2 && a.cond * a.cond <= bound;
    detail += std::string(name) + ": " + kv("leak", std::max(a.leakage, b.leakage)) + kv("res256", a.residual) +
              kv("res512", b.residual) + kv("dev", a.oracle_deviation) + kv("cond2", a.cond * a.cond) +
              kv("bound", bound);
  }
  res.passed = ok;
  res.detail = detail;
  return res;
}

CriterionResult szego(std::uint64_t) {
  CriterionResult res{8, "Szego functional", false, {}};
  const std::vector<cplx> zs{{0.0, 1.0}, {1.0, 0.5}, {-2.0, 2.0}, {0.3, 0.1}, {5.0, 3.0}};
  double min_K = INFINITY, max_const = 0.0;
  for (const Weight& w : {Weight::step(2.0, 1.0), Weight::step(0.3, 2.0), Weight::cosine_bump(1.0, 2.0),
                          Weight::sinc2_bump(0.5, 1.0), Weight::truncated(Weight::constant(2.0), 1.5)}) {
    for (cplx z : zs) min_K = std::min(min_K, szego_K(SpectralMeasure(w), z));
  }
  for (double c : {0.5, 1.0, 3.0}) {
    for (cplx z : zs) max_const = std::max(max_const, std::abs(szego_K(SpectralMeasure(Weight::constant(c)), z)));
  }
  const Hamiltonian H = inverse_spectral(bump_measure(), 10.0, 128);
  std::vector<double> xs;
  for (int i = -600; i <= 600; ++i) xs.push_back(0.1 * i);
  const SpectralMeasure mu(sampled_density(H, xs, 0.05, tail_options()));
  const SpectralMeasure mu_d(sampled_density(dual(H), xs, 0.05, tail_options()));
  const double K = szego_K(mu, {0.0, 1.0});
  const double Kd = szego_K(mu_d, {0.0, 1.0});
  res.passed = min_K >= -1e-12 && max_const <= 1e-12 && std::abs(K - Kd) <= 1e-4;
  res.detail = kv("min_K", min_K) + kv("max_const_K", max_const) + kv("K", K) + kv("K_dual", Kd) +
               kv("dual_gap", std::abs(K - Kd));
  return res;
}

CriterionResult split_suite(std::uint64_t seed) {
  CriterionResult res{9, "L1 + L2 decomposition", false, {}};
  std::mt19937_64 rng(seed + 9);
  std::uniform_int_distribution<int> cells(5, 40);
  std::uniform_real_distribution<double> width(0.05, 2.0), u(0.0, 1.0), small(-1.0, 1.0);
  int failures = 0;
  double worst_ratio = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = cells(rng);
    std::vector<double> nodes{0.0}, v;
    for (int i = 0; i < n; ++i) {
      nodes.push_back(nodes.back() + width(rng));
      const double roll = u(rng);
      if (roll < 0.2) {
        v.push_back(small(rng) * 50.0);  // tall spike
      } else if (roll < 0.3) {
        v.push_back(0.0);
      } else {
        v.push_back(small(rng));
      }
    }
    const HalfLineFunction f(Grid(std::move(nodes)), std::move(v));
    const L1L2Split s = decompose_L1_L2(f);
    bool ok = true;
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
      const double fi = f.values[i];
      ok = ok && s.f1.values[i] + s.f2.values[i] == fi && std::abs(s.f1.values[i]) <= std::abs(fi) &&
           std::abs(s.f2.values[i]) <= std::abs(fi);
    }
    const double ratio = s.operational_norm > 0.0 ? (s.l1_norm + s.l2_norm) / s.operational_norm : 0.0;
    ok = ok && s.l1_norm + s.l2_norm <= 4.0 * s.operational_norm;
    worst_ratio = std::max(worst_ratio, ratio);
    if (!ok) ++failures;
  }
  res.passed = failures == 0;
  res.detail = kv("failures", failures) + kv("max_norm_ratio", worst_ratio);
  return res;
}

CriterionResult a2_suite(std::uint64_t) {
  CriterionResult res{10, "A2 characteristics", false, {}};
  const HalfLineFunction c = HalfLineFunction::constant(3.7, 10.0, 17, 3.7);
  const double classical_const = a2_classical(c, 2);
  const double ell1_const = a2_ell1(c);

  const Hamiltonian H = inverse_spectral(bump_measure(), 20.0, 512);
  std::vector<double> h1, h2;
  for (const CellMatrix& m : H.cells()) {
    h1.push_back(m.h1);
    h2.push_back(m.h2);
  }
  double lo = INFINITY, hi = 0.0, ell1_max = 0.0;
  for (const auto& vals : {h1, h2}) {
    const HalfLineFunction f(H.grid(), vals, vals.back());
    for (double y : {0.25, 1.0, 4.0}) {
      const HalfLineFunction fy = f.dilated(y);
      const double a = a2_classical(fy, 2);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
      ell1_max = std::max(ell1_max, a2_ell1(fy));
    }
  }
  res.passed = classical_const == 1.0 && ell1_const == 0.0 && std::isfinite(hi) && hi <= 2.0 * lo &&
               std::isfinite(ell1_max);
  res.detail = kv("const_a2", classical_const) + kv("const_a2_ell1", ell1_const) + kv("a2_min", lo) +
               kv("a2_max", hi) + kv("a2_ell1_max", ell1_max);
  return res;
}

CriterionResult negative_control(std::uint64_t) {
  CriterionResult res{11, "negative control: w vanishing on an interval", false, {}};
  const SpectralMeasure mu(Weight::step(0.0, 0.5));
  const double h = 0.1;
  std::vector<double> mins;
  for (std::size_t N : {128u, 256u, 512u}) {
    try {
      mins.push_back(build_toeplitz(mu, N, h).eig_min);
    } catch (const SpectralPositivityError&) {
      mins.push_back(0.0);
    }
  }
  res.passed = mins[0] > mins[1] && mins[1] > mins[2] && mins[2] < 1e-3 * mins[0];
  res.detail = kv("eig_min_128", mins[0]) + kv("eig_min_256", mins[1]) + kv("eig_min_512", mins[2]);
  return res;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  static const std::function<CriterionResult(std::uint64_t)> table[kCriterionCount] = {
      free_system, unimodularity, dilation,  round_trip, kernel_identity, isometry,
      factorization, szego,       split_suite,    a2_suite,   negative_control};
  if (id < 1 || id > kCriterionCount) throw DomainError("no such acceptance criterion");
  try {
    return table[id - 1](seed);
  } catch (const Error& e) {
    return {id, "criterion " + std::to_string(id), false, std::string("error=") + e.what()};
  }
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::string detail = r.detail;
  while (!detail.empty() && detail.back() == ' ') detail.pop_back();
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " + detail;
}

}  // namespace canon
