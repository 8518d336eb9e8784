#include <doctest.h>

#include <cmath>
#include <numbers>

#include "canon/canonical_solver.hpp"
#include "canon/debranges_transform.hpp"
#include "canon/errors.hpp"
#include "canon/krein_inverse.hpp"

using namespace canon;
using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

Hamiltonian free_system(double length, std::size_t cells = 4) {
  return Hamiltonian::constant({1.0, 0.0, 1.0}, length, cells, true);
}

}  // namespace

TEST_CASE("square roots of 2x2 PSD matrices") {
  CHECK(sqrt_psd_2x2({1.0, 0.0, 1.0}) == CellMatrix{1.0, 0.0, 1.0});
  const auto d = sqrt_psd_2x2({4.0, 0.0, 0.25});
  CHECK(d.h1 == doctest::Approx(2.0));
  CHECK(d.h2 == doctest::Approx(0.5));
  CHECK(d.h == 0.0);
  const CellMatrix A{2.0, 1.0, 1.0};
  const auto S = sqrt_psd_2x2(A);
  CHECK(std::abs(S.h1 * S.h1 + S.h * S.h - A.h1) <= 1e-12);
  CHECK(std::abs(S.h1 * S.h + S.h * S.h2 - A.h) <= 1e-12);
  CHECK(std::abs(S.h * S.h + S.h2 * S.h2 - A.h2) <= 1e-12);
}

TEST_CASE("free waves are exponentials") {
  const auto H = free_system(5.0);
  for (double t : {0.0, 1.3, 7.0, 10.0}) {
    for (cplx z : {cplx(1.0, 0.0), cplx(-0.5, 0.7)}) {
      CHECK(std::abs(krein_wave(H, t, z).value - std::exp(I * t * z)) <= 1e-12);
    }
  }
}

TEST_CASE("wave at zero frequency reads the square root of H") {
  const Hamiltonian H(Grid::uniform(2.0, 2), {{2.0, 0.5, 0.625}, {0.5, 0.0, 2.0}}, true);
  for (double t : {0.5, 3.0}) {
    const auto S = sqrt_psd_2x2(H.at(t / 2.0));
    CHECK(std::abs(krein_wave(H, t, 0.0).value - cplx(S.h1, -S.h)) <= 1e-12);
  }
}

TEST_CASE("wave table agrees with direct evaluation") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::step(2.0, 1.0)), 4.0, 16);
  const cplx z(1.1, 0.3);
  const WaveTable table(H, z);
  for (double t : {0.0, 0.37, 2.5, 7.9}) CHECK(std::abs(table.value(t) - krein_wave(H, t, z).value) <= 1e-12);
}

TEST_CASE("wave norm identity for the free system") {
  const auto H = free_system(1.0);
  const WaveTable table(H, I);
  cplx total = 0.0;
  for (std::size_t c = 0; c < table.cell_count(); ++c) {
    const double a = table.cell_left(c), b = std::min(table.cell_right(c), 1.0);
    if (a >= 1.0) break;
    // |P_t(i)|^2 = e^{-2t} = P_t(i) * e^{-t}; integrate against the linear interpolant of e^{-t} on short pieces.
    const int pieces = 2000;
    for (int k = 0; k < pieces; ++k) {
      const double s0 = a + (b - a) * k / pieces, s1 = a + (b - a) * (k + 1) / pieces;
      total += table.integrate_linear(c, s0, s1, std::exp(-s0), std::exp(-s1));
    }
  }
  CHECK(std::abs(total - (1.0 - std::exp(-2.0)) / 2.0) <= 1e-7);
}

TEST_CASE("free reproducing kernel is the Paley-Wiener kernel") {
  const auto H = free_system(2.0);
  const double r = 3.0;
  for (cplx z : {cplx(0.5, 0.2), cplx(-1.0, 1.0)}) {
    for (cplx l : {cplx(0.3, 0.4), cplx(2.0, 0.1)}) {
      const cplx d = z - std::conj(l);
      const cplx expected = (std::exp(I * r * d) - 1.0) / (I * d) / (2.0 * pi);
      CHECK(std::abs(reproducing_kernel(H, r, z, l) - expected) <= 1e-12);
    }
  }
}

TEST_CASE("kernel is Hermitian and smooth across z = conj(lambda)") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::cosine_bump(1.0, 2.0)), 3.0, 24);
  const cplx z(0.4, 0.5), l(-0.2, 0.3);
  CHECK(std::abs(reproducing_kernel(H, 4.0, z, l) - std::conj(reproducing_kernel(H, 4.0, l, z))) <= 1e-12);
  const cplx at = reproducing_kernel(H, 4.0, std::conj(l), l);
  const cplx near = reproducing_kernel(H, 4.0, std::conj(l) + 1e-5, l);
  CHECK(std::abs(at - near) <= 1e-3 * std::abs(at));
}

TEST_CASE("transform of an indicator under the free system") {
  const auto H = free_system(1.0);
  const auto f = SampledFunction::indicator(0.0, 1.0);
  const std::vector<cplx> zs{0.5, -2.0, 3.7};
  const auto F = f_mu_apply(H, f, 1.0, zs);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const cplx expected = (std::exp(I * zs[i]) - 1.0) / (I * zs[i]) / std::sqrt(2.0 * pi);
    CHECK(std::abs(F[i] - expected) <= 1e-12);
  }
}

TEST_CASE("transform of a wave conjugate is the reproducing kernel") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::step(2.0, 1.0)), 2.0, 16);
  const double r = 3.0;
  const cplx l(0.5, 0.5);
  const WaveTable wl(H, l);
  const std::function<cplx(double)> e = [&](double t) { return std::conj(wl.value(t)); };
  const std::vector<cplx> zs{cplx(1.0, 0.0), cplx(-0.5, 0.25)};
  const auto F = f_mu_apply(H, e, r, zs, std::abs(l) + 1.0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    CHECK(std::abs(F[i] - std::sqrt(2.0 * pi) * reproducing_kernel(H, r, zs[i], l)) <= 1e-9);
  }
}

TEST_CASE("transform is linear") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::cosine_bump(0.5, 1.0)), 2.0, 8);
  const auto f = SampledFunction::from_samples(2.0, {0.0, 1.0, -0.5, 0.25, 0.0});
  const auto g = SampledFunction::from_samples(2.0, {1.0, 0.0, 0.5, 0.5, 2.0});
  const auto h = SampledFunction::from_samples(2.0, {2.0, 1.0, 0.5, 1.25, 4.0});  // f + 2 g
  const std::vector<cplx> zs{0.3, cplx(1.0, 0.2)};
  const auto Ff = f_mu_apply(H, f, 2.0, zs), Fg = f_mu_apply(H, g, 2.0, zs), Fh = f_mu_apply(H, h, 2.0, zs);
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(std::abs(Fh[i] - Ff[i] - 2.0 * Fg[i]) <= 1e-12);
}

TEST_CASE("Plancherel for the free system") {
  const auto H = free_system(1.0);
  const SpectralMeasure mu(Weight::constant(1.0));
  const auto f = SampledFunction::indicator(0.0, 1.0);
  const double coarse = isometry_residual(H, mu, f, 1.0, 100.0);
  const double fine = isometry_residual(H, mu, f, 1.0, 1000.0);
  CHECK(fine <= 1e-3);
  CHECK(fine <= coarse);
}

TEST_CASE("isometry on a recovered Hamiltonian") {
  const SpectralMeasure mu(Weight::cosine_bump(1.0, 2.0));
  const auto H = inverse_spectral(mu, 4.0, 128);
  const auto f = SampledFunction::from_samples(2.0, {0.0, 0.6, 1.0, 0.4, -0.3, 0.0});
  const auto rep = isometry_report(H, mu, f, 2.0, 200.0);
  CHECK(rep.f_norm2 == doctest::Approx(f.norm2()));
  CHECK(rep.residual <= 1e-3 * rep.f_norm2);
}

TEST_CASE("waves need unimodular Hamiltonians") {
  const auto H = Hamiltonian::constant({2.0, 0.0, 2.0}, 1.0, 1, false);
  CHECK_THROWS_AS(krein_wave(H, 0.5, 1.0), DomainError);
}
