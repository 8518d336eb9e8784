#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "canon/errors.hpp"
#include "canon/krein_inverse.hpp"
#include "canon/weyl_spectral.hpp"

using namespace canon;
using std::numbers::pi;

TEST_CASE("unit weight has zero accelerant") {
  const auto k = accelerant_from_weight(SpectralMeasure(Weight::constant(1.0)), 5.0, 11);
  for (double v : k.values) CHECK(v == 0.0);
}

TEST_CASE("unit step accelerant is sin t / (pi t)") {
  const auto k = accelerant_samples(Weight::step(2.0, 1.0), 0.25, 41);
  CHECK(k.values[0] == doctest::Approx(1.0 / pi).epsilon(1e-14));
  for (std::size_t i = 1; i < k.values.size(); ++i) {
    const double t = 0.25 * static_cast<double>(i);
    CHECK(k.values[i] == doctest::Approx(std::sin(t) / (pi * t)).epsilon(1e-12));
  }
  CHECK(k.at(-0.75) == k.at(0.75));
}

TEST_CASE("triangular spectrum of the sinc2 bump") {
  const auto k = accelerant_samples(Weight::sinc2_bump(0.5, 1.0), 0.5, 7);
  CHECK(k.band_limit.has_value());
  CHECK(*k.band_limit == 2.0);
  CHECK(k.values[0] == doctest::Approx(0.25));
  CHECK(k.values[2] == doctest::Approx(0.125));
  CHECK(k.values[4] == 0.0);
  CHECK(k.at(10.0) == 0.0);
}

TEST_CASE("numeric accelerant of a truncated weight") {
  const Weight w = Weight::truncated(Weight::constant(2.0), 1.0);
  const auto k = accelerant_samples(w, 0.5, 9);
  for (std::size_t i = 1; i < k.values.size(); ++i) {
    const double t = 0.5 * static_cast<double>(i);
    CHECK(k.values[i] == doctest::Approx(std::sin(t) / (pi * t)).epsilon(1e-10));
  }
}

TEST_CASE("accelerant needs an integrable perturbation") {
  CHECK_THROWS_AS(accelerant_samples(Weight::constant(2.0), 0.1, 4), DomainError);
}

TEST_CASE("Levinson recursion matches a dense Cholesky factor") {
  const auto k = accelerant_samples(Weight::cosine_bump(1.0, 2.0), 0.1, 40);
  const std::size_t N = 40;
  const auto W = nystrom_matrix(k, N);
  Eigen::MatrixXd M(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) M(i, j) = W[i * N + j];
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(M).matrixL();
  const Eigen::VectorXd phi = L.triangularView<Eigen::Lower>().solve(Eigen::VectorXd::Ones(N));
  const auto lev = levinson_szego(k, N);
  REQUIRE(lev.phi_at_one.size() == N);
  for (std::size_t n = 0; n < N; ++n) CHECK(lev.phi_at_one[n] == doctest::Approx(phi(n)).epsilon(1e-10));
  for (double a : lev.verblunsky) CHECK(std::abs(a) < 1.0);
}

TEST_CASE("unit weight inverts to the free system") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::constant(1.0)), 4.0, 8);
  CHECK(H.unimodular());
  for (const auto& c : H.cells()) CHECK(c == CellMatrix{1.0, 0.0, 1.0});
}

TEST_CASE("constant weight inverts analytically") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::constant(4.0)), 2.0, 4);
  for (const auto& c : H.cells()) {
    CHECK(c.h1 == doctest::Approx(0.25));
    CHECK(c.h2 == doctest::Approx(4.0));
  }
  WeylOptions opt;
  opt.extend_tail = true;
  CHECK(spectral_density(H, 0.5, 1e-2, opt) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("recovered cells are unimodular and diagonal") {
  const auto H = inverse_spectral(SpectralMeasure(Weight::step(2.0, 1.0)), 10.0, 64);
  for (const auto& c : H.cells()) {
    CHECK(c.h == 0.0);
    CHECK(c.det() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(H.grid().end() == doctest::Approx(10.0));
}

TEST_CASE("nonpositive weights are rejected") {
  CHECK_THROWS_AS(inverse_spectral(SpectralMeasure(Weight::step(0.0, 1.0)), 5.0, 16), SpectralPositivityError);
}

TEST_CASE("condition number of the discretized operator is reported") {
  const auto r = inverse_spectral_report(SpectralMeasure(Weight::step(3.0, 1.0)), 10.0, 64);
  CHECK(r.cond >= 1.0);
  CHECK(r.cond <= 3.0 * 1.2);
  CHECK_FALSE(r.ill_conditioned);
}
