#include <doctest.h>

#include <cmath>
#include <random>

#include "canon/errors.hpp"
#include "canon/weights_a2.hpp"

using namespace canon;

namespace {

HalfLineFunction random_piecewise(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cells(1, 12);
  std::uniform_real_distribution<double> width(0.05, 2.0), value(-4.0, 4.0);
  const int n = cells(rng);
  std::vector<double> nodes{0.0};
  std::vector<double> vals;
  for (int i = 0; i < n; ++i) {
    nodes.push_back(nodes.back() + width(rng));
    vals.push_back(value(rng));
  }
  return HalfLineFunction(Grid(nodes), vals);
}

// min_c ||(|f| - c)_+||_1 + ||min(|f|, c)||_2 on a dense c grid.
double scan_norm(const HalfLineFunction& f, int points) {
  double top = 0.0;
  for (double v : f.values) top = std::max(top, std::abs(v));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) best = std::min(best, truncation_objective(f, top * i / points));
  return best;
}

}  // namespace

TEST_CASE("operational norm of simple functions") {
  CHECK(norm_L1_plus_L2(HalfLineFunction::constant(0.0, 3.0)) == 0.0);
  CHECK(norm_L1_plus_L2(HalfLineFunction::constant(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("operational norm matches a dense scan") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_piecewise(rng);
    const double n = norm_L1_plus_L2(f);
    CHECK(n <= scan_norm(f, 10000) + 1e-12);
    CHECK(n >= scan_norm(f, 10000) - 1e-3 * (1.0 + n));
  }
}

TEST_CASE("operational norm is subadditive under scaling by 2") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_piecewise(rng);
    const auto g = f.map([](double v) { return 2.0 * v; });
    CHECK(norm_L1_plus_L2(g) <= 2.0 * norm_L1_plus_L2(f) + 1e-12);
  }
}

TEST_CASE("nonnegative rearrangement stays between 0 and f") {
  const std::vector<double> f1{3.0, -1.0, 0.5}, f2{-1.0, 2.0, 0.5};
  const auto [a, b] = rearrange_nonnegative_split(f1, f2);
  for (std::size_t i = 0; i < f1.size(); ++i) {
    const double f = f1[i] + f2[i];
    CHECK(a[i] + b[i] == doctest::Approx(f));
    CHECK(a[i] >= 0.0);
    CHECK(b[i] >= 0.0);
    CHECK(a[i] <= f);
    CHECK(b[i] <= f);
  }
}

TEST_CASE("decomposition of random functions") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_piecewise(rng);
    const auto s = decompose_L1_L2(f);
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
      CHECK(s.f1.values[i] + s.f2.values[i] == f.values[i]);
      CHECK(std::abs(s.f1.values[i]) <= std::abs(f.values[i]));
      CHECK(std::abs(s.f2.values[i]) <= std::abs(f.values[i]));
    }
    CHECK(s.l1_norm + s.l2_norm <= 4.0 * s.operational_norm + 1e-12);
  }
}

TEST_CASE("small bounded functions split into an L2 part") {
  const HalfLineFunction f(Grid::uniform(4.0, 4), {0.5, -0.25, 1.0, 0.1});
  const auto s = decompose_L1_L2(f);
  CHECK(s.l1_norm + s.l2_norm <= 4.0 * s.operational_norm + 1e-12);
}

TEST_CASE("ell1 characteristic vanishes exactly on constants") {
  for (double c : {5.0, 0.01, 1.0}) {
    CHECK(a2_ell1(HalfLineFunction::constant(c, 10.0, 5, c)) == 0.0);
    CHECK(a2_ell1(HalfLineFunction::constant(c, 10.0, 5)) == 0.0);
  }
}

TEST_CASE("ell1 characteristic of a single step") {
  // Only the window [0, 2] sees the jump: (2 + 1)(1/2 + 1) - 4.
  const HalfLineFunction f(Grid(std::vector<double>{0.0, 1.0, 6.0}), {2.0, 1.0}, 1.0);
  const auto r = a2_ell1_terms(f);
  REQUIRE_FALSE(r.terms.empty());
  CHECK(r.terms[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("ell1 terms are nonnegative") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_piecewise(rng).map([](double v) { return std::exp(v / 2.0); });
    for (double t : a2_ell1_terms(f).terms) CHECK(t >= -1e-12);
  }
}

TEST_CASE("classical A2 characteristic") {
  CHECK(a2_classical(HalfLineFunction::constant(3.0, 4.0, 4, 3.0)) == 1.0);
  // sup over [1 - a, 1 + a] of (3/2)(3/4).
  const HalfLineFunction f(Grid(std::vector<double>{0.0, 1.0, 2.0}), {2.0, 1.0}, 1.0);
  CHECK(a2_classical(f) == doctest::Approx(1.125).epsilon(1e-12));
}

TEST_CASE("classical A2 characteristic is dilation invariant") {
  std::mt19937_64 rng(37);
  const auto f = random_piecewise(rng).map([](double v) { return std::exp(v / 3.0); });
  const double base = a2_classical(f);
  CHECK(base >= 1.0);
  for (double y : {0.5, 2.0, 8.0}) CHECK(a2_classical(f.dilated(y)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("ratios need positive functions") {
  const HalfLineFunction f(Grid::uniform(2.0, 2), {1.0, -1.0});
  CHECK_THROWS_AS(a2_classical(f), DomainError);
  CHECK_THROWS_AS(a2_ell1(f), DomainError);
}

TEST_CASE("harness on trivial inputs") {
  const auto zero = HalfLineFunction::constant(0.0, 4.0, 2, 0.0);
  const auto one = HalfLineFunction::constant(1.0, 4.0, 2, 1.0);
  const auto r = lemma2_harness(zero, one);
  CHECK(r.finite);
  CHECK(r.D == 0.0);
  CHECK(r.h_a2_ell1 == 0.0);

  const HalfLineFunction phi(Grid::uniform(2.0, 2), {0.5, -0.5}, 0.0);
  CHECK(lemma2_harness(phi, one).h_a2_ell1 == 0.0);
}

TEST_CASE("harness ratio grows with the bump height") {
  const auto zero = HalfLineFunction::constant(0.0, 6.0, 3, 0.0);
  double previous = -1.0;
  for (double height : {0.1, 0.3, 0.6}) {
    const HalfLineFunction h(Grid(std::vector<double>{0.0, 1.0, 2.0, 6.0}), {1.0, 1.0 + height, 1.0}, 1.0);
    const auto r = lemma2_harness(zero, h);
    CHECK(r.finite);
    CHECK(std::isfinite(r.witness_ratio));
    CHECK(r.h_a2_ell1 > previous);
    previous = r.h_a2_ell1;
  }
}
