#include <doctest.h>

#include <random>

#include "canon/errors.hpp"
#include "canon/grid_hamiltonian.hpp"

using namespace canon;

namespace {

Hamiltonian single(const CellMatrix& c, bool unimodular = false) {
  return Hamiltonian(Grid::uniform(1.0, 1), {c}, unimodular);
}

}  // namespace

TEST_CASE("identity Hamiltonian is valid with zero det deviation") {
  const auto H = Hamiltonian::constant({1.0, 0.0, 1.0}, 10.0, 4, true);
  const auto rep = validate(H);
  CHECK(rep.valid());
  CHECK(rep.max_det_deviation == 0.0);
}

TEST_CASE("indefinite cell is rejected with its determinant") {
  const auto rep = validate(single({1.0, 2.0, 1.0}));
  REQUIRE_FALSE(rep.valid());
  CHECK(rep.issues.front().kind == ValidationIssue::Kind::not_psd);
  CHECK(rep.issues.front().value == doctest::Approx(-3.0));
  CHECK_THROWS_AS(require_valid(single({1.0, 2.0, 1.0})), ValidationError);
}

TEST_CASE("unimodular flag checks det H = 1") {
  CHECK(validate(single({2.0, 0.0, 0.5}, true)).max_det_deviation == 0.0);
  const auto bad = validate(single({2.0, 0.0, 1.0}, true));
  REQUIRE_FALSE(bad.valid());
  CHECK(bad.issues.front().kind == ValidationIssue::Kind::det_not_one);
}

TEST_CASE("zero trace and non-finite entries are invalid") {
  CHECK_FALSE(validate(single({0.0, 0.0, 0.0})).valid());
  CHECK_FALSE(validate(single({std::numeric_limits<double>::infinity(), 0.0, 1.0})).valid());
}

TEST_CASE("dual swaps the diagonal and negates the off-diagonal") {
  CHECK(dual(single({3.0, 0.0, 5.0})).cell(0) == CellMatrix{5.0, 0.0, 3.0});
  CHECK(dual(single({1.0, 0.0, 1.0})).cell(0) == CellMatrix{1.0, 0.0, 1.0});
  CHECK(dual(single({2.0, 1.0, 1.0})).cell(0) == CellMatrix{1.0, -1.0, 2.0});
}

TEST_CASE("dual is an involution") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<CellMatrix> cells;
  for (int i = 0; i < 6; ++i) cells.push_back({2.0 + u(rng), u(rng), 2.0 + u(rng)});
  const Hamiltonian H(Grid::uniform(3.0, 6), cells, false);
  CHECK(dual(dual(H)) == H);
}

TEST_CASE("dilation scales the grid and keeps cell values") {
  const Hamiltonian H(Grid(std::vector<double>{0.0, 1.0, 2.0}), {{2.0, 0.0, 0.5}, {1.0, 0.2, 1.0}}, false);
  CHECK(dilate(H, 1.0) == H);
  const auto D = dilate(H, 2.0);
  REQUIRE(D.cell_count() == 2);
  CHECK(D.grid().left(1) == 2.0);
  CHECK(D.grid().end() == 4.0);
  CHECK(D.cell(0) == H.cell(0));
  CHECK(D.cell(1) == H.cell(1));
  CHECK_THROWS_AS(dilate(H, 0.0), DomainError);
}

TEST_CASE("grid cells are half-open and the end belongs to the last cell") {
  const Grid g(std::vector<double>{0.0, 1.0, 3.0});
  CHECK(g.cell_index(0.0) == 0);
  CHECK(g.cell_index(1.0) == 1);
  CHECK(g.cell_index(2.999) == 1);
  CHECK(g.cell_index(3.0) == 1);
  CHECK_THROWS(Grid(std::vector<double>{0.0, 2.0, 1.0}));
}
