#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace canon {

/// Partition 0 = t_0 < t_1 < ... < t_K of a bounded piece of the half-line.
/// Functions on a grid are constant on each half-open cell [t_i, t_{i+1}).
class Grid {
public:
  explicit Grid(std::vector<double> nodes);

  /// K equal cells on [0, length].
  static Grid uniform(double length, std::size_t cells);

  std::span<const double> nodes() const { return nodes_; }
  std::size_t cell_count() const { return nodes_.size() - 1; }
  double start() const { return nodes_.front(); }
  double end() const { return nodes_.back(); }
  double left(std::size_t cell) const { return nodes_[cell]; }
  double right(std::size_t cell) const { return nodes_[cell + 1]; }
  double width(std::size_t cell) const { return nodes_[cell + 1] - nodes_[cell]; }

  /// Cell containing t (right-continuous; t == end() maps to the last cell).
  std::size_t cell_index(double t) const;

  Grid scaled(double factor) const;

  bool operator==(const Grid&) const = default;

private:
  std::vector<double> nodes_;
};

/// Real symmetric 2x2 cell matrix [[h1, h], [h, h2]].
struct CellMatrix {
  double h1 = 1.0;
  double h = 0.0;
  double h2 = 1.0;

  double det() const { return h1 * h2 - h * h; }
  double trace() const { return h1 + h2; }
  bool operator==(const CellMatrix&) const = default;
};

/// The fixed signature matrix J = [[0, -1], [1, 0]].
struct SignatureMatrix {
  static constexpr double entries[2][2] = {{0.0, -1.0}, {1.0, 0.0}};
};

/// Piecewise-constant Hamiltonian t -> H(t) on a grid.
class Hamiltonian {
public:
  Hamiltonian(Grid grid, std::vector<CellMatrix> cells, bool unimodular);

  /// H(t) = value on [0, length].
  static Hamiltonian constant(const CellMatrix& value, double length, std::size_t cells = 1,
                              bool unimodular = false);

  const Grid& grid() const { return grid_; }
  std::span<const CellMatrix> cells() const { return cells_; }
  const CellMatrix& cell(std::size_t i) const { return cells_[i]; }
  const CellMatrix& at(double t) const { return cells_[grid_.cell_index(t)]; }
  std::size_t cell_count() const { return cells_.size(); }
  bool unimodular() const { return unimodular_; }

  bool operator==(const Hamiltonian&) const = default;

private:
  Grid grid_;
  std::vector<CellMatrix> cells_;
  bool unimodular_;
};

struct ValidationIssue {
  enum class Kind { not_psd, non_finite_trace, zero_trace, det_not_one };
  Kind kind;
  std::size_t cell;  // cell_count() for whole-Hamiltonian issues
  double value;      // offending determinant / trace / deviation
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  double max_det_deviation = 0.0;  // only meaningful for unimodular Hamiltonians

  bool valid() const { return issues.empty(); }
  std::string summary() const;
};

/// Tolerance for |det H - 1| on cells claimed unimodular.
inline constexpr double kUnimodularTolerance = 1e-10;

ValidationReport validate(const Hamiltonian& H);

/// Throws ValidationError carrying the report summary when H is invalid.
void require_valid(const Hamiltonian& H);

/// J^T H J per cell: [[h1, h], [h, h2]] -> [[h2, -h], [-h, h1]].
Hamiltonian dual(const Hamiltonian& H);

/// t -> H(t / y): grid nodes scaled by y, cell values unchanged.
Hamiltonian dilate(const Hamiltonian& H, double y);

}  // namespace canon
