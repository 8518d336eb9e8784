#include "canon/grid_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "canon/errors.hpp"

namespace canon {

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("grid needs at least one cell");
  if (nodes_.front() != 0.0) throw DomainError("grid must start at t = 0");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i + 1] > nodes_[i]) || !std::isfinite(nodes_[i + 1])) {
      throw DomainError("grid nodes must be finite and strictly increasing");
    }
  }
}

Grid Grid::uniform(double length, std::size_t cells) {
  if (!(length > 0.0) || cells == 0) throw DomainError("uniform grid needs length > 0 and cells >= 1");
  std::vector<double> nodes(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) nodes[i] = length * static_cast<double>(i) / cells;
  nodes.back() = length;
  return Grid(std::move(nodes));
}

std::size_t Grid::cell_index(double t) const {
  if (t < nodes_.front() || t > nodes_.back()) throw DomainError("time outside grid");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - nodes_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, cell_count() - 1);
}

Grid Grid::scaled(double factor) const {
  std::vector<double> nodes(nodes_);
  for (double& t : nodes) t *= factor;
  return Grid(std::move(nodes));
}

Hamiltonian::Hamiltonian(Grid grid, std::vector<CellMatrix> cells, bool unimodular)
    : grid_(std::move(grid)), cells_(std::move(cells)), unimodular_(unimodular) {
  if (cells_.size() != grid_.cell_count()) {
    throw DomainError("Hamiltonian needs exactly one matrix per grid cell");
  }
}

Hamiltonian Hamiltonian::constant(const CellMatrix& value, double length, std::size_t cells,
                                  bool unimodular) {
  return Hamiltonian(Grid::uniform(length, cells), std::vector<CellMatrix>(cells, value), unimodular);
}

std::string ValidationReport::summary() const {
  if (issues.empty()) return "valid";
  std::ostringstream out;
  out << issues.size() << " issue(s):";
  std::size_t shown = 0;
  for (const auto& issue : issues) {
    if (shown++ == 5) {
      out << " ...";
      break;
    }
    out << " [cell " << issue.cell << ": ";
    switch (issue.kind) {
      case ValidationIssue::Kind::not_psd: out << "not PSD, det=" << issue.value; break;
      case ValidationIssue::Kind::non_finite_trace: out << "non-finite trace"; break;
      case ValidationIssue::Kind::zero_trace: out << "trace vanishes identically"; break;
      case ValidationIssue::Kind::det_not_one: out << "det-1 deviation " << issue.value; break;
    }
    out << "]";
  }
  return out.str();
}

ValidationReport validate(const Hamiltonian& H) {
  ValidationReport report;
  bool any_trace = false;
  for (std::size_t i = 0; i < H.cell_count(); ++i) {
    const CellMatrix& m = H.cell(i);
    const double tr = m.trace();
    if (!std::isfinite(m.h1) || !std::isfinite(m.h2) || !std::isfinite(m.h)) {
      report.issues.push_back({ValidationIssue::Kind::non_finite_trace, i, tr});
      continue;
    }
    const double scale = 1e-12 * std::max(1.0, std::abs(tr) * std::abs(tr));
    const double det = m.det();
    if (m.h1 < 0.0 || m.h2 < 0.0 || det < -scale) {
      report.issues.push_back({ValidationIssue::Kind::not_psd, i, det});
    }
    if (tr > 0.0) any_trace = true;
    if (H.unimodular()) {
      const double dev = std::abs(det - 1.0);
      report.max_det_deviation = std::max(report.max_det_deviation, dev);
      if (dev > kUnimodularTolerance) report.issues.push_back({ValidationIssue::Kind::det_not_one, i, dev});
    }
  }
  if (!any_trace) report.issues.push_back({ValidationIssue::Kind::zero_trace, H.cell_count(), 0.0});
  return report;
}

void require_valid(const Hamiltonian& H) {
  ValidationReport report = validate(H);
  if (!report.valid()) throw ValidationError("invalid Hamiltonian: " + report.summary());
}

Hamiltonian dual(const Hamiltonian& H) {
  std::vector<CellMatrix> cells;
  cells.reserve(H.cell_count());
  for (const CellMatrix& m : H.cells()) cells.push_back({m.h2, -m.h, m.h1});
  return Hamiltonian(H.grid(), std::move(cells), H.unimodular());
}

Hamiltonian dilate(const Hamiltonian& H, double y) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("dilation factor must be positive");
  return Hamiltonian(H.grid().scaled(y), std::vector<CellMatrix>(H.cells().begin(), H.cells().end()),
                     H.unimodular());
}

}  // namespace canon
