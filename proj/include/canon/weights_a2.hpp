#pragma once

#include <optional>
#include <string>
#include <vector>

#include "canon/grid_hamiltonian.hpp"

namespace canon {

/// Piecewise-constant function on the half-line: values[i] on cell i of the grid,
/// then `tail` (if any) beyond the grid end. Without a tail the function is only
/// known on [0, grid end].
struct HalfLineFunction {
  Grid grid;
  std::vector<double> values;
  std::optional<double> tail;

  HalfLineFunction(Grid g, std::vector<double> v, std::optional<double> tail_value = std::nullopt);

  static HalfLineFunction constant(double value, double length, std::size_t cells = 1,
                                   std::optional<double> tail_value = std::nullopt);

  double at(double t) const;
  double end() const { return grid.end(); }
  std::size_t cell_count() const { return values.size(); }

  /// t -> f(t / y).
  HalfLineFunction dilated(double y) const;
  HalfLineFunction map(double (*fn)(double)) const;
};

/// min over c in [0, max|f|] of ||(|f| - c)_+||_1 + ||min(|f|, c)||_2 (golden-section search
/// after a coarse scan). An upper bound for the L^1 + L^2 norm, equivalent to it up to a constant.
double norm_L1_plus_L2(const HalfLineFunction& f);

/// Value of the truncation objective at a fixed level c.
double truncation_objective(const HalfLineFunction& f, double c);

struct L1L2Split {
  HalfLineFunction f1;  // L^1 part
  HalfLineFunction f2;  // L^2 part
  double l1_norm = 0.0;
  double l2_norm = 0.0;
  double operational_norm = 0.0;  // norm_L1_plus_L2(f)
};

/// For f >= 0 split as f = f1 + f2 with arbitrary signs, returns (f11 - f22, f21 - f12), both in [0, f].
std::pair<std::vector<double>, std::vector<double>> rearrange_nonnegative_split(const std::vector<double>& f1,
                                                                                const std::vector<double>& f2);

/// f = f1 + f2, |f1|, |f2| <= |f| per cell, ||f1||_1 + ||f2||_2 <= 4 ||f||_{1,2}.
L1L2Split decompose_L1_L2(const HalfLineFunction& f);

/// Windows used by the l^1 characteristic: [offset + n L/2, offset + n L/2 + L], n >= 0, with
/// windows starting before 0 skipped. Default is the [n, n+2] family.
struct A2Windows {
  double length = 2.0;
  double offset = 0.0;
};

struct A2Ell1Result {
  double value = 0.0;
  std::vector<double> terms;  // one per window, each >= 0 up to rounding
};

/// sum over windows of 4 (avg f * avg 1/f - 1); with the default windows this is
/// sum_n (int_n^{n+2} f * int_n^{n+2} 1/f - 4). Without a tail only windows inside the grid count.
A2Ell1Result a2_ell1_terms(const HalfLineFunction& f, const A2Windows& windows = {});
inline double a2_ell1(const HalfLineFunction& f, const A2Windows& windows = {}) {
  return a2_ell1_terms(f, windows).value;
}

/// sup over intervals of avg f * avg 1/f, scanning all intervals whose endpoints lie on the
/// grid refined dyadically `interval_budget` times (tail represented by geometric cells).
double a2_classical(const HalfLineFunction& f, int interval_budget = 2);

struct HarnessReport {
  double phi_norm = 0.0;     // ||g'/g||_{1,2}
  double D = 0.0;            // ||g h + (g h)^{-1} - 2||_1
  double h_a2_ell1 = 0.0;    // [h]_{2, l^1}
  double witness_ratio = 0.0;  // [h]_{2, l^1} / (D^2 + 1)
  bool finite = true;

  std::string to_text() const;
};

/// Inequality harness for h against g = exp(int_0^t phi), g(0) = 1.
HarnessReport lemma2_harness(const HalfLineFunction& phi, const HalfLineFunction& h);

}  // namespace canon
