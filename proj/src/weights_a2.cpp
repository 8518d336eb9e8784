#include "canon/weights_a2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "canon/errors.hpp"
#include "canon/parallel.hpp"
#include "canon/quadrature.hpp"

namespace canon {

HalfLineFunction::HalfLineFunction(Grid g, std::vector<double> v, std::optional<double> tail_value)
    : grid(std::move(g)), values(std::move(v)), tail(tail_value) {
  if (values.size() != grid.cell_count()) throw DomainError("half-line function needs one value per cell");
  for (double x : values) {
    if (!std::isfinite(x)) throw DomainError("half-line function values must be finite");
  }
  if (tail && !std::isfinite(*tail)) throw DomainError("half-line function tail must be finite");
}

HalfLineFunction HalfLineFunction::constant(double value, double length, std::size_t cells,
                                            std::optional<double> tail_value) {
  return HalfLineFunction(Grid::uniform(length, cells), std::vector<double>(cells, value), tail_value);
}

double HalfLineFunction::at(double t) const {
  if (t >= grid.end()) {
    if (tail) return *tail;
    if (t == grid.end()) return values.back();
    throw DomainError("half-line function evaluated beyond its grid without a tail");
  }
  return values[grid.cell_index(t)];
}

HalfLineFunction HalfLineFunction::dilated(double y) const {
  if (!(y > 0.0)) throw DomainError("dilation factor must be positive");
  return HalfLineFunction(grid.scaled(y), values, tail);
}

HalfLineFunction HalfLineFunction::map(double (*fn)(double)) const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), fn);
  std::optional<double> t;
  if (tail) t = fn(*tail);
  return HalfLineFunction(grid, std::move(out), t);
}

namespace {

void require_no_tail(const HalfLineFunction& f) {
  if (f.tail && *f.tail != 0.0) throw UnsupportedError("a nonzero constant tail is not in L^1 + L^2");
}

void require_positive(const HalfLineFunction& f) {
  for (double v : f.values) {
    if (!(v > 0.0)) throw DomainError("A2 characteristics need a strictly positive function");
  }
  if (f.tail && !(*f.tail > 0.0)) throw DomainError("A2 characteristics need a strictly positive tail");
}

double objective_values(const Grid& g, const std::vector<double>& v, double c) {
  double l1 = 0.0;
  double l2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    const double w = g.width(i);
    l1 += w * std::max(a - c, 0.0);
    const double m = std::min(a, c);
    l2 += w * m * m;
  }
  return l1 + std::sqrt(l2);
}

struct Minimum {
  double level;
  double value;
};

Minimum minimize_truncation(const Grid& g, const std::vector<double>& v) {
  double top = 0.0;
  for (double x : v) top = std::max(top, std::abs(x));
  if (top == 0.0) return {0.0, 0.0};
  auto F = [&](double c) { return objective_values(g, v, c); };
  constexpr int scan = 64;
  Minimum best{0.0, F(0.0)};
  int best_k = 0;
  for (int k = 1; k <= scan; ++k) {
    const double c = top * k / scan;
    const double val = F(c);
    if (val < best.value) {
      best = {c, val};
      best_k = k;
    }
  }
  double lo = top * std::max(best_k - 1, 0) / scan;
  double hi = top * std::min(best_k + 1, scan) / scan;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = F(x1);
  double f2 = F(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-13 * top; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = F(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = F(x2);
    }
  }
  if (f1 < best.value) best = {x1, f1};
  if (f2 < best.value) best = {x2, f2};
  return best;
}

// int_a^b f (or 1/f) for piecewise-constant f; b may pass the grid end only with a tail.
double window_integral(const HalfLineFunction& f, double a, double b, bool reciprocal) {
  const Grid& g = f.grid;
  double total = 0.0;
  const double end = g.end();
  if (a < end) {
    std::size_t i = g.cell_index(a);
    for (; i < g.cell_count() && g.left(i) < b; ++i) {
      const double lo = std::max(a, g.left(i));
      const double hi = std::min(b, g.right(i));
      if (hi > lo) total += (hi - lo) * (reciprocal ? 1.0 / f.values[i] : f.values[i]);
    }
  }
  if (b > end) {
    if (!f.tail) throw DomainError("window reaches past the grid of a function without a tail");
    const double lo = std::max(a, end);
    total += (b - lo) * (reciprocal ? 1.0 / *f.tail : *f.tail);
  }
  return total;
}

// int_I f * int_I 1/f - |I|^2 as a sum of nonnegative pair terms, exact zero for constants.
double window_defect(const HalfLineFunction& f, double a, double b) {
  std::vector<std::pair<double, double>> pieces;  // (width, value)
  const Grid& g = f.grid;
  const double end = g.end();
  if (a < end) {
    for (std::size_t i = g.cell_index(a); i < g.cell_count() && g.left(i) < b; ++i) {
      const double lo = std::max(a, g.left(i));
      const double hi = std::min(b, g.right(i));
      if (hi > lo) pieces.emplace_back(hi - lo, f.values[i]);
    }
  }
  if (b > end) pieces.emplace_back(b - std::max(a, end), *f.tail);
  if (pieces.size() > 2000) {
    return window_integral(f, a, b, false) * window_integral(f, a, b, true) - (b - a) * (b - a);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const double r = std::sqrt(pieces[i].second / pieces[j].second);
      const double d = r - 1.0 / r;
      total += pieces[i].first * pieces[j].first * d * d;
    }
  }
  return total;
}

}  // namespace

double truncation_objective(const HalfLineFunction& f, double c) {
  require_no_tail(f);
  return objective_values(f.grid, f.values, c);
}

double norm_L1_plus_L2(const HalfLineFunction& f) {
  require_no_tail(f);
  return minimize_truncation(f.grid, f.values).value;
}

std::pair<std::vector<double>, std::vector<double>> rearrange_nonnegative_split(const std::vector<double>& f1,
                                                                                const std::vector<double>& f2) {
  if (f1.size() != f2.size()) throw DomainError("split parts must have equal length");
  std::vector<double> a(f1.size()), b(f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    const double f11 = std::max(f1[i], 0.0), f12 = std::max(-f1[i], 0.0);
    const double f21 = std::max(f2[i], 0.0), f22 = std::max(-f2[i], 0.0);
    a[i] = f11 - f22;
    b[i] = f21 - f12;
  }
  return {a, b};
}

L1L2Split decompose_L1_L2(const HalfLineFunction& f) {
  require_no_tail(f);
  const Grid& g = f.grid;
  const std::size_t n = f.values.size();
  const Minimum whole = minimize_truncation(g, f.values);

  std::vector<double> f1(n, 0.0), f2(n, 0.0);
  for (int sign : {1, -1}) {
    std::vector<double> part(n);
    for (std::size_t i = 0; i < n; ++i) part[i] = std::max(sign * f.values[i], 0.0);
    Minimum m = minimize_truncation(g, part);
    const double at_whole = objective_values(g, part, whole.level);
    if (at_whole < m.value) m = {whole.level, at_whole};
    std::vector<double> p1(n), p2(n);
    for (std::size_t i = 0; i < n; ++i) {
      p1[i] = std::max(part[i] - m.level, 0.0);
      p2[i] = part[i] - p1[i];
    }
    auto [q1, q2] = rearrange_nonnegative_split(p1, p2);
    for (std::size_t i = 0; i < n; ++i) {
      f1[i] += sign * q1[i];
      f2[i] += sign * q2[i];
    }
  }

  // Make f1 + f2 == f hold exactly in floating point.
  for (std::size_t i = 0; i < n; ++i) {
    f1[i] = f.values[i] - f2[i];
    if (f1[i] + f2[i] != f.values[i]) f2[i] = f.values[i] - f1[i];
  }

  double l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    l1 += g.width(i) * std::abs(f1[i]);
    l2 += g.width(i) * f2[i] * f2[i];
  }
  L1L2Split out{HalfLineFunction(g, std::move(f1)), HalfLineFunction(g, std::move(f2)), l1, std::sqrt(l2),
                whole.value};
  return out;
}

A2Ell1Result a2_ell1_terms(const HalfLineFunction& f, const A2Windows& windows) {
  require_positive(f);
  if (!(windows.length > 0.0)) throw DomainError("window length must be positive");
  const double L = windows.length;
  const double stride = L / 2.0;
  const double end = f.end();
  A2Ell1Result out;
  long n0 = 0;
  if (windows.offset < 0.0) n0 = static_cast<long>(std::ceil(-windows.offset / stride));
  for (long n = n0;; ++n) {
    const double a = windows.offset + n * stride;
    const double b = a + L;
    if (f.tail ? a >= end : b > end * (1.0 + 1e-14)) break;
    const double term = 4.0 * window_defect(f, a, std::min(b, f.tail ? b : end)) / (L * L);
    out.terms.push_back(term);
    out.value += term;
  }
  return out;
}

double a2_classical(const HalfLineFunction& f, int interval_budget) {
  require_positive(f);
  if (interval_budget < 0) throw DomainError("interval budget must be nonnegative");
  const bool constant = std::all_of(f.values.begin(), f.values.end(), [&](double v) { return v == f.values[0]; }) &&
                        (!f.tail || *f.tail == f.values[0]);
  if (constant) return 1.0;

  std::vector<double> x{0.0}, P{0.0}, Q{0.0};
  const int split = 1 << interval_budget;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const double w = f.grid.width(i) / split;
    for (int k = 0; k < split; ++k) {
      x.push_back(k + 1 == split ? f.grid.right(i) : f.grid.left(i) + (k + 1) * w);
      P.push_back(P.back() + w * f.values[i]);
      Q.push_back(Q.back() + w / f.values[i]);
    }
  }
  if (f.tail) {
    const double T = f.end();
    for (int k = 0; k < 8 + interval_budget; ++k) {
      const double w = T * std::ldexp(1.0, k) / split;
      x.push_back(x.back() + w);
      P.push_back(P.back() + w * *f.tail);
      Q.push_back(Q.back() + w / *f.tail);
    }
  }
  const std::size_t m = x.size();
  std::vector<double> row_max(m, 1.0);
  parallel_for(m, [&](std::size_t i) {
    double best = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double len = x[j] - x[i];
      best = std::max(best, (P[j] - P[i]) * (Q[j] - Q[i]) / (len * len));
    }
    row_max[i] = best;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

std::string HarnessReport::to_text() const {
  std::ostringstream out;
  out.precision(17);
  out << "phi_norm=" << phi_norm << "\nD=" << D << "\nh_a2_ell1=" << h_a2_ell1 << "\nwitness_ratio=" << witness_ratio
      << "\nfinite=" << (finite ? 1 : 0) << "\n";
  return out.str();
}

HarnessReport lemma2_harness(const HalfLineFunction& phi, const HalfLineFunction& h) {
  require_positive(h);
  HarnessReport rep;
  rep.phi_norm = norm_L1_plus_L2(phi);

  std::vector<double> nodes(phi.grid.nodes().begin(), phi.grid.nodes().end());
  nodes.insert(nodes.end(), h.grid.nodes().begin(), h.grid.nodes().end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const double span = h.tail ? nodes.back() : h.end();

  const GaussLegendre& rule = gauss_legendre(16);
  double log_g = 0.0;
  double D = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size() && nodes[i] < span; ++i) {
    const double a = nodes[i];
    const double b = std::min(nodes[i + 1], span);
    const double mid = 0.5 * (a + b);
    const double p = mid < phi.end() ? phi.at(mid) : 0.0;
    const double hv = h.at(mid);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.order(); ++k) {
      const double s = half + half * rule.nodes[k];
      const double u = std::exp(log_g + p * s) * hv;
      const double d = std::sqrt(u) - 1.0 / std::sqrt(u);
      D += rule.weights[k] * half * d * d;
    }
    log_g += p * (b - a);
  }
  if (h.tail) {
    const double u = std::exp(log_g) * *h.tail;
    if (std::abs(u - 1.0) > 1e-12) {
      rep.finite = false;
      D = std::numeric_limits<double>::infinity();
    }
  }
  rep.D = D;
  rep.h_a2_ell1 = a2_ell1(h);
  rep.witness_ratio = rep.finite ? rep.h_a2_ell1 / (D * D + 1.0) : 0.0;
  return rep;
}

}  // namespace canon
