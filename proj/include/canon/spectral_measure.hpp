#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace canon {

/// Density w(x) of an absolutely continuous measure on the real line.
///
/// Closed forms:
///   constant     w = c
///   step         w = level on |x| < half_width, 1 elsewhere
///   cosine-bump  w = 1 + amp (1 + cos(pi x / half_width)) / 2 on |x| < half_width, 1 elsewhere
///   sinc2-bump   w = 1 + amp (sin(b x) / (b x))^2   (band-limited: w - 1 has Fourier support [-2b, 2b])
/// plus piecewise-linear samples (constant beyond the sample range) and truncations
/// w_j = w on [-j, j], 1 elsewhere.
class Weight {
public:
  enum class Kind { constant, step, cosine_bump, sinc2_bump, sampled, truncated };

  static Weight constant(double c);
  static Weight step(double level, double half_width);
  static Weight cosine_bump(double amplitude, double half_width);
  static Weight sinc2_bump(double amplitude, double bandwidth = 1.0);
  static Weight sampled(std::vector<double> x, std::vector<double> w);
  static Weight truncated(const Weight& inner, double j);

  Kind kind() const { return kind_; }
  double operator()(double x) const;

  /// Essential bounds c1 <= w <= c2.
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

  /// w equals left_tail() for x < -core_radius() and right_tail() for x > core_radius().
  /// Infinite for densities that only approach their tails asymptotically.
  double core_radius() const;
  double left_tail() const;
  double right_tail() const;

  /// Jump locations inside the core (quadrature breakpoints).
  std::vector<double> breakpoints() const;

  bool is_even() const;

  /// True when w - 1 is integrable, i.e. the accelerant exists.
  bool has_accelerant() const;

  /// k(t) = (1/2pi) int (w(x) - 1) e^{-ixt} dx, in closed form when the kind has one.
  std::optional<std::complex<double>> closed_form_accelerant(double t) const;

  /// Radius of the support of k when it is compact (band-limited w - 1).
  std::optional<double> band_limit() const;

  /// Name and parameters as used in job configs, e.g. "step level=2 half_width=1".
  std::string describe() const;

  /// Sample abscissae/values for sampled weights (empty otherwise).
  const std::vector<double>& sample_x() const { return xs_; }
  const std::vector<double>& sample_w() const { return ws_; }

private:
  Weight() = default;
  void set_bounds_from_samples();

  Kind kind_ = Kind::constant;
  double p0_ = 1.0;  // c | level | amplitude | amplitude | - | j
  double p1_ = 0.0;  // - | half_width | half_width | bandwidth
  double lower_ = 1.0;
  double upper_ = 1.0;
  std::vector<double> xs_, ws_;
  std::shared_ptr<const Weight> inner_;
};

/// Spectral measure mu = w dx + mu_s together with the Herglotz constants a, b.
/// The singular part is carried as atoms only so that numerics can reject it.
struct SpectralMeasure {
  Weight density = Weight::constant(1.0);
  std::vector<std::pair<double, double>> singular_part;  // (location, mass)
  double herglotz_a = 0.0;
  double herglotz_b = 0.0;

  explicit SpectralMeasure(Weight w) : density(std::move(w)) {}
};

/// Throws UnsupportedError when mu has a singular part.
void require_absolutely_continuous(const SpectralMeasure& mu);

/// (1/pi) int f(w(x)) Im z / |x - z|^2 dx for f = identity or log.
double poisson_average(const Weight& w, std::complex<double> z);
double poisson_log_average(const Weight& w, std::complex<double> z);

}  // namespace canon
