#include "canon/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "canon/errors.hpp"

namespace canon {

using std::numbers::pi;

Weight Weight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant weight must be positive");
  Weight w;
  w.kind_ = Kind::constant;
  w.p0_ = c;
  w.lower_ = w.upper_ = c;
  return w;
}

Weight Weight::step(double level, double half_width) {
  if (!(level >= 0.0) || !(half_width > 0.0)) throw DomainError("step weight needs level >= 0, half_width > 0");
  Weight w;
  w.kind_ = Kind::step;
  w.p0_ = level;
  w.p1_ = half_width;
  w.lower_ = std::min(level, 1.0);
  w.upper_ = std::max(level, 1.0);
  return w;
}

Weight Weight::cosine_bump(double amplitude, double half_width) {
  if (!(amplitude > -1.0) || !(half_width > 0.0)) {
    throw DomainError("cosine-bump needs amplitude > -1, half_width > 0");
  }
  Weight w;
  w.kind_ = Kind::cosine_bump;
  w.p0_ = amplitude;
  w.p1_ = half_width;
  w.lower_ = std::min(1.0, 1.0 + amplitude);
  w.upper_ = std::max(1.0, 1.0 + amplitude);
  return w;
}

Weight Weight::sinc2_bump(double amplitude, double bandwidth) {
  if (!(amplitude > -1.0) || !(bandwidth > 0.0)) throw DomainError("sinc2-bump needs amplitude > -1, bandwidth > 0");
  Weight w;
  w.kind_ = Kind::sinc2_bump;
  w.p0_ = amplitude;
  w.p1_ = bandwidth;
  // sinc^2 takes every value in [0, 1].
  w.lower_ = std::min(1.0, 1.0 + amplitude);
  w.upper_ = std::max(1.0, 1.0 + amplitude);
  return w;
}

Weight Weight::sampled(std::vector<double> x, std::vector<double> values) {
  if (x.size() != values.size() || x.size() < 2) throw DomainError("sampled weight needs >= 2 matching samples");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i + 1] > x[i])) throw DomainError("sampled weight abscissae must be strictly increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("sampled weight values must be finite and >= 0");
  }
  Weight w;
  w.kind_ = Kind::sampled;
  w.xs_ = std::move(x);
  w.ws_ = std::move(values);
  w.set_bounds_from_samples();
  return w;
}

Weight Weight::truncated(const Weight& inner, double j) {
  if (!(j > 0.0)) throw DomainError("truncation level must be positive");
  Weight w;
  w.kind_ = Kind::truncated;
  w.p0_ = j;
  w.inner_ = std::make_shared<const Weight>(inner);
  w.lower_ = std::min(inner.lower_bound(), 1.0);
  w.upper_ = std::max(inner.upper_bound(), 1.0);
  return w;
}

void Weight::set_bounds_from_samples() {
  lower_ = *std::min_element(ws_.begin(), ws_.end());
  upper_ = *std::max_element(ws_.begin(), ws_.end());
}

double Weight::operator()(double x) const {
  switch (kind_) {
    case Kind::constant: return p0_;
    case Kind::step: return std::abs(x) < p1_ ? p0_ : 1.0;
    case Kind::cosine_bump:
      return std::abs(x) < p1_ ? 1.0 + p0_ * 0.5 * (1.0 + std::cos(pi * x / p1_)) : 1.0;
    case Kind::sinc2_bump: {
      const double u = p1_ * x;
      const double s = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
      return 1.0 + p0_ * s * s;
    }
    case Kind::sampled: {
      if (x <= xs_.front()) return ws_.front();
      if (x >= xs_.back()) return ws_.back();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
      const double f = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
      return ws_[i] + f * (ws_[i + 1] - ws_[i]);
    }
    case Kind::truncated: return std::abs(x) <= p0_ ? (*inner_)(x) : 1.0;
  }
  return 1.0;
}

double Weight::core_radius() const {
  switch (kind_) {
    case Kind::constant: return 0.0;
    case Kind::step:
    case Kind::cosine_bump: return p1_;
    case Kind::sinc2_bump: return std::numeric_limits<double>::infinity();
    case Kind::sampled: return std::max(std::abs(xs_.front()), std::abs(xs_.back()));
    case Kind::truncated:
      if (inner_->core_radius() < p0_ && inner_->left_tail() == 1.0 && inner_->right_tail() == 1.0) {
        return inner_->core_radius();
      }
      return p0_;
  }
  return 0.0;
}

double Weight::left_tail() const {
  switch (kind_) {
    case Kind::constant: return p0_;
    case Kind::sampled: return ws_.front();
    default: return 1.0;
  }
}

double Weight::right_tail() const {
  switch (kind_) {
    case Kind::constant: return p0_;
    case Kind::sampled: return ws_.back();
    default: return 1.0;
  }
}

std::vector<double> Weight::breakpoints() const {
  switch (kind_) {
    case Kind::step:
    case Kind::cosine_bump: return {-p1_, p1_};
    case Kind::sampled: return xs_;
    case Kind::truncated: {
      std::vector<double> out{-p0_, p0_};
      for (double b : inner_->breakpoints()) {
        if (std::abs(b) < p0_) out.push_back(b);
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    default: return {};
  }
}

bool Weight::is_even() const {
  switch (kind_) {
    case Kind::sampled: {
      const std::size_t n = xs_.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(xs_[i] + xs_[n - 1 - i]) > 1e-12 * (1.0 + std::abs(xs_[i]))) return false;
        if (std::abs(ws_[i] - ws_[n - 1 - i]) > 1e-12 * (1.0 + std::abs(ws_[i]))) return false;
      }
      return true;
    }
    case Kind::truncated: return inner_->is_even();
    default: return true;
  }
}

bool Weight::has_accelerant() const {
  switch (kind_) {
    case Kind::constant: return p0_ == 1.0;
    case Kind::sampled: return std::abs(ws_.front() - 1.0) < 1e-12 && std::abs(ws_.back() - 1.0) < 1e-12;
    case Kind::truncated: return true;
    default: return true;
  }
}

std::optional<std::complex<double>> Weight::closed_form_accelerant(double t) const {
  const double at = std::abs(t);
  switch (kind_) {
    case Kind::constant:
      if (p0_ == 1.0) return std::complex<double>(0.0);
      return std::nullopt;
    case Kind::step: {
      const double L = p1_;
      const double v = at < 1e-8 ? L / pi * (1.0 - (L * t) * (L * t) / 6.0) : std::sin(L * at) / (pi * at);
      return std::complex<double>((p0_ - 1.0) * v);
    }
    case Kind::cosine_bump: {
      // (amp/2pi) sin(Lt) a^2 / (t (a^2 - t^2)), a = pi/L, removable at t = 0 and |t| = a.
      const double L = p1_;
      const double a = pi / L;
      if (at < 1e-7) return std::complex<double>(p0_ * L / (2.0 * pi));
      if (std::abs(at - a) < 1e-7 * a) return std::complex<double>(p0_ * L / (4.0 * pi));
      return std::complex<double>(p0_ / (2.0 * pi) * std::sin(L * at) * a * a / (at * (a * a - at * at)));
    }
    case Kind::sinc2_bump: {
      const double b = p1_;
      return std::complex<double>(p0_ / (2.0 * b) * std::max(0.0, 1.0 - at / (2.0 * b)));
    }
    default: return std::nullopt;
  }
}

std::optional<double> Weight::band_limit() const {
  if (kind_ == Kind::sinc2_bump) return 2.0 * p1_;
  if (kind_ == Kind::constant && p0_ == 1.0) return 0.0;
  return std::nullopt;
}

std::string Weight::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::constant: out << "constant c=" << p0_; break;
    case Kind::step: out << "step level=" << p0_ << " half_width=" << p1_; break;
    case Kind::cosine_bump: out << "cosine-bump amplitude=" << p0_ << " half_width=" << p1_; break;
    case Kind::sinc2_bump: out << "sinc2-bump amplitude=" << p0_ << " bandwidth=" << p1_; break;
    case Kind::sampled: out << "sampled n=" << xs_.size(); break;
    case Kind::truncated: out << "truncated j=" << p0_ << " of (" << inner_->describe() << ")"; break;
  }
  return out.str();
}

void require_absolutely_continuous(const SpectralMeasure& mu) {
  if (!mu.singular_part.empty()) {
    throw UnsupportedError("singular spectral parts are not supported by the numerics");
  }
}

namespace {

// (1/pi) int_a^b y / ((x - x0)^2 + y^2) dx, with infinite endpoints allowed.
double poisson_mass(double a, double b, double x0, double y) {
  auto F = [&](double x) {
    if (std::isinf(x)) return x > 0 ? pi / 2 : -pi / 2;
    return std::atan((x - x0) / y);
  };
  return (F(b) - F(a)) / pi;
}

template <class G>
double poisson_integral(const Weight& w, std::complex<double> z, G&& transform) {
  const double x0 = z.real();
  const double y = z.imag();
  if (!(y > 0.0)) throw DomainError("Poisson integral needs Im z > 0");
  double X = w.core_radius();
  if (std::isinf(X)) X = std::max(1000.0, 50.0 * std::abs(z));
  const double lt = transform(w.left_tail());
  const double rt = transform(w.right_tail());
  double total = lt * poisson_mass(-std::numeric_limits<double>::infinity(), -X, x0, y) +
                 rt * poisson_mass(X, std::numeric_limits<double>::infinity(), x0, y);
  if (X == 0.0) return total;

  std::vector<double> cuts{-X, X};
  for (double b : w.breakpoints()) {
    if (b > -X && b < X) cuts.push_back(b);
  }
  for (double s : {1.0, 10.0, 100.0}) {
    for (double c : {x0 - s * y, x0, x0 + s * y}) {
      if (c > -X && c < X) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double x) {
    const double d = x - x0;
    return transform(w(x)) * y / (pi * (d * d + y * y));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double max_piece = 4.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_piece)));
    const double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double lo = a + p * h;
      const double hi = (p + 1 == pieces) ? b : lo + h;
      total += GK::integrate(integrand, lo, hi, 10, 1e-11);
    }
  }
  return total;
}

}  // namespace

double poisson_average(const Weight& w, std::complex<double> z) {
  return poisson_integral(w, z, [](double v) { return v; });
}

double poisson_log_average(const Weight& w, std::complex<double> z) {
  if (!(w.lower_bound() > 0.0)) throw DomainError("log-Poisson average needs w bounded away from 0");
  return poisson_integral(w, z, [](double v) { return std::log(v); });
}

}  // namespace canon
