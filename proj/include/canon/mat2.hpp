#pragma once

#include <cmath>
#include <complex>

namespace canon {

using cplx = std::complex<double>;

/// 2-vector over C.
struct Vec2 {
  cplx plus{};   // first component
  cplx minus{};  // second component
};

/// Dense 2x2 complex matrix, row-major [[a, b], [c, d]].
struct Mat2 {
  cplx a{}, b{}, c{}, d{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
  Vec2 col0() const { return {a, c}; }
  Vec2 col1() const { return {b, d}; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Vec2 operator*(const Vec2& v) const { return {a * v.plus + b * v.minus, c * v.plus + d * v.minus}; }
  Mat2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

  double max_abs() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
  }
};

/// <u, v> = u^T conj(v), linear in the first slot.
inline cplx inner(const Vec2& u, const Vec2& v) {
  return u.plus * std::conj(v.plus) + u.minus * std::conj(v.minus);
}

/// J = [[0, -1], [1, 0]] applied to v.
inline Vec2 apply_J(const Vec2& v) { return {-v.minus, v.plus}; }

}  // namespace canon
