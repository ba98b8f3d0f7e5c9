#pragma once

#include <array>
#include <cmath>

#include "qprep/types.hpp"

namespace qprep {

/// Dense 2x2 complex matrix, row-major. Small enough to pass by value.
struct Mat2 {
  std::array<cplx, 4> m{};  // [ m00 m01 ; m10 m11 ]

  constexpr cplx& at(int r, int c) { return m[2 * r + c]; }
  constexpr const cplx& at(int r, int c) const { return m[2 * r + c]; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
    return r;
  }

  Mat2 adjoint() const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
  }

  bool operator==(const Mat2&) const = default;

  /// max |entry| of (this^dagger * this - I); 0 for exactly unitary input.
  double unitarity_defect() const {
    Mat2 p = adjoint() * (*this);
    p.at(0, 0) -= 1.0;
    p.at(1, 1) -= 1.0;
    double worst = 0;
    for (const cplx& e : p.m) worst = std::max(worst, std::abs(e));
    return worst;
  }

  static constexpr Mat2 identity() { return Mat2{{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  static constexpr Mat2 x() { return Mat2{{cplx(0), cplx(1), cplx(1), cplx(0)}}; }

  static Mat2 h() {
    const double s = 1.0 / std::sqrt(2.0);
    return Mat2{{cplx(s), cplx(s), cplx(s), cplx(-s)}};
  }

  static Mat2 t() { return Mat2{{cplx(1), cplx(0), cplx(0), std::polar(1.0, M_PI / 4)}}; }
  static Mat2 tdg() { return Mat2{{cplx(1), cplx(0), cplx(0), std::polar(1.0, -M_PI / 4)}}; }

  /// Rotation about Y: [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
  static Mat2 ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return Mat2{{cplx(c), cplx(-s), cplx(s), cplx(c)}};
  }

  /// Relative phase gate diag(1, e^{i t}).
  static Mat2 ph(double theta) {
    return Mat2{{cplx(1), cplx(0), cplx(0), std::polar(1.0, theta)}};
  }

  /// Symmetric phase gate diag(e^{-i t}, e^{i t}); equals ph(2t) up to
  /// global phase. Used as the synthesis target for lowered phase gates.
  static Mat2 ph_sym(double theta) {
    return Mat2{{std::polar(1.0, -theta), cplx(0), cplx(0), std::polar(1.0, theta)}};
  }
};

/// Operator-norm distance min over global phase: sqrt(2 - |tr(a^dagger b)|)
/// for unitary a, b. This is the metric used by all word-search error bounds.
inline double phase_invariant_distance(const Mat2& a, const Mat2& b) {
  cplx tr = 0;
  for (int i = 0; i < 4; ++i) tr += std::conj(a.m[i]) * b.m[i];
  double v = 2.0 - std::abs(tr);
  return std::sqrt(std::max(0.0, v));
}

}  // namespace qprep
