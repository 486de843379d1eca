#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace coevo {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Complex = std::complex<double>;
using Spectrum = std::array<Complex, 3>;

inline double trace(const Mat3& a) noexcept { return a[0][0] + a[1][1] + a[2][2]; }

inline double determinant(const Mat3& a) noexcept {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

/// det(A - z I) evaluated in complex arithmetic.
inline Complex shifted_determinant(const Mat3& a, Complex z) noexcept {
  std::array<std::array<Complex, 3>, 3> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] - (i == j ? z : Complex{});
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double frobenius_norm(const Mat3& a) noexcept {
  double s = 0.0;
  for (const auto& row : a)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

namespace detail {

// Monic cubic z^3 + c2 z^2 + c1 z + c0.
struct MonicCubic {
  double c2, c1, c0;

  template <class T>
  T operator()(T z) const noexcept {
    return ((z + c2) * z + c1) * z + c0;
  }
  template <class T>
  T derivative(T z) const noexcept {
    return (3.0 * z + 2.0 * c2) * z + c1;
  }
};

template <class T>
T polish_root(const MonicCubic& p, T z) noexcept {
  for (int it = 0; it < 8; ++it) {
    const T d = p.derivative(z);
    if (std::abs(d) == 0.0) break;
    const T next = z - p(z) / d;
    if (!(std::abs(p(next)) < std::abs(p(z)))) break;
    z = next;
  }
  return z;
}

inline void sort_spectrum(Spectrum& roots) {
  std::sort(roots.begin(), roots.end(), [](const Complex& l, const Complex& r) {
    if (l.real() != r.real()) return l.real() > r.real();
    return l.imag() > r.imag();
  });
}

// Roots of z^2 - tr z + det, without cancellation.
inline std::array<Complex, 2> quadratic_roots(double tr, double det) noexcept {
  const double half = 0.5 * tr;
  const double disc = half * half - det;
  if (disc < 0.0) return {Complex(half, std::sqrt(-disc)), Complex(half, -std::sqrt(-disc))};
  const double s = half + std::copysign(std::sqrt(disc), half);
  return {Complex(s), Complex(s != 0.0 ? det / s : 0.0)};
}

// If coordinate i has no coupling in its row or its column, a[i][i] is an
// exact eigenvalue and the rest is a 2x2 block. Typical on the cube faces.
inline bool decoupled_spectrum(const Mat3& a, Spectrum& out) {
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const bool row = a[i][j] == 0.0 && a[i][k] == 0.0;
    const bool col = a[j][i] == 0.0 && a[k][i] == 0.0;
    if (!row && !col) continue;
    const auto pair = quadratic_roots(a[j][j] + a[k][k], a[j][j] * a[k][k] - a[j][k] * a[k][j]);
    out = {Complex(a[i][i]), pair[0], pair[1]};
    return true;
  }
  return false;
}

}  // namespace detail

/// Eigenvalues of a real 3x3 matrix from its characteristic polynomial.
///
/// The polynomial is reduced to t^3 + p t + q. Three real roots use the
/// trigonometric form; otherwise Cardano gives the real root and the complex
/// pair comes from the deflated quadratic. Roots get a few Newton steps on the
/// original polynomial. Sorted by descending real part, then imaginary part.
inline Spectrum eigenvalues_3x3(const Mat3& a) {
  Spectrum roots;
  if (detail::decoupled_spectrum(a, roots)) {
    detail::sort_spectrum(roots);
    return roots;
  }

  const double tr = trace(a);
  const double minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] -
                        a[0][2] * a[2][0] + a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const detail::MonicCubic poly{-tr, minors, -determinant(a)};

  const double shift = poly.c2 / 3.0;
  const double p = poly.c1 - poly.c2 * poly.c2 / 3.0;
  const double q = 2.0 * poly.c2 * poly.c2 * poly.c2 / 27.0 - poly.c2 * poly.c1 / 3.0 + poly.c0;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  if (disc <= 0.0) {
    if (p == 0.0) {
      roots = {Complex(-shift), Complex(-shift), Complex(-shift)};
    } else {
      const double m = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) {
        const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
        roots[k] = Complex(detail::polish_root(poly, t - shift));
      }
    }
  } else {
    const double sq = std::sqrt(disc);
    const double t = std::cbrt(-0.5 * q + sq) + std::cbrt(-0.5 * q - sq);
    const double real_root = detail::polish_root(poly, t - shift);
    // z^3 + c2 z^2 + c1 z + c0 = (z - real_root)(z^2 + B z + C)
    const double B = poly.c2 + real_root;
    const double C = poly.c1 + B * real_root;
    const double qd = B * B - 4.0 * C;
    roots[0] = Complex(real_root);
    if (qd >= 0.0) {
      const double s = -0.5 * (B + std::copysign(std::sqrt(qd), B));
      const double r1 = s;
      const double r2 = (s != 0.0) ? C / s : 0.0;
      roots[1] = Complex(detail::polish_root(poly, r1));
      roots[2] = Complex(detail::polish_root(poly, r2));
    } else {
      const double im = 0.5 * std::sqrt(-qd);
      roots[1] = Complex(-0.5 * B, im);
      roots[2] = Complex(-0.5 * B, -im);
    }
  }

  detail::sort_spectrum(roots);
  return roots;
}

}  // namespace coevo
