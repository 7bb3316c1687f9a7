// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0
//
// Independent numerical oracles for the test suite.  Everything in this
// header is deliberately written from scratch against textbook formulas and
// shares no code with the library paths it is used to check.

#ifndef GIBC_TESTS_ORACLES_HPP
#define GIBC_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Quad-precision Bessel J_n power series.
//
// J_n(x) = sum_{m >= 0} (-1)^m (x/2)^{n + 2m} / (m! (m+n)!).
//
// The series alternates and the largest term is ~e^x times the result, so a
// double evaluation loses ~x/ln(10) digits; __float128 keeps ~33 digits and
// still delivers ~1e-20 absolute accuracy for the x <= 25 range used here.
// ---------------------------------------------------------------------------
inline double bessel_j_series(int n, double x) {
  if (n < 0) throw std::invalid_argument("bessel_j_series: n must be >= 0");
  const __float128 half_x = static_cast<__float128>(x) / 2;
  const __float128 z2 = half_x * half_x;
  // leading coefficient (x/2)^n / n!
  __float128 term = 1;
  for (int m = 1; m <= n; ++m) term *= half_x / m;
  __float128 sum = term;
  const __float128 tiny = 1e-40;
  for (int m = 1; m <= 240; ++m) {
    term *= -z2 / (static_cast<__float128>(m) * (m + n));
    sum += term;
    if (term < tiny && term > -tiny && m > x) break;
  }
  return static_cast<double>(sum);
}

// Derivative through the three-term identity, both neighbours from the series.
inline double bessel_jp_series(int n, double x) {
  if (n == 0) return -bessel_j_series(1, x);
  return 0.5 * (bessel_j_series(n - 1, x) - bessel_j_series(n + 1, x));
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature (recursive, Richardson-corrected).
// ---------------------------------------------------------------------------
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adapt(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

inline double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Arclength of t -> (x(t), y(t)) over [0, 2 pi] from the speed integrand.
inline double curve_length(const std::function<double(double)>& xp,
                           const std::function<double(double)>& yp, double tol = 1e-12) {
  const double two_pi = 6.283185307179586476925286766559;
  // Split into a few panels so the adaptive rule does not over-refine one end.
  double total = 0.0;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const double a = two_pi * p / panels;
    const double b = two_pi * (p + 1) / panels;
    total += adaptive_integrate(
        [&](double t) { return std::hypot(xp(t), yp(t)); }, a, b, tol / panels);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Dense reference solve for the periodic boundary system
// (eta * K + M_lumped) delta = alpha * g on a closed polygon: edge stiffness
// from the chord lengths, lumped mass from the supplied node weights, dense LU.
// ---------------------------------------------------------------------------
inline Eigen::VectorXd dense_boundary_smooth(const std::vector<double>& edge_lengths,
                                             const std::vector<double>& node_weights,
                                             const Eigen::VectorXd& g, double eta,
                                             double alpha) {
  const int n = static_cast<int>(edge_lengths.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < n; ++e) {
    const int i = e, j = (e + 1) % n;
    const double h = edge_lengths[e];
    A(i, i) += eta / h;
    A(j, j) += eta / h;
    A(i, j) -= eta / h;
    A(j, i) -= eta / h;
  }
  for (int i = 0; i < n; ++i) A(i, i) += node_weights[i];
  return A.fullPivLu().solve((alpha * g).eval());
}

// ---------------------------------------------------------------------------
// Minimal XML well-formedness scan: every element closed in LIFO order,
// attributes quoted, exactly one root element.  Enough for the SVG contract.
// ---------------------------------------------------------------------------
inline bool xml_well_formed(const std::string& text, std::string* why = nullptr) {
  const auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::string> stack;
  int roots = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      if (text[i] == '>') return fail("stray '>'");
      ++i;
      continue;
    }
    std::size_t close = text.find('>', i);
    if (close == std::string::npos) return fail("unterminated tag");
    std::string tag = text.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) return fail("empty tag");
    if (tag[0] == '?' || tag[0] == '!') continue;  // declaration / comment
    // attribute quoting: quotes must pair up
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return fail("unpaired quote");
    const bool closing = tag[0] == '/';
    const bool self_closing = tag.back() == '/';
    std::string name = tag.substr(closing ? 1 : 0);
    name = name.substr(0, name.find_first_of(" \t\n/"));
    if (name.empty()) return fail("nameless tag");
    if (closing) {
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
    } else if (!self_closing) {
      if (stack.empty()) {
        if (++roots > 1) return fail("multiple roots");
      }
      stack.push_back(name);
    } else if (stack.empty()) {
      if (++roots > 1) return fail("multiple roots");
    }
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (roots != 1) return fail("no root element");
  return true;
}

// ---------------------------------------------------------------------------
// Small shared helpers.
// ---------------------------------------------------------------------------
inline double rel_l2(const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

inline std::vector<double> uniform_angles(int m) {
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i) out[i] = 2.0 * M_PI * i / m;
  return out;
}

}  // namespace oracle

#endif  // GIBC_TESTS_ORACLES_HPP
