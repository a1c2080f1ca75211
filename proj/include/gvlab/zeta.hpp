#pragma once

// Complex Riemann and Hurwitz zeta by Euler-Maclaurin summation:
//   zeta(s,a) = sum_{k<N} (k+a)^-s + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
//             + sum_{j>=1} B_{2j}/(2j)! (s)_{2j-1} (N+a)^{-s-2j+1}.
// N grows with |Im s|; the correction series is truncated at its smallest
// term and the first omitted term is the error estimate. No reflection
// formula: direct continuation only, designed for the desk-scale window
// |Im s| <= 200 where N stays in the low hundreds.

#include "gvlab/scalars.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace gvlab::mellin {

using Complex = std::complex<double>;

// x^e for x > 0
inline Complex cpow(double x, Complex e) {
  const double lx = std::log(x);
  const double m = std::exp(e.real() * lx);
  const double t = e.imag() * lx;
  return {m * std::cos(t), m * std::sin(t)};
}

namespace detail {

// B_{2j}/(2j)! for j = 1..kBernoulliTerms, from the exact recurrence
// sum_{k<=m} C(m+1,k) B_k = 0, converted to double once
inline constexpr int kBernoulliTerms = 30;

inline const std::vector<double>& em_coefficients() {
  static const std::vector<double> table = [] {
    const int top = 2 * kBernoulliTerms;
    std::vector<Rational> b(top + 1);
    b[0] = 1;
    for (int m = 1; m <= top; ++m) {
      // C(m+1, k) walked incrementally
      BigInt c = 1;
      Rational acc = 0;
      for (int k = 0; k < m; ++k) {
        acc += Rational(c) * b[k];
        c = c * (m + 1 - k) / (k + 1);
      }
      b[m] = -acc / Rational(m + 1);
    }
    std::vector<double> out(kBernoulliTerms + 1, 0.0);
    BigInt fact = 2;  // (2j)!
    for (int j = 1; j <= kBernoulliTerms; ++j) {
      out[j] = static_cast<double>(Rational(b[2 * j] / Rational(fact)).convert_to<double>());
      fact *= BigInt(2 * j + 1) * BigInt(2 * j + 2);
    }
    return out;
  }();
  return table;
}

struct EmResult {
  Complex value{};
  double abs_error = 0;
};

// one Euler-Maclaurin pass at a fixed primary-term count
inline EmResult hurwitz_em_pass(Complex s, double a, int N) {
  const std::vector<double>& coef = em_coefficients();
  Complex main{};
  for (int k = 0; k < N; ++k) main += cpow(k + a, -s);
  const double w = N + a;
  const Complex wms = cpow(w, -s);  // w^{-s}
  Complex total = main + wms * w / (s - 1.0) + wms * 0.5;

  // correction terms, truncated at the smallest
  Complex poch = s;          // (s)_{2j-1} at j=1
  Complex wpow = wms / w;    // w^{-s-2j+1} at j=1
  const double winv2 = 1.0 / (w * w);
  double prev_mag = std::numeric_limits<double>::infinity();
  double err = 0;
  const double scale = std::abs(total) + 1e-300;
  for (int j = 1; j <= kBernoulliTerms; ++j) {
    const Complex term = coef[j] * poch * wpow;
    const double mag = std::abs(term);
    if (mag > prev_mag) {  // divergent regime reached; stop before it
      err = prev_mag;
      break;
    }
    total += term;
    err = mag;
    if (mag < 1e-18 * scale) break;
    prev_mag = mag;
    poch *= (s + double(2 * j - 1)) * (s + double(2 * j));
    wpow *= winv2;
  }
  return {total, err};
}

}  // namespace detail

// zeta(s, a) with absolute error <= tol, a in ]0,1]
inline Complex hurwitz_zeta(Complex s, double a, double tol = 1e-12,
                            double* err_out = nullptr) {
  if (!(a > 0.0) || a > 1.0) throw std::domain_error("hurwitz_zeta: a must lie in ]0,1]");
  if (std::abs(s - Complex(1, 0)) < 1e-10)
    throw std::domain_error("hurwitz_zeta: pole at s = 1");
  if (std::fabs(s.imag()) > 200.0)
    throw std::domain_error("hurwitz_zeta: |Im s| exceeds the designed window (200)");
  if (tol < 1e-16) throw std::runtime_error("hurwitz_zeta: tolerance below float64 resolution");

  int N = static_cast<int>(std::fmax(16.0, 0.8 * std::fabs(s.imag()) + 12.0));
  detail::EmResult best{Complex{}, std::numeric_limits<double>::infinity()};
  for (int attempt = 0; attempt < 4; ++attempt) {
    const detail::EmResult r = detail::hurwitz_em_pass(s, a, N);
    if (r.abs_error < best.abs_error) best = r;
    if (best.abs_error <= 0.5 * tol) break;
    N *= 2;
  }
  if (best.abs_error > tol) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "hurwitz_zeta: tolerance %.3g not reached at s = %.6g%+.6gi, a = %.6g "
                  "(best %.3g)",
                  tol, s.real(), s.imag(), a, best.abs_error);
    throw std::runtime_error(msg);
  }
  if (err_out) *err_out = best.abs_error;
  return best.value;
}

inline Complex zeta_complex(Complex s, double tol = 1e-12, double* err_out = nullptr) {
  return hurwitz_zeta(s, 1.0, tol, err_out);
}

}  // namespace gvlab::mellin
