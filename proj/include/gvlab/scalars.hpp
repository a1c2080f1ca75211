#pragma once

// Scalar tower shared by every module: IEEE double for the fast path, an
// MPFR-backed float for the high-precision path (precision set at runtime,
// default 256 bits), exact rationals for weight evaluation, and a fixed
// 128-bit integer for exact coefficient arithmetic.

#ifdef __FAST_MATH__
#error "compensated summation is disabled by -ffast-math"
#endif

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/rational_adaptor.hpp>

#include <cmath>
#include <cstdint>
#include <limits>

namespace gvlab {

using BigFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt   = boost::multiprecision::cpp_int;
using Int128   = boost::multiprecision::int128_t;

inline unsigned bits_to_digits10(unsigned bits) {
  // ceil(bits * log10(2)) plus two guard digits
  return static_cast<unsigned>(bits * 0.30103) + 3;
}

// Process-wide working precision for BigFloat. Single-threaded by design;
// callers set this once per solve/eval entry point.
inline void set_working_precision_bits(unsigned bits) {
  BigFloat::default_precision(bits_to_digits10(bits));
}

inline unsigned working_precision_bits() {
  // digits10 -> bits, inverse of the mapping above (approximate, monotone)
  return static_cast<unsigned>((BigFloat::default_precision() - 3) / 0.30103) + 1;
}

// Neumaier variant of Kahan summation: unlike plain Kahan it stays exact
// when the addend exceeds the running sum.
template <class T>
struct StableSum {
  T s{0};
  T c{0};

  void add(const T& x) {
    T t = s + x;
    if (fabs_(s) >= fabs_(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  T value() const { return s + c; }

 private:
  static double fabs_(double v) { return std::fabs(v); }
  static BigFloat fabs_(const BigFloat& v) { return abs(v); }
};

// Four independent accumulators folded in fixed order; breaks the Kahan
// dependency chain in hot loops without sacrificing reproducibility.
template <class T>
struct StableSum4 {
  StableSum<T> lane[4];
  void add(std::size_t i, const T& x) { lane[i & 3].add(x); }
  T value() const {
    StableSum<T> total;
    total.add(lane[0].value());
    total.add(lane[1].value());
    total.add(lane[2].value());
    total.add(lane[3].value());
    return total.value();
  }
};

template <class T>
inline T pow_t(const T& base, const T& expo) {
  using std::pow;
  return pow(base, expo);
}

template <class T>
inline T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>)
    return q;
  else if constexpr (std::is_same_v<T, double>)
    return numerator(q).convert_to<double>() / denominator(q).convert_to<double>();
  else
    return T(numerator(q)) / T(denominator(q));
}

}  // namespace gvlab
