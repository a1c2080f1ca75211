#pragma once

// Weight-function catalog on ]0,1]: affine g(x)=c0+c1*x, and the broken
// harmonic family g(x)=v_i*x on u_{i+1} < x <= u_i (right-closed intervals,
// so g evaluated exactly at a breakpoint u_i uses slope v_i). Members:
//   ingham        u_i = 1/i,        v_i = i          (g(x)=x*floor(1/x))
//   power:L       u_i = L^(1-i),    v_i = L^(i-1)
//   gingham:<u>   u_i = 1/i,        v_i = W(i) = sum_{j<=i} u(j)*floor(i/j)
// The generalized-Ingham slope identity v_i = W(i) follows from the nested
// floor rule floor(1/(j*x)) = floor(floor(1/x)/j): on (1/(i+1), 1/i] every
// term of x*sum_j u(j)floor(1/(jx)) is constant.

#include "gvlab/scalars.hpp"
#include "gvlab/sequences.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab::weights {

using arith::CoefficientSequence;
using arith::FactorSieve;

enum class WeightKind { Affine, Ingham, PowerScale, GeneralizedIngham, ExplicitBHF };

struct WeightFunction {
  WeightKind kind;
  Rational c0{0}, c1{0};                  // Affine
  Rational lambda{0};                     // PowerScale, > 1
  std::optional<CoefficientSequence> u;   // GeneralizedIngham
  std::string useq_id;                    // catalog id of u, for records
  std::vector<Rational> bhf_u, bhf_v;     // ExplicitBHF, u strictly decreasing from 1

  static WeightFunction affine(Rational c0, Rational c1) {
    WeightFunction w{WeightKind::Affine};
    w.c0 = std::move(c0);
    w.c1 = std::move(c1);
    return w;
  }
  static WeightFunction ingham() { return WeightFunction{WeightKind::Ingham}; }
  static WeightFunction power_scale(Rational lambda) {
    if (lambda <= 1) throw std::invalid_argument("power-scale ratio must exceed 1");
    WeightFunction w{WeightKind::PowerScale};
    w.lambda = std::move(lambda);
    return w;
  }
  static WeightFunction generalized_ingham(CoefficientSequence seq, std::string id = "") {
    WeightFunction w{WeightKind::GeneralizedIngham};
    w.u = std::move(seq);
    w.useq_id = std::move(id);
    return w;
  }
  static WeightFunction explicit_bhf(std::vector<Rational> us, std::vector<Rational> vs) {
    if (us.size() != vs.size() || us.empty())
      throw std::invalid_argument("breakpoints and slopes must pair up");
    if (us.front() != 1) throw std::invalid_argument("first breakpoint must be 1");
    for (std::size_t i = 1; i < us.size(); ++i)
      if (!(us[i] < us[i - 1] && us[i] > 0))
        throw std::invalid_argument("breakpoints must decrease strictly in ]0,1]");
    WeightFunction w{WeightKind::ExplicitBHF};
    w.bhf_u = std::move(us);
    w.bhf_v = std::move(vs);
    return w;
  }

  bool is_bhf() const { return kind != WeightKind::Affine; }
};

// value of g at a rational point, with exactness tracking: `exact` is set
// whenever every ingredient is rational (it is not for the davenport_heilbronn
// or tau-normalized gingham weights, whose mirrors are computed in BigFloat)
struct WeightValue {
  bool exact = false;
  Rational ratval{0};
  BigFloat bigval{0};
  double dval = 0;

  static WeightValue from_exact(const Rational& q) {
    WeightValue v;
    v.exact = true;
    v.ratval = q;
    v.bigval = from_rational<BigFloat>(q);
    v.dval = from_rational<double>(q);
    return v;
  }
  static WeightValue from_big(const BigFloat& b) {
    WeightValue v;
    v.exact = false;
    v.bigval = b;
    v.dval = b.convert_to<double>();
    return v;
  }
};

namespace detail {

// floor(1/x) for rational x in ]0,1]
inline BigInt floor_inv(const Rational& x) {
  return denominator(x) / numerator(x);
}

// largest m >= 0 with lambda^m * x <= 1; exact rational comparisons
inline std::uint32_t power_scale_level(const Rational& lambda, const Rational& x) {
  Rational s = x;
  std::uint32_t m = 0;
  while (s * lambda <= 1) {
    s *= lambda;
    ++m;
    if (m > 100000) throw std::runtime_error("power-scale level runaway");
  }
  return m;
}

}  // namespace detail

// Exact generalized-Ingham evaluation Phi_u(x) = x * sum_{k<=1/x} u(k)*floor(1/(kx)).
// For x = a/b the floors are the integer divisions floor(b/(k*a)); no floating
// point enters. Sequences without rational values get a BigFloat mirror only.
inline WeightValue eval_generalized_ingham(const CoefficientSequence& u, const Rational& x,
                                           const FactorSieve* sieve = nullptr) {
  if (!(x > 0 && x <= 1)) throw std::domain_error("weight domain is ]0,1]");
  const BigInt a = numerator(x), b = denominator(x);
  const BigInt kmax = b / a;
  const bool rational_u = u.kind() != CoefficientSequence::Kind::DavenportHeilbronn &&
                          u.kind() != CoefficientSequence::Kind::TauNormalized;
  if (kmax > 2000000) throw std::domain_error("argument too close to 0 for direct evaluation");
  const std::uint64_t km = kmax.convert_to<std::uint64_t>();
  if (rational_u) {
    Rational acc(0);
    for (std::uint64_t k = 1; k <= km; ++k) {
      Rational uk = u.eval<Rational>(k, sieve);
      if (uk != 0) {
        const BigInt fl = b / (k * a);
        acc += uk * Rational(fl);
      }
    }
    return WeightValue::from_exact(acc * x);
  }
  BigFloat acc(0);
  for (std::uint64_t k = 1; k <= km; ++k) {
    // the floor must land in a named integer first: converting the division
    // expression template straight to a variable-precision float truncates
    // it to the expression's tiny inferred precision
    const BigInt fl = b / (k * a);
    acc += u.eval<BigFloat>(k, sieve) * BigFloat(fl);
  }
  return WeightValue::from_big(acc * from_rational<BigFloat>(x));
}

inline WeightValue eval_weight(const WeightFunction& g, const Rational& x,
                               const FactorSieve* sieve = nullptr) {
  if (!(x > 0 && x <= 1)) throw std::domain_error("weight domain is ]0,1]");
  switch (g.kind) {
    case WeightKind::Affine:
      return WeightValue::from_exact(g.c0 + g.c1 * x);
    case WeightKind::Ingham:
      return WeightValue::from_exact(x * Rational(detail::floor_inv(x)));
    case WeightKind::PowerScale: {
      const std::uint32_t m = detail::power_scale_level(g.lambda, x);
      Rational slope(1);
      for (std::uint32_t i = 0; i < m; ++i) slope *= g.lambda;
      return WeightValue::from_exact(slope * x);
    }
    case WeightKind::GeneralizedIngham:
      return eval_generalized_ingham(*g.u, x, sieve);
    case WeightKind::ExplicitBHF: {
      // last interval whose breakpoint still lies at or above x
      std::size_t i = 0;
      while (i + 1 < g.bhf_u.size() && x <= g.bhf_u[i + 1]) ++i;
      if (i + 1 == g.bhf_u.size() && x < g.bhf_u[i])
        throw std::domain_error("argument below the last cataloged breakpoint");
      return WeightValue::from_exact(g.bhf_v[i] * x);
    }
  }
  throw std::logic_error("unreachable");
}

// first `count` breakpoint/slope pairs (u_i, v_i), i = 1..count
inline std::vector<std::pair<Rational, Rational>> bhf_breakpoints(const WeightFunction& g,
                                                                  std::uint32_t count,
                                                                  const FactorSieve* sieve = nullptr) {
  if (!g.is_bhf()) throw std::invalid_argument("affine weights have no breakpoints");
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(count);
  switch (g.kind) {
    case WeightKind::Ingham:
      for (std::uint32_t i = 1; i <= count; ++i) out.emplace_back(Rational(1, i), Rational(i));
      break;
    case WeightKind::PowerScale: {
      Rational u(1), v(1);
      for (std::uint32_t i = 1; i <= count; ++i) {
        out.emplace_back(u, v);
        u /= g.lambda;
        v *= g.lambda;
      }
      break;
    }
    case WeightKind::GeneralizedIngham: {
      // v_i = W(i), accumulated as W(i) = W(i-1) + (u * 1)(i)
      const bool rational_u = g.u->kind() != CoefficientSequence::Kind::DavenportHeilbronn &&
                              g.u->kind() != CoefficientSequence::Kind::TauNormalized;
      if (!rational_u) throw std::invalid_argument("breakpoint slopes are irrational for this sequence");
      Rational W(0);
      for (std::uint32_t i = 1; i <= count; ++i) {
        Rational s(0);
        if (sieve && i <= sieve->limit()) {
          sieve->for_each_divisor(i, [&](std::uint32_t d) { s += g.u->eval<Rational>(d, sieve); });
        } else {
          for (std::uint32_t d = 1; d <= i; ++d)
            if (i % d == 0) s += g.u->eval<Rational>(d, sieve);
        }
        W += s;
        out.emplace_back(Rational(1, i), W);
      }
      break;
    }
    case WeightKind::ExplicitBHF:
      for (std::uint32_t i = 0; i < count && i < g.bhf_u.size(); ++i)
        out.emplace_back(g.bhf_u[i], g.bhf_v[i]);
      break;
    default:
      break;
  }
  return out;
}

// ------------------------------------------------------------------
// Solver-facing slope machinery. BHF row terms are b(k) * v(k,n) with
// v(k,n) the slope at x = k/n; slopes come from O(1) lookups.
// ------------------------------------------------------------------

// W(1..n) for a generalized-Ingham weight: W = prefix sums of (u * 1),
// built by one divisor-sieve pass, O(n log n) adds
template <class T>
std::vector<T> gingham_slope_table(const CoefficientSequence& u, std::uint32_t n,
                                   const FactorSieve* sieve = nullptr) {
  std::vector<T> w(static_cast<std::size_t>(n) + 1, T(0));
  for (std::uint32_t d = 1; d <= n; ++d) {
    const T ud = u.eval<T>(d, sieve);
    if (ud == T(0)) continue;
    for (std::uint64_t m = d; m <= n; m += d) w[m] += ud;
  }
  for (std::uint32_t m = 1; m <= n; ++m) w[m] += w[m - 1];  // in-place prefix sum
  return w;
}

// lambda^i for i = 0..count
template <class T>
std::vector<T> power_table(const Rational& lambda, std::uint32_t count) {
  std::vector<T> t(count + 1);
  t[0] = T(1);
  const T l = from_rational<T>(lambda);
  for (std::uint32_t i = 1; i <= count; ++i) t[i] = t[i - 1] * l;
  return t;
}

// --------------------------------------------------------------------------
// Limit of Phi_u at 0+, i.e. sum u(n)/n: raw partial sum S_N plus a
// Cesaro-averaged estimate (mean of S_j over the final half, computed at two
// horizons); the diagnostic is the distance between the two averages.
// --------------------------------------------------------------------------
struct LimitEstimate {
  double value = 0;        // averaged estimate
  double partial = 0;      // raw S_N
  double diagnostic = 0;   // |avg(N) - avg(N/2)|, small when converged
  bool diverged = false;   // partial sums trending in magnitude
};

inline LimitEstimate weight_limit_at_zero(const CoefficientSequence& u, std::uint32_t terms,
                                          const FactorSieve* sieve = nullptr) {
  if (terms < 16) throw std::invalid_argument("too few terms for a limit estimate");
  std::vector<double> partial(terms + 1, 0.0);
  StableSum<double> s;
  for (std::uint32_t n = 1; n <= terms; ++n) {
    s.add(u.eval<double>(n, sieve) / n);
    partial[n] = s.value();
  }
  auto window_avg = [&](std::uint32_t lo, std::uint32_t hi) {  // mean of S_n, lo < n <= hi
    StableSum<double> acc;
    for (std::uint32_t n = lo + 1; n <= hi; ++n) acc.add(partial[n]);
    return acc.value() / (hi - lo);
  };
  auto window_max = [&](std::uint32_t lo, std::uint32_t hi) {
    double m = 0;
    for (std::uint32_t n = lo + 1; n <= hi; ++n) m = std::max(m, std::fabs(partial[n]));
    return m;
  };
  LimitEstimate est;
  est.value = window_avg(terms / 2, terms);
  est.partial = partial[terms];
  est.diagnostic = std::fabs(est.value - window_avg(terms / 4, terms / 2));
  est.diverged = window_max(terms / 2, terms) > 4 * std::max(1.0, window_max(0, terms / 2));
  return est;
}

// --------------------------------------------------------------------------
// Flat string ids: ingham | affine:c0,c1 | power:lambda | gingham:<sequence-id>
// --------------------------------------------------------------------------
inline WeightFunction parse_weight_id(const std::string& id, std::uint32_t tau_limit = 5000) {
  auto starts = [&](const char* p) { return id.rfind(p, 0) == 0; };
  if (id == "ingham") return WeightFunction::ingham();
  if (starts("affine:")) {
    auto vals = arith::parse_rational_csv(id.substr(7));
    if (vals.size() != 2) throw std::invalid_argument("affine takes c0,c1");
    return WeightFunction::affine(vals[0], vals[1]);
  }
  if (starts("power:")) {
    auto vals = arith::parse_rational_csv(id.substr(6));
    if (vals.size() != 1) throw std::invalid_argument("power takes one ratio");
    return WeightFunction::power_scale(vals[0]);
  }
  if (starts("gingham:")) {
    const std::string sub = id.substr(8);
    return WeightFunction::generalized_ingham(arith::parse_sequence_id(sub, tau_limit), sub);
  }
  throw std::invalid_argument("unknown weight id: " + id);
}

inline std::string weight_catalog() {
  return "ingham | affine:c0,c1 | power:lambda | gingham:<sequence-id>";
}

inline std::string weight_id(const WeightFunction& g) {
  switch (g.kind) {
    case WeightKind::Ingham: return "ingham";
    case WeightKind::Affine: {
      std::ostringstream os;
      os << "affine:" << g.c0 << "," << g.c1;
      return os.str();
    }
    case WeightKind::PowerScale: {
      std::ostringstream os;
      os << "power:" << g.lambda;
      return os.str();
    }
    case WeightKind::GeneralizedIngham:
      return "gingham:" + (g.useq_id.empty() ? std::string("<sequence>") : g.useq_id);
    case WeightKind::ExplicitBHF: return "bhf:<explicit>";
  }
  return "?";
}

}  // namespace gvlab::weights
