#pragma once

// Forward solver for the discrete Volterra equation
//     A_g(n) = sum_{k<=n} a(k) g(k/n) = f(n),     f(n) = scale * n^expo,
// a(n) = (f(n) - sum_{k<n} a(k) g(k/n)) / g(1), plus the closed-form oracle
// routes that cross-validate it (Moebius form, character form, general
// multiplicative form) and exact identity checkers.
//
// Weight evaluation inside the solver is O(1) per term: for BHF weights the
// row term is b(k)*v(k,n) with b(k)=k*a(k) and v(k,n) the interval slope
// (Ingham: floor(n/k); generalized Ingham: W(floor(n/k)) from a precomputed
// table; power scale: a power of lambda). The affine weight admits O(1) rows
// through running sums of a(k) and k*a(k). Every inner sum is compensated.
// The residual checker re-substitutes solutions with an independent generic
// evaluation, so a bug in a fast path cannot certify itself.

#include "gvlab/scalars.hpp"
#include "gvlab/sequences.hpp"
#include "gvlab/weights.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab::volterra {

using arith::CoefficientSequence;
using arith::FactorSieve;
using weights::WeightFunction;
using weights::WeightKind;

// f(n) = scale * n^exponent; the canonical right-hand side n^(-beta) is
// rhs_power(-beta)
struct Rhs {
  Rational scale{1};
  double exponent = 0;
};
inline Rhs rhs_power(double exponent, Rational scale = Rational(1)) {
  return Rhs{std::move(scale), exponent};
}

struct Problem {
  WeightFunction g;
  Rhs f;
  std::uint32_t n = 0;
  unsigned precision_bits = 53;  // 53 selects the double path
};

template <class T>
struct Solution {
  std::vector<T> a;  // a[1..n], a[0] unused
  std::vector<T> A;  // running sums of a
  unsigned precision_bits = 53;
};

namespace detail {

// floor(n/k) by reciprocal multiply: fl(1/k) carries relative error 2^-53,
// so (n+1/2)*fl(1/k) sits within n*2^-51 of (n+1/2)/k, which is at least
// 1/(2k) >= 1/(2n) away from any integer; exact for n below ~3e7.
constexpr std::uint32_t kRecipFloorMax = 1u << 24;

struct RecipTable {
  std::vector<double> inv;  // inv[k] = 1/k
  explicit RecipTable(std::uint32_t n) : inv(n + 1, 0.0) {
    for (std::uint32_t k = 1; k <= n; ++k) inv[k] = 1.0 / k;
  }
};

template <class T>
T rhs_value(const Rhs& f, std::uint32_t n) {
  using std::pow;
  return from_rational<T>(f.scale) * pow(T(n), T(f.exponent));
}

// slope finder for power-scale weights: largest m with lambda^m * k <= n,
// exact via cross-multiplied integer powers
struct PowerLevels {
  std::vector<BigInt> p, q;  // numerator/denominator powers of lambda
  explicit PowerLevels(const Rational& lambda, std::uint32_t nmax) {
    BigInt pp = 1, qq = 1;
    p.push_back(pp);
    q.push_back(qq);
    const BigInt ln = numerator(lambda), ld = denominator(lambda);
    while (qq * nmax >= pp) {  // lambda^m <= nmax possible
      pp *= ln;
      qq *= ld;
      p.push_back(pp);
      q.push_back(qq);
    }
  }
  std::uint32_t level(std::uint32_t k, std::uint32_t n) const {
    // predicate P(m): lambda^m * k/n <= 1; monotone decreasing in m
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(p.size() - 1);
    while (lo < hi) {
      const std::uint32_t mid = (lo + hi + 1) / 2;
      if (p[mid] * k <= q[mid] * n)
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }
};

}  // namespace detail

// generic slope of a BHF weight at x = k/n (affine handled separately);
// shared by the solver fast paths and the residual checker
template <class T>
class SlopeOracle {
 public:
  SlopeOracle(const WeightFunction& g, std::uint32_t n, const FactorSieve* sieve)
      : g_(g) {
    switch (g.kind) {
      case WeightKind::Ingham:
        break;
      case WeightKind::GeneralizedIngham:
        W_ = weights::gingham_slope_table<T>(*g.u, n, sieve);
        break;
      case WeightKind::PowerScale: {
        levels_ = std::make_unique<detail::PowerLevels>(g.lambda, n);
        powers_ = weights::power_table<T>(g.lambda, static_cast<std::uint32_t>(levels_->p.size()));
        break;
      }
      case WeightKind::ExplicitBHF: {
        if (Rational(1, n) < g.bhf_u.back())
          throw std::domain_error("horizon exceeds the cataloged breakpoints");
        break;
      }
      case WeightKind::Affine:
        throw std::logic_error("affine weight has no slopes");
    }
  }

  T slope(std::uint32_t k, std::uint32_t n) const {
    switch (g_.kind) {
      case WeightKind::Ingham:
        return T(n / k);
      case WeightKind::GeneralizedIngham:
        return W_[n / k];
      case WeightKind::PowerScale:
        return powers_[levels_->level(k, n)];
      case WeightKind::ExplicitBHF: {
        const Rational x(k, n);
        std::size_t i = 0;
        while (i + 1 < g_.bhf_u.size() && x <= g_.bhf_u[i + 1]) ++i;
        return from_rational<T>(g_.bhf_v[i]);
      }
      default:
        throw std::logic_error("affine weight has no slopes");
    }
  }

  const std::vector<T>& gingham_table() const { return W_; }

 private:
  const WeightFunction& g_;
  std::vector<T> W_;
  std::unique_ptr<detail::PowerLevels> levels_;
  std::vector<T> powers_;
};

template <class T>
Solution<T> solve(const Problem& prob, const FactorSieve* sieve = nullptr) {
  const std::uint32_t N = prob.n;
  if (N < 1) throw std::invalid_argument("empty horizon");
  if constexpr (std::is_same_v<T, BigFloat>)
    set_working_precision_bits(prob.precision_bits);
  if constexpr (std::is_same_v<T, double>) {
    const double fN = detail::rhs_value<double>(prob.f, N);
    if (prob.f.scale != 0 && (fN == 0.0 || std::fabs(fN) < std::numeric_limits<double>::min()))
      throw std::range_error(
          "rhs underflows the float64 path at the horizon; rerun with "
          "--precision-bits above 53 (high-precision path)");
  }

  Solution<T> sol;
  sol.precision_bits = prob.precision_bits;
  sol.a.assign(static_cast<std::size_t>(N) + 1, T(0));
  sol.A.assign(static_cast<std::size_t>(N) + 1, T(0));

  if (prob.g.kind == WeightKind::Affine) {
    const T c0 = from_rational<T>(prob.g.c0), c1 = from_rational<T>(prob.g.c1);
    const T g1 = c0 + c1;
    if (g1 == T(0)) throw std::domain_error("weight vanishes at 1; recurrence undefined");
    StableSum<T> s0, s1;  // sum a(k), sum k*a(k)
    StableSum<T> total;
    for (std::uint32_t n = 1; n <= N; ++n) {
      const T fn = detail::rhs_value<T>(prob.f, n);
      const T an = (fn - c1 * s1.value() / T(n) - c0 * s0.value()) / g1;
      sol.a[n] = an;
      s0.add(an);
      s1.add(T(n) * an);
      total.add(an);
      sol.A[n] = total.value();
    }
    return sol;
  }

  // BHF kinds: scaled recurrence on b(k) = k*a(k):
  //   n f(n) = sum_{k<=n} b(k) v(k,n),  v(n,n) = slope at 1 = g(1)
  SlopeOracle<T> oracle(prob.g, N, sieve);
  const T g1 = oracle.slope(1, 1);
  if (g1 == T(0)) throw std::domain_error("weight vanishes at 1; recurrence undefined");

  std::vector<T> b(static_cast<std::size_t>(N) + 1, T(0));
  StableSum<T> total;

  const bool ingham_fast = prob.g.kind == WeightKind::Ingham ||
                           prob.g.kind == WeightKind::GeneralizedIngham;
  if constexpr (std::is_same_v<T, double>) {
    if (ingham_fast && N <= detail::kRecipFloorMax) {
      const detail::RecipTable recip(N);
      const bool plain = prob.g.kind == WeightKind::Ingham;
      const std::vector<double>& W = oracle.gingham_table();
      for (std::uint32_t n = 1; n <= N; ++n) {
        StableSum4<double> acc;
        const double nn = n + 0.5;
        if (plain) {
          for (std::uint32_t k = 1; k < n; ++k) {
            const auto q = static_cast<std::uint32_t>(nn * recip.inv[k]);
            acc.add(k, b[k] * q);
          }
        } else {
          for (std::uint32_t k = 1; k < n; ++k) {
            const auto q = static_cast<std::uint32_t>(nn * recip.inv[k]);
            acc.add(k, b[k] * W[q]);
          }
        }
        const double bn = (n * detail::rhs_value<double>(prob.f, n) - acc.value()) / g1;
        b[n] = bn;
        sol.a[n] = bn / n;
        total.add(sol.a[n]);
        sol.A[n] = total.value();
      }
      return sol;
    }
  }

  for (std::uint32_t n = 1; n <= N; ++n) {
    StableSum4<T> acc;
    for (std::uint32_t k = 1; k < n; ++k) acc.add(k, b[k] * oracle.slope(k, n));
    const T bn = (T(n) * detail::rhs_value<T>(prob.f, n) - acc.value()) / g1;
    b[n] = bn;
    sol.a[n] = bn / T(n);
    total.add(sol.a[n]);
    sol.A[n] = total.value();
  }
  return sol;
}

// max |sum_k a(k) g(k/n) - f(n)| over the requested rows, generic evaluation
enum class ResidualSweep { Full, Subsample };

template <class T>
double verify_residuals(const Problem& prob, const Solution<T>& sol,
                        const FactorSieve* sieve = nullptr,
                        ResidualSweep sweep = ResidualSweep::Full) {
  const std::uint32_t N = prob.n;
  std::vector<std::uint32_t> rows;
  if (sweep == ResidualSweep::Full || N <= 512) {
    for (std::uint32_t n = 1; n <= N; ++n) rows.push_back(n);
  } else {
    for (std::uint32_t n = 1; n <= 512; ++n) rows.push_back(n);
    for (double x = 512; x < N; x *= 1.1)
      rows.push_back(static_cast<std::uint32_t>(x));
    rows.push_back(N);
  }

  const bool affine = prob.g.kind == WeightKind::Affine;
  T c0{}, c1{};
  std::unique_ptr<SlopeOracle<T>> oracle;
  if (affine) {
    c0 = from_rational<T>(prob.g.c0);
    c1 = from_rational<T>(prob.g.c1);
  } else {
    oracle = std::make_unique<SlopeOracle<T>>(prob.g, N, sieve);
  }

  double worst = 0;
  for (std::uint32_t n : rows) {
    StableSum<T> acc;
    for (std::uint32_t k = 1; k <= n; ++k) {
      const T x = T(k) / T(n);
      const T gx = affine ? c0 + c1 * x : oracle->slope(k, n) * x;
      acc.add(sol.a[k] * gx);
    }
    const T r = acc.value() - detail::rhs_value<T>(prob.f, n);
    double rd;
    if constexpr (std::is_same_v<T, double>)
      rd = r;
    else
      rd = r.template convert_to<double>();
    worst = std::max(worst, std::fabs(rd));
  }
  return worst;
}

// --------------------------------------------------------------------------
// Closed-form oracles. All three share t(d) = d^(1-beta) - (d-1)^(1-beta)
// with t(1) = 1 (the d=1 term is 1 for every beta <= 1; for beta = 1 all
// later terms vanish). beta > 1 is rejected: t would need 0^(negative).
// --------------------------------------------------------------------------
namespace detail {
template <class T>
std::vector<T> t_table(double beta, std::uint32_t N) {
  if (beta > 1) throw std::domain_error("closed forms require beta <= 1");
  using std::pow;
  std::vector<T> t(static_cast<std::size_t>(N) + 1, T(0));
  if (N >= 1) t[1] = T(1);
  const T e = T(1) - T(beta);
  for (std::uint32_t d = 2; d <= N; ++d)
    t[d] = pow(T(d), e) - pow(T(d - 1), e);
  return t;
}

// b(n) = sum_{d|n} mu(n/d) t(d) = n * a_Ingham(n)
template <class T>
std::vector<T> moebius_b_table(double beta, std::uint32_t N, const FactorSieve& sieve) {
  const std::vector<T> t = t_table<T>(beta, N);
  std::vector<T> b(static_cast<std::size_t>(N) + 1, T(0));
  for (std::uint32_t n = 1; n <= N; ++n) {
    StableSum<T> acc;
    sieve.for_each_divisor(n, [&](std::uint32_t d) {
      const int mu = sieve.moebius(n / d);
      if (mu) acc.add(mu > 0 ? t[d] : -t[d]);
    });
    b[n] = acc.value();
  }
  return b;
}
}  // namespace detail

// Ingham weight: a(n) = (1/n) sum_{d|n} mu(n/d) (d^(1-beta) - (d-1)^(1-beta))
template <class T>
std::vector<T> moebius_closed_form(double beta, std::uint32_t N, const FactorSieve& sieve) {
  std::vector<T> a = detail::moebius_b_table<T>(beta, N, sieve);
  for (std::uint32_t n = 1; n <= N; ++n) a[n] /= T(n);
  return a;
}

// weight Phi_chi for a completely multiplicative chi:
// a(n) = (1/n) sum_{d|n} b(d) chi(n/d) mu(n/d)
template <class T>
std::vector<T> character_closed_form(const CoefficientSequence& chi, double beta,
                                     std::uint32_t N, const FactorSieve& sieve) {
  if (!chi.is_completely_multiplicative())
    throw std::invalid_argument("character route needs a completely multiplicative sequence");
  const std::vector<T> b = detail::moebius_b_table<T>(beta, N, sieve);
  std::vector<T> a(static_cast<std::size_t>(N) + 1, T(0));
  for (std::uint32_t n = 1; n <= N; ++n) {
    StableSum<T> acc;
    sieve.for_each_divisor(n, [&](std::uint32_t d) {
      const std::uint32_t m = n / d;
      const int mu = sieve.moebius(m);
      if (mu) {
        const T c = chi.eval<T>(m, &sieve);
        acc.add(mu > 0 ? b[d] * c : -(b[d] * c));
      }
    });
    a[n] = acc.value() / T(n);
  }
  return a;
}

// weight Phi_u for multiplicative u with u(1)=1:
// a(n) = (1/n) sum_{d|n} b(n/d) u^{-1}(d), u^{-1} the Dirichlet inverse
template <class T>
std::vector<T> multiplicative_closed_form(const CoefficientSequence& u, double beta,
                                          std::uint32_t N, const FactorSieve& sieve) {
  if (!u.is_multiplicative())
    throw std::invalid_argument("this route needs a multiplicative sequence");
  if (u.eval<T>(1, &sieve) != T(1))
    throw std::invalid_argument("this route needs u(1) = 1");
  const std::vector<T> b = detail::moebius_b_table<T>(beta, N, sieve);
  const std::vector<T> uvals = u.materialize<T>(N, &sieve);
  const std::vector<T> uinv = arith::dirichlet_inverse<T>(uvals, sieve);
  std::vector<T> a(static_cast<std::size_t>(N) + 1, T(0));
  for (std::uint32_t n = 1; n <= N; ++n) {
    StableSum<T> acc;
    sieve.for_each_divisor(n, [&](std::uint32_t d) { acc.add(b[n / d] * uinv[d]); });
    a[n] = acc.value() / T(n);
  }
  return a;
}

// --------------------------------------------------------------------------
// Exact check of sum_{k<=n} lambda(k) floor(n/k) = floor(sqrt(n)) for every
// n <= N. The left side accumulates incrementally as prefix sums of the
// divisor sums sum_{d|k} lambda(d); integers throughout.
// --------------------------------------------------------------------------
struct SummatoryReport {
  bool all_equal = true;
  std::uint32_t first_failure = 0;
  std::uint32_t checked = 0;
};

inline SummatoryReport summatory_identity_check(std::uint32_t N, const FactorSieve& sieve) {
  std::vector<std::int32_t> conv(static_cast<std::size_t>(N) + 1, 0);
  for (std::uint32_t d = 1; d <= N; ++d) {
    const std::int32_t ld = sieve.liouville(d);
    for (std::uint64_t m = d; m <= N; m += d) conv[m] += ld;
  }
  SummatoryReport rep;
  rep.checked = N;
  std::int64_t lhs = 0;
  std::uint64_t root = 0;
  for (std::uint32_t n = 1; n <= N; ++n) {
    lhs += conv[n];
    while ((root + 1) * (root + 1) <= n) ++root;
    if (lhs != static_cast<std::int64_t>(root)) {
      rep.all_equal = false;
      rep.first_failure = n;
      break;
    }
  }
  return rep;
}

// --------------------------------------------------------------------------
// Exact formula for the affine weight g(x) = (1+x)/2 with rhs n^(1/2):
//   A(n) = h(n) + ((1/2)_n / n!) * (2 + sum_{k=2}^{n-1} h(k) k!/(1/2)_k),
//   h(n) = (n^(3/2) - (n-1)^(3/2)) / n,
// evaluated with running Pochhammer ratios; valid for n >= 2. Returns
// A[2..N] (entries 0,1 unset).
// --------------------------------------------------------------------------
template <class T>
std::vector<T> affine_exact_series(std::uint32_t N) {
  using std::pow;
  std::vector<T> A(static_cast<std::size_t>(N) + 1, T(0));
  const T threehalf = T(3) / T(2);
  auto h = [&](std::uint32_t n) {
    return (pow(T(n), threehalf) - pow(T(n - 1), threehalf)) / T(n);
  };
  // r_n = (1/2)_n / n!, via r_n = r_{n-1} * (n - 1/2) / n
  T r = T(1) / T(2);           // r_1
  StableSum<T> inner;          // sum_{k=2}^{n-1} h(k) / r_k
  for (std::uint32_t n = 2; n <= N; ++n) {
    r = r * (T(n) - T(1) / T(2)) / T(n);
    A[n] = h(n) + r * (T(2) + inner.value());
    inner.add(h(n) / r);       // k = n joins the sum for the next row
  }
  return A;
}

template <class T>
T affine_exact_formula(std::uint32_t n) {
  if (n < 2) throw std::invalid_argument("exact formula defined for n >= 2");
  return affine_exact_series<T>(n)[n];
}

}  // namespace gvlab::volterra
