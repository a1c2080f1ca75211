#pragma once

// Mellin-side machinery for the weight catalog. A weight g on ]0,1] has
// transform g*(z) = integral_0^1 g(t) t^{-z-1} dt for Re z < 0; the catalog
// routes continue it:
//   affine g = c0 + c1 x        ->  c1/(1-z) - c0/z
//   generalized Ingham Phi_u    ->  zeta(1-z) U(1-z) / (1-z),
//                                   U(s) the Dirichlet series of u
//   power-scale g_lambda        ->  (1 - lambda^(z-1)) /
//                                   ((1-z)(1 - lambda^z)), Re z < 0 route
// Two factorizations collapse: u = moebius gives U = 1/zeta and the product
// is 1/(1-z); u = liouville gives zeta(2(1-z))/(1-z). Both are evaluated in
// the collapsed form so zeros of zeta(s) in the denominator never hurt.
//
// Zero location runs the argument principle on rectangles: adaptive phase
// tracking along the boundary gives a winding count (accepted only when the
// accumulated phase lands within 0.25 of an integer multiple of 2*pi),
// recursive subdivision isolates single zeros, a secant iteration refines
// them, and each reported zero carries a final one-zero winding certificate
// plus its residual |g*(z)|.

#include "gvlab/scalars.hpp"
#include "gvlab/sequences.hpp"
#include "gvlab/weights.hpp"
#include "gvlab/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab::mellin {

using arith::CoefficientSequence;
using arith::FactorSieve;
using weights::WeightFunction;
using weights::WeightKind;

struct ComplexBox {
  double re_min, re_max, im_min, im_max;
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Complex z, double slack = 0) const {
    return z.real() >= re_min - slack && z.real() <= re_max + slack &&
           z.imag() >= im_min - slack && z.imag() <= im_max + slack;
  }
};

struct MellinValue {
  Complex value{};
  double abs_error = 0;
  bool rigorous = true;  // false when the error estimate is heuristic
};

class MellinFunction {
 public:
  enum class Kind { AffineClosedForm, BHFFactorized, NumericalIntegral };

  static MellinFunction affine_closed_form(Rational c0, Rational c1) {
    MellinFunction m;
    m.kind_ = Kind::AffineClosedForm;
    m.c0_ = std::move(c0);
    m.c1_ = std::move(c1);
    return m;
  }
  static MellinFunction bhf_factorized(CoefficientSequence u) {
    MellinFunction m;
    m.kind_ = Kind::BHFFactorized;
    m.u_ = std::move(u);
    return m;
  }
  static MellinFunction numerical_integral(WeightFunction g) {
    MellinFunction m;
    m.kind_ = Kind::NumericalIntegral;
    m.g_ = std::move(g);
    return m;
  }
  // route dispatch for a cataloged weight
  static MellinFunction of_weight(const WeightFunction& g) {
    switch (g.kind) {
      case WeightKind::Affine:
        return affine_closed_form(g.c0, g.c1);
      case WeightKind::Ingham:
        return bhf_factorized(CoefficientSequence::unit());
      case WeightKind::GeneralizedIngham:
        return bhf_factorized(*g.u);
      default:
        return numerical_integral(g);
    }
  }

  Kind kind() const { return kind_; }
  const Rational& c0() const { return c0_; }
  const Rational& c1() const { return c1_; }
  const CoefficientSequence& u() const { return *u_; }
  const WeightFunction& weight() const { return *g_; }

 private:
  Kind kind_ = Kind::AffineClosedForm;
  Rational c0_{0}, c1_{1};
  std::optional<CoefficientSequence> u_;
  std::optional<WeightFunction> g_;
};

struct PoleSet {
  std::vector<Complex> points;
  bool complete = true;  // false when the route cannot enumerate its poles
};

// --------------------------------------------------------------------------
// Dirichlet series U(s) = sum u(n) n^{-s}, per-kind strategy
// --------------------------------------------------------------------------
inline MellinValue dirichlet_series_value(const CoefficientSequence& u, Complex s,
                                          double tol = 1e-9,
                                          const FactorSieve* sieve = nullptr) {
  using Kind = CoefficientSequence::Kind;
  MellinValue out;
  switch (u.kind()) {
    case Kind::One:
      out.value = zeta_complex(s, tol, &out.abs_error);
      return out;
    case Kind::ExplicitList: {
      // finite support: an exact Dirichlet polynomial
      const auto& vals = u.raw_values();
      Complex acc{};
      for (std::size_t n = 1; n <= vals.size(); ++n) {
        const double c = from_rational<double>(vals[n - 1]);
        if (c != 0) acc += c * cpow(double(n), -s);
      }
      out.value = acc;
      out.abs_error = 1e-15 * std::abs(acc);
      return out;
    }
    case Kind::Periodic:
    case Kind::Character:
    case Kind::DavenportHeilbronn: {
      // U(s) = q^{-s} sum_{r=1}^{q} u(r) zeta(s, r/q)
      const std::uint32_t q = u.period();
      Complex acc{};
      double err = 0;
      for (std::uint32_t r = 1; r <= q; ++r) {
        const double ur = u.eval<double>(r, sieve);
        if (ur == 0) continue;
        double e = 0;
        acc += ur * hurwitz_zeta(s, double(r) / q, tol, &e);
        err += std::fabs(ur) * e;
      }
      const Complex qs = cpow(double(q), -s);
      out.value = qs * acc;
      out.abs_error = err * std::abs(qs) + 1e-15 * std::abs(out.value);
      return out;
    }
    case Kind::Liouville: {
      // sum lambda(n) n^{-s} = zeta(2s)/zeta(s)
      double e1 = 0, e2 = 0;
      const Complex num = zeta_complex(2.0 * s, tol, &e1);
      const Complex den = zeta_complex(s, tol, &e2);
      out.value = num / den;
      out.abs_error = (e1 + e2 * std::abs(out.value)) / std::abs(den);
      return out;
    }
    case Kind::Moebius: {
      double e = 0;
      const Complex den = zeta_complex(s, tol, &e);
      out.value = 1.0 / den;
      out.abs_error = e * std::norm(out.value);  // |d(1/w)| = |dw| / |w|^2
      return out;
    }
    case Kind::CompletelyMultiplicative: {
      // truncated Euler product; heuristic tail, flagged non-rigorous
      if (s.real() <= 1.0)
        throw std::domain_error(
            "truncated Euler product needs Re s > 1 for this sequence kind");
      if (!sieve) throw std::invalid_argument("sequence evaluation needs a factor sieve");
      const std::uint32_t P = 20000;
      Complex prod{1.0, 0.0};
      for (std::uint32_t p = 2; p <= P; ++p) {
        if (!sieve->is_prime(p)) continue;
        const double up = u.eval<double>(p, sieve);
        prod /= (1.0 - up * cpow(double(p), -s));
      }
      out.value = prod;
      out.abs_error = std::abs(prod) * std::pow(double(P), 1.0 - s.real()) / (s.real() - 1.0);
      out.rigorous = false;
      return out;
    }
    case Kind::Multiplicative:
    case Kind::TauNormalized: {
      // plain truncated sum; heuristic tail, flagged non-rigorous
      if (s.real() <= 1.0)
        throw std::domain_error("truncated Dirichlet sum needs Re s > 1 for this sequence kind");
      std::uint32_t N = 100000;
      if (u.kind() == Kind::TauNormalized)
        N = std::min<std::uint32_t>(N, static_cast<std::uint32_t>(u.tau_table().size() - 1));
      StableSum<double> re, im;
      double block = 0;
      for (std::uint32_t n = 1; n <= N; ++n) {
        const double un = u.eval<double>(n, sieve);
        if (un == 0) continue;
        const Complex t = un * cpow(double(n), -s);
        re.add(t.real());
        im.add(t.imag());
        if (n > N - N / 8) block += std::abs(t);
      }
      out.value = {re.value(), im.value()};
      out.abs_error = block * 8.0;  // last-block mass scaled to a crude tail
      out.rigorous = false;
      return out;
    }
  }
  throw std::logic_error("unhandled sequence kind");
}

// --------------------------------------------------------------------------
// Pole registries (locations the contour machinery must keep away from)
// --------------------------------------------------------------------------
inline PoleSet poles_of(const MellinFunction& m, const FactorSieve* sieve = nullptr) {
  using UKind = CoefficientSequence::Kind;
  PoleSet ps;
  switch (m.kind()) {
    case MellinFunction::Kind::AffineClosedForm:
      if (m.c0() != 0) ps.points.push_back({0, 0});
      if (m.c1() != 0) ps.points.push_back({1, 0});
      return ps;
    case MellinFunction::Kind::BHFFactorized: {
      switch (m.u().kind()) {
        case UKind::Moebius:
          ps.points.push_back({1, 0});  // collapsed form 1/(1-z)
          return ps;
        case UKind::Liouville:
          ps.points.push_back({0.5, 0});  // zeta(2(1-z)) pole
          ps.points.push_back({1, 0});
          return ps;
        case UKind::One:
        case UKind::ExplicitList:
        case UKind::Periodic:
        case UKind::Character:
        case UKind::DavenportHeilbronn:
          ps.points.push_back({0, 0});  // zeta(1-z) pole (possibly reinforced by U)
          ps.points.push_back({1, 0});
          return ps;
        default:
          ps.points.push_back({0, 0});
          ps.points.push_back({1, 0});
          ps.complete = false;  // analytic structure of U not enumerable here
          return ps;
      }
    }
    case MellinFunction::Kind::NumericalIntegral: {
      // the direct integral lives in Re z < 0, left of every catalog pole
      const WeightFunction& g = m.weight();
      if (g.kind == WeightKind::PowerScale) {
        ps.points.push_back({0, 0});
        ps.points.push_back({1, 0});
      } else {
        ps.points.push_back({0, 0});
        ps.points.push_back({1, 0});
        (void)sieve;
      }
      return ps;
    }
  }
  throw std::logic_error("unhandled transform kind");
}

// --------------------------------------------------------------------------
// Direct integral for generalized Ingham weights at Re z < 0.
//
// With W(m) = sum_{k<=m} (u*1)(k) the integral splits over breakpoint
// intervals (1/(m+1), 1/m] where g_u(t) = W(m) t:
//     integral = sum_m W(m) P1(m),   P1(m) = (m^(z-1)-(m+1)^(z-1))/(1-z).
// The raw tail needs astronomically many terms, so the scaling limit
// L = lim W(m)/m = sum u(j)/j is subtracted:
//     integral = L/(-z) + sum_m [W(m) P1(m) - L P0(m)] + tail,
//     P0(m) = (m^z - (m+1)^z)/(-z),  sum_m P0(m) = 1/(-z).
// On (1/(m+1), 1/m] the integrand difference is (W(m)t - L) t^{-z-1}, so
//     |tail| <= D_K (K+1)^{Re z} / (-Re z),
//     D_K = sup_{m>K} max(|W(m)/m - L|, |W(m)/(m+1) - L|),
// and D_K is estimated as twice the measured sup over the last octave
// (the fluctuation is decreasing in the mean for the supported kinds).
// Supported: finite-support u, and periodic u with zero period mean
// (otherwise W(m)/m has no limit and this route cannot converge).
// --------------------------------------------------------------------------
struct IntegralResult {
  Complex value{};
  double abs_error = 0;
  std::uint64_t breakpoints = 0;
  double scaling_limit = 0;
};

namespace detail {

// L = sum u(j)/j. Finite support: direct. Zero-mean periodic: Abel form
// L = sum_j S(j)/(j(j+1)) with S the (periodic) prefix sums, accelerated by
// splitting off the mean of S: tail sum_{j>J} S(j)/(j(j+1)) = mean(S)/(J+1)
// up to O(q/J^2).
inline double scaling_limit_of(const CoefficientSequence& u, const FactorSieve* sieve,
                               double* err_out) {
  using Kind = CoefficientSequence::Kind;
  if (u.kind() == Kind::ExplicitList) {
    const auto& vals = u.raw_values();
    Rational acc = 0;
    for (std::size_t n = 1; n <= vals.size(); ++n) acc += vals[n - 1] / Rational(n);
    if (err_out) *err_out = 0;
    return from_rational<double>(acc);
  }
  const std::uint32_t q = u.period();
  if (q == 0)
    throw std::invalid_argument(
        "direct integral needs a finite-support or periodic sequence");
  std::vector<double> uval(q + 1, 0.0);
  double mean = 0;
  for (std::uint32_t r = 1; r <= q; ++r) {
    uval[r] = u.eval<double>(r, sieve);
    mean += uval[r];
  }
  if (std::fabs(mean) > 1e-12 * (1.0 + std::fabs(uval[1])) * q)
    throw std::domain_error(
        "direct integral needs a zero period mean (no finite scaling limit)");

  std::vector<double> S(q + 1, 0.0);
  double smean = 0;
  for (std::uint32_t r = 1; r <= q; ++r) {
    S[r] = S[r - 1] + uval[r];
    smean += S[r];
  }
  smean /= q;

  const std::uint64_t J = 1u << 20;
  StableSum<double> acc;
  for (std::uint64_t j = 1; j <= J; ++j) {
    const double Sj = S[1 + (j - 1) % q];
    acc.add(Sj / (double(j) * double(j + 1)));
  }
  const double L = acc.value() + smean / double(J + 1);
  if (err_out) {
    double smax = 0;
    for (std::uint32_t r = 1; r <= q; ++r) smax = std::max(smax, std::fabs(S[r] - smean));
    *err_out = 4.0 * smax * q / (double(J) * double(J));
  }
  return L;
}

// W(1..K) as doubles (accumulated divisor-sum sieve + prefix pass)
inline std::vector<double> w_table(const CoefficientSequence& u, std::uint64_t K,
                                   const FactorSieve* sieve) {
  std::vector<double> w(K + 1, 0.0);
  using Kind = CoefficientSequence::Kind;
  if (u.kind() == Kind::ExplicitList) {
    const auto& vals = u.raw_values();
    for (std::size_t d = 1; d <= vals.size() && d <= K; ++d) {
      const double ud = from_rational<double>(vals[d - 1]);
      if (ud == 0) continue;
      for (std::uint64_t mm = d; mm <= K; mm += d) w[mm] += ud;
    }
  } else {
    const std::uint32_t q = u.period();
    std::vector<double> uval(q + 1, 0.0);
    for (std::uint32_t r = 1; r <= q; ++r) uval[r] = u.eval<double>(r, sieve);
    for (std::uint64_t d = 1; d <= K; ++d) {
      const double ud = uval[1 + (d - 1) % q];
      if (ud == 0) continue;
      for (std::uint64_t mm = d; mm <= K; mm += d) w[mm] += ud;
    }
  }
  for (std::uint64_t mm = 1; mm <= K; ++mm) w[mm] += w[mm - 1];
  return w;
}

struct StreamResult {
  Complex sum{};
  double fluct = 0;  // sup over the last octave of |W(m)/m - L| and shifted variant
};

inline StreamResult stream_pass(const std::vector<double>& w, double L, Complex z) {
  const std::uint64_t K = w.size() - 1;
  const Complex zm1 = z - 1.0;
  StableSum<double> sre, sim;
  Complex pw = cpow(1.0, zm1);  // m^{z-1} at m = 1
  double fluct = 0;
  for (std::uint64_t m = 1; m <= K; ++m) {
    const Complex pw_next = cpow(double(m + 1), zm1);
    const Complex p1 = (pw - pw_next) / (1.0 - z);
    const Complex p0 = (pw * double(m) - pw_next * double(m + 1)) / (-z);
    const Complex term = w[m] * p1 - L * p0;
    sre.add(term.real());
    sim.add(term.imag());
    if (m > K / 2) {
      const double d1 = std::fabs(w[m] / double(m) - L);
      const double d2 = std::fabs(w[m] / double(m + 1) - L);
      fluct = std::max(fluct, std::max(d1, d2));
    }
    pw = pw_next;
  }
  return {{sre.value(), sim.value()}, fluct};
}

}  // namespace detail

inline IntegralResult gingham_integral(const CoefficientSequence& u, Complex z,
                                       double tol = 1e-6,
                                       const FactorSieve* sieve = nullptr) {
  if (z.real() >= 0)
    throw std::domain_error("direct integral route is defined for Re z < 0 only");
  const double sigma = z.real();
  double lerr = 0;
  const double L = detail::scaling_limit_of(u, sieve, &lerr);

  auto tail_bound = [&](double fluct, std::uint64_t K) {
    return 2.0 * fluct * std::pow(double(K + 1), sigma) / (-sigma);
  };

  std::uint64_t K = 1u << 17;
  std::vector<double> w = detail::w_table(u, K, sieve);
  detail::StreamResult sr = detail::stream_pass(w, L, z);
  double bound = tail_bound(sr.fluct, K);
  const double budget = 0.8 * tol;

  if (bound > budget) {
    // forecast K from the measured fluctuation, assuming D ~ K^{-1/2} decay;
    // bound(K) then scales like K^{sigma - 1/2}
    const double need = budget * 0.5 / std::max(bound, 1e-300);
    double factor = std::pow(need, 1.0 / (sigma - 0.5));
    factor = std::min(factor, double((1u << 24) / K));
    std::uint64_t K2 = K * static_cast<std::uint64_t>(std::max(2.0, std::ceil(factor)));
    K2 = std::min<std::uint64_t>(K2, 1u << 24);
    if (K2 > K) {
      K = K2;
      w = detail::w_table(u, K, sieve);
      sr = detail::stream_pass(w, L, z);
      bound = tail_bound(sr.fluct, K);
    }
  }
  if (bound + lerr > tol)
    throw std::runtime_error(
        "direct integral truncation bound exceeds the requested tolerance");

  IntegralResult out;
  out.value = Complex(L, 0) / (-z) + sr.sum;
  out.abs_error = bound + lerr / std::abs(z);
  out.breakpoints = K;
  out.scaling_limit = L;
  return out;
}

// --------------------------------------------------------------------------
// Transform evaluation
// --------------------------------------------------------------------------
namespace detail {
// value without the pole-proximity guard (contour machinery keeps its own
// distance and must not throw mid-walk)
inline MellinValue eval_unguarded(const MellinFunction& m, Complex z, double tol,
                                  const FactorSieve* sieve) {
  using UKind = CoefficientSequence::Kind;
  MellinValue out;
  switch (m.kind()) {
    case MellinFunction::Kind::AffineClosedForm: {
      const double c0 = from_rational<double>(m.c0());
      const double c1 = from_rational<double>(m.c1());
      out.value = c1 / (1.0 - z) - c0 / z;
      out.abs_error = 4e-16 * std::abs(out.value);
      return out;
    }
    case MellinFunction::Kind::BHFFactorized: {
      const Complex s = 1.0 - z;
      switch (m.u().kind()) {
        case UKind::Moebius:
          out.value = 1.0 / s;
          out.abs_error = 2e-16 * std::abs(out.value);
          return out;
        case UKind::Liouville: {
          double e = 0;
          out.value = zeta_complex(2.0 * s, tol, &e) / s;
          out.abs_error = e / std::abs(s) + 2e-16 * std::abs(out.value);
          return out;
        }
        default: {
          double ez = 0;
          const Complex zz = zeta_complex(s, tol, &ez);
          const MellinValue uu = dirichlet_series_value(m.u(), s, tol, sieve);
          out.value = zz * uu.value / s;
          out.abs_error =
              (ez * std::abs(uu.value) + uu.abs_error * std::abs(zz)) / std::abs(s) +
              2e-16 * std::abs(out.value);
          out.rigorous = uu.rigorous;
          return out;
        }
      }
    }
    case MellinFunction::Kind::NumericalIntegral: {
      if (z.real() >= 0)
        throw std::domain_error("direct integral route is defined for Re z < 0 only");
      const WeightFunction& g = m.weight();
      switch (g.kind) {
        case WeightKind::Affine: {
          const double c0 = from_rational<double>(g.c0);
          const double c1 = from_rational<double>(g.c1);
          out.value = c1 / (1.0 - z) - c0 / z;
          out.abs_error = 4e-16 * std::abs(out.value);
          return out;
        }
        case WeightKind::PowerScale: {
          // geometric breakpoint series in closed form; |lambda^z| < 1 here
          const double lam = from_rational<double>(g.lambda);
          const Complex lz = cpow(lam, z);
          out.value = (1.0 - lz / lam) / ((1.0 - z) * (1.0 - lz));
          out.abs_error = 1e-15 * std::abs(out.value);
          return out;
        }
        case WeightKind::Ingham: {
          const IntegralResult r =
              gingham_integral(CoefficientSequence::unit(), z, tol, sieve);
          out.value = r.value;
          out.abs_error = r.abs_error;
          out.rigorous = false;  // tail uses a measured fluctuation bound
          return out;
        }
        case WeightKind::GeneralizedIngham: {
          const IntegralResult r = gingham_integral(*g.u, z, tol, sieve);
          out.value = r.value;
          out.abs_error = r.abs_error;
          out.rigorous = false;
          return out;
        }
        case WeightKind::ExplicitBHF:
          throw std::domain_error(
              "weight is undefined below its last cataloged breakpoint; "
              "the integral to 0 cannot be formed");
      }
      throw std::logic_error("unhandled weight kind");
    }
  }
  throw std::logic_error("unhandled transform kind");
}
}  // namespace detail

inline MellinValue eval_mellin(const MellinFunction& m, Complex z, double tol = 1e-9,
                               const FactorSieve* sieve = nullptr) {
  const PoleSet ps = poles_of(m, sieve);
  for (const Complex& p : ps.points)
    if (std::abs(z - p) < 1e-6)
      throw std::domain_error("evaluation point is within 1e-6 of a pole");
  return detail::eval_unguarded(m, z, tol, sieve);
}

// --------------------------------------------------------------------------
// Two-route consistency check at Re z < 0: the direct integral against the
// factorized form zeta(1-z) U(1-z) / (1-z)
// --------------------------------------------------------------------------
struct ConsistencyReport {
  Complex lhs{}, rhs{};
  double diff = 0;
  double lhs_error = 0;
  double rhs_error = 0;
  std::uint64_t breakpoints = 0;
};

inline ConsistencyReport lemma_factorization_check(const CoefficientSequence& u, Complex z,
                                                   double tol = 1e-6,
                                                   const FactorSieve* sieve = nullptr) {
  if (z.real() >= 0) throw std::domain_error("consistency check requires Re z < 0");
  ConsistencyReport rep;
  const IntegralResult lhs = gingham_integral(u, z, 0.5 * tol, sieve);
  rep.lhs = lhs.value;
  rep.lhs_error = lhs.abs_error;
  rep.breakpoints = lhs.breakpoints;

  const MellinFunction fact = MellinFunction::bhf_factorized(u);
  const MellinValue rhs = detail::eval_unguarded(fact, z, 1e-12, sieve);
  rep.rhs = rhs.value;
  rep.rhs_error = rhs.abs_error;
  rep.diff = std::abs(rep.lhs - rep.rhs);
  return rep;
}

// --------------------------------------------------------------------------
// Argument-principle zero search
// --------------------------------------------------------------------------
struct ZeroRecord {
  Complex location{};
  double residual = 0;   // |g*(z)| at the refined point
  int winding = 1;       // count certified by the final enclosing box
  bool certified = false;
  std::string factor;    // "zeta", "coefficient-series", or "weight"
};

struct FindZeroOptions {
  double residual_tol = 1e-9;
  double eval_tol = 1e-12;
  int max_zeros = 256;
  double min_box = 1e-8;  // subdivision floor (box diagonal)
  int max_depth = 80;     // must out-range min_box: diag halves every 2 levels
};

struct ZeroSearchReport {
  std::vector<ZeroRecord> zeros;
  ComplexBox box_used{};
  int boundary_winding = 0;  // winding count of box_used
};

namespace detail {

using EvalFn = std::function<Complex(Complex)>;

struct WindingOutcome {
  double raw = 0;       // accumulated phase / 2*pi
  int count = 0;
  bool certified = false;
  double min_abs = std::numeric_limits<double>::infinity();
};

// phase tracking along one segment. Every accepted segment is verified at
// its midpoint: both half-steps must turn by at most pi/3, so a full 2*pi
// loop inside an innocuous-looking step cannot alias away. Negative depth
// forces that many initial bisections before acceptance is allowed.
inline bool walk_segment(const EvalFn& f, Complex a, Complex b, Complex fa, Complex fb,
                         int depth, double& phase, double& min_abs) {
  const double absa = std::abs(fa), absb = std::abs(fb);
  min_abs = std::min({min_abs, absa, absb});
  if (absa == 0 || absb == 0) return false;  // exact zero on the contour
  const Complex mid = 0.5 * (a + b);
  const Complex fm = f(mid);
  const double absm = std::abs(fm);
  min_abs = std::min(min_abs, absm);
  if (absm == 0) return false;
  if (depth >= 0) {
    const double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
    constexpr double kMaxTurn = 1.0471975511965976;  // pi/3
    if (std::fabs(d1) <= kMaxTurn && std::fabs(d2) <= kMaxTurn) {
      phase += d1 + d2;
      return true;
    }
  }
  if (depth > 26) return false;  // zero pinned on the contour
  return walk_segment(f, a, mid, fa, fm, depth + 1, phase, min_abs) &&
         walk_segment(f, mid, b, fm, fb, depth + 1, phase, min_abs);
}

inline WindingOutcome box_winding(const EvalFn& f, const ComplexBox& box) {
  const Complex c[4] = {{box.re_min, box.im_min},
                        {box.re_max, box.im_min},
                        {box.re_max, box.im_max},
                        {box.re_min, box.im_max}};
  WindingOutcome out;
  double phase = 0;
  Complex fc[4];
  for (int i = 0; i < 4; ++i) fc[i] = f(c[i]);
  for (int i = 0; i < 4; ++i) {
    // force initial segments of length ~1 or shorter before acceptance
    const double len = std::abs(c[(i + 1) % 4] - c[i]);
    const int forced = std::max(3, static_cast<int>(std::ceil(std::log2(len + 1.0))));
    if (!walk_segment(f, c[i], c[(i + 1) % 4], fc[i], fc[(i + 1) % 4], -forced, phase,
                      out.min_abs))
      return out;  // certified=false
  }
  out.raw = phase / (2.0 * std::acos(-1.0));
  const double nearest = std::round(out.raw);
  out.count = static_cast<int>(nearest);
  out.certified = std::fabs(out.raw - nearest) < 0.25;
  return out;
}

// secant iteration; returns nullopt if it never reaches tol inside the trust
// region. The update must keep the two newest iterates: reordering the pair
// by residual admits non-root fixed points where the same step repeats.
inline std::optional<Complex> secant_refine(const EvalFn& f, Complex z0,
                                            const ComplexBox& trust, double tol,
                                            double* residual_out) {
  Complex z1 = z0 + Complex(1e-3 * trust.width() + 1e-9, 7e-4 * trust.height() + 7e-10);
  Complex f0 = f(z0), f1 = f(z1);
  Complex best_z = (std::abs(f0) <= std::abs(f1)) ? z0 : z1;
  double best_r = std::min(std::abs(f0), std::abs(f1));
  // absolute floor keeps the slack meaningful once boxes shrink below it
  const double slack = 0.15 * std::max(trust.width(), trust.height()) + 1e-5;
  for (int it = 0; it < 80 && best_r > tol; ++it) {
    const Complex df = f1 - f0;
    if (std::abs(df) == 0.0) break;
    const Complex zn = z1 - f1 * (z1 - z0) / df;
    if (!trust.contains(zn, slack)) break;
    const Complex fn = f(zn);
    z0 = z1;
    f0 = f1;
    z1 = zn;
    f1 = fn;
    if (std::abs(fn) < best_r) {
      best_r = std::abs(fn);
      best_z = zn;
    }
    if (std::abs(z1 - z0) < 1e-14 * (1.0 + std::abs(z1))) break;
  }
  if (best_r <= tol) {
    if (residual_out) *residual_out = best_r;
    return best_z;
  }
  return std::nullopt;
}

// the one-zero certificate: a small box around z whose winding is exactly 1.
// The half-width ladder covers both failure modes: a neighboring zero inside
// the box (shrink) and a refined location off by more than the box (grow).
inline bool certify_isolated(const EvalFn& f, Complex z, double h0) {
  for (const double scale : {1.0, 4.0, 0.25, 16.0}) {
    const double h = h0 * scale;
    const ComplexBox tiny{z.real() - h, z.real() + h, z.imag() - h, z.imag() + h};
    const WindingOutcome w = box_winding(f, tiny);
    if (w.certified && w.count == 1) return true;
  }
  return false;
}

struct SearchState {
  const EvalFn* f = nullptr;
  FindZeroOptions opts;
  std::vector<ZeroRecord>* out = nullptr;
  ComplexBox top{};
};

// split coordinates carry a fixed jitter so zeros sitting exactly on natural
// midlines (e.g. Re = 1/2 in a [0,1] strip) never land on a contour
inline void subdivide(SearchState& st, ComplexBox box, int depth) {
  if (static_cast<int>(st.out->size()) >= st.opts.max_zeros)
    throw std::runtime_error("zero count exceeds the configured maximum");

  WindingOutcome w = box_winding(*st.f, box);
  if (!w.certified) {
    // re-jitter the box edges slightly and retry; a zero is near the contour
    const double jr = 1.3e-4 * box.width(), ji = 1.3e-4 * box.height();
    for (int attempt = 1; attempt <= 4 && !w.certified; ++attempt) {
      const ComplexBox jb{box.re_min - attempt * jr, box.re_max + attempt * jr,
                          box.im_min - attempt * ji, box.im_max + attempt * ji};
      w = box_winding(*st.f, jb);
      if (w.certified) box = jb;
    }
    if (!w.certified)
      throw std::runtime_error("contour winding could not be certified after jitter");
  }
  if (w.count < 0)
    throw std::runtime_error("negative winding count: a pole entered the search region");
  if (w.count == 0) return;

  const double diag = std::hypot(box.width(), box.height());
  if (w.count == 1) {
    double residual = 0;
    const Complex center{0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max)};
    const auto z = secant_refine(*st.f, center, box, st.opts.residual_tol, &residual);
    // the refined point must land in THIS box: the winding placed the zero
    // here, and a result in a sibling box would double-count its occupant
    const double margin = std::max(1e-7, 1.5e-3 * std::max(box.width(), box.height()));
    if (z && box.contains(*z, margin) && st.top.contains(*z, 1e-7)) {
      ZeroRecord rec;
      rec.location = *z;
      rec.residual = residual;
      rec.winding = 1;
      rec.certified = certify_isolated(*st.f, *z, std::max(1e-6, 1e-3 * diag));
      st.out->push_back(rec);
      return;
    }
    if (diag < st.opts.min_box) {
      ZeroRecord rec;
      rec.location = center;
      rec.residual = std::abs((*st.f)(center));
      rec.winding = 1;
      rec.certified = false;
      st.out->push_back(rec);
      return;
    }
  } else if (diag < st.opts.min_box) {
    ZeroRecord rec;  // unresolved cluster / multiple zero
    rec.location = {0.5 * (box.re_min + box.re_max), 0.5 * (box.im_min + box.im_max)};
    rec.residual = std::abs((*st.f)(rec.location));
    rec.winding = w.count;
    rec.certified = false;
    st.out->push_back(rec);
    return;
  }

  if (depth >= st.opts.max_depth)
    throw std::runtime_error("subdivision depth cap reached without isolating a zero");

  constexpr double kSplit = 0.513173;  // jittered midline
  ComplexBox lo = box, hi = box;
  if (box.width() >= box.height()) {
    const double cut = box.re_min + kSplit * box.width();
    lo.re_max = cut;
    hi.re_min = cut;
  } else {
    const double cut = box.im_min + kSplit * box.height();
    lo.im_max = cut;
    hi.im_min = cut;
  }
  subdivide(st, lo, depth + 1);
  subdivide(st, hi, depth + 1);
}

}  // namespace detail

// shrink the box so that every registered pole sits at distance >= 1e-3
// outside it; a pole deeper inside cannot be excluded and is an error
inline ComplexBox shrink_away_from_poles(ComplexBox box, const PoleSet& ps) {
  constexpr double kGap = 1e-3;
  for (const Complex& p : ps.points) {
    const bool in_re = p.real() > box.re_min - kGap && p.real() < box.re_max + kGap;
    const bool in_im = p.imag() > box.im_min - kGap && p.imag() < box.im_max + kGap;
    if (!in_re || !in_im) continue;
    // nearest escape direction
    const double d_left = p.real() - box.re_min;
    const double d_right = box.re_max - p.real();
    const double d_bot = p.imag() - box.im_min;
    const double d_top = box.im_max - p.imag();
    const double dmin = std::min({d_left, d_right, d_bot, d_top});
    if (dmin > 0.1 * std::min(box.width(), box.height()))
      throw std::domain_error("a pole lies inside the search region");
    if (dmin == d_left)
      box.re_min = p.real() + kGap;
    else if (dmin == d_right)
      box.re_max = p.real() - kGap;
    else if (dmin == d_bot)
      box.im_min = p.imag() + kGap;
    else
      box.im_max = p.imag() - kGap;
    if (box.re_min >= box.re_max || box.im_min >= box.im_max)
      throw std::domain_error("search region degenerate after pole exclusion");
  }
  return box;
}

inline ZeroSearchReport find_zeros(const MellinFunction& m, ComplexBox box,
                                   FindZeroOptions opts = {},
                                   const FactorSieve* sieve = nullptr) {
  if (!(box.re_min < box.re_max && box.im_min < box.im_max))
    throw std::invalid_argument("degenerate search box");
  const PoleSet ps = poles_of(m, sieve);

  ZeroSearchReport rep;
  rep.box_used = shrink_away_from_poles(box, ps);

  detail::EvalFn f = [&](Complex z) {
    return detail::eval_unguarded(m, z, opts.eval_tol, sieve).value;
  };

  const detail::WindingOutcome top = detail::box_winding(f, rep.box_used);
  if (!top.certified)
    throw std::runtime_error("contour winding could not be certified on the outer box");
  rep.boundary_winding = top.count;
  if (top.count == 0) return rep;

  detail::SearchState st;
  st.f = &f;
  st.opts = opts;
  st.out = &rep.zeros;
  st.top = rep.box_used;
  detail::subdivide(st, rep.box_used, 0);

  // merge duplicates found near shared sub-box edges
  std::sort(rep.zeros.begin(), rep.zeros.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
    return a.location.real() < b.location.real();
  });
  std::vector<ZeroRecord> unique;
  for (const ZeroRecord& r : rep.zeros) {
    if (!unique.empty() && std::abs(unique.back().location - r.location) < 1e-8) {
      if (r.residual < unique.back().residual) unique.back() = r;
      continue;
    }
    unique.push_back(r);
  }
  rep.zeros = std::move(unique);

  // attribute each zero to the factor that vanishes there
  for (ZeroRecord& r : rep.zeros) {
    if (m.kind() == MellinFunction::Kind::AffineClosedForm ||
        m.kind() == MellinFunction::Kind::NumericalIntegral) {
      r.factor = "weight";
    } else if (m.u().kind() == CoefficientSequence::Kind::Liouville) {
      r.factor = "zeta";
    } else {
      const Complex s = 1.0 - r.location;
      const double fz = std::abs(zeta_complex(s, 1e-10));
      double fu = std::numeric_limits<double>::infinity();
      try {
        fu = std::abs(dirichlet_series_value(m.u(), s, 1e-10, sieve).value);
      } catch (const std::exception&) {
      }
      r.factor = fz <= fu ? "zeta" : "coefficient-series";
    }
  }
  return rep;
}

// minimum real part over the zeros found in the box (always box-limited:
// zeros outside the box are invisible by construction)
struct IndexReport {
  double eta = 0;
  bool box_limited = true;
  bool empty = true;
  std::vector<ZeroRecord> zeros;
};

inline IndexReport analytic_index(const MellinFunction& m, ComplexBox box,
                                  FindZeroOptions opts = {},
                                  const FactorSieve* sieve = nullptr) {
  ZeroSearchReport rep = find_zeros(m, box, opts, sieve);
  IndexReport out;
  out.zeros = std::move(rep.zeros);
  if (out.zeros.empty()) return out;
  out.empty = false;
  out.eta = out.zeros.front().location.real();
  for (const ZeroRecord& r : out.zeros) out.eta = std::min(out.eta, r.location.real());
  return out;
}

}  // namespace gvlab::mellin
