#pragma once

// Arithmetic coefficient sequences u(1), u(2), ... and the Dirichlet ring
// they live in. Sequences are immutable after construction; evaluation is
// templated over the scalar (double / BigFloat / Rational where exact).

#include "gvlab/scalars.hpp"
#include "gvlab/sieve.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlab::arith {

// x = (-2+sqrt(10-2*sqrt(5)))/(sqrt(5)-1), the coefficient making the
// 5-periodic sequence (1, x, -x, -1, 0) satisfy a functional equation
// without an Euler product. Doubles give 0.28407904384...
template <class T>
T davenport_heilbronn_xi() {
  using std::sqrt;
  const T five = T(5);
  return (T(-2) + sqrt(T(10) - 2 * sqrt(five))) / (sqrt(five) - T(1));
}

// --------------------------------------------------------------------------
// Ramanujan tau, exact: tau(n) = [x^n] x*prod_{m>=1}(1-x^m)^24. The product
// is expanded by Euler's pentagonal series, then raised to the 24th power by
// repeated squaring of truncated integer polynomials (24 = 16 + 8).
//
// Coefficient-growth headroom for the 128-bit lanes: the n-th coefficient of
// eta^(2k) is O(d(n) n^(k/2)) in absolute value, so for limit <= 20000 the
// largest intermediates (the E16*E8 convolution terms, ~n^(7/2)*n^(3/2)
// products summed over <= n shifts) stay below 2^100.
// --------------------------------------------------------------------------
inline std::vector<Int128> ramanujan_tau(std::uint32_t limit) {
  if (limit < 1 || limit > 20000)
    throw std::invalid_argument("tau expansion supported for 1 <= limit <= 20000");
  const std::size_t deg = limit - 1;  // coefficients of x^0 .. x^deg

  auto mul_trunc = [deg](const std::vector<Int128>& a, const std::vector<Int128>& b) {
    std::vector<Int128> c(deg + 1, Int128(0));
    for (std::size_t i = 0; i <= deg; ++i) {
      if (a[i] == 0) continue;
      const Int128 ai = a[i];
      const std::size_t jmax = deg - i;
      for (std::size_t j = 0; j <= jmax && j < b.size(); ++j) {
        if (b[j] != 0) c[i + j] += ai * b[j];
      }
    }
    return c;
  };

  std::vector<Int128> e(deg + 1, Int128(0));
  e[0] = 1;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t g1 = k * (3 * k - 1) / 2;
    const std::int64_t g2 = k * (3 * k + 1) / 2;
    if (g1 > static_cast<std::int64_t>(deg) && g2 > static_cast<std::int64_t>(deg)) break;
    const Int128 sign = (k & 1) ? -1 : +1;
    if (g1 <= static_cast<std::int64_t>(deg)) e[g1] += sign;
    if (g2 <= static_cast<std::int64_t>(deg)) e[g2] += sign;
  }

  std::vector<Int128> e2 = mul_trunc(e, e);
  std::vector<Int128> e4 = mul_trunc(e2, e2);
  std::vector<Int128> e8 = mul_trunc(e4, e4);
  std::vector<Int128> e16 = mul_trunc(e8, e8);
  std::vector<Int128> e24 = mul_trunc(e16, e8);

  std::vector<Int128> tau(limit + 1, Int128(0));
  for (std::uint32_t n = 1; n <= limit; ++n) tau[n] = e24[n - 1];
  return tau;
}

// --------------------------------------------------------------------------
// Real Dirichlet characters mod q, i.e. the homomorphisms (Z/q)* -> {+-1}
// extended by 0 off the units. The index is a bitmask over the 2-torsion
// generators of the character group, in this fixed order:
//   bit per odd prime factor of q (ascending), then for 2^a | q:
//   a = 2 -> one bit (sign at 3), a >= 3 -> sign bit at -1, then bit at 5.
// Index 0 is the principal character. Complex-valued characters are out of
// scope; nothing downstream consumes them.
// --------------------------------------------------------------------------
inline std::vector<std::int8_t> real_character_table(std::uint32_t q, std::uint32_t index) {
  if (q < 1 || q > 1000000) throw std::invalid_argument("character modulus out of range");
  std::vector<std::int8_t> table(q == 1 ? 1 : q, 0);

  // factor q
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pe;  // (p, p^a)
  {
    std::uint32_t m = q;
    for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= m; ++p) {
      if (m % p) continue;
      std::uint32_t pk = 1;
      while (m % p == 0) {
        m /= p;
        pk *= p;
      }
      pe.emplace_back(p, pk);
    }
    if (m > 1) pe.emplace_back(m, m);
    std::sort(pe.begin(), pe.end());
  }

  // per-component sign tables indexed by residue mod p^a
  std::vector<std::vector<std::int8_t>> comp;
  std::uint32_t bits_used = 0;
  auto take_bit = [&]() { return (index >> bits_used++) & 1u; };

  for (auto [p, pk] : pe) {
    std::vector<std::int8_t> t(pk, 0);
    if (p == 2) {
      if (pk == 2) {
        t[1] = 1;                       // (Z/2)* trivial, no bit
      } else if (pk == 4) {
        const bool b = take_bit();
        t[1] = 1;
        t[3] = b ? -1 : 1;
      } else {                          // 2^a, a >= 3: units are +-5^k
        const bool bsign = take_bit();
        const bool bfive = take_bit();
        std::uint64_t y = 1;
        for (std::uint32_t k = 0; k < pk / 4; ++k) {
          const std::int8_t vk = (bfive && (k & 1)) ? -1 : 1;
          t[y] = vk;
          t[pk - y] = bsign ? -vk : vk;
          y = (y * 5) % pk;
        }
      }
    } else {
      // (Z/p^a)* cyclic of even order; walk a generator once
      const bool b = take_bit();
      const std::uint32_t order = pk / p * (p - 1);
      std::uint32_t g = 0;
      for (std::uint32_t cand = 2; cand < pk; ++cand) {
        if (cand % p == 0) continue;
        std::uint64_t y = cand;
        std::uint32_t k = 1;
        while (y != 1) {
          y = (y * cand) % pk;
          ++k;
        }
        if (k == order) {
          g = cand;
          break;
        }
      }
      std::uint64_t y = 1;
      for (std::uint32_t k = 0; k < order; ++k) {
        t[y] = (b && (k & 1)) ? -1 : 1;
        y = (y * g) % pk;
      }
    }
    comp.push_back(std::move(t));
  }

  if (index >= (1u << bits_used))
    throw std::invalid_argument("character index out of range for this modulus");

  if (q == 1) {
    table[0] = 1;  // the trivial character of modulus 1 is identically 1
    return table;
  }
  for (std::uint32_t r = 0; r < q; ++r) {
    int v = 1;
    for (std::size_t i = 0; i < pe.size(); ++i) {
      const std::int8_t c = comp[i][r % pe[i].second];
      if (c == 0) {
        v = 0;
        break;
      }
      v *= c;
    }
    table[r] = static_cast<std::int8_t>(v);
  }
  return table;
}

// --------------------------------------------------------------------------
// CoefficientSequence
// --------------------------------------------------------------------------
class CoefficientSequence {
 public:
  enum class Kind {
    ExplicitList,              // finite support, exact rational values
    Periodic,                  // u(n) = vals[(n-1) mod q]
    CompletelyMultiplicative,  // values on primes
    Multiplicative,            // values on prime powers
    Liouville,
    Moebius,
    One,
    Character,                 // real character mod q (table)
    DavenportHeilbronn,        // 5-periodic (1, xi, -xi, -1, 0)
    TauNormalized,             // tau(n) / n^(11/2)
  };

  static CoefficientSequence explicit_list(std::vector<Rational> values) {
    CoefficientSequence s(Kind::ExplicitList);
    s.values_ = std::move(values);
    return s;
  }
  static CoefficientSequence unit() { return explicit_list({Rational(1)}); }
  static CoefficientSequence periodic(std::vector<Rational> values) {
    if (values.empty()) throw std::invalid_argument("empty period");
    CoefficientSequence s(Kind::Periodic);
    s.period_ = static_cast<std::uint32_t>(values.size());
    s.values_ = std::move(values);
    return s;
  }
  static CoefficientSequence completely_multiplicative(std::map<std::uint32_t, Rational> on_primes) {
    CoefficientSequence s(Kind::CompletelyMultiplicative);
    s.prime_map_ = std::move(on_primes);
    return s;
  }
  static CoefficientSequence multiplicative(std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> on_prime_powers) {
    CoefficientSequence s(Kind::Multiplicative);
    s.prime_power_map_ = std::move(on_prime_powers);
    return s;
  }
  static CoefficientSequence liouville() { return CoefficientSequence(Kind::Liouville); }
  static CoefficientSequence moebius() { return CoefficientSequence(Kind::Moebius); }
  static CoefficientSequence one() { return CoefficientSequence(Kind::One); }
  static CoefficientSequence character(std::uint32_t q, std::uint32_t index = 1) {
    CoefficientSequence s(Kind::Character);
    if (q == 1) index = 0;
    s.period_ = q;
    s.char_index_ = index;
    s.char_table_ = real_character_table(q, index);
    return s;
  }
  static CoefficientSequence davenport_heilbronn() {
    CoefficientSequence s(Kind::DavenportHeilbronn);
    s.period_ = 5;
    return s;
  }
  // tau values are materialized up front; `limit` caps the largest n served
  static CoefficientSequence ramanujan_tau_normalized(std::uint32_t limit) {
    CoefficientSequence s(Kind::TauNormalized);
    s.tau_ = ramanujan_tau(limit);
    return s;
  }

  Kind kind() const { return kind_; }
  std::uint32_t period() const { return period_; }  // 0 when aperiodic
  const std::vector<Rational>& raw_values() const { return values_; }
  const std::vector<Int128>& tau_table() const { return tau_; }
  std::uint32_t character_index() const { return char_index_; }

  bool is_completely_multiplicative() const {
    switch (kind_) {
      case Kind::Liouville:
      case Kind::One:
      case Kind::Character:
      case Kind::CompletelyMultiplicative:
        return true;
      case Kind::ExplicitList:
        // e = (1,0,0,...) is the only finitely supported one we recognize
        return values_.size() == 1 && values_[0] == 1;
      default:
        return false;
    }
  }
  bool is_multiplicative() const {
    switch (kind_) {
      case Kind::Moebius:
      case Kind::Multiplicative:
      case Kind::TauNormalized:
        return true;
      default:
        return is_completely_multiplicative();
    }
  }

  template <class T>
  T eval(std::uint64_t n, const FactorSieve* sieve = nullptr) const {
    if (n < 1) throw std::invalid_argument("sequences are indexed from 1");
    switch (kind_) {
      case Kind::ExplicitList:
        return n <= values_.size() ? from_rational<T>(values_[n - 1]) : T(0);
      case Kind::Periodic:
        return from_rational<T>(values_[(n - 1) % period_]);
      case Kind::One:
        return T(1);
      case Kind::Liouville:
        return T(need(sieve).liouville(checked32(n)));
      case Kind::Moebius:
        return T(need(sieve).moebius(checked32(n)));
      case Kind::Character:
        return T(static_cast<int>(char_table_[n % period_]));
      case Kind::DavenportHeilbronn: {
        if constexpr (std::is_same_v<T, Rational>) {
          throw std::domain_error("sequence values are irrational");
        } else {
          switch (n % 5) {
            case 1: return T(1);
            case 2: return davenport_heilbronn_xi<T>();
            case 3: return -davenport_heilbronn_xi<T>();
            case 4: return T(-1);
            default: return T(0);
          }
        }
      }
      case Kind::TauNormalized: {
        if constexpr (std::is_same_v<T, Rational>) {
          throw std::domain_error("sequence values are irrational");
        } else {
          if (n >= tau_.size())
            throw std::out_of_range("tau table does not cover this index");
          using std::pow;
          const T t = tau_value<T>(tau_[n]);
          return t / pow(T(n), T(11) / T(2));
        }
      }
      case Kind::CompletelyMultiplicative: {
        std::vector<PrimePower> pps;
        need(sieve).factorize(checked32(n), pps);
        T v(1);
        for (const auto& pp : pps) {
          auto it = prime_map_.find(pp.p);
          if (it == prime_map_.end())
            throw std::out_of_range("no value assigned at prime");
          T vp = from_rational<T>(it->second);
          for (std::uint32_t e = 0; e < pp.e; ++e) v *= vp;
        }
        return v;
      }
      case Kind::Multiplicative: {
        std::vector<PrimePower> pps;
        need(sieve).factorize(checked32(n), pps);
        T v(1);
        for (const auto& pp : pps) {
          auto it = prime_power_map_.find({pp.p, pp.e});
          if (it == prime_power_map_.end())
            throw std::out_of_range("no value assigned at prime power");
          v *= from_rational<T>(it->second);
        }
        return v;
      }
    }
    throw std::logic_error("unreachable");
  }

  // values u(1..n) as a dense array; out[0] is unused and zero
  template <class T>
  std::vector<T> materialize(std::uint32_t n, const FactorSieve* sieve = nullptr) const {
    std::vector<T> out(static_cast<std::size_t>(n) + 1, T(0));
    for (std::uint32_t i = 1; i <= n; ++i) out[i] = eval<T>(i, sieve);
    return out;
  }

 private:
  explicit CoefficientSequence(Kind k) : kind_(k) {}
  static const FactorSieve& need(const FactorSieve* s) {
    if (!s) throw std::invalid_argument("this sequence kind needs a factor sieve");
    return *s;
  }
  static std::uint32_t checked32(std::uint64_t n) {
    if (n > 0xffffffffull) throw std::out_of_range("index too large");
    return static_cast<std::uint32_t>(n);
  }
  template <class T>
  static T tau_value(const Int128& t) {
    if constexpr (std::is_same_v<T, double>)
      return t.convert_to<double>();
    else
      return T(t);
  }

  Kind kind_;
  std::uint32_t period_ = 0;
  std::uint32_t char_index_ = 0;
  std::vector<Rational> values_;
  std::map<std::uint32_t, Rational> prime_map_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> prime_power_map_;
  std::vector<std::int8_t> char_table_;
  std::vector<Int128> tau_;
};

// --------------------------------------------------------------------------
// Dirichlet ring on dense arrays indexed 1..N ([0] unused)
// --------------------------------------------------------------------------
template <class T>
std::vector<T> dirichlet_convolve(std::span<const T> u, std::span<const T> v) {
  const std::size_t n = std::min(u.size(), v.size()) - 1;
  std::vector<T> out(n + 1, T(0));
  for (std::size_t d = 1; d <= n; ++d) {
    if (u[d] == T(0)) continue;
    for (std::size_t m = d, q = 1; m <= n; m += d, ++q) out[m] += u[d] * v[q];
  }
  return out;
}

// v with (u * v)(n) = e(n) up to the array length; requires u(1) != 0
template <class T>
std::vector<T> dirichlet_inverse(std::span<const T> u, const FactorSieve& sieve) {
  const std::size_t n = u.size() - 1;
  if (n < 1 || u[1] == T(0))
    throw std::invalid_argument("Dirichlet inverse needs u(1) != 0");
  std::vector<T> v(n + 1, T(0));
  const T inv1 = T(1) / u[1];
  v[1] = inv1;
  for (std::size_t m = 2; m <= n; ++m) {
    T acc(0);
    sieve.for_each_divisor(static_cast<std::uint32_t>(m), [&](std::uint32_t d) {
      if (d < m) acc += v[d] * u[m / d];
    });
    v[m] = -inv1 * acc;
  }
  return v;
}

template <class T>
std::vector<T> unit_sequence(std::uint32_t n) {
  std::vector<T> e(static_cast<std::size_t>(n) + 1, T(0));
  if (n >= 1) e[1] = T(1);
  return e;
}

// --------------------------------------------------------------------------
// Flat string ids (CLI namespace): liouville | moebius | one | e |
// character:q[,index] | davenport_heilbronn | dh | ramanujan_tau_normalized
// | tau | periodic:v1,v2,... | explicit:v1,v2,...
// Values parse as integers, a/b fractions, or finite decimals (exact).
// --------------------------------------------------------------------------
inline Rational parse_rational(const std::string& tok) {
  if (tok.empty()) throw std::invalid_argument("empty numeric token");
  auto slash = tok.find('/');
  if (slash != std::string::npos) {
    BigInt num(tok.substr(0, slash)), den(tok.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }
  auto dot = tok.find('.');
  if (dot == std::string::npos) return Rational(BigInt(tok));
  std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
  bool neg = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    neg = digits[0] == '-';
    digits.erase(0, 1);
  }
  if (digits.empty()) throw std::invalid_argument("bad numeric token: " + tok);
  BigInt num(digits);
  BigInt den = 1;
  for (std::size_t i = dot + 1; i < tok.size(); ++i) den *= 10;
  return neg ? Rational(-num, den) : Rational(num, den);
}

inline std::vector<Rational> parse_rational_csv(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
  return out;
}

// `tau_limit` bounds the materialized tau table for ids that need one
inline CoefficientSequence parse_sequence_id(const std::string& id, std::uint32_t tau_limit = 5000) {
  auto starts = [&](const char* p) { return id.rfind(p, 0) == 0; };
  if (id == "liouville") return CoefficientSequence::liouville();
  if (id == "moebius") return CoefficientSequence::moebius();
  if (id == "one") return CoefficientSequence::one();
  if (id == "e" || id == "unit") return CoefficientSequence::unit();
  if (id == "davenport_heilbronn" || id == "dh") return CoefficientSequence::davenport_heilbronn();
  if (id == "ramanujan_tau_normalized" || id == "tau")
    return CoefficientSequence::ramanujan_tau_normalized(tau_limit);
  if (starts("character:")) {
    const std::string args = id.substr(10);
    auto comma = args.find(',');
    std::uint32_t q = static_cast<std::uint32_t>(std::stoul(args.substr(0, comma)));
    std::uint32_t index = comma == std::string::npos
                              ? (q <= 2 ? 0u : 1u)
                              : static_cast<std::uint32_t>(std::stoul(args.substr(comma + 1)));
    return CoefficientSequence::character(q, index);
  }
  if (starts("periodic:")) return CoefficientSequence::periodic(parse_rational_csv(id.substr(9)));
  if (starts("explicit:")) return CoefficientSequence::explicit_list(parse_rational_csv(id.substr(9)));
  throw std::invalid_argument("unknown sequence id: " + id);
}

inline std::string sequence_catalog() {
  return "liouville | moebius | one | e | character:q[,index] | "
         "davenport_heilbronn | ramanujan_tau_normalized | "
         "periodic:v1,v2,... | explicit:v1,v2,...";
}

}  // namespace gvlab::arith
