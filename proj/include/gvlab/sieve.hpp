#pragma once

// Smallest-prime-factor sieve and the multiplicative-function evaluators
// built on it. Everything downstream (Dirichlet ring, closed-form oracles,
// summatory identities) factors through this table; no trial division in
// hot paths.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gvlab::arith {

struct PrimePower {
  std::uint32_t p;
  std::uint32_t e;
};

class FactorSieve {
 public:
  explicit FactorSieve(std::uint32_t limit) : limit_(limit), spf_(limit + 1, 0) {
    if (limit < 1) throw std::invalid_argument("sieve limit must be >= 1");
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (spf_[i] != 0) continue;
      for (std::uint64_t j = i; j <= limit; j += i)
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }

  std::uint32_t limit() const { return limit_; }

  std::uint32_t smallest_prime_factor(std::uint32_t n) const {
    check(n);
    return spf_[n];
  }

  bool is_prime(std::uint32_t n) const {
    check(n);
    return n >= 2 && spf_[n] == n;
  }

  // number of prime factors counted with multiplicity
  std::uint32_t big_omega(std::uint32_t n) const {
    check(n);
    std::uint32_t c = 0;
    while (n > 1) {
      n /= spf_[n];
      ++c;
    }
    return c;
  }

  int liouville(std::uint32_t n) const { return (big_omega(n) & 1) ? -1 : +1; }

  int moebius(std::uint32_t n) const {
    check(n);
    int sign = 1;
    while (n > 1) {
      std::uint32_t p = spf_[n];
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
    return sign;
  }

  // prime-power factorization, ascending primes; n=1 gives the empty list
  void factorize(std::uint32_t n, std::vector<PrimePower>& out) const {
    check(n);
    out.clear();
    while (n > 1) {
      std::uint32_t p = spf_[n], e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.push_back({p, e});
    }
  }

  // calls fn(d) for every divisor d of n, in no particular order;
  // reentrant (fn may enumerate divisors itself)
  template <class Fn>
  void for_each_divisor(std::uint32_t n, Fn&& fn) const {
    check(n);
    std::vector<PrimePower> pps;
    factorize(n, pps);
    std::vector<std::uint32_t> divs;
    divs.reserve(16);
    divs.push_back(1);
    for (const auto& pp : pps) {
      std::size_t count = divs.size();
      std::uint64_t pe = 1;
      for (std::uint32_t e = 1; e <= pp.e; ++e) {
        pe *= pp.p;
        for (std::size_t i = 0; i < count; ++i)
          divs.push_back(static_cast<std::uint32_t>(divs[i] * pe));
      }
    }
    for (std::uint32_t d : divs) fn(d);
  }

  std::vector<std::uint32_t> divisors(std::uint32_t n) const {
    std::vector<std::uint32_t> out;
    for_each_divisor(n, [&](std::uint32_t d) { out.push_back(d); });
    return out;
  }

 private:
  void check(std::uint32_t n) const {
    if (n < 1 || n > limit_) throw std::out_of_range("value outside sieve range");
  }
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
};

}  // namespace gvlab::arith
