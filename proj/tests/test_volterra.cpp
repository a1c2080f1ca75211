#include <catch2/catch_amalgamated.hpp>

#include "gvlab/volterra.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using gvlab::BigFloat;
using gvlab::Rational;
using gvlab::arith::CoefficientSequence;
using gvlab::arith::FactorSieve;
using gvlab::weights::WeightFunction;
using namespace gvlab::volterra;

namespace {

// Reference solver: plain forward substitution, every weight value obtained
// from eval_weight at the exact rational argument k/n, naive summation. No
// slope tables, no reciprocal tricks, no compensation; the production solver
// has to match this to near machine precision at these sizes.
std::vector<double> solve_ref(const WeightFunction& g, const Rhs& f, std::uint32_t N,
                              const FactorSieve* sieve = nullptr) {
  std::vector<double> a(N + 1, 0.0);
  const double g1 = gvlab::weights::eval_weight(g, Rational(1), sieve).dval;
  for (std::uint32_t n = 1; n <= N; ++n) {
    double s = 0;
    for (std::uint32_t k = 1; k < n; ++k)
      s += a[k] * gvlab::weights::eval_weight(g, Rational(k, n), sieve).dval;
    const double fn =
        gvlab::from_rational<double>(f.scale) * std::pow(double(n), f.exponent);
    a[n] = (fn - s) / g1;
  }
  return a;
}

double max_rel_gap(const std::vector<double>& x, const std::vector<double>& y,
                   std::uint32_t N) {
  double worst = 0, scale = 0;
  for (std::uint32_t n = 1; n <= N; ++n) scale = std::max(scale, std::fabs(y[n]));
  for (std::uint32_t n = 1; n <= N; ++n)
    worst = std::max(worst, std::fabs(x[n] - y[n]));
  return worst / std::max(scale, 1e-300);
}

double to_double(const BigFloat& x) { return x.convert_to<double>(); }

}  // namespace

TEST_CASE("solver agrees with plain forward substitution") {
  FactorSieve sieve(400);
  struct Case {
    WeightFunction g;
    std::uint32_t n;
  };
  const Case cases[] = {
      {WeightFunction::ingham(), 400},
      {WeightFunction::affine(Rational(1, 2), Rational(1, 2)), 400},
      {WeightFunction::power_scale(Rational(2)), 400},
      {WeightFunction::power_scale(Rational(3, 2)), 250},
      {WeightFunction::generalized_ingham(CoefficientSequence::character(4)), 300},
      {WeightFunction::generalized_ingham(CoefficientSequence::davenport_heilbronn()), 250},
      {WeightFunction::generalized_ingham(CoefficientSequence::moebius()), 250},
  };
  for (const auto& c : cases) {
    for (const double beta : {0.0, 0.25, 1.0}) {
      Problem prob{c.g, rhs_power(-beta), c.n};
      const auto sol = solve<double>(prob, &sieve);
      const auto ref = solve_ref(c.g, prob.f, c.n, &sieve);
      INFO(gvlab::weights::weight_id(c.g) << " beta=" << beta);
      REQUIRE(max_rel_gap(sol.a, ref, c.n) < 1e-11);
    }
  }
}

TEST_CASE("running sums accumulate the coefficients") {
  FactorSieve sieve(300);
  Problem prob{WeightFunction::ingham(), rhs_power(-0.5), 300};
  const auto sol = solve<double>(prob, &sieve);
  double acc = 0;
  for (std::uint32_t n = 1; n <= 300; ++n) {
    acc += sol.a[n];
    REQUIRE(sol.A[n] == Catch::Approx(acc).margin(1e-13));
  }
}

TEST_CASE("constant right-hand side and ingham weight give the unit sequence") {
  Problem prob{WeightFunction::ingham(), rhs_power(0.0), 200};
  const auto sol = solve<double>(prob);
  REQUIRE(sol.a[1] == 1.0);
  for (std::uint32_t n = 2; n <= 200; ++n) REQUIRE(sol.a[n] == 0.0);
}

TEST_CASE("solutions scale linearly with the right-hand side") {
  FactorSieve sieve(300);
  Problem one{WeightFunction::generalized_ingham(CoefficientSequence::character(4)),
              rhs_power(-0.5), 300};
  Problem three = one;
  three.f = rhs_power(-0.5, Rational(3));
  const auto s1 = solve<double>(one, &sieve);
  const auto s3 = solve<double>(three, &sieve);
  for (std::uint32_t n = 1; n <= 300; ++n)
    REQUIRE(s3.a[n] == Catch::Approx(3 * s1.a[n]).margin(1e-12));
}

TEST_CASE("closed forms match the solver") {
  FactorSieve sieve(400);
  const double betas[] = {0.0, 0.25, 0.5, 0.75, 1.0};

  SECTION("ingham weight against the moebius form") {
    for (const double beta : betas) {
      Problem prob{WeightFunction::ingham(), rhs_power(-beta), 400};
      const auto sol = solve<double>(prob, &sieve);
      const auto cf = moebius_closed_form<double>(beta, 400, sieve);
      INFO("beta=" << beta);
      REQUIRE(max_rel_gap(sol.a, cf, 400) < 1e-12);
    }
  }

  SECTION("character weight against the character form") {
    const auto chi = CoefficientSequence::character(4);
    for (const double beta : betas) {
      Problem prob{WeightFunction::generalized_ingham(chi), rhs_power(-beta), 400};
      const auto sol = solve<double>(prob, &sieve);
      const auto cf = character_closed_form<double>(chi, beta, 400, sieve);
      INFO("beta=" << beta);
      REQUIRE(max_rel_gap(sol.a, cf, 400) < 1e-12);
    }
  }

  SECTION("liouville weight against the general multiplicative form") {
    const auto lam = CoefficientSequence::liouville();
    for (const double beta : betas) {
      Problem prob{WeightFunction::generalized_ingham(lam), rhs_power(-beta), 300};
      const auto sol = solve<double>(prob, &sieve);
      const auto cf = multiplicative_closed_form<double>(lam, beta, 300, sieve);
      INFO("beta=" << beta);
      REQUIRE(max_rel_gap(sol.a, cf, 300) < 1e-12);
    }
  }

  SECTION("tau-normalized weight against the general multiplicative form") {
    const auto tau = CoefficientSequence::ramanujan_tau_normalized(400);
    Problem prob{WeightFunction::generalized_ingham(tau), rhs_power(-0.5), 200};
    const auto sol = solve<double>(prob, &sieve);
    const auto cf = multiplicative_closed_form<double>(tau, 0.5, 200, sieve);
    REQUIRE(max_rel_gap(sol.a, cf, 200) < 1e-8);
  }

  SECTION("rejected outside the supported exponent range") {
    REQUIRE_THROWS_AS(moebius_closed_form<double>(1.5, 50, sieve),
                      std::domain_error);
  }
}

TEST_CASE("high-precision solve reproduces the closed form to 1e-30") {
  FactorSieve sieve(150);
  Problem prob{WeightFunction::ingham(), rhs_power(-0.5), 150, 256};
  const auto sol = solve<BigFloat>(prob, &sieve);
  const auto cf = moebius_closed_form<BigFloat>(0.5, 150, sieve);
  double worst = 0, scale = 0;
  for (std::uint32_t n = 1; n <= 150; ++n) {
    scale = std::max(scale, std::fabs(to_double(cf[n])));
    worst = std::max(worst, std::fabs(to_double(sol.a[n] - cf[n])));
  }
  REQUIRE(worst / scale < 1e-30);
}

TEST_CASE("residual checker") {
  FactorSieve sieve(2000);

  SECTION("small residuals for every weight kind") {
    const WeightFunction gs[] = {
        WeightFunction::ingham(),
        WeightFunction::affine(Rational(1, 2), Rational(1, 2)),
        WeightFunction::power_scale(Rational(2)),
        WeightFunction::generalized_ingham(CoefficientSequence::character(4)),
        WeightFunction::generalized_ingham(CoefficientSequence::davenport_heilbronn()),
    };
    for (const auto& g : gs) {
      Problem prob{g, rhs_power(-0.5), 300};
      const auto sol = solve<double>(prob, &sieve);
      INFO(gvlab::weights::weight_id(g));
      REQUIRE(verify_residuals(prob, sol, &sieve) < 1e-12);
    }
  }

  SECTION("subsampled sweep stays small on a longer run") {
    Problem prob{WeightFunction::ingham(), rhs_power(-0.25), 2000};
    const auto sol = solve<double>(prob, &sieve);
    REQUIRE(verify_residuals(prob, sol, &sieve, ResidualSweep::Subsample) < 1e-11);
  }

  SECTION("a corrupted coefficient is detected") {
    Problem prob{WeightFunction::ingham(), rhs_power(-0.5), 100};
    auto sol = solve<double>(prob, &sieve);
    sol.a[40] += 1e-6;
    REQUIRE(verify_residuals(prob, sol, &sieve) > 1e-7);
  }
}

TEST_CASE("character coefficients at the record points, beta one") {
  FactorSieve sieve(400);
  const auto chi = CoefficientSequence::character(4);
  const auto cf = character_closed_form<double>(chi, 1.0, 400, sieve);
  Problem prob{WeightFunction::generalized_ingham(chi), rhs_power(-1.0), 400};
  const auto sol = solve<double>(prob, &sieve);
  // 5 and 65 = 5*13 head the family built from primes p with chi(p) = -1
  REQUIRE(std::fabs(5 * cf[5]) == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(std::fabs(65 * cf[65]) == Catch::Approx(4.0).epsilon(1e-12));
  REQUIRE(std::fabs(5 * sol.a[5]) == Catch::Approx(2.0).epsilon(1e-10));
  REQUIRE(std::fabs(65 * sol.a[65]) == Catch::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("summatory identity holds to twenty thousand") {
  FactorSieve sieve(20000);
  const auto rep = summatory_identity_check(20000, sieve);
  REQUIRE(rep.all_equal);
  REQUIRE(rep.checked == 20000);
  REQUIRE(rep.first_failure == 0);
}

TEST_CASE("exact affine series") {
  SECTION("second value is sqrt(2) plus a quarter") {
    const BigFloat a2 = affine_exact_formula<BigFloat>(2);
    const BigFloat expect = sqrt(BigFloat(2)) + BigFloat(1) / BigFloat(4);
    REQUIRE(std::fabs(to_double(a2 - expect)) < 1e-60);
  }

  SECTION("defined from two onward") {
    REQUIRE_THROWS_AS(affine_exact_formula<double>(1), std::invalid_argument);
  }

  SECTION("matches the solved running sums") {
    FactorSieve sieve(500);
    Problem prob{WeightFunction::affine(Rational(1, 2), Rational(1, 2)),
                 rhs_power(0.5), 500};
    const auto sol = solve<double>(prob, &sieve);
    const auto series = affine_exact_series<double>(500);
    for (std::uint32_t n = 2; n <= 500; ++n) {
      REQUIRE(sol.A[n] ==
              Catch::Approx(series[n]).epsilon(1e-10).margin(1e-10));
    }
  }

  SECTION("series and single-point formula agree") {
    const auto series = affine_exact_series<double>(50);
    for (std::uint32_t n : {2u, 3u, 10u, 50u})
      REQUIRE(affine_exact_formula<double>(n) == Catch::Approx(series[n]));
  }
}
