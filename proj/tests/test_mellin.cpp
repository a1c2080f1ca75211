#include <catch2/catch_amalgamated.hpp>

#include "gvlab/mellin.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

using gvlab::Rational;
using gvlab::mellin::Complex;
using gvlab::arith::CoefficientSequence;
using gvlab::arith::FactorSieve;
using gvlab::weights::WeightFunction;
using namespace gvlab::mellin;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Reference Hurwitz zeta: raw series with a midpoint-rule tail, no
// Euler-Maclaurin machinery shared with the implementation. Usable for
// Re s > 1.25 or so; the tail error is ~|s||s+1| N^{-Re s - 1}.
Complex hurwitz_ref(Complex s, double a) {
  const std::uint32_t N = 40000;
  Complex acc{};
  for (std::uint32_t n = N; n-- > 0;) acc += std::pow(Complex(n + a, 0.0), -s);
  // sum_{n >= N} (n+a)^{-s} ~ integral from N - 1/2 (midpoint rule)
  acc += std::pow(Complex(N + a - 0.5, 0.0), 1.0 - s) / (s - 1.0);
  return acc;
}

// Reference transform of an affine weight: numerical integration after the
// substitution t = u^m, with m picked so the integrand vanishes to second
// order at u = 0. Composite Simpson on the smooth substituted integrand.
Complex affine_transform_ref(double c0, double c1, Complex z) {
  const int m = std::max(2, static_cast<int>(std::ceil(3.0 / -z.real())));
  const int panels = 1 << 12;
  const double h = 1.0 / panels;
  auto integrand = [&](double u) -> Complex {
    if (u == 0.0) return Complex{};
    // integrand: m * (c0 + c1 u^m) * u^(-m z - 1)
    const double um = std::pow(u, m);
    return double(m) * (c0 + c1 * um) * std::pow(Complex(u, 0.0), -double(m) * z - 1.0);
  };
  Complex acc = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  return acc * (h / 3.0);
}

// Reference transform of the power-scale weight: term-by-term sum over the
// breakpoint intervals (lam^-i, lam^(1-i)], each integrated exactly, no
// geometric resummation.
Complex power_transform_ref(double lam, Complex z) {
  Complex acc{};
  const Complex e = 1.0 - z;
  for (int i = 1; i < 4000; ++i) {
    const double hi = std::pow(lam, 1.0 - i);
    const double lo = std::pow(lam, -double(i));
    const double v = std::pow(lam, double(i - 1));
    const Complex term =
        v * (std::pow(Complex(hi, 0.0), e) - std::pow(Complex(lo, 0.0), e)) / e;
    acc += term;
    if (std::abs(term) < 1e-18 * std::abs(acc)) break;
  }
  return acc;
}

// Ordinates of the first three critical-line zeta zeros, classical values.
constexpr double kZetaZero1 = 14.134725141734694;
constexpr double kZetaZero2 = 21.022039638771555;
constexpr double kZetaZero3 = 25.010857580145689;

// Independent location of the first zero: coarse grid scan of |zeta(1/2+it)|^2
// followed by one parabolic refinement of the vertex. Uses only the scalar
// zeta evaluator, none of the search machinery under test.
double first_zero_by_grid() {
  const double t0 = 14.0, t1 = 14.3, step = 1e-3;
  double best_t = t0, best_v = std::numeric_limits<double>::infinity();
  for (double t = t0; t <= t1; t += step) {
    const double v = std::norm(zeta_complex(Complex(0.5, t), 1e-12));
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double fm = std::norm(zeta_complex(Complex(0.5, best_t - step), 1e-12));
  const double fp = std::norm(zeta_complex(Complex(0.5, best_t + step), 1e-12));
  return best_t - 0.5 * step * (fp - fm) / (fp - 2.0 * best_v + fm);
}

const ZeroRecord* zero_near(const std::vector<ZeroRecord>& zs, Complex where,
                            double radius) {
  for (const ZeroRecord& r : zs)
    if (std::abs(r.location - where) < radius) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("zeta evaluator reproduces classical constants") {
  double err = 0;
  CHECK(std::abs(zeta_complex(Complex(2, 0), 1e-14, &err) -
                 Complex(kPi * kPi / 6.0, 0)) < 1e-13);
  CHECK(err < 1e-12);
  CHECK(std::abs(zeta_complex(Complex(4, 0), 1e-14) -
                 Complex(kPi * kPi * kPi * kPi / 90.0, 0)) < 1e-13);
  // analytic continuation across the strip and to the left
  CHECK(std::abs(zeta_complex(Complex(0, 0), 1e-14) - Complex(-0.5, 0)) < 1e-9);
  CHECK(std::abs(zeta_complex(Complex(-1, 0), 1e-14) -
                 Complex(-1.0 / 12.0, 0)) < 1e-9);
  CHECK(std::abs(zeta_complex(Complex(-3, 0), 1e-14) -
                 Complex(1.0 / 120.0, 0)) < 1e-9);
}

TEST_CASE("hurwitz zeta agrees with the raw series") {
  // hurwitz_zeta(s, 1/2) = (2^s - 1) zeta(s); at s = 2 this is pi^2/2
  CHECK(std::abs(hurwitz_zeta(Complex(2, 0), 0.5, 1e-14) -
                 Complex(kPi * kPi / 2.0, 0)) < 1e-12);

  const Complex pts[] = {{2.5, 0.0}, {1.75, 3.0}, {3.0, -7.5}, {2.0, 40.0}};
  const double as[] = {1.0, 0.5, 0.25, 0.75};
  for (const Complex& s : pts)
    for (const double a : as) {
      const Complex got = hurwitz_zeta(s, a, 1e-13);
      const Complex ref = hurwitz_ref(s, a);
      CHECK(std::abs(got - ref) < 5e-9 * (1.0 + std::abs(ref)));
    }

  // tightening the tolerance must not move the value beyond the claimed errors
  double e_loose = 0, e_tight = 0;
  const Complex v_loose = hurwitz_zeta(Complex(0.5, 14.0), 0.5, 1e-8, &e_loose);
  const Complex v_tight = hurwitz_zeta(Complex(0.5, 14.0), 0.5, 1e-14, &e_tight);
  CHECK(std::abs(v_loose - v_tight) <= e_loose + e_tight);

  CHECK_THROWS_AS(hurwitz_zeta(Complex(2, 0), 0.0), std::domain_error);
  CHECK_THROWS_AS(hurwitz_zeta(Complex(2, 0), 1.5), std::domain_error);
  CHECK_THROWS_AS(hurwitz_zeta(Complex(1, 0), 1.0), std::domain_error);
  CHECK_THROWS_AS(hurwitz_zeta(Complex(2, 250), 1.0), std::domain_error);
}

TEST_CASE("affine transform closed form") {
  const MellinFunction m = MellinFunction::affine_closed_form(Rational(1, 2), Rational(1, 2));

  // g = (1+x)/2 at z = -1/2: 1/3 + 1 = 4/3
  const MellinValue at_half = eval_mellin(m, Complex(-0.5, 0));
  CHECK(std::abs(at_half.value - Complex(4.0 / 3.0, 0)) < 1e-14);
  CHECK(at_half.rigorous);

  // against direct numerical integration, including off the real axis
  const Complex zs[] = {{-0.5, 0.0}, {-1.5, 0.0}, {-2.25, 0.0}, {-0.75, 1.25}};
  for (const Complex& z : zs) {
    const Complex ref = affine_transform_ref(0.5, 0.5, z);
    CHECK(std::abs(eval_mellin(m, z).value - ref) < 1e-10 * (1.0 + std::abs(ref)));
  }

  const MellinFunction lop = MellinFunction::affine_closed_form(Rational(1, 3), Rational(2, 3));
  for (const Complex& z : zs) {
    const Complex ref = affine_transform_ref(1.0 / 3.0, 2.0 / 3.0, z);
    CHECK(std::abs(eval_mellin(lop, z).value - ref) < 1e-10 * (1.0 + std::abs(ref)));
  }

  // of_weight routes an affine weight here
  const WeightFunction g = WeightFunction::affine(Rational(1, 2), Rational(1, 2));
  CHECK(MellinFunction::of_weight(g).kind() == MellinFunction::Kind::AffineClosedForm);
}

TEST_CASE("power-scale transform matches its breakpoint series") {
  const double lams[] = {1.5, 2.0, 3.0};
  const Complex zs[] = {{-0.5, 0.0}, {-1.0, 0.75}, {-2.5, -3.0}};
  for (const double lam : lams) {
    const WeightFunction g =
        WeightFunction::power_scale(Rational(int(lam * 2), 2));
    const MellinFunction m = MellinFunction::of_weight(g);
    REQUIRE(m.kind() == MellinFunction::Kind::NumericalIntegral);
    for (const Complex& z : zs) {
      const Complex ref = power_transform_ref(lam, z);
      const MellinValue got = eval_mellin(m, z);
      CHECK(std::abs(got.value - ref) < 1e-12 * (1.0 + std::abs(ref)));
    }
  }
}

TEST_CASE("factorized transform evaluates through the coefficient series") {
  FactorSieve sieve(20000);

  // unit sequence: zeta(1-z)/(1-z); at z = -1 this is zeta(2)/2
  const MellinFunction phi = MellinFunction::bhf_factorized(CoefficientSequence::unit());
  CHECK(std::abs(eval_mellin(phi, Complex(-1, 0)).value -
                 Complex(kPi * kPi / 12.0, 0)) < 1e-12);

  // moebius collapses to 1/(1-z), liouville to zeta(2(1-z))/(1-z)
  const MellinFunction mu = MellinFunction::bhf_factorized(CoefficientSequence::moebius());
  CHECK(std::abs(eval_mellin(mu, Complex(-1, 0)).value - Complex(0.5, 0)) < 1e-14);
  const MellinFunction lam = MellinFunction::bhf_factorized(CoefficientSequence::liouville());
  CHECK(std::abs(eval_mellin(lam, Complex(-1, 0)).value -
                 Complex(kPi * kPi * kPi * kPi / 180.0, 0)) < 1e-12);

  // character mod 4 at z = -1: zeta(2) * Catalan / 2
  constexpr double kCatalan = 0.915965594177219015054603514932;
  const MellinFunction chi =
      MellinFunction::bhf_factorized(CoefficientSequence::character(4));
  const MellinValue got = eval_mellin(chi, Complex(-1, 0), 1e-12, &sieve);
  CHECK(std::abs(got.value - Complex(kPi * kPi / 6.0 * kCatalan / 2.0, 0)) < 1e-10);

  // of_weight sends ingham and generalized-ingham weights to this route
  CHECK(MellinFunction::of_weight(WeightFunction::ingham()).kind() ==
        MellinFunction::Kind::BHFFactorized);
  const WeightFunction gchi =
      WeightFunction::generalized_ingham(CoefficientSequence::character(4));
  CHECK(MellinFunction::of_weight(gchi).kind() == MellinFunction::Kind::BHFFactorized);
}

TEST_CASE("transform values respect conjugate symmetry") {
  FactorSieve sieve(20000);
  const MellinFunction fns[] = {
      MellinFunction::affine_closed_form(Rational(1, 3), Rational(2, 3)),
      MellinFunction::bhf_factorized(CoefficientSequence::unit()),
      MellinFunction::bhf_factorized(CoefficientSequence::character(4)),
      MellinFunction::of_weight(WeightFunction::power_scale(Rational(2))),
  };
  const Complex zs[] = {{-0.5, 2.0}, {-1.25, 11.0}, {0.3, 17.0}};
  for (const MellinFunction& m : fns)
    for (const Complex& z : zs) {
      if (m.kind() == MellinFunction::Kind::NumericalIntegral && z.real() >= 0) continue;
      const MellinValue a = eval_mellin(m, z, 1e-10, &sieve);
      const MellinValue b = eval_mellin(m, std::conj(z), 1e-10, &sieve);
      CHECK(std::abs(b.value - std::conj(a.value)) <=
            10.0 * (a.abs_error + b.abs_error) + 1e-12);
    }
}

TEST_CASE("direct integral agrees with the factorized form") {
  FactorSieve sieve(20000);
  const CoefficientSequence seqs[] = {
      CoefficientSequence::unit(),
      CoefficientSequence::character(4),
      CoefficientSequence::davenport_heilbronn(),
  };
  const Complex zs[] = {{-0.5, 0.0}, {-1.0, 0.0}, {-2.0, 0.0}};
  for (const CoefficientSequence& u : seqs)
    for (const Complex& z : zs) {
      const ConsistencyReport rep = lemma_factorization_check(u, z, 1e-6, &sieve);
      CHECK(rep.diff < 1e-6);
      CHECK(rep.breakpoints > 0);
    }

  // the check is only defined left of the poles
  CHECK_THROWS_AS(lemma_factorization_check(CoefficientSequence::unit(), Complex(0.5, 0)),
                  std::domain_error);

  // scaling limits carried by the integral: sum u(j)/j
  const IntegralResult unit_int =
      gingham_integral(CoefficientSequence::unit(), Complex(-1, 0), 1e-8, &sieve);
  CHECK(unit_int.scaling_limit == 1.0);
  const IntegralResult chi_int =
      gingham_integral(CoefficientSequence::character(4), Complex(-1, 0), 1e-8, &sieve);
  CHECK(std::abs(chi_int.scaling_limit - kPi / 4.0) < 1e-9);
  const double xi = gvlab::arith::davenport_heilbronn_xi<double>();
  const double dh_limit =
      kPi / 5.0 * (1.0 / std::tan(kPi / 5.0) + xi / std::tan(2.0 * kPi / 5.0));
  const IntegralResult dh_int = gingham_integral(CoefficientSequence::davenport_heilbronn(),
                                                 Complex(-1, 0), 1e-8, &sieve);
  CHECK(std::abs(dh_int.scaling_limit - dh_limit) < 1e-9);

  // sequences without a finite scaling limit are refused
  CHECK_THROWS_AS(gingham_integral(CoefficientSequence::moebius(), Complex(-1, 0), 1e-8, &sieve),
                  std::invalid_argument);
}

TEST_CASE("pole registry guards evaluation") {
  const MellinFunction aff = MellinFunction::affine_closed_form(Rational(1, 2), Rational(1, 2));
  const PoleSet ps = poles_of(aff);
  REQUIRE(ps.points.size() == 2);
  CHECK(ps.complete);
  CHECK_THROWS_AS(eval_mellin(aff, Complex(0, 0)), std::domain_error);
  CHECK_THROWS_AS(eval_mellin(aff, Complex(1.0 + 1e-8, 0)), std::domain_error);

  // pure-slope affine weight has no pole at 0
  const PoleSet slope_only = poles_of(MellinFunction::affine_closed_form(Rational(0), Rational(1)));
  REQUIRE(slope_only.points.size() == 1);
  CHECK(slope_only.points[0] == Complex(1, 0));

  // the direct integral only exists left of 0
  const MellinFunction num = MellinFunction::of_weight(WeightFunction::power_scale(Rational(2)));
  CHECK_THROWS_AS(eval_mellin(num, Complex(0.25, 5.0)), std::domain_error);

  // a weight with no catalog below its last breakpoint cannot be integrated to 0
  const MellinFunction part = MellinFunction::numerical_integral(
      WeightFunction::explicit_bhf({Rational(1), Rational(1, 2)}, {Rational(1), Rational(2)}));
  CHECK_THROWS_AS(eval_mellin(part, Complex(-1, 0)), std::domain_error);
}

TEST_CASE("zero search certifies the affine zero") {
  // c1/(1-z) = c0/z vanishes at z = c0/(c0+c1)
  struct Case {
    Rational c0, c1;
    double zero;
  };
  const Case cases[] = {
      {Rational(1, 2), Rational(1, 2), 0.5},
      {Rational(1, 3), Rational(2, 3), 1.0 / 3.0},
  };
  for (const Case& c : cases) {
    const MellinFunction m = MellinFunction::affine_closed_form(c.c0, c.c1);
    const ZeroSearchReport rep = find_zeros(m, {0.05, 0.95, -0.5, 0.5});
    REQUIRE(rep.zeros.size() == 1);
    CHECK(rep.boundary_winding == 1);
    const ZeroRecord& r = rep.zeros[0];
    CHECK(r.certified);
    CHECK(r.winding == 1);
    CHECK(r.factor == "weight");
    CHECK(std::abs(r.location - Complex(c.zero, 0)) < 1e-8);
    CHECK(r.residual < 1e-9);
  }

  CHECK_THROWS_AS(find_zeros(MellinFunction::affine_closed_form(Rational(1), Rational(1)),
                             {0.2, 0.2, 0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("zero search finds the first three critical-line zeros") {
  const MellinFunction phi = MellinFunction::bhf_factorized(CoefficientSequence::unit());
  const ZeroSearchReport rep = find_zeros(phi, {0.0, 1.0, 0.0, 30.0});

  REQUIRE(rep.zeros.size() == 3);
  CHECK(rep.boundary_winding == 3);
  const double ordinates[] = {kZetaZero1, kZetaZero2, kZetaZero3};
  for (int i = 0; i < 3; ++i) {
    const ZeroRecord& r = rep.zeros[i];
    CHECK(r.certified);
    CHECK(r.factor == "zeta");
    CHECK(std::abs(r.location.real() - 0.5) < 1e-6);
    CHECK(std::abs(r.location.imag() - ordinates[i]) < 1e-6);
    CHECK(r.residual < 1e-6);
  }

  // the grid oracle pins the first ordinate without the search machinery
  CHECK(std::abs(first_zero_by_grid() - kZetaZero1) < 5e-4);
  CHECK(std::abs(rep.zeros[0].location.imag() - first_zero_by_grid()) < 5e-4);

  // a strip below the first ordinate is empty and the contour knows it
  const ZeroSearchReport empty = find_zeros(phi, {0.0, 1.0, 2.0, 10.0});
  CHECK(empty.boundary_winding == 0);
  CHECK(empty.zeros.empty());
}

TEST_CASE("zero locations are stable across seed boxes") {
  const MellinFunction phi = MellinFunction::bhf_factorized(CoefficientSequence::unit());
  const ZeroSearchReport a = find_zeros(phi, {0.0, 1.0, 13.5, 14.7});
  const ZeroSearchReport b = find_zeros(phi, {0.05, 0.95, 14.0, 14.3});
  REQUIRE(a.zeros.size() == 1);
  REQUIRE(b.zeros.size() == 1);
  CHECK(std::abs(a.zeros[0].location - b.zeros[0].location) < 1e-8);
}

TEST_CASE("five-periodic mirror weight has certified off-line zeros") {
  FactorSieve sieve(20000);
  const MellinFunction m =
      MellinFunction::bhf_factorized(CoefficientSequence::davenport_heilbronn());
  const ZeroSearchReport rep = find_zeros(m, {0.0, 1.0, 80.0, 90.0}, {}, &sieve);

  const Complex off{0.1914828176, 85.6993484854};
  const ZeroRecord* low = zero_near(rep.zeros, off, 1e-6);
  const ZeroRecord* high = zero_near(rep.zeros, Complex(1.0 - off.real(), off.imag()), 1e-6);
  REQUIRE(low != nullptr);
  REQUIRE(high != nullptr);
  CHECK(low->certified);
  CHECK(high->certified);
  // mirror pair: real parts sum to 1
  CHECK(std::abs(low->location.real() + high->location.real() - 1.0) < 1e-6);
  CHECK(std::abs(low->location.imag() - high->location.imag()) < 1e-6);

  const IndexReport idx = analytic_index(m, {0.0, 1.0, 80.0, 90.0}, {}, &sieve);
  REQUIRE(!idx.empty);
  CHECK(std::abs(idx.eta - 0.1914828176) < 1e-6);
}
