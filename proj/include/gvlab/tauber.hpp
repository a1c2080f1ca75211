#pragma once

// Growth analysis over solved sequences. Limits and limsups are replaced by
// finite-window proxies with declared windows: "final half" for the scaled
// running-max criterion, "final decade" (n_hi/n_lo = 10) for trend fits.
// Verdicts are three-valued and never claim more than the window shows.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "gvlab/mellin.hpp"
#include "gvlab/volterra.hpp"

namespace gvlab::tauber {

using arith::FactorSieve;
using mellin::Complex;
using mellin::MellinFunction;
using volterra::Problem;
using volterra::Solution;

namespace detail {

template <class T>
inline double as_double(const T& x) {
  if constexpr (std::is_same_v<T, double>)
    return x;
  else
    return x.template convert_to<double>();
}

// |a(n)| * n^p for n = 1..N; returned vector is 1-based like Solution::a
template <class T>
inline std::vector<double> scaled_abs(const std::vector<T>& a, double p) {
  std::vector<double> s(a.size(), 0.0);
  for (std::size_t n = 1; n < a.size(); ++n)
    s[n] = std::fabs(as_double(a[n])) * std::pow(static_cast<double>(n), p);
  return s;
}

struct RecordTrack {
  std::vector<double> running_max;  // 1-based, running_max[0] = 0
  std::uint32_t last_record_at = 1;
};

// a record must clear the standing max by a relative margin, so plateaus
// revisited within float noise do not mint new record positions
inline RecordTrack records_of(const std::vector<double>& s) {
  RecordTrack t;
  t.running_max.assign(s.size(), 0.0);
  double m = 0;
  for (std::size_t n = 1; n < s.size(); ++n) {
    if (s[n] > m * (1 + 1e-9)) {
      m = s[n];
      t.last_record_at = static_cast<std::uint32_t>(n);
    }
    t.running_max[n] = m;
  }
  return t;
}

inline std::uint32_t decade_start(std::uint32_t n_hi) {
  return std::max<std::uint32_t>(2, static_cast<std::uint32_t>(std::ceil(n_hi / 10.0)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// scaled-growth criterion
// ---------------------------------------------------------------------------

enum class HLRVerdict { Consistent, Inconsistent, Inconclusive };

struct EpsilonTrack {
  double epsilon = 0;
  std::vector<double> running_max;  // of |a(n)| * n^{1-eps}, 1-based
  std::uint32_t last_record_at = 1;
};

struct HLRReport {
  double beta = 0;
  std::uint32_t horizon = 0;
  std::vector<EpsilonTrack> tracks;
  HLRVerdict verdict = HLRVerdict::Inconclusive;
  std::uint32_t witness = 0;  // latest record inside the final half, when inconsistent
  // sup of |n * a(n)| rides along: for harmonic-type weights it is the
  // stronger boundedness statement, and its argmax locates the witness
  // scale even when every epsilon track stays quiet
  double scaled_sup = 0;
  std::uint32_t scaled_sup_at = 1;
};

// Consistent means: for every epsilon in the grid, the running max of
// |a(n)| * n^{1-eps} gained no new record in the final half of the range.
// Horizons below 10^3 are too short to split and come back inconclusive.
template <class T>
HLRReport hlr_test(const Problem& prob, const Solution<T>& sol,
                   const std::vector<double>& epsilon_grid) {
  if (epsilon_grid.empty()) throw std::invalid_argument("epsilon grid is empty");
  for (double e : epsilon_grid)
    if (!(e > 0.0 && e <= 0.5))
      throw std::invalid_argument("epsilon grid entries must lie in ]0, 1/2]");
  if (sol.a.size() < 2) throw std::invalid_argument("empty solution");

  HLRReport rep;
  rep.beta = -prob.f.exponent;
  rep.horizon = static_cast<std::uint32_t>(sol.a.size() - 1);

  {
    // same relative slack as the record tracker: on exact plateaus (|n a(n)|
    // constant along a subsequence) float noise must not relocate the argmax
    const auto s = detail::scaled_abs(sol.a, 1.0);
    for (std::size_t n = 1; n < s.size(); ++n)
      if (s[n] > rep.scaled_sup * (1 + 1e-9)) {
        rep.scaled_sup = s[n];
        rep.scaled_sup_at = static_cast<std::uint32_t>(n);
      }
  }

  for (double eps : epsilon_grid) {
    const auto s = detail::scaled_abs(sol.a, 1.0 - eps);
    auto rt = detail::records_of(s);
    EpsilonTrack track;
    track.epsilon = eps;
    track.running_max = std::move(rt.running_max);
    track.last_record_at = rt.last_record_at;
    rep.tracks.push_back(std::move(track));
  }

  if (rep.horizon < 1000) {
    rep.verdict = HLRVerdict::Inconclusive;
    return rep;
  }
  const std::uint32_t half = rep.horizon / 2;
  std::uint32_t worst = 0;
  for (const auto& t : rep.tracks)
    if (t.last_record_at > half) worst = std::max(worst, t.last_record_at);
  rep.witness = worst;
  rep.verdict = worst ? HLRVerdict::Inconsistent : HLRVerdict::Consistent;
  return rep;
}

// ---------------------------------------------------------------------------
// trend fits on the summatory function
// ---------------------------------------------------------------------------

enum class FitModel { PowerLaw, PowerLawLog };

struct AsymptoticFit {
  FitModel model = FitModel::PowerLaw;
  double exponent = 0;  // beta for C*n^-beta, alpha for C*n^-alpha*log n
  double fitted_c = 0;
  double predicted_c = std::numeric_limits<double>::quiet_NaN();
  std::uint32_t n_lo = 0, n_hi = 0;
  double residual_rms = 0;  // of A(n)*n^e (/log n) about the fitted constant
};

// Constant least-squares fit of A(n) * n^exponent (divided by log n for the
// log-corrected model) over the final decade. The predicted constant comes
// from the weight's transform: -1 / (exponent * g*(exponent)) for the pure
// power law, 1 - exponent for the log-corrected row. A prediction landing on
// a transform pole or zero rejects the fit rather than reporting garbage.
//
// When the remainder term of the asymptotic is known, pass its relative
// exponent as `correction` and a nuisance regressor rides along: n^correction
// for the power model, (log n)^correction for the log model. fitted_c is
// still the constant; without the nuisance term a remainder decaying slower
// than the decade is wide biases the constant by its decade average.
template <class T>
AsymptoticFit fit_asymptotic(const Problem& prob, const Solution<T>& sol, FitModel model,
                             double exponent, const FactorSieve& sieve,
                             std::optional<double> correction = std::nullopt) {
  const std::uint32_t n_hi = static_cast<std::uint32_t>(sol.A.size()) - 1;
  if (n_hi < 10000)
    throw std::invalid_argument("horizon below 10^4 gives unstable trend fits");

  AsymptoticFit fit;
  fit.model = model;
  fit.exponent = exponent;
  fit.n_hi = n_hi;
  fit.n_lo = detail::decade_start(n_hi);
  const double count = static_cast<double>(n_hi - fit.n_lo + 1);

  auto y_of = [&](std::uint32_t n) {
    double y = detail::as_double(sol.A[n]) * std::pow(static_cast<double>(n), exponent);
    if (model == FitModel::PowerLawLog) y /= std::log(static_cast<double>(n));
    return y;
  };
  auto x_of = [&](std::uint32_t n) {
    if (!correction) return 0.0;
    const double nd = static_cast<double>(n);
    return model == FitModel::PowerLawLog ? std::pow(std::log(nd), *correction)
                                          : std::pow(nd, *correction);
  };

  double nuisance = 0;
  if (!correction) {
    StableSum<double> acc;
    for (std::uint32_t n = fit.n_lo; n <= n_hi; ++n) acc.add(y_of(n));
    fit.fitted_c = acc.value() / count;
  } else {
    long double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::uint32_t n = fit.n_lo; n <= n_hi; ++n) {
      const double x = x_of(n), y = y_of(n);
      s11 += 1;
      s12 += x;
      s22 += static_cast<long double>(x) * x;
      b1 += y;
      b2 += static_cast<long double>(x) * y;
    }
    const long double det = s11 * s22 - s12 * s12;
    if (!(std::fabs(static_cast<double>(det)) > 0))
      throw std::domain_error("correction regressor is degenerate on this range");
    fit.fitted_c = static_cast<double>((b1 * s22 - b2 * s12) / det);
    nuisance = static_cast<double>((s11 * b2 - s12 * b1) / det);
  }

  StableSum<double> sq;
  for (std::uint32_t n = fit.n_lo; n <= n_hi; ++n) {
    const double r = y_of(n) - fit.fitted_c - nuisance * x_of(n);
    sq.add(r * r);
  }
  fit.residual_rms = std::sqrt(sq.value() / count);

  if (model == FitModel::PowerLawLog) {
    fit.predicted_c = 1.0 - exponent;
    return fit;
  }
  if (exponent == 0.0)
    throw std::domain_error("predicted constant is undefined at exponent 0; fit rejected");
  mellin::MellinValue mv;
  try {
    const auto mf = MellinFunction::of_weight(prob.g);
    mv = mellin::eval_mellin(mf, Complex(exponent, 0.0), 1e-10, &sieve);
  } catch (const std::exception& e) {
    throw std::domain_error(std::string("predicted constant sits on a transform pole: ") +
                            e.what());
  }
  const double g_star = mv.value.real();
  if (std::fabs(g_star) < 1e-12)
    throw std::domain_error("transform vanishes at the fit exponent; predicted constant "
                            "is degenerate and the fit is rejected");
  fit.predicted_c = -1.0 / (exponent * g_star);
  return fit;
}

// Next-order refinement once the leading term is known: fits
//   A(n) - lead_c * n^p  ~=  c_log * n^{p-1} log n + c_plain * n^{p-1}
// over the final decade by 2x2 normal equations.
struct CorrectionFit {
  double c_log = 0;
  double c_plain = 0;
  double rms = 0;
  std::uint32_t n_lo = 0, n_hi = 0;
};

template <class T>
CorrectionFit residual_correction_fit(const Solution<T>& sol, double lead_c, double lead_p) {
  const std::uint32_t n_hi = static_cast<std::uint32_t>(sol.A.size()) - 1;
  if (n_hi < 10000)
    throw std::invalid_argument("horizon below 10^4 gives unstable trend fits");

  CorrectionFit fit;
  fit.n_hi = n_hi;
  fit.n_lo = detail::decade_start(n_hi);

  long double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (std::uint32_t n = fit.n_lo; n <= n_hi; ++n) {
    const double nd = static_cast<double>(n);
    const double x2 = std::pow(nd, lead_p - 1.0);
    const double x1 = x2 * std::log(nd);
    const double y = detail::as_double(sol.A[n]) - lead_c * std::pow(nd, lead_p);
    s11 += static_cast<long double>(x1) * x1;
    s12 += static_cast<long double>(x1) * x2;
    s22 += static_cast<long double>(x2) * x2;
    b1 += static_cast<long double>(x1) * y;
    b2 += static_cast<long double>(x2) * y;
  }
  const long double det = s11 * s22 - s12 * s12;
  if (!(std::fabs(static_cast<double>(det)) > 0))
    throw std::domain_error("correction regressors are degenerate on this range");
  fit.c_log = static_cast<double>((b1 * s22 - b2 * s12) / det);
  fit.c_plain = static_cast<double>((s11 * b2 - s12 * b1) / det);

  StableSum<double> sq;
  for (std::uint32_t n = fit.n_lo; n <= n_hi; ++n) {
    const double nd = static_cast<double>(n);
    const double x2 = std::pow(nd, lead_p - 1.0);
    const double x1 = x2 * std::log(nd);
    const double y = detail::as_double(sol.A[n]) - lead_c * std::pow(nd, lead_p);
    const double r = y - fit.c_log * x1 - fit.c_plain * x2;
    sq.add(r * r);
  }
  fit.rms = std::sqrt(sq.value() / static_cast<double>(n_hi - fit.n_lo + 1));
  return fit;
}

// ---------------------------------------------------------------------------
// slowly-varying bound diagnostic
// ---------------------------------------------------------------------------

enum class VariationVerdict { BoundedByLog, MaxConstant, MaxDecaying, GrowthBeyondLog };

struct SlowVariationReport {
  double exponent = 0;
  std::uint32_t horizon = 0;
  std::uint32_t trim = 2;           // record tracking starts here; earlier rows are transient
  std::vector<double> scaled;       // n^exponent * a(n), signed, 1-based; plot payload
  std::vector<double> running_max;  // of |scaled| from trim on; zero before
  double bound_c0 = 0, bound_c1 = 0;  // running_max ~= c0 + c1 * log n on the decade
  double ratio_band = 0;  // r_max/r_min - 1 over the decade, r(n) = running_max(n)/log n
  std::uint32_t last_record_at = 1;
  VariationVerdict verdict = VariationVerdict::MaxConstant;
};

// BoundedByLog requires both halves of the evidence: new records keep landing
// in the final decade (the bound is still active), and runmax/log n stays in
// a +-10% band there (the bound is no stronger than log). The band is taken
// about the decade's center because r(n) sawtooths between records; demanding
// closeness to the endpoint alone would reject genuinely log-paced records.
// A quiet decade means the max already saturated; it then either towers over
// the late values (MaxDecaying) or stays in play (MaxConstant).
//
// Records start at horizon/1000, not at 1: the first rows of a solution are
// dominated by the g(1)-scaled initial transient, and a single early spike
// would freeze the running max across every later regime of interest. The
// trim mirrors the final-decade convention of the trend fits.
template <class T>
SlowVariationReport slowly_varying_diagnostic(const Solution<T>& sol, double exponent) {
  const std::uint32_t n_hi = static_cast<std::uint32_t>(sol.a.size()) - 1;
  if (n_hi < 10000)
    throw std::invalid_argument("horizon below 10^4 gives unstable growth verdicts");
  constexpr double kBandTol = 0.10;

  SlowVariationReport rep;
  rep.exponent = exponent;
  rep.horizon = n_hi;
  rep.trim = std::max<std::uint32_t>(2, n_hi / 1000);
  rep.scaled.assign(sol.a.size(), 0.0);
  for (std::size_t n = 1; n < sol.a.size(); ++n)
    rep.scaled[n] =
        detail::as_double(sol.a[n]) * std::pow(static_cast<double>(n), exponent);

  rep.running_max.assign(rep.scaled.size(), 0.0);
  rep.last_record_at = rep.trim;
  {
    double m = 0;
    for (std::uint32_t n = rep.trim; n <= n_hi; ++n) {
      const double v = std::fabs(rep.scaled[n]);
      if (v > m * (1 + 1e-9)) {
        m = v;
        rep.last_record_at = n;
      }
      rep.running_max[n] = m;
    }
  }

  const std::uint32_t n_lo = detail::decade_start(n_hi);

  {
    long double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::uint32_t n = n_lo; n <= n_hi; ++n) {
      const double x = std::log(static_cast<double>(n));
      const double y = rep.running_max[n];
      s11 += static_cast<long double>(x) * x;
      s12 += x;
      s22 += 1;
      b1 += static_cast<long double>(x) * y;
      b2 += y;
    }
    const long double det = s11 * s22 - s12 * s12;
    rep.bound_c1 = static_cast<double>((b1 * s22 - b2 * s12) / det);
    rep.bound_c0 = static_cast<double>((s11 * b2 - s12 * b1) / det);
  }

  double r_min = std::numeric_limits<double>::infinity(), r_max = 0;
  for (std::uint32_t n = n_lo; n <= n_hi; ++n) {
    const double r = rep.running_max[n] / std::log(static_cast<double>(n));
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  rep.ratio_band = r_min > 0 ? r_max / r_min - 1 : std::numeric_limits<double>::infinity();

  // late records only count when the max actually moved: a plateau crept over
  // by fractions of a percent keeps producing formal records without being
  // growth in any useful sense
  const bool material = rep.running_max[n_hi] > rep.running_max[n_lo] * 1.02;
  if (rep.last_record_at >= n_lo && material) {
    const double band_cap = (1 + kBandTol) / (1 - kBandTol) - 1;
    rep.verdict = rep.ratio_band <= band_cap ? VariationVerdict::BoundedByLog
                                             : VariationVerdict::GrowthBeyondLog;
    return rep;
  }
  // geometric midpoint splits the decade into equal log-halves
  const std::uint32_t n_mid =
      static_cast<std::uint32_t>(static_cast<double>(n_hi) / std::sqrt(10.0));
  double late = 0;
  for (std::uint32_t n = n_mid + 1; n <= n_hi; ++n)
    late = std::max(late, std::fabs(rep.scaled[n]));
  rep.verdict = late <= 0.5 * rep.running_max[n_hi] ? VariationVerdict::MaxDecaying
                                                    : VariationVerdict::MaxConstant;
  return rep;
}

// ---------------------------------------------------------------------------
// two-sided growth probe around the half-line scale
// ---------------------------------------------------------------------------

// Both sides use the same record proxy: above the half-line scale, growth
// means a fresh running-max record inside the final decade; below it, decay
// means the records stopped before the decade began. A tail rising toward a
// standing early max is below the probe's resolution either way.
struct GrowthCheck {
  double epsilon = 0;
  bool decays_below = false;  // n^{1/2-eps}|a(n)|: no record in the final decade
  bool grows_above = false;   // n^{1/2+eps}|a(n)|: a record lands in the decade
  std::uint32_t record_below_at = 1;
  std::uint32_t record_above_at = 1;
};

struct AntiHLRProbe {
  std::array<GrowthCheck, 2> checks{};  // eps = 0.05 and 0.1
  bool decay_all = false;
  bool growth_all = false;
};

template <class T>
AntiHLRProbe anti_hlr_probe(const Solution<T>& sol) {
  const std::uint32_t n_hi = static_cast<std::uint32_t>(sol.a.size()) - 1;
  if (n_hi < 10000)
    throw std::invalid_argument("horizon below 10^4 gives unstable growth verdicts");
  const std::uint32_t n_lo = detail::decade_start(n_hi);

  AntiHLRProbe probe;
  const double eps_grid[2] = {0.05, 0.1};
  for (int i = 0; i < 2; ++i) {
    GrowthCheck chk;
    chk.epsilon = eps_grid[i];

    const auto rb = detail::records_of(detail::scaled_abs(sol.a, 0.5 - chk.epsilon));
    chk.record_below_at = rb.last_record_at;
    chk.decays_below = rb.last_record_at < n_lo;

    const auto ra = detail::records_of(detail::scaled_abs(sol.a, 0.5 + chk.epsilon));
    chk.record_above_at = ra.last_record_at;
    chk.grows_above = ra.last_record_at >= n_lo;

    probe.checks[i] = chk;
  }
  probe.decay_all = probe.checks[0].decays_below && probe.checks[1].decays_below;
  probe.growth_all = probe.checks[0].grows_above && probe.checks[1].grows_above;
  return probe;
}

}  // namespace gvlab::tauber
