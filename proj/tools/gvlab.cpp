// Command-line front end: solve runs one Volterra problem and serializes the
// solution, mellin evaluates or scans the weight transform, reproduce drives
// the named pipelines with their acceptance thresholds baked in, sequence
// dumps a coefficient sequence. Exit code 0 means every embedded check on the
// requested run passed.

#include "gvlab/io.hpp"
#include "gvlab/svg.hpp"
#include "gvlab/tauber.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using gvlab::Rational;
using gvlab::arith::CoefficientSequence;
using gvlab::arith::FactorSieve;
using gvlab::mellin::MellinFunction;
using gvlab::weights::WeightFunction;
using gvlab::volterra::Problem;
using gvlab::volterra::Solution;
using gvlab::volterra::rhs_power;
using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  const auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double>(dt).count();
}

struct CommonOpts {
  std::string weight = "ingham";
  std::string sequence;
  double beta = 0.0;
  std::string rhs;
  std::uint32_t n = 0;  // 0 = not given; required where it matters
  unsigned precision_bits = 53;
  std::vector<double> epsilon;
  std::string box;
  double tol = 1e-8;
  std::string out = ".";
  std::uint64_t seed = 0;
};

json config_json(const std::string& sub, const CommonOpts& o) {
  json c{{"subcommand", sub}, {"weight", o.weight},   {"beta", o.beta},
         {"n", o.n},          {"precision_bits", o.precision_bits},
         {"tol", o.tol},      {"out", o.out},         {"seed", o.seed}};
  if (!o.sequence.empty()) c["sequence"] = o.sequence;
  if (!o.rhs.empty()) c["rhs"] = o.rhs;
  if (!o.epsilon.empty()) c["epsilon"] = o.epsilon;
  if (!o.box.empty()) c["box"] = o.box;
  return c;
}

// weight id, with a bare "gingham" picking up --sequence
WeightFunction resolve_weight(const CommonOpts& o) {
  std::string id = o.weight;
  if (id == "gingham") {
    if (o.sequence.empty())
      throw CLI::ValidationError("--weight gingham needs --sequence or gingham:<sequence-id>");
    id += ":" + o.sequence;
  }
  return gvlab::weights::parse_weight_id(id, std::max<std::uint32_t>(o.n, 5000));
}

// rhs n^e, given either as --rhs n^e or as --beta with e = -beta
gvlab::volterra::Rhs resolve_rhs(const CommonOpts& o) {
  if (o.rhs.empty()) return rhs_power(-o.beta);
  if (o.rhs.rfind("n^", 0) != 0)
    throw CLI::ValidationError("--rhs expects the form n^<exponent>");
  try {
    return rhs_power(std::stod(o.rhs.substr(2)));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--rhs expects the form n^<exponent>");
  }
}

gvlab::mellin::ComplexBox parse_box(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != 4) throw CLI::ValidationError("--box expects re0,re1,im0,im1");
  return {v[0], v[1], v[2], v[3]};
}

std::filesystem::path prepare_out(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

void print_catalog() {
  std::cout << "weights:   " << gvlab::weights::weight_catalog() << "\n"
            << "sequences: " << gvlab::arith::sequence_catalog() << "\n";
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

template <class T>
int run_solve_typed(const CommonOpts& opts, const std::filesystem::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  FactorSieve sieve(std::max<std::uint32_t>(opts.n + 1, 20001));

  Problem prob{resolve_weight(opts), resolve_rhs(opts), opts.n, opts.precision_bits};
  const auto sol = gvlab::volterra::solve<T>(prob, &sieve);
  const double solve_s = seconds_since(t0);

  const auto sweep = opts.n > 2000 ? gvlab::volterra::ResidualSweep::Subsample
                                   : gvlab::volterra::ResidualSweep::Full;
  const double residual = gvlab::volterra::verify_residuals(prob, sol, &sieve, sweep);
  const bool pass = residual < opts.tol;

  json results{{"n", opts.n},
               {"a_1", gvlab::io::detail::as_double(sol.a[1])},
               {"A_n", gvlab::io::detail::as_double(sol.A[opts.n])}};
  if (!opts.epsilon.empty()) {
    const auto rep = gvlab::tauber::hlr_test(prob, sol, opts.epsilon);
    const char* v = rep.verdict == gvlab::tauber::HLRVerdict::Consistent ? "consistent"
                    : rep.verdict == gvlab::tauber::HLRVerdict::Inconsistent ? "inconsistent"
                                                                             : "inconclusive";
    results["hlr"] = json{{"verdict", v},
                          {"witness", rep.witness},
                          {"scaled_sup", rep.scaled_sup},
                          {"scaled_sup_at", rep.scaled_sup_at}};
  }

  gvlab::io::atomic_write(out / "solution.csv", gvlab::io::solution_csv(sol));
  gvlab::io::write_json(out / "run.json",
                        gvlab::io::run_record(
                            config_json("solve", opts), results,
                            json{{"max_abs", residual},
                                 {"sweep", sweep == gvlab::volterra::ResidualSweep::Full
                                               ? "full"
                                               : "subsample"},
                                 {"tol", opts.tol},
                                 {"pass", pass}},
                            json{{"solve_s", solve_s}, {"total_s", seconds_since(t0)}}));

  std::printf("[%s] solve: n=%u residual max %.3g (tol %.3g) -> %s\n",
              pass ? "PASS" : "FAIL", opts.n, residual, opts.tol,
              (out / "solution.csv").c_str());
  return pass ? 0 : 1;
}

int run_solve(const CommonOpts& opts) {
  const auto out = prepare_out(opts.out);
  if (opts.precision_bits <= 53) return run_solve_typed<double>(opts, out);
  gvlab::set_working_precision_bits(opts.precision_bits);
  return run_solve_typed<gvlab::BigFloat>(opts, out);
}

// ---------------------------------------------------------------------------
// mellin
// ---------------------------------------------------------------------------

int run_mellin_eval(const CommonOpts& opts, const std::string& zstr) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  FactorSieve sieve(20001);

  std::vector<double> zv;
  {
    std::stringstream ss(zstr);
    std::string tok;
    while (std::getline(ss, tok, ',')) zv.push_back(std::stod(tok));
  }
  if (zv.empty() || zv.size() > 2) throw CLI::ValidationError("--z expects re or re,im");
  const gvlab::mellin::Complex z{zv[0], zv.size() == 2 ? zv[1] : 0.0};

  const MellinFunction m = MellinFunction::of_weight(resolve_weight(opts));
  const auto val = gvlab::mellin::eval_mellin(m, z, opts.tol, &sieve);

  gvlab::io::atomic_write(out / "values.csv", gvlab::io::values_csv({{z, val}}));
  gvlab::io::write_json(
      out / "run.json",
      gvlab::io::run_record(config_json("mellin eval", opts),
                            json{{"z", {z.real(), z.imag()}},
                                 {"value", {val.value.real(), val.value.imag()}},
                                 {"abs_error", val.abs_error},
                                 {"rigorous", val.rigorous}},
                            json::object(),
                            json{{"total_s", seconds_since(t0)}}));

  std::printf("g*(%g%+gi) = %.17g %+.17gi  (abs err %.3g)\n", z.real(), z.imag(),
              val.value.real(), val.value.imag(), val.abs_error);
  return 0;
}

int run_mellin_zeros(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  FactorSieve sieve(20001);

  if (opts.box.empty()) throw CLI::ValidationError("mellin zeros needs --box re0,re1,im0,im1");
  const auto box = parse_box(opts.box);

  const MellinFunction m = MellinFunction::of_weight(resolve_weight(opts));
  gvlab::mellin::FindZeroOptions fz;
  fz.residual_tol = opts.tol == 1e-8 ? 1e-9 : opts.tol;  // keep the tighter default
  const auto rep = gvlab::mellin::find_zeros(m, box, fz, &sieve);

  bool all_certified = true;
  double eta = 1.0;
  for (const auto& r : rep.zeros) {
    all_certified = all_certified && r.certified;
    eta = std::min(eta, r.location.real());
  }
  const bool accounted = static_cast<int>(rep.zeros.size()) == rep.boundary_winding;
  const bool pass = all_certified && accounted;

  json zrows = json::array();
  for (const auto& r : rep.zeros)
    zrows.push_back(json{{"re", r.location.real()},
                         {"im", r.location.imag()},
                         {"residual", r.residual},
                         {"winding", r.winding},
                         {"certified", r.certified},
                         {"factor", r.factor}});

  gvlab::io::atomic_write(out / "zeros.csv", gvlab::io::zeros_csv(rep.zeros));
  gvlab::io::write_json(
      out / "run.json",
      gvlab::io::run_record(config_json("mellin zeros", opts),
                            json{{"zeros", zrows},
                                 {"boundary_winding", rep.boundary_winding},
                                 {"eta", rep.zeros.empty() ? json() : json(eta)},
                                 {"pass", pass}},
                            json::object(),
                            json{{"total_s", seconds_since(t0)}}));

  for (const auto& r : rep.zeros)
    std::printf("zero %.12f %+.12fi  residual %.2e  winding %d%s  [%s]\n",
                r.location.real(), r.location.imag(), r.residual, r.winding,
                r.certified ? "" : " (uncertified)", r.factor.c_str());
  std::printf("[%s] mellin zeros: %zu zero(s), boundary winding %d\n",
              pass ? "PASS" : "FAIL", rep.zeros.size(), rep.boundary_winding);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sequence
// ---------------------------------------------------------------------------

int run_sequence(const CommonOpts& opts) {
  const auto out = prepare_out(opts.out);
  if (opts.sequence.empty()) throw CLI::ValidationError("sequence needs --sequence <id>");
  FactorSieve sieve(std::max<std::uint32_t>(opts.n + 1, 128));
  const auto u =
      gvlab::arith::parse_sequence_id(opts.sequence, std::max<std::uint32_t>(opts.n, 5000));
  const auto vals = u.materialize<double>(opts.n, &sieve);
  gvlab::io::atomic_write(out / "sequence.csv", gvlab::io::sequence_csv(vals));
  std::printf("wrote %u values of %s -> %s\n", opts.n, opts.sequence.c_str(),
              (out / "sequence.csv").c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce: the named pipelines, each with its pass line
// ---------------------------------------------------------------------------

int reproduce_eq1(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  const std::uint32_t N = opts.n ? opts.n : 100000;
  FactorSieve sieve(N + 1);
  const auto rep = gvlab::volterra::summatory_identity_check(N, sieve);
  const bool pass = rep.all_equal && rep.checked == N;

  gvlab::io::write_json(
      out / "run.json",
      gvlab::io::run_record(config_json("reproduce eq1", opts),
                            json{{"all_equal", rep.all_equal},
                                 {"checked", rep.checked},
                                 {"first_failure", rep.first_failure},
                                 {"pass", pass}},
                            json::object(), json{{"total_s", seconds_since(t0)}}));
  if (pass)
    std::printf("[PASS] eq1: summatory identity exact for all n <= %u\n", N);
  else
    std::printf("[FAIL] eq1: first failure at n = %u\n", rep.first_failure);
  return pass ? 0 : 1;
}

int reproduce_thm11(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  const std::uint32_t N = opts.n ? opts.n : 100000;
  if (N < 10000) throw CLI::ValidationError("thm11 needs --n >= 10000 for the decade fit");
  FactorSieve sieve(N + 1);

  Problem prob{WeightFunction::affine(Rational(1, 2), Rational(1, 2)), rhs_power(0.5), N};
  const auto sol = gvlab::volterra::solve<double>(prob, &sieve);

  const double ratio = sol.A[N] / std::sqrt(static_cast<double>(N));
  const auto cf = gvlab::tauber::residual_correction_fit(sol, 1.5, 0.5);
  const double target = -3.0 / 16.0;
  const bool lead_ok = std::fabs(ratio - 1.5) <= 1e-3;
  const bool corr_ok = std::fabs(cf.c_log / target - 1.0) <= 0.10;
  const bool pass = lead_ok && corr_ok;

  gvlab::io::atomic_write(out / "solution.csv", gvlab::io::solution_csv(sol));
  gvlab::io::write_json(
      out / "run.json",
      gvlab::io::run_record(config_json("reproduce thm11", opts),
                            json{{"A_over_sqrt_n", ratio},
                                 {"lead_target", 1.5},
                                 {"c_log", cf.c_log},
                                 {"c_log_target", target},
                                 {"pass", pass}},
                            json::object(), json{{"total_s", seconds_since(t0)}}));
  std::printf("[%s] thm11: A(n)/sqrt(n) = %.6f (target 1.5), log coefficient %.6f "
              "(target %.5f)\n",
              pass ? "PASS" : "FAIL", ratio, cf.c_log, target);
  return pass ? 0 : 1;
}

int reproduce_fig1(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  const std::uint32_t N = opts.n ? opts.n : 20000;
  if (N < 10000) throw CLI::ValidationError("fig1 needs --n >= 10000 for the growth verdict");
  FactorSieve sieve(N + 1);

  Problem prob{WeightFunction::generalized_ingham(CoefficientSequence::davenport_heilbronn(),
                                                  "davenport_heilbronn"),
               rhs_power(-1.0 / 3.0), N};
  const auto sol = gvlab::volterra::solve<double>(prob, &sieve);
  const auto rep = gvlab::tauber::slowly_varying_diagnostic(sol, 0.5);
  const bool pass = rep.verdict == gvlab::tauber::VariationVerdict::BoundedByLog;

  gvlab::svg::Series pts{"n^(1/2) a(n)", {}, {}};
  gvlab::svg::Series env{"running max", {}, {}};
  for (std::uint32_t n = 1; n <= N; ++n) {
    pts.x.push_back(n);
    pts.y.push_back(rep.scaled[n]);
    if (n >= rep.trim) {
      env.x.push_back(n);
      env.y.push_back(rep.running_max[n]);
    }
  }
  gvlab::svg::PlotSpec spec;
  spec.title = "scaled coefficients of the five-periodic mirror equation";
  spec.x_label = "n (log scale)";
  spec.y_label = "n^(1/2) a(n)";
  spec.log_x = true;
  gvlab::io::atomic_write(out / "fig1.svg", gvlab::svg::emit_svg({pts, env}, spec));
  gvlab::io::atomic_write(out / "scaled.csv", gvlab::io::scaled_csv(sol.a, rep.scaled));

  const char* vname = pass ? "bounded-by-log"
                     : rep.verdict == gvlab::tauber::VariationVerdict::GrowthBeyondLog
                           ? "growth-beyond-log"
                     : rep.verdict == gvlab::tauber::VariationVerdict::MaxDecaying
                           ? "max-decaying"
                           : "max-constant";
  gvlab::io::write_json(
      out / "run.json",
      gvlab::io::run_record(config_json("reproduce fig1", opts),
                            json{{"verdict", vname},
                                 {"ratio_band", rep.ratio_band},
                                 {"last_record_at", rep.last_record_at},
                                 {"bound_c0", rep.bound_c0},
                                 {"bound_c1", rep.bound_c1},
                                 {"pass", pass}},
                            json::object(), json{{"total_s", seconds_since(t0)}}));
  std::printf("[%s] fig1: verdict %s (band %.4f, last record at %u) -> %s\n",
              pass ? "PASS" : "FAIL", vname, rep.ratio_band, rep.last_record_at,
              (out / "fig1.svg").c_str());
  return pass ? 0 : 1;
}

int reproduce_remark52(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  const std::uint32_t N = opts.n ? std::max(opts.n, 1105u) : 2000;
  FactorSieve sieve(N + 1);

  const auto chi = CoefficientSequence::character(4);
  const auto closed = gvlab::volterra::character_closed_form<double>(chi, 1.0, N, sieve);
  Problem prob{WeightFunction::generalized_ingham(chi, "character:4"), rhs_power(-1.0), N};
  const auto sol = gvlab::volterra::solve<double>(prob, &sieve);

  const std::uint32_t P[] = {5, 65, 1105};
  bool pass = true;
  json rows = json::array();
  for (int m = 1; m <= 3; ++m) {
    const std::uint32_t p = P[m - 1];
    const double want = std::pow(2.0, m);
    const double via_closed = std::fabs(p * closed[p]);
    const double via_solver = std::fabs(p * sol.a[p]);
    const bool ok = std::fabs(via_closed / want - 1.0) < 1e-9 &&
                    std::fabs(via_solver / want - 1.0) < 1e-9;
    pass = pass && ok;
    rows.push_back(json{{"m", m},
                        {"P", p},
                        {"closed_form", via_closed},
                        {"solver", via_solver},
                        {"target", want},
                        {"ok", ok}});
  }

  gvlab::io::atomic_write(out / "solution.csv", gvlab::io::solution_csv(sol));
  gvlab::io::write_json(out / "run.json",
                        gvlab::io::run_record(config_json("reproduce remark52", opts),
                                              json{{"records", rows}, {"pass", pass}},
                                              json::object(),
                                              json{{"total_s", seconds_since(t0)}}));
  std::printf("[%s] remark52: |P(m) a(P(m))| = 2,4,8 at P = 5, 65, 1105 via both routes\n",
              pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int reproduce_tau(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  const std::uint32_t terms = opts.n ? opts.n : 5000;
  FactorSieve sieve(std::max<std::uint32_t>(terms + 1, 128));

  const auto u = CoefficientSequence::ramanujan_tau_normalized(terms);
  const auto est = gvlab::weights::weight_limit_at_zero(u, terms, &sieve);
  // the series sits at the edge of absolute convergence; the pass line is the
  // first decimal digit, which is all the source asserts
  const bool pass = !est.diverged && est.value >= 0.75 && est.value < 0.85;

  gvlab::io::write_json(
      out / "run.json",
      gvlab::io::run_record(config_json("reproduce tau", opts),
                            json{{"limit_estimate", est.value},
                                 {"partial_sum", est.partial},
                                 {"diagnostic", est.diagnostic},
                                 {"diverged", est.diverged},
                                 {"pass", pass}},
                            json::object(), json{{"total_s", seconds_since(t0)}}));
  std::printf("[%s] tau: sum of normalized tau over n <= %u averages to %.4f "
              "(first decimal 8 expected)\n",
              pass ? "PASS" : "FAIL", terms, est.value);
  return pass ? 0 : 1;
}

int reproduce_dh_zeros(const CommonOpts& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = prepare_out(opts.out);
  FactorSieve sieve(20001);

  const auto m =
      MellinFunction::bhf_factorized(CoefficientSequence::davenport_heilbronn());
  const auto box = opts.box.empty() ? gvlab::mellin::ComplexBox{0.0, 1.0, 0.0, 100.0}
                                    : parse_box(opts.box);
  const auto rep = gvlab::mellin::find_zeros(m, box, {}, &sieve);

  const gvlab::mellin::ZeroRecord* off = nullptr;
  for (const auto& r : rep.zeros)
    if (r.certified && std::fabs(r.location.real() - 0.5) > 1e-3 && (!off || r.location.imag() < off->location.imag()))
      off = &r;
  const bool pass = off != nullptr;

  gvlab::io::atomic_write(out / "zeros.csv", gvlab::io::zeros_csv(rep.zeros));
  json result{{"zeros_found", rep.zeros.size()},
              {"boundary_winding", rep.boundary_winding},
              {"pass", pass}};
  if (off)
    result["first_off_line"] = json{{"re", off->location.real()},
                                    {"im", off->location.imag()},
                                    {"residual", off->residual}};
  gvlab::io::write_json(out / "run.json",
                        gvlab::io::run_record(config_json("reproduce dh-zeros", opts),
                                              result, json::object(),
                                              json{{"total_s", seconds_since(t0)}}));
  if (pass)
    std::printf("[PASS] dh-zeros: certified off-line zero at %.10f %+.10fi "
                "(%zu zeros in the box)\n",
                off->location.real(), off->location.imag(), rep.zeros.size());
  else
    std::printf("[FAIL] dh-zeros: no certified zero with |Re - 1/2| > 1e-3 in the box\n");
  return pass ? 0 : 1;
}

int run_reproduce(const std::string& target, const CommonOpts& opts) {
  if (target == "eq1") return reproduce_eq1(opts);
  if (target == "thm11") return reproduce_thm11(opts);
  if (target == "fig1") return reproduce_fig1(opts);
  if (target == "remark52") return reproduce_remark52(opts);
  if (target == "tau") return reproduce_tau(opts);
  if (target == "dh-zeros") return reproduce_dh_zeros(opts);
  throw CLI::ValidationError("unknown target: " + target +
                             " (expected eq1|thm11|fig1|remark52|tau|dh-zeros)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for discrete Volterra equations of good variation"};
  app.set_version_flag("--version", gvlab::io::kVersion);

  bool list = false;
  app.add_flag("--list", list, "print the weight and sequence catalogs and exit");

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd, bool needs_n) {
    cmd->add_option("--weight", opts.weight, "weight id (see --list)");
    cmd->add_option("--sequence", opts.sequence, "sequence id (see --list)");
    auto* n = cmd->add_option("--n", opts.n, "horizon / term count")
                  ->check(CLI::Range(std::uint32_t{1}, std::numeric_limits<std::uint32_t>::max()));
    if (needs_n) n->required();
    cmd->add_option("--precision-bits", opts.precision_bits,
                    "working precision for the solve path")
        ->envname("GVLAB_PRECISION_BITS")
        ->check(CLI::Range(24u, 8192u));
    cmd->add_option("--tol", opts.tol, "embedded check tolerance");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "seed recorded in the run config");
  };

  auto* solve = app.add_subcommand("solve", "solve one equation and emit solution.csv");
  add_common(solve, true);
  auto* beta_opt = solve->add_option("--beta", opts.beta, "rhs n^{-beta}");
  solve->add_option("--rhs", opts.rhs, "rhs as n^<exponent>")->excludes(beta_opt);
  solve->add_option("--epsilon", opts.epsilon,
                    "epsilon grid: run the scaled-record check and embed its verdict");

  auto* mellin = app.add_subcommand("mellin", "evaluate or scan the weight transform");
  std::string zstr;
  auto* meval = mellin->add_subcommand("eval", "evaluate the transform at one point");
  add_common(meval, false);
  meval->add_option("--z", zstr, "evaluation point re[,im]")->required();
  auto* mzeros = mellin->add_subcommand("zeros", "certified zero scan in a box");
  add_common(mzeros, false);
  mzeros->add_option("--box", opts.box, "search box re0,re1,im0,im1")->required();
  mellin->require_subcommand(1);

  auto* repro = app.add_subcommand("reproduce", "run a named pipeline with its pass line");
  std::string target;
  repro->add_option("target", target, "eq1|thm11|fig1|remark52|tau|dh-zeros")->required();
  add_common(repro, false);
  repro->add_option("--box", opts.box, "override box for dh-zeros");

  auto* seq = app.add_subcommand("sequence", "dump a coefficient sequence to CSV");
  add_common(seq, true);

  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);

  if (list) {
    print_catalog();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 2;
  }

  try {
    if (solve->parsed()) return run_solve(opts);
    if (meval->parsed()) return run_mellin_eval(opts, zstr);
    if (mzeros->parsed()) return run_mellin_zeros(opts);
    if (repro->parsed()) return run_reproduce(target, opts);
    if (seq->parsed()) return run_sequence(opts);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
