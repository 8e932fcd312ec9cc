// Command-line surface: bound queries and sweep tables, trial and spoof
// batches, variational optimization, record verification, and self-tests.
//
// Exit codes: 0 success, 1 usage error, 2 numeric or verification failure.
#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dxhog/bounds.hpp"
#include "dxhog/io.hpp"
#include "dxhog/protocol.hpp"
#include "dxhog/special.hpp"
#include "dxhog/stabilizer.hpp"
#include "dxhog/variational.hpp"

namespace {

using namespace dxhog;

// "os" draws from the system entropy source and announces the value so the
// run stays replayable
std::uint64_t resolve_seed(const std::string& s) {
  if (s == "os") {
    std::random_device rd;
    const std::uint64_t v =
        (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
    std::printf("seed: %" PRIu64 "\n", v);
    return v;
  }
  std::uint64_t v = 0;
  std::size_t used = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--seed", "expected a decimal integer or 'os'");
  }
  if (used != s.size()) {
    throw CLI::ValidationError("--seed", "expected a decimal integer or 'os'");
  }
  return v;
}

Ensemble parse_ensemble(const std::string& name, int t_max, double delta) {
  if (name == "product_clifford") return Ensemble::product_clifford();
  if (name == "clifford") return Ensemble::clifford();
  if (name == "design") return Ensemble::design(t_max, delta);
  if (name == "haar") return Ensemble::haar();
  throw CLI::ValidationError(
      "--ensemble", "expected product_clifford, clifford, design, or haar");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(out_path, text);
  }
}

std::string records_to_jsonl(const std::vector<TrialRecord>& records) {
  std::string out;
  for (const TrialRecord& r : records) {
    out += trial_record_line(r);
    out += '\n';
  }
  return out;
}

int selftest(bool full) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("%-48s %s\n", name, ok ? "ok" : "FAIL");
    if (!ok) ++failures;
  };
  auto close_to = [](double x, double y, double tol) { return std::fabs(x - y) <= tol; };

  check("erfcx(1)", close_to(erfcx(1.0), 0.42758357615580700442, 1e-12));
  check("harmonic(16)/16", close_to(harmonic_number(16) / 16.0, 0.21129556207681204, 1e-12));
  check("lb_min_m(12,clifford,0.362) == 62",
        lb_min_m(12, Ensemble::clifford(), 0.362) == 62);
  check("lb_min_m(12,clifford,0.427) == 78",
        lb_min_m(12, Ensemble::clifford(), 0.427) == 78);
  check("ub_min_m(12,0.427) == 330", ub_min_m(12, 0.427) == 330);
  check("ub_eps(12,330) > 0.428", ub_eps(12, 330) > 0.428);
  check("hm_lb_bits(9,1)", close_to(hm_lb_bits(9, 1.0), 9.8137084989847602, 1e-9));

  {
    bool ok = true;
    RandomStream rng(20240816);
    for (int rep = 0; rep < 50 && ok; ++rep) {
      const RawStabilizerCircuit raw = sample_stabilizer_preparation(3, rng);
      StateVector a = zero_state(3);
      apply_circuit(a, raw_circuit(raw));
      const StateVector b = template_state(to_measurement_template(raw));
      const StateVector ca = canonical_phase(a), cb = canonical_phase(b);
      for (std::size_t i = 0; i < ca.amps.size(); ++i) {
        if (std::abs(ca.amps[i] - cb.amps[i]) > 1e-10) ok = false;
      }
    }
    check("template matches raw circuit (n=3)", ok);
  }

  {
    const TrialContext ctx = make_trial_context("ideal", 4);
    const BatchResult batch = run_batch(4, 100, ctx, 1, 1);
    bool ok = true;
    for (const TrialRecord& r : batch.records) {
      if (!verify_record(r)) ok = false;
      const TrialRecord round = trial_record_from_line(trial_record_line(r));
      if (trial_record_line(round) != trial_record_line(r)) ok = false;
    }
    check("trial records verify and round-trip", ok);
  }

  if (full) {
    {
      const TrialContext ctx = make_trial_context("ideal", 8);
      const BatchResult batch = run_batch(8, 4000, ctx, 99, 0);
      const double want = (std::exp2(8) - 1.0) / (std::exp2(8) + 1.0);
      check("ideal mean (n=8, 4000 trials)",
            std::fabs(batch.summary.mean - want) <= 3.0 * batch.summary.stderr_);
    }
    {
      const BatchResult batch = spoof_batch(3, 4, 2000, 7, 0);
      const double want = ub_eps_exact(3, 4);
      check("spoof mean vs exact reference (n=3, m=4)",
            std::fabs(batch.summary.mean - want) <= 4.0 * batch.summary.stderr_);
    }
    {
      const AnsatzLayout layout = build_layout(4, 4);
      const NoiseConstants nc;
      RandomStream rng(5);
      const StateVector target = sample_haar_state(4, rng);
      std::vector<double> params(layout.param_count);
      for (double& p : params) p = rng.uniform01() - 0.5;
      std::vector<double> grad(layout.param_count);
      objective_grad(layout, params, target, nc, grad);
      bool ok = true;
      std::vector<double> g_unused(layout.param_count);
      for (int i = 0; i < layout.param_count; i += 7) {
        const double h = 1e-5;
        std::vector<double> p2 = params;
        p2[i] += h;
        const double fp = objective_grad(layout, p2, target, nc, g_unused);
        p2[i] -= 2 * h;
        const double fm = objective_grad(layout, p2, target, nc, g_unused);
        const double fd = (fp - fm) / (2 * h);
        if (std::fabs(fd - grad[i]) > 1e-5 * std::max(1.0, std::fabs(fd))) ok = false;
      }
      check("adjoint gradient vs finite differences", ok);
    }
  }

  std::printf("%s\n", failures == 0 ? "selftest passed" : "selftest FAILED");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed XEB heavy-output generation toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- bounds ----
  CLI::App* bounds = app.add_subcommand("bounds", "communication bound queries");
  bounds->require_subcommand(1);

  struct {
    int n = 12;
    std::string ensemble = "clifford";
    int t_max = 10;
    double delta = 0.0;
    double m = -1.0;
    double eps = -1.0;
  } lo;
  CLI::App* lower = bounds->add_subcommand("lower", "classical lower bound");
  lower->add_option("--n", lo.n, "qubit count")->required();
  lower->add_option("--ensemble", lo.ensemble,
                    "product_clifford|clifford|design|haar");
  lower->add_option("--t-max", lo.t_max, "max moment order for design");
  lower->add_option("--delta", lo.delta, "design additive error");
  CLI::Option* lo_m = lower->add_option("--m", lo.m, "bits of communication");
  CLI::Option* lo_eps = lower->add_option("--eps", lo.eps, "target XEB score");
  lower->callback([&] {
    if (lo_m->count() + lo_eps->count() != 1) {
      throw CLI::ValidationError("bounds lower", "pass exactly one of --m, --eps");
    }
    const Ensemble e = parse_ensemble(lo.ensemble, lo.t_max, lo.delta);
    if (lo_m->count()) {
      const OptLowerBound r = lb_eps_opt(lo.n, lo.m, norm_bounds(e, lo.n));
      std::printf("%s\n", format_sig10(r.eps).c_str());
    } else {
      std::printf("%d\n", lb_min_m(lo.n, e, lo.eps));
    }
  });

  struct {
    int n = 12;
    int m = -1;
    double eps = -1.0;
  } up;
  CLI::App* upper = bounds->add_subcommand("upper", "classical upper bound");
  upper->add_option("--n", up.n, "qubit count")->required();
  CLI::Option* up_m = upper->add_option("--m", up.m, "bits of communication");
  CLI::Option* up_eps = upper->add_option("--eps", up.eps, "target XEB score");
  upper->callback([&] {
    if (up_m->count() + up_eps->count() != 1) {
      throw CLI::ValidationError("bounds upper", "pass exactly one of --m, --eps");
    }
    if (up_m->count()) {
      std::printf("%s\n", format_sig10(ub_eps(up.n, up.m)).c_str());
    } else {
      std::printf("%d\n", ub_min_m(up.n, up.eps));
    }
  });

  struct {
    int n = 12;
    double eps = 1.0;
  } hm;
  CLI::App* hmc = bounds->add_subcommand("hm", "Hidden Matching baseline");
  hmc->add_option("--n", hm.n, "qubit count")->required();
  hmc->add_option("--eps", hm.eps, "target XEB score")->required();
  hmc->callback(
      [&] { std::printf("%s\n", format_sig10(hm_lb_bits(hm.n, hm.eps)).c_str()); });

  struct {
    std::string ns = "12";
    std::string ensembles = "clifford,haar";
    int t_max = 10;
    double delta = 0.0;
    int m_min = 0;
    int m_max = 0;
    int m_step = 20;
    double eps = -1.0;
    std::string out;
  } sw;
  CLI::App* sweep = bounds->add_subcommand("sweep", "CSV bound table");
  sweep->add_option("--n", sw.ns, "comma-separated qubit counts");
  sweep->add_option("--ensemble", sw.ensembles, "comma-separated ensembles");
  sweep->add_option("--t-max", sw.t_max, "max moment order for design");
  sweep->add_option("--delta", sw.delta, "design additive error");
  CLI::Option* sw_mmin = sweep->add_option("--m-min", sw.m_min, "first m");
  sweep->add_option("--m-max", sw.m_max, "last m");
  sweep->add_option("--m-step", sw.m_step, "m stride");
  CLI::Option* sw_eps =
      sweep->add_option("--eps", sw.eps, "target XEB score (m solved per row)");
  sweep->add_option("--out", sw.out, "output CSV path (stdout when absent)");
  sweep->callback([&] {
    if (sw_mmin->count() == sw_eps->count()) {
      throw CLI::ValidationError("bounds sweep",
                                 "pass either --m-min/--m-max or --eps");
    }
    std::vector<int> ns;
    for (const std::string& s : split_list(sw.ns)) ns.push_back(std::stoi(s));
    std::vector<Ensemble> es;
    for (const std::string& s : split_list(sw.ensembles)) {
      es.push_back(parse_ensemble(s, sw.t_max, sw.delta));
    }
    if (ns.empty() || es.empty()) {
      throw CLI::ValidationError("bounds sweep", "--n and --ensemble must be non-empty");
    }
    const std::vector<SweepRow> rows =
        sw_eps->count() ? sweep_eps(ns, es, sw.eps)
                        : sweep_m(ns, es, sw.m_min, sw.m_max, sw.m_step);
    emit(sw.out, sweep_csv(rows));
  });

  // ---- trial ----
  CLI::App* trial = app.add_subcommand("trial", "protocol trial batches");
  trial->require_subcommand(1);
  struct {
    int n = 12;
    std::uint64_t trials = 0;
    std::string mode = "ideal";
    std::string seed;
    std::string out;
    int threads = 0;
  } tr;
  CLI::App* trun = trial->add_subcommand("run", "run a trial batch");
  trun->add_option("--n", tr.n, "qubit count")->required();
  trun->add_option("--trials", tr.trials, "trial count")->required();
  trun->add_option("--mode", tr.mode, "ideal | depolarizing:<F> | ansatz:<params file>");
  trun->add_option("--seed", tr.seed, "master seed (or 'os')")->required();
  trun->add_option("--out", tr.out, "JSONL output path");
  trun->add_option("--threads", tr.threads, "worker threads (0 = all cores)");
  trun->callback([&] {
    const std::uint64_t seed = resolve_seed(tr.seed);
    const TrialContext ctx = make_trial_context(tr.mode, tr.n);
    const BatchResult batch = run_batch(tr.n, tr.trials, ctx, seed, tr.threads);
    if (!tr.out.empty()) write_text_file(tr.out, records_to_jsonl(batch.records));
    std::printf("%s\n", summary_to_json(batch.summary).c_str());
  });

  // ---- spoof ----
  CLI::App* spoof = app.add_subcommand("spoof", "classical codebook baseline");
  spoof->require_subcommand(1);
  struct {
    int n = 3;
    int m = 6;
    std::uint64_t trials = 0;
    std::string seed;
    std::string out;
    int threads = 0;
  } sp;
  CLI::App* srun = spoof->add_subcommand("run", "run a spoof batch");
  srun->add_option("--n", sp.n, "qubit count (<= 6)")->required();
  srun->add_option("--m", sp.m, "codebook bits (<= 20)")->required();
  srun->add_option("--trials", sp.trials, "trial count")->required();
  srun->add_option("--seed", sp.seed, "master seed (or 'os')")->required();
  srun->add_option("--out", sp.out, "JSONL output path");
  srun->add_option("--threads", sp.threads, "worker threads (0 = all cores)");
  srun->callback([&] {
    const std::uint64_t seed = resolve_seed(sp.seed);
    const BatchResult batch = spoof_batch(sp.n, sp.m, sp.trials, seed, sp.threads);
    if (!sp.out.empty()) write_text_file(sp.out, records_to_jsonl(batch.records));
    std::printf("%s\n", summary_to_json(batch.summary).c_str());
  });

  // ---- optimize ----
  struct {
    int n = 12;
    int depth = 86;
    std::string seed;
    std::string out;
    int max_iters = 10000;
    std::string config;
  } op;
  CLI::App* opt = app.add_subcommand("optimize", "fit the brickwork ansatz");
  opt->add_option("--n", op.n, "qubit count (even)")->required();
  opt->add_option("--depth", op.depth, "zz layer count")->required();
  opt->add_option("--seed", op.seed, "master seed (or 'os')")->required();
  opt->add_option("--out", op.out, "params JSON output path");
  opt->add_option("--max-iters", op.max_iters, "optimizer iteration cap");
  opt->add_option("--config", op.config, "config JSON (noise constants)");
  opt->callback([&] {
    const std::uint64_t seed = resolve_seed(op.seed);
    const NoiseConstants nc =
        op.config.empty() ? NoiseConstants{} : config_from_json_file(op.config).noise;
    const AnsatzLayout layout = build_layout(op.n, op.depth);
    RandomStream target_rng(child_seed(seed, 0));
    const StateVector target = sample_haar_state(op.n, target_rng);
    RandomStream init_rng(child_seed(seed, 1));
    OptimizeOptions opts;
    opts.max_iterations = op.max_iters;
    const OptResult res = optimize_ansatz(layout, target, nc, opts, init_rng);
    if (!op.out.empty()) {
      AnsatzParamsFile pf;
      pf.n = op.n;
      pf.depth = op.depth;
      pf.params = res.params;
      pf.predicted_fidelity = res.predicted_fidelity;
      pf.overlap = res.overlap;
      pf.noise_factor = res.noise_factor;
      pf.seed = seed;
      write_text_file(op.out, params_to_json(pf) + "\n");
    }
    std::printf("predicted_fidelity: %s\n", format_sig10(res.predicted_fidelity).c_str());
    std::printf("overlap: %s\n", format_sig10(res.overlap).c_str());
    std::printf("noise_factor: %s\n", format_sig10(res.noise_factor).c_str());
    std::printf("iterations: %d\n", res.iterations);
    std::printf("converged: %s\n", res.converged ? "true" : "false");
  });

  // ---- verify ----
  CLI::App* verify = app.add_subcommand("verify", "recompute logged results");
  verify->require_subcommand(1);
  struct {
    std::string in;
  } ve;
  CLI::App* vrec = verify->add_subcommand("records", "re-score a JSONL trial log");
  vrec->add_option("--in", ve.in, "JSONL input path")->required();
  vrec->callback([&] {
    std::ifstream f(ve.in);
    if (!f) throw std::runtime_error("cannot open: " + ve.in);
    std::string line;
    std::uint64_t total = 0, bad = 0;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      ++total;
      if (!verify_record(trial_record_from_line(line))) {
        ++bad;
        std::printf("mismatch at record %" PRIu64 "\n", total - 1);
      }
    }
    std::printf("verified %" PRIu64 " records, %" PRIu64 " mismatches\n", total, bad);
    if (bad > 0) exit_code = 2;
  });

  // ---- selftest ----
  CLI::App* st = app.add_subcommand("selftest", "built-in checks");
  std::string st_which = "quick";
  st->add_option("which", st_which, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));
  st->callback([&] { exit_code = selftest(st_which == "full"); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UnreachableTarget& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return exit_code;
}
