#include "dxhog/protocol.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dxhog/io.hpp"
#include "dxhog/variational.hpp"

namespace dxhog {

Instance make_instance(int n, std::uint64_t master_seed, std::uint64_t index) {
  if (n < 1) throw std::invalid_argument("make_instance: n must be >= 1");
  Instance inst;
  inst.id = index;
  inst.n = n;
  inst.state_seed = child_seed(master_seed, 2 * index);
  inst.meas_seed = child_seed(master_seed, 2 * index + 1);
  RandomStream state_rng(inst.state_seed);
  inst.psi = sample_haar_state(n, state_rng);
  RandomStream meas_rng(inst.meas_seed);
  inst.tpl = to_measurement_template(sample_stabilizer_preparation(n, meas_rng));
  return inst;
}

std::uint64_t trial_noise_seed(std::uint64_t master_seed, std::uint64_t index) {
  return child_seed(master_seed, (std::uint64_t{1} << 32) + index);
}

TrialContext make_trial_context(const std::string& mode, int n) {
  TrialContext ctx;
  ctx.mode_label = mode;
  if (mode == "ideal") {
    ctx.kind = TrialModeKind::ideal;
    return ctx;
  }
  if (mode.rfind("depolarizing:", 0) == 0) {
    ctx.kind = TrialModeKind::depolarizing;
    const std::string arg = mode.substr(13);
    std::size_t used = 0;
    ctx.fidelity = std::stod(arg, &used);
    if (used != arg.size() || ctx.fidelity < 0.0 || ctx.fidelity > 1.0) {
      throw std::invalid_argument("depolarizing fidelity must be in [0, 1]");
    }
    return ctx;
  }
  if (mode.rfind("ansatz:", 0) == 0) {
    ctx.kind = TrialModeKind::ansatz;
    const AnsatzParamsFile pf = params_from_json_file(mode.substr(7));
    if (pf.n != n) {
      throw std::invalid_argument("ansatz params file is for n=" + std::to_string(pf.n));
    }
    const AnsatzLayout layout = build_layout(pf.n, pf.depth);
    ctx.prepared = ansatz_state(layout, pf.params);
    return ctx;
  }
  throw std::invalid_argument("unknown trial mode: " + mode);
}

double xeb_score(const StateVector& target, const MeasurementTemplate& tpl,
                 std::uint64_t z) {
  if (target.n != tpl.n) throw std::invalid_argument("xeb_score: width mismatch");
  if (z >= target.dim()) throw std::invalid_argument("xeb_score: z out of range");
  StateVector rotated = target;
  apply_circuit(rotated, inverse_measurement_circuit(tpl));
  return std::exp2(target.n) * std::norm(rotated.amps[z]) - 1.0;
}

TrialRecord run_trial(const Instance& inst, const TrialContext& ctx,
                      std::uint64_t noise_seed) {
  RandomStream rng(noise_seed);
  const Circuit inv = inverse_measurement_circuit(inst.tpl);
  StateVector rotated = inst.psi;
  apply_circuit(rotated, inv);

  std::uint64_t z = 0;
  switch (ctx.kind) {
    case TrialModeKind::ideal:
      z = born_sample(rotated, rng);
      break;
    case TrialModeKind::depolarizing: {
      // Born draw first so that F=1 replays the ideal stream exactly
      const std::uint64_t ideal_z = born_sample(rotated, rng);
      if (rng.coin(ctx.fidelity)) {
        z = ideal_z;
      } else {
        z = rng.next_u64() & (inst.psi.dim() - 1);
      }
      break;
    }
    case TrialModeKind::ansatz: {
      if (ctx.prepared.n != inst.n) {
        throw std::invalid_argument("run_trial: prepared state width mismatch");
      }
      StateVector rp = ctx.prepared;
      apply_circuit(rp, inv);
      z = born_sample(rp, rng);
      break;
    }
  }

  TrialRecord rec;
  rec.id = inst.id;
  rec.n = inst.n;
  rec.mode = ctx.mode_label;
  rec.z = z;
  rec.score = std::exp2(inst.n) * std::norm(rotated.amps[z]) - 1.0;
  rec.state_seed = inst.state_seed;
  rec.meas_seed = inst.meas_seed;
  rec.noise_seed = noise_seed;
  return rec;
}

XebSummary summarize(const std::vector<double>& scores) {
  if (scores.size() < 2) throw std::invalid_argument("summarize: need k >= 2 scores");
  XebSummary s;
  s.k = scores.size();
  double acc = 0.0;
  for (double v : scores) acc += v;
  s.mean = acc / static_cast<double>(s.k);
  double ss = 0.0;
  for (double v : scores) ss += (v - s.mean) * (v - s.mean);
  const double var = ss / static_cast<double>(s.k - 1);
  s.stderr_ = std::sqrt(var / static_cast<double>(s.k));
  return s;
}

CertifyResult certify(const XebSummary& s, double target_eps, double k_sigma) {
  if (!(k_sigma > 0.0)) throw std::invalid_argument("certify: k_sigma must be > 0");
  CertifyResult r;
  r.margin = s.mean - k_sigma * s.stderr_ - target_eps;
  r.pass = r.margin >= 0.0;
  return r;
}

std::vector<StateVector> build_codebook(int n, int m, RandomStream& rng) {
  if (n < 1 || n > 6) throw std::invalid_argument("build_codebook: n must be 1..6");
  if (m < 0 || m > 20) throw std::invalid_argument("build_codebook: m must be 0..20");
  std::vector<StateVector> cb;
  cb.reserve(std::size_t{1} << m);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
    cb.push_back(sample_haar_state(n, rng));
  }
  return cb;
}

SpoofOutcome spoof_trial(const std::vector<StateVector>& codebook,
                         const StateVector& psi, const DenseMatrix& u) {
  if (codebook.empty()) throw std::invalid_argument("spoof_trial: empty codebook");
  SpoofOutcome out;
  double best = -1.0;
  for (std::size_t x = 0; x < codebook.size(); ++x) {
    const double ov = std::norm(inner_product(codebook[x], psi));
    if (ov > best) {
      best = ov;
      out.x = x;
    }
  }
  StateVector rotated_code = codebook[out.x];
  apply_unitary(rotated_code, u);
  double best_p = -1.0;
  for (std::uint64_t z = 0; z < rotated_code.dim(); ++z) {
    const double p = std::norm(rotated_code.amps[z]);
    if (p > best_p) {
      best_p = p;
      out.z = z;
    }
  }
  StateVector rotated_psi = psi;
  apply_unitary(rotated_psi, u);
  out.score = std::exp2(psi.n) * std::norm(rotated_psi.amps[out.z]) - 1.0;
  return out;
}

namespace {

// fills records[i] for i in [0, trials) with the given worker, in parallel
template <typename Fn>
void parallel_fill(std::vector<TrialRecord>& records, std::uint64_t trials,
                   int threads, const Fn& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  if (threads == 1 || trials < 2) {
    for (std::uint64_t i = 0; i < trials; ++i) records[i] = fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= trials) return;
      records[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

XebSummary summarize_records(const std::vector<TrialRecord>& records) {
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const TrialRecord& r : records) scores.push_back(r.score);
  return summarize(scores);
}

}  // namespace

BatchResult run_batch(int n, std::uint64_t trials, const TrialContext& ctx,
                      std::uint64_t master_seed, int threads) {
  if (trials < 2) throw std::invalid_argument("run_batch: need at least 2 trials");
  BatchResult out;
  out.records.resize(trials);
  parallel_fill(out.records, trials, threads, [&](std::uint64_t i) {
    const Instance inst = make_instance(n, master_seed, i);
    return run_trial(inst, ctx, trial_noise_seed(master_seed, i));
  });
  out.summary = summarize_records(out.records);
  return out;
}

BatchResult spoof_batch(int n, int m, std::uint64_t trials,
                        std::uint64_t master_seed, int threads) {
  if (trials < 2) throw std::invalid_argument("spoof_batch: need at least 2 trials");
  BatchResult out;
  out.records.resize(trials);
  const std::string label = "spoof:" + std::to_string(m);
  parallel_fill(out.records, trials, threads, [&](std::uint64_t i) {
    TrialRecord rec;
    rec.id = i;
    rec.n = n;
    rec.mode = label;
    rec.state_seed = child_seed(master_seed, 2 * i);
    rec.meas_seed = child_seed(master_seed, 2 * i + 1);
    rec.noise_seed = trial_noise_seed(master_seed, i);
    RandomStream state_rng(rec.state_seed);
    const StateVector psi = sample_haar_state(n, state_rng);
    RandomStream meas_rng(rec.meas_seed);
    const DenseMatrix u = sample_haar_unitary(n, meas_rng);
    RandomStream cb_rng(rec.noise_seed);
    const auto codebook = build_codebook(n, m, cb_rng);
    const SpoofOutcome so = spoof_trial(codebook, psi, u);
    rec.z = so.z;
    rec.score = so.score;
    return rec;
  });
  out.summary = summarize_records(out.records);
  return out;
}

bool verify_record(const TrialRecord& rec) {
  // a record that cannot be replayed at all is a failed verification, not an
  // error: malformed numerics and out-of-range fields all return false
  if (rec.n < 1 || rec.n > 30 || rec.z >= (std::uint64_t{1} << rec.n)) return false;
  if (rec.mode.rfind("spoof:", 0) == 0) {
    const std::string arg = rec.mode.substr(6);
    int m = 0;
    std::size_t used = 0;
    try {
      m = std::stoi(arg, &used);
    } catch (const std::exception&) {
      return false;
    }
    if (used != arg.size() || m < 0 || m > 20 || rec.n > 6) return false;
    RandomStream state_rng(rec.state_seed);
    const StateVector psi = sample_haar_state(rec.n, state_rng);
    RandomStream meas_rng(rec.meas_seed);
    const DenseMatrix u = sample_haar_unitary(rec.n, meas_rng);
    RandomStream cb_rng(rec.noise_seed);
    const auto codebook = build_codebook(rec.n, m, cb_rng);
    const SpoofOutcome so = spoof_trial(codebook, psi, u);
    return so.z == rec.z && so.score == rec.score;
  }

  Instance inst;
  inst.id = rec.id;
  inst.n = rec.n;
  inst.state_seed = rec.state_seed;
  inst.meas_seed = rec.meas_seed;
  RandomStream state_rng(rec.state_seed);
  inst.psi = sample_haar_state(rec.n, state_rng);
  RandomStream meas_rng(rec.meas_seed);
  inst.tpl = to_measurement_template(sample_stabilizer_preparation(rec.n, meas_rng));

  if (rec.mode == "ideal" || rec.mode.rfind("depolarizing:", 0) == 0) {
    TrialContext ctx;
    ctx.mode_label = rec.mode;
    if (rec.mode == "ideal") {
      ctx.kind = TrialModeKind::ideal;
    } else {
      ctx.kind = TrialModeKind::depolarizing;
      const std::string arg = rec.mode.substr(13);
      std::size_t used = 0;
      try {
        ctx.fidelity = std::stod(arg, &used);
      } catch (const std::exception&) {
        return false;
      }
      if (used != arg.size() || ctx.fidelity < 0.0 || ctx.fidelity > 1.0) return false;
    }
    const TrialRecord redo = run_trial(inst, ctx, rec.noise_seed);
    return redo.z == rec.z && redo.score == rec.score;
  }

  // ansatz and other modes: the sampled state is not reconstructible from the
  // record alone, but the score is a pure function of (seeds, z)
  const double score = xeb_score(inst.psi, inst.tpl, rec.z);
  return score == rec.score;
}

}  // namespace dxhog
