// Trial execution and scoring: Haar target + random stabilizer measurement
// per instance, XEB scores, certification, and the classical codebook
// spoofing baseline.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dxhog/rng.hpp"
#include "dxhog/stabilizer.hpp"
#include "dxhog/state.hpp"

namespace dxhog {

struct Instance {
  std::uint64_t id = 0;
  int n = 0;
  std::uint64_t state_seed = 0;
  std::uint64_t meas_seed = 0;
  StateVector psi;
  MeasurementTemplate tpl;
};

// psi from child(master, 2 index), template from child(master, 2 index + 1);
// the third child (offset 2^32 + index) is reserved for in-trial randomness
// so the mode never perturbs instance identity
Instance make_instance(int n, std::uint64_t master_seed, std::uint64_t index);
std::uint64_t trial_noise_seed(std::uint64_t master_seed, std::uint64_t index);

enum class TrialModeKind { ideal, depolarizing, ansatz };

struct TrialContext {
  TrialModeKind kind = TrialModeKind::ideal;
  double fidelity = 1.0;     // depolarizing only
  StateVector prepared;      // ansatz only: the state actually sampled from
  std::string mode_label = "ideal";  // serialized form, e.g. "depolarizing:0.427"
};

// "ideal", "depolarizing:<F>", or "ansatz:<params file>"; the ansatz variant
// loads the params file and materializes the prepared state
TrialContext make_trial_context(const std::string& mode, int n);

struct TrialRecord {
  std::uint64_t id = 0;
  int n = 0;
  std::string mode;
  std::uint64_t z = 0;
  double score = 0.0;
  std::uint64_t state_seed = 0;
  std::uint64_t meas_seed = 0;
  std::uint64_t noise_seed = 0;
};

// probability of outcome z when psi is measured in the template basis,
// scaled to a score: 2^n |<z| U_inv |psi>|^2 - 1
double xeb_score(const StateVector& target, const MeasurementTemplate& tpl,
                 std::uint64_t z);

// ideal: Born sample of the rotated target. depolarizing(F): the ideal draw
// is kept with probability F, else z is uniform (the Born draw happens first
// so F=1 replays the ideal stream exactly). ansatz: Born sample of the
// rotated prepared state. score is always against the exact target
TrialRecord run_trial(const Instance& inst, const TrialContext& ctx,
                      std::uint64_t noise_seed);

struct XebSummary {
  std::uint64_t k = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std (k-1 divisor) / sqrt(k)
};

XebSummary summarize(const std::vector<double>& scores);

struct CertifyResult {
  bool pass = false;
  double margin = 0.0;  // mean - k_sigma * stderr - target
};

CertifyResult certify(const XebSummary& s, double target_eps, double k_sigma);

// 2^m independent Haar states; n <= 6 and m <= 20 keep this desk-sized
std::vector<StateVector> build_codebook(int n, int m, RandomStream& rng);

struct SpoofOutcome {
  std::uint64_t x = 0;  // Alice's codeword index
  std::uint64_t z = 0;  // Bob's outcome
  double score = 0.0;
};

// Alice names the codeword closest to psi, Bob outputs its most likely
// outcome under the dense measurement U; scored against the true psi
SpoofOutcome spoof_trial(const std::vector<StateVector>& codebook,
                         const StateVector& psi, const DenseMatrix& u);

struct BatchResult {
  XebSummary summary;
  std::vector<TrialRecord> records;
};

// trials are computed in parallel over per-index child streams and recorded
// in index order; byte-identical output for identical seed and trial count
BatchResult run_batch(int n, std::uint64_t trials, const TrialContext& ctx,
                      std::uint64_t master_seed, int threads);

// spoof batch at dense Haar measurements: psi from child(master, 2i), U from
// child(master, 2i+1), codebook redrawn per trial from child(master, 2^32+i)
BatchResult spoof_batch(int n, int m, std::uint64_t trials,
                        std::uint64_t master_seed, int threads);

// recomputes z (where the mode permits) and the score for one record;
// returns false on any mismatch with the logged values
bool verify_record(const TrialRecord& rec);

}  // namespace dxhog
