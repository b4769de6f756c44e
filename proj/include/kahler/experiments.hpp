#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kahler/chern_weil.hpp"
#include "kahler/curvature.hpp"
#include "kahler/pinching.hpp"

namespace kahler {

// R = project_kahler(R0 + t S), S = random_kahler(seed, norm 1); t = 0 gives R0.
CurvatureTensor perturb(const HermitianSpace& space, double t, std::uint64_t seed);

struct SweepConfig {
  int n = 2;
  std::vector<double> t_values;
  int samples_per_t = 1;
  std::uint64_t seed = 0;
  int restarts = 0;  // 0: default_restarts(n)
};

// JSON object with fields n, t_values, samples_per_t, seed and optional restarts.
SweepConfig parse_sweep_config(const std::string& text);

// Values below this magnitude are reported as exact zeros in sweep records.
inline constexpr double kSweepZeroFloor = 1e-13;

struct SweepRecord {
  double t = 0.0;
  std::uint64_t seed = 0;
  double delta = 0.0;           // pinching defect after normalization
  double frobenius_dist = 0.0;  // |R_normalized - R0|
  double h_dev = 0.0;           // max(|h_min + 1|, |h_max + 1|) of R_normalized
  std::vector<double> ratio_devs;  // per index pair, |ratio(R) - ratio(R0)|
  bool converged = false;
  bool anomaly = false;

  double ratio_dev_max() const;
};

struct SweepAggregate {
  double t = 0.0;
  int included = 0;
  int excluded = 0;
  double max_delta = 0.0;
  double max_frobenius_dist = 0.0;
  double max_h_dev = 0.0;
  double max_ratio_dev = 0.0;
};

struct SweepResult {
  std::vector<std::pair<ChernIndex, ChernIndex>> index_pairs;
  std::vector<SweepRecord> records;       // t ascending, then seed
  std::vector<SweepAggregate> aggregates; // one per distinct t, ascending
  int excluded = 0;
};

// Unordered pairs (I, J), I before J in enumerate_indices order.
std::vector<std::pair<ChernIndex, ChernIndex>> index_pairs(int n);

// Sample s at every t uses seed derive_seed(config.seed, s), so each sample
// is a fixed direction S scanned across t. Non-converged records are kept
// but excluded from the aggregates; more than 5% exclusions throws
// NotConverged.
SweepResult sweep(const SweepConfig& config);

struct ConstantChain {
  double epsilon = 0.0;
  int n = 0;
  double coefficient_bound = 0.0;  // |R(x,y,z,t) diff| <= bound * max |H diff|
  double eta = 0.0;
  double delta_1 = 0.0;
  double delta = 0.0;
  double epsilon_1 = 0.0;
};

// Explicit constants of the pinching-to-Chern-ratio argument:
//   eta     = epsilon / ((2n)^4 * coefficient_bound)
//   delta_1 = eta / 4      (from (2/3)(3/4 + delta_1) <= 1/2 + eta/6)
//   delta   = min(eta / 3, delta_1)
//   epsilon_1 = sup of e with (a - e)/(b + e) > a/b - epsilon and
//               (a + e)/(b - e) < a/b + epsilon over all index pairs, using
//               |a|, |b| from reference_constants(n).
ConstantChain proof_constants(double epsilon, int n);

struct CertificationResult {
  int accepted = 0;
  int attempts = 0;
  int counterexamples = 0;
  double max_delta = 0.0;
  double max_ratio_dev = 0.0;
};

// Draws perturbed tensors whose certified pinching defect is below
// chain.delta and counts those with some |ratio - ratio(R0)| >= epsilon.
CertificationResult certify_constants(const ConstantChain& chain, int samples, std::uint64_t seed,
                                      int restarts = 0);

// Header t,seed,delta,frobenius_dist,h_dev,ratio_dev_max,converged and one
// row per record, floats at 17 significant digits. Throws Precondition on
// empty input.
std::string emit_csv(std::vector<SweepRecord> records);

}  // namespace kahler
