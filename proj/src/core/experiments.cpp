#include "kahler/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "json.hpp"

#include "kahler/error.hpp"
#include "kahler/parallel.hpp"
#include "kahler/random.hpp"

namespace kahler {

namespace {

double chop(double x) { return std::abs(x) < kSweepZeroFloor ? 0.0 : x; }

std::vector<double> reference_ratios(int n,
                                     const std::vector<std::pair<ChernIndex, ChernIndex>>& pairs) {
  const auto& table = reference_constants(n);
  auto gamma = [&](const ChernIndex& index) {
    for (const auto& d : table)
      if (d.index == index) return d.gamma;
    fail(ErrorCode::IndexError, "index missing from reference table");
  };
  std::vector<double> out;
  for (const auto& [i, j] : pairs) out.push_back(gamma(i) / gamma(j));
  return out;
}

std::vector<double> ratio_deviations(const CurvatureTensor& r,
                                     const std::vector<std::pair<ChernIndex, ChernIndex>>& pairs,
                                     const std::vector<double>& reference) {
  std::vector<double> out;
  for (std::size_t p = 0; p < pairs.size(); ++p)
    out.push_back(chop(std::abs(chern_ratio(r, pairs[p].first, pairs[p].second) - reference[p])));
  return out;
}

int resolve_restarts(int restarts, int n) { return restarts > 0 ? restarts : default_restarts(n); }

}  // namespace

CurvatureTensor perturb(const HermitianSpace& space, double t, std::uint64_t seed) {
  if (!(t >= 0.0)) fail(ErrorCode::Precondition, "perturbation size must be >= 0");
  CurvatureTensor r0 = build_r0(space);
  if (t == 0.0) return r0;
  const CurvatureTensor direction = random_kahler(space, seed, 1.0);
  return project_kahler(r0 + t * direction);
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig config;
  try {
    const auto json = nlohmann::json::parse(text);
    config.n = json.at("n").get<int>();
    config.t_values = json.at("t_values").get<std::vector<double>>();
    config.samples_per_t = json.at("samples_per_t").get<int>();
    config.seed = json.at("seed").get<std::uint64_t>();
    if (json.contains("restarts")) config.restarts = json.at("restarts").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("bad sweep config: ") + e.what());
  }
  if (config.t_values.empty()) fail(ErrorCode::Parse, "sweep config needs at least one t value");
  for (double t : config.t_values)
    if (!(t >= 0.0)) fail(ErrorCode::Parse, "sweep t values must be >= 0");
  if (config.samples_per_t < 1) fail(ErrorCode::Parse, "samples_per_t must be >= 1");
  if (config.restarts < 0) fail(ErrorCode::Parse, "restarts must be >= 0");
  return config;
}

double SweepRecord::ratio_dev_max() const {
  double m = 0.0;
  for (double d : ratio_devs) m = std::max(m, d);
  return m;
}

std::vector<std::pair<ChernIndex, ChernIndex>> index_pairs(int n) {
  const auto indices = enumerate_indices(n);
  std::vector<std::pair<ChernIndex, ChernIndex>> out;
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = a + 1; b < indices.size(); ++b) out.emplace_back(indices[a], indices[b]);
  return out;
}

SweepResult sweep(const SweepConfig& config) {
  const HermitianSpace space = make_space(config.n);
  if (config.samples_per_t < 1) fail(ErrorCode::Precondition, "samples_per_t must be >= 1");
  for (double t : config.t_values)
    if (!(t >= 0.0)) fail(ErrorCode::Precondition, "sweep t values must be >= 0");
  const int restarts = resolve_restarts(config.restarts, config.n);

  SweepResult result;
  result.index_pairs = index_pairs(config.n);
  const std::vector<double> reference = reference_ratios(config.n, result.index_pairs);
  const CurvatureTensor r0 = build_r0(space);

  const std::size_t samples = static_cast<std::size_t>(config.samples_per_t);
  result.records.resize(config.t_values.size() * samples);
  parallel_for(result.records.size(), [&](std::size_t task) {
    const double t = config.t_values[task / samples];
    const std::uint64_t sample_seed = derive_seed(config.seed, task % samples);
    const CurvatureTensor r = perturb(space, t, sample_seed);
    const PinchReport report = pinch(r, restarts, derive_seed(sample_seed, 1));
    const NormalizedTensor normalized = normalize_quarter(r, report);
    const HolReport hol = hol_extremes(normalized.tensor, restarts, derive_seed(sample_seed, 2));

    SweepRecord& record = result.records[task];
    record.t = t;
    record.seed = sample_seed;
    record.delta = chop(normalized.delta);
    record.frobenius_dist = chop(distance(normalized.tensor, r0));
    record.h_dev = chop(std::max(std::abs(hol.h_min + 1.0), std::abs(hol.h_max + 1.0)));
    record.ratio_devs = ratio_deviations(r, result.index_pairs, reference);
    record.converged = report.converged && hol.converged;
    record.anomaly = normalized.anomaly;
  });

  std::stable_sort(result.records.begin(), result.records.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.t != b.t ? a.t < b.t : a.seed < b.seed;
                   });

  std::map<double, SweepAggregate> by_t;
  for (const SweepRecord& record : result.records) {
    SweepAggregate& agg = by_t[record.t];
    agg.t = record.t;
    if (!record.converged) {
      ++agg.excluded;
      ++result.excluded;
      continue;
    }
    ++agg.included;
    agg.max_delta = std::max(agg.max_delta, record.delta);
    agg.max_frobenius_dist = std::max(agg.max_frobenius_dist, record.frobenius_dist);
    agg.max_h_dev = std::max(agg.max_h_dev, record.h_dev);
    agg.max_ratio_dev = std::max(agg.max_ratio_dev, record.ratio_dev_max());
  }
  for (const auto& [t, agg] : by_t) result.aggregates.push_back(agg);

  if (result.excluded * 20 > static_cast<int>(result.records.size()))
    fail(ErrorCode::NotConverged, std::to_string(result.excluded) + " of " +
                                      std::to_string(result.records.size()) +
                                      " sweep samples did not converge (limit 5%)");
  return result;
}

ConstantChain proof_constants(double epsilon, int n) {
  if (!(epsilon > 0.0)) fail(ErrorCode::Precondition, "epsilon must be > 0");
  if (n < 2) fail(ErrorCode::Precondition, "proof constants need n >= 2");
  make_space(n);

  ConstantChain chain;
  chain.epsilon = epsilon;
  chain.n = n;

  // R(x,y,z,t) = (1/24) sum of 8 signed K(x+-z, y+-t); each argument pair has
  // |x+-z|^2 |y+-t|^2 = 4 for orthonormal x,y,z,t, and each unit K is a fixed
  // combination of six H-values.
  const Eigen::Matrix<double, 3, 6> coefficients = sectional_from_h_coefficients();
  const double k_from_h = coefficients.row(0).cwiseAbs().sum();
  chain.coefficient_bound = (8.0 / 24.0) * 4.0 * k_from_h;
  chain.eta = epsilon / (std::pow(2.0 * n, 4) * chain.coefficient_bound);
  chain.delta_1 = chain.eta / 4.0;
  chain.delta = std::min(chain.eta / 3.0, chain.delta_1);

  const auto& table = reference_constants(n);
  chain.epsilon_1 = std::numeric_limits<double>::infinity();
  for (const auto& numerator : table)
    for (const auto& denominator : table) {
      if (numerator.index == denominator.index) continue;
      const double a = std::abs(numerator.gamma);
      const double b = std::abs(denominator.gamma);
      // The upper inequality binds: e < epsilon b / (1 + a/b + epsilon).
      chain.epsilon_1 = std::min(chain.epsilon_1, epsilon * b / (1.0 + a / b + epsilon));
    }
  return chain;
}

CertificationResult certify_constants(const ConstantChain& chain, int samples, std::uint64_t seed,
                                      int restarts) {
  const HermitianSpace space = make_space(chain.n);
  restarts = resolve_restarts(restarts, chain.n);
  const auto pairs = index_pairs(chain.n);
  const std::vector<double> reference = reference_ratios(chain.n, pairs);

  struct Outcome {
    bool accepted = false;
    int attempts = 0;
    double delta = 0.0;
    double ratio_dev = 0.0;
  };
  std::vector<Outcome> outcomes(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t s) {
    const std::uint64_t sample_seed = derive_seed(seed, s);
    Rng rng(derive_seed(sample_seed, 3));
    double t = chain.delta * (0.05 + 0.95 * rng.uniform());
    Outcome& out = outcomes[s];
    for (int halving = 0; halving < 30 && !out.accepted; ++halving, t *= 0.5) {
      ++out.attempts;
      const CurvatureTensor r = perturb(space, t, sample_seed);
      const PinchReport report = pinch(r, restarts, derive_seed(sample_seed, 1));
      if (!report.converged) continue;
      const NormalizedTensor normalized = normalize_quarter(r, report);
      if (normalized.delta >= chain.delta) continue;
      out.accepted = true;
      out.delta = normalized.delta;
      for (double dev : ratio_deviations(r, pairs, reference))
        out.ratio_dev = std::max(out.ratio_dev, dev);
    }
  });

  CertificationResult result;
  for (const Outcome& out : outcomes) {
    result.attempts += out.attempts;
    if (!out.accepted) continue;
    ++result.accepted;
    result.max_delta = std::max(result.max_delta, out.delta);
    result.max_ratio_dev = std::max(result.max_ratio_dev, out.ratio_dev);
    if (out.ratio_dev >= chain.epsilon) ++result.counterexamples;
  }
  return result;
}

std::string emit_csv(std::vector<SweepRecord> records) {
  if (records.empty()) fail(ErrorCode::Precondition, "no sweep records to emit");
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.t != b.t ? a.t < b.t : a.seed < b.seed;
  });
  auto number = [](double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return std::string(buffer);
  };
  std::string out = "t,seed,delta,frobenius_dist,h_dev,ratio_dev_max,converged\n";
  for (const SweepRecord& r : records) {
    out += number(r.t) + ',' + std::to_string(r.seed) + ',' + number(r.delta) + ',' +
           number(r.frobenius_dist) + ',' + number(r.h_dev) + ',' + number(r.ratio_dev_max()) +
           ',' + (r.converged ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace kahler
