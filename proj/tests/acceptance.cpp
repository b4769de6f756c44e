// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kahler/chern_weil.hpp"
#include "kahler/curvature.hpp"
#include "kahler/experiments.hpp"
#include "kahler/pinching.hpp"
#include "kahler/random.hpp"

using namespace kahler;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.passed) ++failures;
  std::printf("%s %d  %s: %s [%.2f s]\n", out.passed ? "PASS" : "FAIL", id, title,
              out.detail.c_str(), seconds);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

Outcome ratio_criterion(int n, const ChernIndex& i, const ChernIndex& j, double expected,
                        double time_limit) {
  const auto start = std::chrono::steady_clock::now();
  const double ratio = chern_ratio(build_r0(make_space(n)), i, j);
  const double elapsed = seconds_since(start);
  const double err = std::abs(ratio - expected);
  return {err < 1e-8 && elapsed < time_limit,
          fmt("ratio %s/%s = %.12f, |err| = %.2e, time %.3f s (limit %.0f s)", i.to_string().c_str(),
              j.to_string().c_str(), ratio, err, elapsed, time_limit)};
}

double gram_defect(const TwoPlane& p) {
  return std::max({std::abs(p.u.norm() - 1), std::abs(p.v.norm() - 1), std::abs(p.u.dot(p.v))});
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(KAHLER_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buffer[4096];
  std::size_t got;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

int main() {
  criterion(1, "Chern ratio c1^2/c2 at R0, n=2", [] {
    return ratio_criterion(2, ChernIndex({2, 0}), ChernIndex({0, 1}), 3.0, 1.0);
  });

  criterion(2, "Chern ratios c1^3/c3 and c1c2/c3 at R0, n=3", [] {
    const auto start = std::chrono::steady_clock::now();
    const Outcome a = ratio_criterion(3, ChernIndex({3, 0, 0}), ChernIndex({0, 0, 1}), 16.0, 10.0);
    const ChernIndex c1c2({1, 1, 0}), c3({0, 0, 1});
    const double oracle = complex_space_form_ratio(c1c2, c3);
    const double ratio = chern_ratio(build_r0(make_space(3)), c1c2, c3);
    const double elapsed = seconds_since(start);
    const bool ok = a.passed && oracle == 6.0 && std::abs(ratio - oracle) < 1e-8 && elapsed < 10.0;
    return Outcome{ok, a.detail + fmt("; c1c2/c3 = %.12f vs space-form %.1f", ratio, oracle)};
  });

  criterion(3, "pinch(R0) = [-1, -1/4], n in {2,3}, 64 restarts", [] {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= 3; ++n) {
      const HermitianSpace space = make_space(n);
      const CurvatureTensor r0 = build_r0(space);
      const PinchReport rep = pinch(r0, 64, 20261016);
      const double min_err = std::abs(rep.k_min + 1.0);
      const double max_err = std::abs(rep.k_max + 0.25);
      // Witnesses: orthonormal planes whose recomputed curvature matches;
      // the minimum is complex (|<v,Ju>| = 1), the maximum totally real.
      const double witness_err = std::max(std::abs(sectional(r0, rep.argmin_plane) - rep.k_min),
                                          std::abs(sectional(r0, rep.argmax_plane) - rep.k_max));
      const double frame_err = std::max(gram_defect(rep.argmin_plane), gram_defect(rep.argmax_plane));
      const double jmin = std::abs(rep.argmin_plane.v.dot(space.apply_j(rep.argmin_plane.u)));
      const double jmax = std::abs(rep.argmax_plane.v.dot(space.apply_j(rep.argmax_plane.u)));
      const bool contained = rep.envelope_lo <= rep.k_min + 1e-12 && rep.k_max <= rep.envelope_hi + 1e-12;
      ok = ok && min_err < 1e-6 && max_err < 1e-6 && witness_err < 1e-12 && frame_err < 1e-12 &&
           jmin > 1 - 1e-4 && jmax < 1e-4 && contained && rep.converged;
      detail += fmt("n=%d [%.10f, %.10f] envelope [%.4f, %.4f] |<v,Ju>| min/max %.6f/%.1e; ", n,
                    rep.k_min, rep.k_max, rep.envelope_lo, rep.envelope_hi, jmin, jmax);
    }
    const double elapsed = seconds_since(start);
    return Outcome{ok && elapsed < 30.0, detail + fmt("time %.2f s (limit 30 s)", elapsed)};
  });

  criterion(4, "identity suite on 100 random Kahler tensors per n in {2,3}", [] {
    double one = 0, recon = 0, solve = 0, idem = 0, adj = 0, fix = 0;
    for (int n = 2; n <= 3; ++n) {
      const HermitianSpace space = make_space(n);
      const CurvatureTensor r0 = build_r0(space);
      fix = std::max(fix, distance(project_kahler(r0), r0));
      for (std::uint64_t s = 0; s < 100; ++s) {
        const CurvatureTensor r = random_kahler(space, 1000 + s, 1.0);
        for (int q = 0; q < 10; ++q) {
          const auto [u, v] =
              random_orthonormal_pair(space, 100 * s + q, PairConstraint::PerpendicularToJ);
          one = std::max(one, std::abs(identity_one_residual(r, u, v)));
          const SectionalTriple t = solve_sectional_from_h(r, u, v);
          const Vector ju = space.apply_j(u), jv = space.apply_j(v);
          solve = std::max({solve, std::abs(t.k_uv - biquadratic(r, u, v)),
                            std::abs(t.k_ujv - biquadratic(r, u, jv)),
                            std::abs(t.r_ujuvjv - r.evaluate(u, ju, v, jv))});
        }
        const CurvatureTensor back = reconstruct_from_sectional(
            [&r](const Vector& a, const Vector& b) { return biquadratic(r, a, b); }, space);
        recon = std::max(recon, distance(back, r));

        // Projector checks on a raw (non-Kahler) tensor pair.
        Rng rng(derive_seed(77, s));
        const std::size_t count = r.size();
        std::vector<double> xs(count), ys(count);
        for (std::size_t i = 0; i < count; ++i) {
          xs[i] = rng.normal();
          ys[i] = rng.normal();
        }
        const CurvatureTensor x(space, xs), y(space, ys);
        const CurvatureTensor px = project_kahler(x), py = project_kahler(y);
        idem = std::max(idem, distance(project_kahler(px), px));
        double lhs = 0, rhs = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          lhs += px.entries()[i] * y.entries()[i];
          rhs += x.entries()[i] * py.entries()[i];
        }
        adj = std::max(adj, std::abs(lhs - rhs) / (x.frobenius_norm() * y.frobenius_norm()));
      }
    }
    const bool ok = one < 1e-10 && recon < 1e-10 && solve < 1e-9 && idem < 1e-10 && adj < 1e-10 &&
                    fix < 1e-12;
    return Outcome{ok, fmt("K+K-R %.1e, reconstruction %.1e, H-solve %.1e, idempotence "
                           "%.1e, self-adjoint %.1e, P(R0)-R0 %.1e",
                           one, recon, solve, idem, adj, fix)};
  });

  criterion(5, "Berger bound on 50 normalized pinched tensors; attained at R0", [] {
    double worst = -1e300;
    double alpha_lo = 1e300, alpha_hi = -1e300;
    for (int s = 0; s < 50; ++s) {
      const int n = s < 25 ? 2 : 3;
      const HermitianSpace space = make_space(n);
      const double t = 0.2 * (s % 25) / 24.0;
      const CurvatureTensor r = perturb(space, t, derive_seed(505, s));
      const PinchReport rep = pinch(r, 64, derive_seed(506, s));
      const NormalizedTensor nt = normalize_quarter(r, rep);
      const BergerReport b = berger_bound_check(nt.tensor, nt.report, 2000, derive_seed(507, s));
      worst = std::max(worst, b.max_violation);
      alpha_lo = std::min(alpha_lo, b.alpha);
      alpha_hi = std::max(alpha_hi, b.alpha);
    }
    const HermitianSpace space = make_space(2);
    const CurvatureTensor r0 = build_r0(space);
    double attained = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto [u, v] = random_orthonormal_pair(space, s, PairConstraint::PerpendicularToJ);
      attained = std::max(
          attained, std::abs(std::abs(r0.evaluate(u, space.apply_j(u), v, space.apply_j(v))) - 0.5));
    }
    const BergerReport b0 = berger_bound_check(r0, pinch(r0, 64, 1), 2000, 2);
    const bool ok = worst <= 1e-8 && attained < 1e-10 && std::abs(b0.bound - 0.5) < 1e-10 &&
                    b0.max_violation <= 1e-8;
    return Outcome{ok, fmt("alpha in [%.6f, %.6f], max violation %.2e; R0 bound %.12f, "
                           "| |R0(u,Ju,v,Jv)| - 1/2 | <= %.1e",
                           alpha_lo, alpha_hi, worst, b0.bound, attained)};
  });

  criterion(6, "default sweep trend (n=2, 5 t-values, 200 samples/t)", [] {
    const auto start = std::chrono::steady_clock::now();
    SweepConfig config;
    config.n = 2;
    config.t_values = {0.0, 0.0125, 0.025, 0.05, 0.1};
    config.samples_per_t = 200;
    config.seed = 20261016;
    const SweepResult result = sweep(config);
    const double elapsed = seconds_since(start);
    bool ok = result.aggregates.size() == 5 && result.aggregates[0].max_ratio_dev == 0.0 &&
              result.aggregates[0].max_frobenius_dist == 0.0;
    std::string detail;
    for (std::size_t i = 0; i < result.aggregates.size(); ++i) {
      const SweepAggregate& a = result.aggregates[i];
      if (i > 0) {
        const SweepAggregate& p = result.aggregates[i - 1];
        ok = ok && a.max_ratio_dev >= p.max_ratio_dev && a.max_frobenius_dist >= p.max_frobenius_dist;
      }
      detail += fmt("t=%g: ratio %.3e dist %.3e delta %.3e excl %d; ", a.t, a.max_ratio_dev,
                    a.max_frobenius_dist, a.max_delta, a.excluded);
    }
    // Small h_dev must force a small distance to R0.
    int h_violations = 0;
    for (const SweepRecord& r : result.records)
      if (r.converged && r.h_dev < 0.01 && r.frobenius_dist >= 0.5) ++h_violations;
    ok = ok && h_violations == 0 && elapsed < 600.0;
    return Outcome{ok, detail + fmt("h_dev<0.01 => dist<0.5 violations %d; time %.1f s (limit 600 s)",
                                    h_violations, elapsed)};
  });

  criterion(7, "proof constants at epsilon=0.1, n=2 with 200-sample certification", [] {
    const ConstantChain chain = proof_constants(0.1, 2);
    const bool chain_ok = chain.delta > 0.0 && chain.delta_1 == chain.eta / 4.0 &&
                          chain.delta == std::min(chain.eta / 3.0, chain.delta_1);
    const CertificationResult c = certify_constants(chain, 200, 20261016);
    const bool ok = chain_ok && c.accepted == 200 && c.counterexamples == 0;
    return Outcome{ok, fmt("eta %.6e, delta_1 %.6e, delta %.6e; accepted %d of %d attempts, max "
                           "delta %.2e, max |ratio-3| %.2e, counterexamples %d",
                           chain.eta, chain.delta_1, chain.delta, c.accepted, c.attempts,
                           c.max_delta, c.max_ratio_dev, c.counterexamples)};
  });

  criterion(8, "Chern ratios invariant under scaling and frame resampling", [] {
    double scale_err = 0.0, frame_err = 0.0;
    for (int n = 2; n <= 3; ++n) {
      const HermitianSpace space = make_space(n);
      const auto indices = enumerate_indices(n);
      for (std::uint64_t s = 0; s < 5; ++s) {
        const CurvatureTensor r = perturb(space, 0.05 * (s + 1), derive_seed(808, s));
        for (const auto& i : indices)
          for (const auto& j : indices) {
            const double base = chern_ratio(r, i, j);
            for (double lambda : {0.5, 2.0, 10.0})
              scale_err = std::max(scale_err, std::abs(chern_ratio(lambda * r, i, j) - base));
            for (std::uint64_t f = 0; f < 20; ++f) {
              const auto frame = random_unitary_frame(space, derive_seed(809, f));
              const double ratio = chern_product(r, i, frame).gamma / chern_product(r, j, frame).gamma;
              frame_err = std::max(frame_err, std::abs(ratio - base));
            }
          }
      }
    }
    return Outcome{scale_err < 1e-10 && frame_err < 1e-10,
                   fmt("max scaling change %.2e, max frame change %.2e", scale_err, frame_err)};
  });

  criterion(9, "CLI reruns produce byte-identical stdout", [] {
    const auto dir = std::filesystem::temp_directory_path() / "kahler_acceptance";
    std::filesystem::create_directories(dir);
    const std::string tensor = (dir / "r0.json").string();
    const std::string config = (dir / "sweep.json").string();
    std::ofstream(config) << R"({"n": 2, "t_values": [0, 0.05], "samples_per_t": 5, "seed": 3})";
    const std::vector<std::string> commands = {
        "r0 --n 3 --out " + tensor,
        "validate " + tensor,
        "pinch " + tensor + " --seed 11",
        "chern " + tensor + " --all",
        "identities --n 2 --samples 200 --seed 5",
        "sweep --config " + config + " --out " + (dir / "sweep.csv").string(),
        "constants --epsilon 0.1 --n 2",
        "constants --epsilon 0.1 --n 2 --certify 5 --seed 2"};
    int identical = 0;
    for (const std::string& args : commands) {
      const CliRun a = run_cli(args);
      const CliRun b = run_cli(args);
      if (a.code == 0 && b.code == 0 && a.out == b.out && !a.out.empty()) ++identical;
    }
    std::filesystem::remove_all(dir);
    return Outcome{identical == static_cast<int>(commands.size()),
                   fmt("%d of %zu commands byte-identical with exit 0", identical, commands.size())};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
