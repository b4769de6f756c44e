#include "kahler/identity_suite.hpp"

#include <algorithm>
#include <cmath>

#include "kahler/curvature.hpp"
#include "kahler/error.hpp"
#include "kahler/parallel.hpp"
#include "kahler/pinching.hpp"
#include "kahler/random.hpp"

namespace kahler {

namespace {

double inner(const CurvatureTensor& a, const CurvatureTensor& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a.entries()[i] * b.entries()[i];
  return sum;
}

CurvatureTensor gaussian_tensor(const HermitianSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> entries(static_cast<std::size_t>(std::pow(space.dim(), 4)));
  for (double& e : entries) e = rng.normal();
  return CurvatureTensor(space, std::move(entries));
}

struct SampleResiduals {
  double identity_one = 0.0;
  double polarization_real = 0.0;
  double printed = 0.0;
  double fitted = 0.0;
  double reconstruction = 0.0;
  double solve_from_h = 0.0;
  double idempotence = 0.0;
  double self_adjoint = 0.0;
};

}  // namespace

IdentityReport run_identity_suite(int n, int samples, std::uint64_t seed, double tolerance) {
  const HermitianSpace space = make_space(n);
  if (n < 2) fail(ErrorCode::DimensionTooSmall, "identity suite needs n >= 2");
  if (samples < 1) fail(ErrorCode::Precondition, "identity suite needs samples >= 1");

  IdentityReport report;
  report.n = n;
  report.samples = samples;
  report.tolerance = tolerance;
  report.fitted_coefficient =
      fit_second_polarization_coefficient(space, std::max(samples, 8), derive_seed(seed, 1u << 20));

  std::vector<SampleResiduals> residuals(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t s) {
    const std::uint64_t sample_seed = derive_seed(seed, s);
    const CurvatureTensor r = random_kahler(space, derive_seed(sample_seed, 0), 1.0);
    const auto [u, v] =
        random_orthonormal_pair(space, derive_seed(sample_seed, 1), PairConstraint::PerpendicularToJ);
    Rng rng(derive_seed(sample_seed, 2));
    const double a = 0.1 + 0.8 * rng.uniform();
    SampleResiduals& out = residuals[s];

    out.identity_one = std::abs(identity_one_residual(r, u, v));
    out.polarization_real = std::abs(polarization_residual_real(r, u, v, a));
    out.printed =
        std::abs(polarization_residual_complex(r, u, v, a, kPrintedSecondPolarizationCoefficient));
    out.fitted = std::abs(polarization_residual_complex(r, u, v, a, report.fitted_coefficient));

    const CurvatureTensor rebuilt = reconstruct_from_sectional(
        [&r](const Vector& x, const Vector& y) { return biquadratic(r, x, y); }, space);
    out.reconstruction = distance(rebuilt, r);

    const SectionalTriple solved = solve_sectional_from_h(r, u, v);
    const Vector ju = space.apply_j(u);
    const Vector jv = space.apply_j(v);
    out.solve_from_h = std::max({std::abs(solved.k_uv - biquadratic(r, u, v)),
                                 std::abs(solved.k_ujv - biquadratic(r, u, jv)),
                                 std::abs(solved.r_ujuvjv - r.evaluate(u, ju, v, jv))});

    const CurvatureTensor t1 = gaussian_tensor(space, derive_seed(sample_seed, 3));
    const CurvatureTensor t2 = gaussian_tensor(space, derive_seed(sample_seed, 4));
    const CurvatureTensor p1 = project_kahler(t1);
    out.idempotence = distance(project_kahler(p1), p1) / std::max(p1.frobenius_norm(), 1.0);
    out.self_adjoint = std::abs(inner(p1, t2) - inner(t1, project_kahler(t2))) /
                       (t1.frobenius_norm() * t2.frobenius_norm());
  });

  for (const auto& r : residuals) {
    report.identity_one = std::max(report.identity_one, r.identity_one);
    report.polarization_real = std::max(report.polarization_real, r.polarization_real);
    report.polarization_complex_printed = std::max(report.polarization_complex_printed, r.printed);
    report.polarization_complex_fitted = std::max(report.polarization_complex_fitted, r.fitted);
    report.reconstruction = std::max(report.reconstruction, r.reconstruction);
    report.solve_from_h = std::max(report.solve_from_h, r.solve_from_h);
    report.projector_idempotence = std::max(report.projector_idempotence, r.idempotence);
    report.projector_self_adjoint = std::max(report.projector_self_adjoint, r.self_adjoint);
  }
  report.suspected_typo = report.polarization_complex_printed > tolerance;

  const CurvatureTensor r0 = build_r0(space);
  report.projector_fixes_r0 = distance(project_kahler(r0), r0);
  PinchReport exact;
  exact.k_min = -1.0;
  exact.k_max = -0.25;
  const BergerReport berger = berger_bound_check(r0, exact, std::max(samples, 2), derive_seed(seed, 1u << 21));
  report.berger_r0_violation = std::max(0.0, berger.max_violation);
  const auto [u, v] = random_orthonormal_pair(space, derive_seed(seed, 1u << 22),
                                              PairConstraint::PerpendicularToJ);
  report.berger_r0_attained =
      std::abs(std::abs(r0.evaluate(u, space.apply_j(u), v, space.apply_j(v))) - 0.5);

  report.passed = report.identity_one <= tolerance && report.polarization_real <= tolerance &&
                  report.polarization_complex_fitted <= tolerance &&
                  report.reconstruction <= tolerance && report.solve_from_h <= tolerance &&
                  report.projector_idempotence <= tolerance &&
                  report.projector_self_adjoint <= tolerance &&
                  report.projector_fixes_r0 <= tolerance && report.berger_r0_violation <= tolerance &&
                  report.berger_r0_attained <= tolerance;
  return report;
}

}  // namespace kahler
