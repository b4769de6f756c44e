#include "kahler/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "kahler/error.hpp"
#include "kahler/parallel.hpp"
#include "kahler/random.hpp"

namespace kahler {

namespace {

int pair_count(int d) { return d * (d - 1) / 2; }

Vector bivector(const Vector& u, const Vector& v) {
  const int d = static_cast<int>(u.size());
  Vector b(pair_count(d));
  int s = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) b[s++] = u[i] * v[j] - u[j] * v[i];
  return b;
}

// Antisymmetric d x d matrix carrying a bivector-space vector.
Matrix antisymmetric_from(const Vector& w, int d) {
  Matrix out = Matrix::Zero(d, d);
  int s = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      out(i, j) = w[s];
      out(j, i) = -w[s];
      ++s;
    }
  return out;
}

struct PlaneState {
  Vector u;
  Vector v;
};

bool orthonormalize(PlaneState& p) {
  const double nu = p.u.norm();
  if (nu == 0.0) return false;
  p.u /= nu;
  p.v -= p.u.dot(p.v) * p.u;
  p.v -= p.u.dot(p.v) * p.u;
  const double nv = p.v.norm();
  if (nv < 1e-12) return false;
  p.v /= nv;
  return true;
}

struct RestartResult {
  double value = 0.0;
  PlaneState plane;
};

// Orthonormal basis of the complement of span(cols).
Matrix complement_basis(const Matrix& cols) {
  const Eigen::HouseholderQR<Matrix> qr(cols);
  const Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), cols.rows());
  return q.rightCols(cols.rows() - cols.cols());
}

// A local chart around the current point: value and gradient of the
// objective as a function of m chart coordinates, zero at the center.
struct ChartEval {
  double value = 0.0;
  Vector grad;
};

// One safeguarded Newton step of sign * f in chart coordinates. The Hessian
// comes from central differences of the analytic gradient; its eigenvalues
// are replaced by -max(|lambda|, floor) so the direction always ascends.
// Returns the accepted chart displacement, or an empty vector when no
// backtracked step improves the objective.
template <typename Eval>
Vector newton_step(const Eval& eval, const ChartEval& here, double sign) {
  const int m = static_cast<int>(here.grad.size());
  const double h = 1e-5;
  Matrix hess(m, m);
  for (int k = 0; k < m; ++k) {
    Vector e = Vector::Zero(m);
    e[k] = h;
    hess.col(k) = sign * (eval(e).grad - eval(-e).grad) / (2 * h);
  }
  hess = 0.5 * (hess + hess.transpose());
  const Vector g = sign * here.grad;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(hess);
  const double floor = 1e-8 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  Vector dir = Vector::Zero(m);
  for (int k = 0; k < m; ++k) {
    const Vector vk = eig.eigenvectors().col(k);
    dir += vk * (vk.dot(g) / std::max(std::abs(eig.eigenvalues()[k]), floor));
  }
  const double slope = g.dot(dir);
  if (!(slope > 0.0)) return {};
  for (double t = 1.0; t > 1e-12; t *= 0.5) {
    const ChartEval trial = eval(t * dir);
    const double gain = sign * (trial.value - here.value);
    if (gain > 0.0 && gain >= 1e-4 * t * slope) return t * dir;
  }
  return {};
}

RestartResult optimize_plane(const Matrix& op, PlaneState start, double sign,
                             const OptimizerSettings& settings) {
  PlaneState x = std::move(start);
  orthonormalize(x);
  const int d = static_cast<int>(x.u.size());
  double value = sectional_gradient(op, x.u, x.v).value;
  if (d == 2) return {value, std::move(x)};
  for (int it = 0; it < settings.max_iterations; ++it) {
    Matrix span(d, 2);
    span << x.u, x.v;
    const Matrix basis = complement_basis(span);
    const int c = d - 2;
    auto eval = [&](const Vector& a) {
      const SectionalGradient g =
          sectional_gradient(op, x.u + basis * a.head(c), x.v + basis * a.tail(c));
      ChartEval out;
      out.value = g.value;
      out.grad.resize(2 * c);
      out.grad << basis.transpose() * g.grad_u, basis.transpose() * g.grad_v;
      return out;
    };
    const ChartEval here = eval(Vector::Zero(2 * c));
    value = here.value;
    if (here.grad.norm() < settings.gradient_tolerance) break;
    const Vector step = newton_step(eval, here, sign);
    if (step.size() == 0) break;  // stalled at rounding level
    PlaneState next{x.u + basis * step.head(c), x.v + basis * step.tail(c)};
    if (!orthonormalize(next)) break;
    x = std::move(next);
    value = sectional_gradient(op, x.u, x.v).value;
  }
  return {value, std::move(x)};
}

RestartResult optimize_sphere(const HermitianSpace& space, const Matrix& op, Vector u, double sign,
                              const OptimizerSettings& settings) {
  u.normalize();
  const int d = static_cast<int>(u.size());
  double value = holomorphic_gradient(space, op, u).value;
  if (d == 2) return {value, {u, Vector()}};
  for (int it = 0; it < settings.max_iterations; ++it) {
    const Matrix basis = complement_basis(u);
    auto eval = [&](const Vector& a) {
      const HolomorphicGradient g = holomorphic_gradient(space, op, u + basis * a);
      return ChartEval{g.value, basis.transpose() * g.grad};
    };
    const ChartEval here = eval(Vector::Zero(d - 1));
    value = here.value;
    if (here.grad.norm() < settings.gradient_tolerance) break;
    const Vector step = newton_step(eval, here, sign);
    if (step.size() == 0) break;
    u = (u + basis * step).normalized();
    value = holomorphic_gradient(space, op, u).value;
  }
  return {value, {u, Vector()}};
}

// Best value with lowest-index tie-breaking, and whether the best
// ceil(10%) restart values agree within tolerance.
struct Reduction {
  std::size_t best = 0;
  bool stable = false;
};

Reduction reduce(const std::vector<RestartResult>& results, double sign, double tolerance) {
  Reduction out;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (sign * results[i].value > sign * results[out.best].value) out.best = i;
  std::vector<double> values;
  for (const auto& r : results) values.push_back(sign * r.value);
  std::sort(values.begin(), values.end(), std::greater<>());
  const std::size_t top = std::max<std::size_t>(1, (values.size() + 9) / 10);
  const double spread = values.front() - values[top - 1];
  out.stable = spread <= tolerance * std::max(1.0, std::abs(values.front()));
  return out;
}

void require_restarts(int restarts) {
  if (restarts < 1) fail(ErrorCode::Precondition, "at least one restart is required");
}

}  // namespace

Matrix curvature_operator(const CurvatureTensor& r) {
  const int d = r.dim();
  const int p = pair_count(d);
  Matrix op(p, p);
  int a = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++a) {
      int b = 0;
      for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l, ++b) op(a, b) = r(i, j, k, l);
    }
  return op;
}

Envelope curvature_operator_envelope(const CurvatureTensor& r) {
  const Matrix op = curvature_operator(r);
  const Matrix sym = 0.5 * (op + op.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
}

int default_restarts(int n) { return n <= 3 ? 64 : 256; }

SectionalGradient sectional_gradient(const Matrix& curvature_op, const Vector& u, const Vector& v) {
  const int d = static_cast<int>(u.size());
  const Vector b = bivector(u, v);
  const Vector mb = curvature_op * b;
  const Matrix w = antisymmetric_from(mb, d);
  const double numerator = b.dot(mb);
  const double uu = u.squaredNorm();
  const double vv = v.squaredNorm();
  const double uv = u.dot(v);
  const double gram = uu * vv - uv * uv;
  if (!(gram > 0.0)) fail(ErrorCode::DegeneratePlane, "vectors do not span a 2-plane");
  SectionalGradient out;
  out.value = numerator / gram;
  const Vector grad_num_u = 2.0 * (w * v);
  const Vector grad_num_v = -2.0 * (w * u);
  const Vector grad_gram_u = 2.0 * vv * u - 2.0 * uv * v;
  const Vector grad_gram_v = 2.0 * uu * v - 2.0 * uv * u;
  out.grad_u = (grad_num_u - out.value * grad_gram_u) / gram;
  out.grad_v = (grad_num_v - out.value * grad_gram_v) / gram;
  return out;
}

HolomorphicGradient holomorphic_gradient(const HermitianSpace& space, const Matrix& curvature_op,
                                         const Vector& u) {
  const int d = space.dim();
  const Vector ju = space.apply_j(u);
  const Vector b = bivector(u, ju);
  const Vector mb = curvature_op * b;
  const Matrix w = antisymmetric_from(mb, d);
  const double h = b.dot(mb);
  const double norm2 = u.squaredNorm();
  if (!(norm2 > 0.0)) fail(ErrorCode::DegeneratePlane, "zero vector");
  // d/du N(u, Ju) = grad_u N + J^T grad_v N = 2 W Ju + 2 J W u.
  const Vector grad_h = 2.0 * (w * ju) + 2.0 * space.apply_j(w * u);
  HolomorphicGradient out;
  out.value = h / (norm2 * norm2);
  out.grad = grad_h / (norm2 * norm2) - 4.0 * h * u / (norm2 * norm2 * norm2);
  return out;
}

PinchReport pinch(const CurvatureTensor& r, int restarts, std::uint64_t seed,
                  const OptimizerSettings& settings) {
  require_restarts(restarts);
  const CurvatureTensor tensor = ensure_kahler(r);
  const HermitianSpace& space = tensor.space();
  const Matrix op = curvature_operator(tensor);

  std::vector<RestartResult> minima(restarts);
  std::vector<RestartResult> maxima(restarts);
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t i) {
    auto [u, v] = random_orthonormal_pair(space, derive_seed(seed, i), PairConstraint::None);
    PlaneState start{u, v};
    minima[i] = optimize_plane(op, start, -1.0, settings);
    maxima[i] = optimize_plane(op, start, 1.0, settings);
  });

  const Reduction lo = reduce(minima, -1.0, settings.stability_tolerance);
  const Reduction hi = reduce(maxima, 1.0, settings.stability_tolerance);
  const Envelope envelope = curvature_operator_envelope(tensor);

  PinchReport report;
  report.argmin_plane = {minima[lo.best].plane.u, minima[lo.best].plane.v};
  report.argmax_plane = {maxima[hi.best].plane.u, maxima[hi.best].plane.v};
  report.k_min = sectional(tensor, report.argmin_plane);
  report.k_max = sectional(tensor, report.argmax_plane);
  report.envelope_lo = envelope.lo;
  report.envelope_hi = envelope.hi;
  report.restarts = restarts;
  const double slack = 1e-9 * std::max(1.0, std::abs(envelope.lo) + std::abs(envelope.hi));
  const bool sandwiched =
      envelope.lo - slack <= report.k_min && report.k_max <= envelope.hi + slack;
  report.converged = lo.stable && hi.stable && sandwiched;
  return report;
}

HolReport hol_extremes(const CurvatureTensor& r, int restarts, std::uint64_t seed,
                       const OptimizerSettings& settings) {
  require_restarts(restarts);
  const CurvatureTensor tensor = ensure_kahler(r);
  const HermitianSpace& space = tensor.space();
  const Matrix op = curvature_operator(tensor);

  std::vector<RestartResult> minima(restarts);
  std::vector<RestartResult> maxima(restarts);
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t i) {
    const Vector start = random_unit_vector(space, derive_seed(seed, i));
    minima[i] = optimize_sphere(space, op, start, -1.0, settings);
    maxima[i] = optimize_sphere(space, op, start, 1.0, settings);
  });

  const Reduction lo = reduce(minima, -1.0, settings.stability_tolerance);
  const Reduction hi = reduce(maxima, 1.0, settings.stability_tolerance);
  HolReport report;
  report.argmin_u = minima[lo.best].plane.u;
  report.argmax_u = maxima[hi.best].plane.u;
  report.h_min = holomorphic_sectional(tensor, report.argmin_u);
  report.h_max = holomorphic_sectional(tensor, report.argmax_u);
  report.restarts = restarts;
  report.converged = lo.stable && hi.stable;
  return report;
}

BergerReport berger_bound_check(const CurvatureTensor& r, const PinchReport& report, int samples,
                                std::uint64_t seed) {
  const HermitianSpace& space = r.space();
  if (space.n() < 2)
    fail(ErrorCode::DimensionTooSmall, "an orthonormal quadruple needs real dimension >= 4");
  BergerReport out;
  out.alpha = -report.k_min;
  out.bound = (2.0 / 3.0) * (out.alpha - 0.25);
  out.samples = samples;
  out.max_violation = -out.bound;
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t sample_seed = derive_seed(seed, s);
    Matrix frame(space.dim(), 4);
    if (s % 2 == 0) {
      const auto [u, v] = random_orthonormal_pair(space, sample_seed, PairConstraint::PerpendicularToJ);
      frame << u, space.apply_j(u), v, space.apply_j(v);
    } else {
      Rng rng(sample_seed);
      Matrix gaussian(space.dim(), 4);
      for (int c = 0; c < 4; ++c) gaussian.col(c) = rng.normal_vector(space.dim());
      const Eigen::HouseholderQR<Matrix> qr(gaussian);
      frame = qr.householderQ() * Matrix::Identity(space.dim(), 4);
    }
    const double component =
        std::abs(r.evaluate(frame.col(0), frame.col(1), frame.col(2), frame.col(3)));
    out.max_abs_component = std::max(out.max_abs_component, component);
    out.max_violation = std::max(out.max_violation, component - out.bound);
  }
  return out;
}

NormalizedTensor normalize_quarter(const CurvatureTensor& r, const PinchReport& report) {
  if (!(report.k_max < 0.0))
    fail(ErrorCode::NotNegativelyCurved, "normalization needs k_max < 0");
  const double scale = -1.0 / (4.0 * report.k_max);
  NormalizedTensor out{scale * r, report, scale, 0.0, false};
  out.report.k_min *= scale;
  out.report.k_max *= scale;
  out.report.envelope_lo *= scale;
  out.report.envelope_hi *= scale;
  out.delta = -out.report.k_min - 1.0;
  out.anomaly = out.delta < -1e-9;
  return out;
}

}  // namespace kahler
