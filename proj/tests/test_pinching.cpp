#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kahler/error.hpp"
#include "kahler/pinching.hpp"
#include "kahler/random.hpp"

using namespace kahler;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected kahler::Error");
  return ErrorCode::Io;
}

double gram_sectional(const CurvatureTensor& r, const Vector& u, const Vector& v) {
  return r.evaluate(u, v, u, v) / (u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2));
}

}  // namespace

TEST_CASE("curvature operator Rayleigh quotient equals K on orthonormal pairs") {
  const HermitianSpace space = make_space(3);
  const CurvatureTensor r = random_kahler(space, 5, 1.0);
  const Matrix op = curvature_operator(r);
  CHECK((op - op.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [u, v] = random_orthonormal_pair(space, seed, PairConstraint::None);
    CHECK(sectional_gradient(op, u, v).value == doctest::Approx(sectional(r, {u, v})).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients agree with central differences") {
  const HermitianSpace space = make_space(2);
  const CurvatureTensor r = random_kahler(space, 11, 1.0);
  const Matrix op = curvature_operator(r);
  const double h = 1e-6;
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    const Vector u = rng.normal_vector(4), v = rng.normal_vector(4);
    const SectionalGradient g = sectional_gradient(op, u, v);
    const HolomorphicGradient hg = holomorphic_gradient(space, op, u);
    for (int i = 0; i < 4; ++i) {
      const Vector e = h * Vector::Unit(4, i);
      const double du = (gram_sectional(r, u + e, v) - gram_sectional(r, u - e, v)) / (2 * h);
      const double dv = (gram_sectional(r, u, v + e) - gram_sectional(r, u, v - e)) / (2 * h);
      auto hval = [&](const Vector& x) { return r.evaluate(x, space.apply_j(x), x, space.apply_j(x)) / std::pow(x.squaredNorm(), 2); };
      const double dh = (hval(u + e) - hval(u - e)) / (2 * h);
      CHECK(g.grad_u(i) == doctest::Approx(du).epsilon(1e-5).scale(1.0));
      CHECK(g.grad_v(i) == doctest::Approx(dv).epsilon(1e-5).scale(1.0));
      CHECK(hg.grad(i) == doctest::Approx(dh).epsilon(1e-5).scale(1.0));
    }
    CHECK(hg.value == doctest::Approx(holomorphic_sectional(r, u)).epsilon(1e-12));
  }
}

TEST_CASE("operator envelope brackets sectional curvature") {
  const HermitianSpace space = make_space(2);
  const CurvatureTensor r0 = build_r0(space);
  const Envelope e0 = curvature_operator_envelope(r0);
  CHECK(e0.lo <= -1.0 + 1e-12);
  CHECK(e0.hi >= -0.25 - 1e-12);
  const Envelope e3 = curvature_operator_envelope(3.0 * r0);
  CHECK(e3.lo == doctest::Approx(3 * e0.lo));
  CHECK(e3.hi == doctest::Approx(3 * e0.hi));
  const Envelope z = curvature_operator_envelope(CurvatureTensor(space));
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);
  const CurvatureTensor r = random_kahler(space, 8, 1.0);
  const Envelope er = curvature_operator_envelope(r);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto [u, v] = random_orthonormal_pair(space, seed, PairConstraint::None);
    const double k = sectional(r, {u, v});
    CHECK(k >= er.lo - 1e-12);
    CHECK(k <= er.hi + 1e-12);
  }
}

TEST_CASE("pinch on R0 finds [-1, -1/4] with the expected witnesses") {
  for (int n = 2; n <= 3; ++n) {
    const HermitianSpace space = make_space(n);
    const CurvatureTensor r0 = build_r0(space);
    const PinchReport rep = pinch(r0, default_restarts(n), 7);
    CHECK(rep.converged);
    CHECK(rep.k_min == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(rep.k_max == doctest::Approx(-0.25).epsilon(1e-6));
    const Vector& u_max = rep.argmax_plane.u;
    const Vector& v_max = rep.argmax_plane.v;
    CHECK(std::abs(v_max.dot(space.apply_j(u_max))) < 1e-4);
    const Vector& u_min = rep.argmin_plane.u;
    const Vector& v_min = rep.argmin_plane.v;
    CHECK(std::abs(v_min.dot(space.apply_j(u_min))) > 1 - 1e-4);
    CHECK(rep.envelope_lo <= rep.k_min + 1e-9);
    CHECK(rep.envelope_hi >= rep.k_max - 1e-9);
  }
  const HermitianSpace s2 = make_space(2);
  const PinchReport four = pinch(4.0 * build_r0(s2), 64, 1);
  CHECK(four.k_min == doctest::Approx(-4.0).epsilon(1e-6));
  CHECK(four.k_max == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("pinch for n = 1 has a single plane") {
  const HermitianSpace space = make_space(1);
  const PinchReport rep = pinch(build_r0(space), 8, 0);
  CHECK(rep.k_min == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rep.k_max == doctest::Approx(rep.k_min).epsilon(1e-12));
  CHECK(rep.converged);
}

TEST_CASE("pinch: determinism, restart monotonicity, scale equivariance") {
  const HermitianSpace space = make_space(2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CurvatureTensor r = random_kahler(space, seed, 1.0);
    const PinchReport a = pinch(r, 16, 42);
    const PinchReport b = pinch(r, 16, 42);
    CHECK(a.k_min == b.k_min);
    CHECK(a.k_max == b.k_max);
    const PinchReport more = pinch(r, 64, 42);
    CHECK(more.k_min <= a.k_min + 1e-12);
    CHECK(more.k_max >= a.k_max - 1e-12);
    const PinchReport scaled = pinch(2.5 * r, 16, 42);
    CHECK(scaled.k_min == doctest::Approx(2.5 * a.k_min).epsilon(1e-8));
    CHECK(scaled.k_max == doctest::Approx(2.5 * a.k_max).epsilon(1e-8));
    CHECK(sectional(r, a.argmin_plane) == doctest::Approx(a.k_min).epsilon(1e-12));
  }
  CHECK(code_of([&] { pinch(build_r0(space), 0, 1); }) == ErrorCode::Precondition);
  CurvatureTensor bad(space);
  bad.at(0, 1, 2, 3) = 1.0;
  CHECK(code_of([&] { pinch(bad, 4, 1); }) == ErrorCode::Precondition);
}

TEST_CASE("pinch of a random tensor is bracketed by sampling and envelope") {
  const HermitianSpace space = make_space(3);
  const CurvatureTensor r = random_kahler(space, 99, 1.0);
  const PinchReport rep = pinch(r, default_restarts(3), 5);
  CHECK(rep.converged);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto [u, v] = random_orthonormal_pair(space, seed, PairConstraint::None);
    const double k = sectional(r, {u, v});
    CHECK(k >= rep.k_min - 1e-9);
    CHECK(k <= rep.k_max + 1e-9);
  }
  CHECK(rep.envelope_lo <= rep.k_min + 1e-9);
  CHECK(rep.envelope_hi >= rep.k_max - 1e-9);
}

TEST_CASE("holomorphic extremes") {
  const HermitianSpace space = make_space(2);
  const CurvatureTensor r0 = build_r0(space);
  const HolReport h0 = hol_extremes(r0, 16, 1);
  CHECK(h0.h_min == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(h0.h_max == doctest::Approx(-1.0).epsilon(1e-10));
  const HolReport h2 = hol_extremes(2.0 * r0, 16, 1);
  CHECK(h2.h_min == doctest::Approx(-2.0).epsilon(1e-10));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CurvatureTensor r = random_kahler(space, seed, 1.0);
    const HolReport h = hol_extremes(r, 64, 3);
    const PinchReport p = pinch(r, 64, 3);
    CHECK(h.converged);
    CHECK(h.h_min >= p.k_min - 1e-8);
    CHECK(h.h_max <= p.k_max + 1e-8);
    CHECK(holomorphic_sectional(r, h.argmin_u) == doctest::Approx(h.h_min).epsilon(1e-12));
  }
}

TEST_CASE("Berger bound check") {
  const HermitianSpace space = make_space(2);
  const CurvatureTensor r0 = build_r0(space);
  const PinchReport rep = pinch(r0, 64, 2);
  const BergerReport b = berger_bound_check(r0, rep, 400, 4);
  CHECK(b.alpha == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.bound == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(b.max_violation <= 1e-6);
  CHECK(b.max_abs_component == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(b.samples == 400);
  CHECK(code_of([] {
          const HermitianSpace s1 = make_space(1);
          const CurvatureTensor r = build_r0(s1);
          berger_bound_check(r, pinch(r, 4, 0), 10, 0);
        }) == ErrorCode::DimensionTooSmall);
}

TEST_CASE("normalize_quarter") {
  const HermitianSpace space = make_space(2);
  const CurvatureTensor r0 = build_r0(space);
  const NormalizedTensor n0 = normalize_quarter(4.0 * r0, pinch(4.0 * r0, 64, 1));
  CHECK(n0.scale == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(n0.report.k_max == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(std::abs(n0.delta) < 1e-6);
  CHECK_FALSE(n0.anomaly);
  CHECK(distance(n0.tensor, r0) < 1e-5);

  const CurvatureTensor neg = -1.0 * r0;
  CHECK(code_of([&] { normalize_quarter(neg, pinch(neg, 16, 1)); }) ==
        ErrorCode::NotNegativelyCurved);
}
