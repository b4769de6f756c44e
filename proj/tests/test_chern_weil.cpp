#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kahler/chern_weil.hpp"
#include "kahler/error.hpp"

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

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Coefficient c with f = c * g, checked to hold entrywise.
double proportionality(const AlternatingForm& f, const AlternatingForm& g) {
  std::size_t slot = 0;
  for (std::size_t s = 0; s < g.size(); ++s)
    if (std::abs(g[s]) > std::abs(g[slot])) slot = s;
  const double c = f[slot] / g[slot];
  CHECK((f - c * g).max_abs() < 1e-12 * std::max(1.0, f.max_abs()));
  return c;
}

CurvatureTensor near_r0(const HermitianSpace& space, std::uint64_t seed, double size) {
  return build_r0(space) + random_kahler(space, seed, size);
}

}  // namespace

TEST_CASE("c_0 = 1 and degrees") {
  const HermitianSpace space = make_space(3);
  const ChernForms cf = chern_forms(random_kahler(space, 1, 1.0), standard_unitary_frame(space));
  REQUIRE(cf.forms.size() == 4);
  CHECK(cf.forms[0].degree() == 0);
  CHECK(cf.forms[0][0] == 1.0);
  for (int k = 1; k <= 3; ++k) CHECK(cf.forms[k].degree() == 2 * k);
  CHECK(code_of([&] { chern_form(build_r0(space), 4, standard_unitary_frame(space)); }) ==
        ErrorCode::IndexError);
}

TEST_CASE("c_1 equals -(1/2pi) sum_a R(., ., f_a, J f_a)") {
  for (int n = 1; n <= 3; ++n) {
    const HermitianSpace space = make_space(n);
    const CurvatureTensor r = random_kahler(space, 40 + n, 1.0);
    const auto frame = random_unitary_frame(space, 3);
    const AlternatingForm c1 = chern_form(r, 1, frame);
    for (int i = 0; i < space.dim(); ++i)
      for (int j = i + 1; j < space.dim(); ++j) {
        const Vector ei = Vector::Unit(space.dim(), i), ej = Vector::Unit(space.dim(), j);
        double expected = 0.0;
        for (const Vector& f : frame) expected += r.evaluate(ei, ej, f, space.apply_j(f));
        expected /= -2.0 * std::numbers::pi;
        const Vector args[2] = {ei, ej};
        CHECK(c1.evaluate(args) == doctest::Approx(expected).epsilon(1e-12).scale(1e-12));
      }
  }
  // n = 1, R0: c_1(e_0, e_1) = -R(e_0,e_1,e_0,e_1)/(2 pi) = 1/(2 pi).
  const HermitianSpace s1 = make_space(1);
  const AlternatingForm c1 = chern_form(build_r0(s1), 1, standard_unitary_frame(s1));
  const Vector args[2] = {Vector::Unit(2, 0), Vector::Unit(2, 1)};
  CHECK(c1.evaluate(args) == doctest::Approx(0.5 / std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("c_k(R0) = C(n+1, k) mu^k omega^k") {
  for (int n = 1; n <= 4; ++n) {
    const HermitianSpace space = make_space(n);
    const ChernForms cf = chern_forms(build_r0(space), standard_unitary_frame(space));
    const AlternatingForm omega = kahler_form(space);
    const double mu = proportionality(cf.forms[1], omega) / (n + 1);
    for (int k = 2; k <= n; ++k) {
      const double c = proportionality(cf.forms[k], power(omega, k));
      CHECK(c == doctest::Approx(binomial(n + 1, k) * std::pow(mu, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("homogeneity: c_k(lambda R) = lambda^k c_k(R)") {
  const HermitianSpace space = make_space(3);
  const CurvatureTensor r = random_kahler(space, 7, 1.0);
  const auto frame = standard_unitary_frame(space);
  const ChernForms base = chern_forms(r, frame);
  for (double lambda : {0.5, 2.0, -3.0}) {
    const ChernForms scaled = chern_forms(lambda * r, frame);
    for (int k = 0; k <= 3; ++k) {
      const AlternatingForm diff = scaled.forms[k] - std::pow(lambda, k) * base.forms[k];
      CHECK(diff.max_abs() < 1e-12 * std::max(1.0, scaled.forms[k].max_abs()));
    }
  }
  const ChernForms zero = chern_forms(CurvatureTensor(space), frame);
  for (int k = 1; k <= 3; ++k) CHECK(zero.forms[k].max_abs() == 0.0);
}

TEST_CASE("frame independence, reality, skew-Hermitian curvature matrix") {
  for (int n = 2; n <= 3; ++n) {
    const HermitianSpace space = make_space(n);
    for (std::uint64_t t = 0; t < 3; ++t) {
      const CurvatureTensor r = random_kahler(space, 100 + t, 1.0);
      const ChernForms ref = chern_forms(r, standard_unitary_frame(space));
      double worst = 0.0, residue = ref.imaginary_residue;
      for (std::uint64_t s = 0; s < 20; ++s) {
        const auto frame = random_unitary_frame(space, s);
        const ChernForms cf = chern_forms(r, frame);
        residue = std::max(residue, cf.imaginary_residue);
        for (int k = 1; k <= n; ++k) worst = std::max(worst, (cf.forms[k] - ref.forms[k]).max_abs());
        if (s < 3) CHECK(curvature_matrix(r, frame).skew_hermitian_defect() < 1e-12);
      }
      CHECK(worst < 1e-10);
      CHECK(residue < 1e-12);
    }
  }
  const HermitianSpace space = make_space(2);
  std::vector<Vector> bad = standard_unitary_frame(space);
  bad[1] = bad[0];
  CHECK(code_of([&] { curvature_matrix(build_r0(space), bad); }) == ErrorCode::Precondition);
}

TEST_CASE("space-form ratios: 3 for n = 2; 16 and 6 for n = 3") {
  CHECK(chern_ratio(build_r0(make_space(2)), ChernIndex({2, 0}), ChernIndex({0, 1})) ==
        doctest::Approx(3.0).epsilon(1e-10));
  const CurvatureTensor r3 = build_r0(make_space(3));
  CHECK(chern_ratio(r3, ChernIndex({3, 0, 0}), ChernIndex({0, 0, 1})) ==
        doctest::Approx(16.0).epsilon(1e-10));
  CHECK(chern_ratio(r3, ChernIndex({1, 1, 0}), ChernIndex({0, 0, 1})) ==
        doctest::Approx(6.0).epsilon(1e-10));
  CHECK(complex_space_form_ratio(ChernIndex({1, 1, 0}), ChernIndex({0, 0, 1})) == 6.0);
  CHECK(complex_space_form_ratio(ChernIndex({4, 0, 0, 0}), ChernIndex({0, 0, 0, 1})) == 125.0);
}

TEST_CASE("every ratio at R0 matches the space-form formula, n <= 4") {
  for (int n = 1; n <= 4; ++n) {
    const auto indices = enumerate_indices(n);
    const CurvatureTensor r0 = build_r0(make_space(n));
    for (const auto& i : indices)
      for (const auto& j : indices)
        CHECK(chern_ratio(r0, i, j) ==
              doctest::Approx(complex_space_form_ratio(i, j)).epsilon(1e-10));
  }
}

TEST_CASE("ratio invariance under scaling, ratio with itself") {
  const HermitianSpace space = make_space(3);
  const CurvatureTensor r = near_r0(space, 9, 0.3);
  const auto indices = enumerate_indices(3);
  for (const auto& i : indices)
    for (const auto& j : indices) {
      const double base = chern_ratio(r, i, j);
      for (double lambda : {0.5, 2.0, 10.0})
        CHECK(std::abs(chern_ratio(lambda * r, i, j) - base) < 1e-10 * std::max(1.0, std::abs(base)));
      if (i == j) CHECK(base == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("degenerate denominator") {
  const HermitianSpace space = make_space(2);
  CHECK(code_of([&] { chern_ratio(CurvatureTensor(space), ChernIndex({2, 0}), ChernIndex({0, 1})); }) ==
        ErrorCode::DegenerateDenominator);
}

TEST_CASE("ChernIndex validation, parsing and enumeration") {
  CHECK(code_of([] { ChernIndex({1, 1}); }) == ErrorCode::IndexError);
  CHECK(code_of([] { ChernIndex({-1, 1, 1}); }) == ErrorCode::IndexError);
  CHECK(code_of([] { ChernIndex::parse("2,x"); }) == ErrorCode::IndexError);
  CHECK(ChernIndex::parse("1,1,0") == ChernIndex({1, 1, 0}));
  CHECK(ChernIndex({1, 1, 0}).to_string() == "1,1,0");

  const auto two = enumerate_indices(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == ChernIndex({2, 0}));
  CHECK(two[1] == ChernIndex({0, 1}));
  const auto three = enumerate_indices(3);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == ChernIndex({3, 0, 0}));
  CHECK(three[1] == ChernIndex({1, 1, 0}));
  CHECK(three[2] == ChernIndex({0, 0, 1}));
  CHECK(enumerate_indices(4).size() == 5);
  CHECK(enumerate_indices(5).size() == 7);
}

TEST_CASE("reference constants agree with direct computation and are nonzero") {
  for (int n = 1; n <= 4; ++n) {
    const auto& table = reference_constants(n);
    const auto indices = enumerate_indices(n);
    REQUIRE(table.size() == indices.size());
    const CurvatureTensor r0 = build_r0(make_space(n));
    for (std::size_t i = 0; i < table.size(); ++i) {
      CHECK(table[i].index == indices[i]);
      CHECK(std::abs(table[i].gamma) > 0.0);
      CHECK(chern_product(r0, indices[i]).gamma == doctest::Approx(table[i].gamma).epsilon(1e-12));
    }
    CHECK(&reference_constants(n) == &table);
  }
}

TEST_CASE("continuity at R0: |gamma(R) - gamma(R0)| <= C |R - R0|") {
  for (int n = 2; n <= 3; ++n) {
    const HermitianSpace space = make_space(n);
    for (const auto& index : enumerate_indices(n)) {
      const double g0 = chern_product(build_r0(space), index).gamma;
      double fitted = 0.0;
      for (std::uint64_t s = 0; s < 30; ++s) {
        const CurvatureTensor r = near_r0(space, s, 0.001 + 0.009 * (s % 10) / 9.0);
        fitted = std::max(fitted, std::abs(chern_product(r, index).gamma - g0) /
                                      distance(r, build_r0(space)));
      }
      const double c = 1.5 * fitted;
      MESSAGE("n=" << n << " I=" << index.to_string() << " C=" << c);
      for (std::uint64_t s = 1000; s < 1030; ++s) {
        const CurvatureTensor r = near_r0(space, s, 0.0099);
        CHECK(std::abs(chern_product(r, index).gamma - g0) <= c * distance(r, build_r0(space)));
      }
    }
  }
}
