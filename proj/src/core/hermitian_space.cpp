#include "kahler/hermitian_space.hpp"

#include <cmath>
#include <string>

#include "kahler/error.hpp"
#include "kahler/random.hpp"

namespace kahler {

namespace {

// Removes the components of v along every vector in `basis` (assumed
// orthonormal) and normalizes. Two passes for stability.
bool orthonormalize_against(Vector& v, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) v -= b.dot(v) * b;
  const double norm = v.norm();
  if (norm < 1e-8) return false;
  v /= norm;
  return true;
}

}  // namespace

HermitianSpace::HermitianSpace(int n) : n_(n) {
  const int d = 2 * n;
  j_ = Matrix::Zero(d, d);
  for (int a = 0; a < n; ++a) {
    j_(2 * a + 1, 2 * a) = 1.0;
    j_(2 * a, 2 * a + 1) = -1.0;
  }
  metric_ = Matrix::Identity(d, d);
}

HermitianSpace make_space(int n) {
  if (n < 1 || n > kMaxComplexDimension)
    fail(ErrorCode::InvalidDimension,
         "complex dimension must be in [1, " + std::to_string(kMaxComplexDimension) +
             "], got " + std::to_string(n));
  return HermitianSpace(n);
}

Vector HermitianSpace::apply_j(const Vector& v) const {
  Vector out(dim());
  for (int a = 0; a < n_; ++a) {
    out[2 * a] = -v[2 * a + 1];
    out[2 * a + 1] = v[2 * a];
  }
  return out;
}

double HermitianSpace::omega(const Vector& u, const Vector& v) const {
  return u.dot(apply_j(v));
}

std::vector<Vector> random_unitary_frame(const HermitianSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> frame;
  std::vector<Vector> real_basis;
  while (static_cast<int>(frame.size()) < space.n()) {
    Vector f = rng.normal_vector(space.dim());
    if (!orthonormalize_against(f, real_basis)) continue;
    frame.push_back(f);
    real_basis.push_back(f);
    real_basis.push_back(space.apply_j(f));
  }
  return frame;
}

std::vector<Vector> standard_unitary_frame(const HermitianSpace& space) {
  std::vector<Vector> frame;
  for (int a = 0; a < space.n(); ++a) frame.push_back(Vector::Unit(space.dim(), 2 * a));
  return frame;
}

double unitary_frame_defect(const HermitianSpace& space, const std::vector<Vector>& frame) {
  if (static_cast<int>(frame.size()) != space.n()) return INFINITY;
  Matrix basis(space.dim(), space.dim());
  for (int a = 0; a < space.n(); ++a) {
    if (frame[a].size() != space.dim()) return INFINITY;
    basis.col(2 * a) = frame[a];
    basis.col(2 * a + 1) = space.apply_j(frame[a]);
  }
  const Matrix gram = basis.transpose() * basis;
  return (gram - Matrix::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff();
}

std::pair<Vector, Vector> random_orthonormal_pair(const HermitianSpace& space,
                                                  std::uint64_t seed,
                                                  PairConstraint constraint) {
  if (constraint == PairConstraint::PerpendicularToJ && space.n() < 2)
    fail(ErrorCode::DimensionTooSmall,
         "an orthonormal set {u, Ju, v, Jv} needs complex dimension >= 2");
  Rng rng(seed);
  Vector u = rng.normal_vector(space.dim());
  while (!orthonormalize_against(u, {})) u = rng.normal_vector(space.dim());

  std::vector<Vector> against{u};
  if (constraint == PairConstraint::PerpendicularToJ) against.push_back(space.apply_j(u));
  Vector v = rng.normal_vector(space.dim());
  while (!orthonormalize_against(v, against)) v = rng.normal_vector(space.dim());
  return {u, v};
}

Vector random_unit_vector(const HermitianSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  Vector u = rng.normal_vector(space.dim());
  while (!orthonormalize_against(u, {})) u = rng.normal_vector(space.dim());
  return u;
}

}  // namespace kahler
