#include "kahler/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kahler/error.hpp"
#include "kahler/random.hpp"

namespace kahler {

double SymmetryCertificate::max_residual() const {
  return std::max({antisymmetry, pair_symmetry, bianchi, j_invariance});
}

CurvatureTensor::CurvatureTensor(const HermitianSpace& space)
    : space_(space), entries_(static_cast<std::size_t>(std::pow(space.dim(), 4)), 0.0) {}

CurvatureTensor::CurvatureTensor(const HermitianSpace& space, std::vector<double> entries)
    : space_(space), entries_(std::move(entries)) {
  const auto expected = static_cast<std::size_t>(std::pow(space.dim(), 4));
  if (entries_.size() != expected)
    fail(ErrorCode::IndexError, "expected " + std::to_string(expected) + " tensor entries, got " +
                                    std::to_string(entries_.size()));
  for (double e : entries_)
    if (!std::isfinite(e)) fail(ErrorCode::Precondition, "tensor entries must be finite");
}

double& CurvatureTensor::at(int i, int j, int k, int l) {
  certificate_.reset();
  return entries_[offset(i, j, k, l)];
}

double CurvatureTensor::evaluate(const Vector& x, const Vector& y, const Vector& z,
                                 const Vector& w) const {
  const int d = dim();
  double total = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double xy = x[i] * y[j];
      for (int k = 0; k < d; ++k) {
        const double xyz = xy * z[k];
        double inner = 0.0;
        for (int l = 0; l < d; ++l) inner += entries_[idx++] * w[l];
        total += xyz * inner;
      }
    }
  return total;
}

double CurvatureTensor::frobenius_norm() const {
  double sum = 0.0;
  for (double e : entries_) sum += e * e;
  return std::sqrt(sum);
}

bool CurvatureTensor::attach_certificate(const SymmetryCertificate& cert) {
  if (!cert.passed) return false;
  certificate_ = cert;
  return true;
}

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& other) {
  if (!(space_ == other.space_)) fail(ErrorCode::SpaceMismatch, "tensors on different spaces");
  for (std::size_t s = 0; s < entries_.size(); ++s) entries_[s] += other.entries_[s];
  certificate_.reset();
  return *this;
}

CurvatureTensor& CurvatureTensor::operator-=(const CurvatureTensor& other) {
  if (!(space_ == other.space_)) fail(ErrorCode::SpaceMismatch, "tensors on different spaces");
  for (std::size_t s = 0; s < entries_.size(); ++s) entries_[s] -= other.entries_[s];
  certificate_.reset();
  return *this;
}

// Conditions (1)-(4) are homogeneous: residuals and tolerance scale together.
CurvatureTensor& CurvatureTensor::operator*=(double scalar) {
  for (double& e : entries_) e *= scalar;
  if (certificate_) {
    const double s = std::abs(scalar);
    certificate_->antisymmetry *= s;
    certificate_->pair_symmetry *= s;
    certificate_->bianchi *= s;
    certificate_->j_invariance *= s;
    certificate_->tolerance *= s;
  }
  return *this;
}

CurvatureTensor build_r0(const HermitianSpace& space) {
  const int d = space.dim();
  const Matrix& jm = space.j_matrix();
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  // <e_a, J e_b> = J(a, b).
  CurvatureTensor r(space);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double minus_four_r = delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k) +
                                      jm(i, k) * jm(j, l) - jm(i, l) * jm(j, k) +
                                      2.0 * jm(i, j) * jm(k, l);
          r.at(i, j, k, l) = -0.25 * minus_four_r;
        }
  r.attach_certificate(check_kahler(r, kSymmetryTolerance));
  return r;
}

SymmetryCertificate check_kahler(const CurvatureTensor& r, double tol) {
  const HermitianSpace& space = r.space();
  const int d = space.dim();
  SymmetryCertificate cert;
  cert.tolerance = tol;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double x = r(i, j, k, l);
          cert.antisymmetry = std::max({cert.antisymmetry, std::abs(x + r(j, i, k, l)),
                                        std::abs(x + r(i, j, l, k))});
          cert.pair_symmetry = std::max(cert.pair_symmetry, std::abs(r(k, l, i, j) - x));
          cert.bianchi =
              std::max(cert.bianchi, std::abs(x + r(i, l, j, k) + r(i, k, l, j)));
          const double front = space.j_sign(i) * space.j_sign(j) *
                               r(space.j_target(i), space.j_target(j), k, l);
          const double back = space.j_sign(k) * space.j_sign(l) *
                              r(i, j, space.j_target(k), space.j_target(l));
          cert.j_invariance =
              std::max({cert.j_invariance, std::abs(front - x), std::abs(back - x)});
        }
  cert.passed = cert.max_residual() <= tol;
  return cert;
}

CurvatureTensor ensure_kahler(CurvatureTensor r) {
  if (r.is_certified()) return r;
  const double tol = kSymmetryTolerance * std::max(r.frobenius_norm(), 1e-300);
  const SymmetryCertificate cert = check_kahler(r, tol);
  if (!r.attach_certificate(cert))
    fail(ErrorCode::Precondition,
         "tensor is not a Kahler curvature tensor (max symmetry residual " +
             std::to_string(cert.max_residual()) + ")");
  return r;
}

CurvatureTensor random_kahler(const HermitianSpace& space, std::uint64_t seed,
                              double frobenius_norm) {
  if (!(frobenius_norm > 0.0))
    fail(ErrorCode::Precondition, "random_kahler needs a positive target norm");
  Rng rng(seed);
  CurvatureTensor raw(space);
  for (int i = 0; i < space.dim(); ++i)
    for (int j = 0; j < space.dim(); ++j)
      for (int k = 0; k < space.dim(); ++k)
        for (int l = 0; l < space.dim(); ++l) raw.at(i, j, k, l) = rng.normal();
  CurvatureTensor projected = project_kahler(raw);
  const double norm = projected.frobenius_norm();
  if (norm < 1e-12) fail(ErrorCode::DegenerateSample, "projected sample vanished; use another seed");
  projected *= frobenius_norm / norm;
  return projected;
}

double distance(const CurvatureTensor& r, const CurvatureTensor& s) {
  if (!(r.space() == s.space())) fail(ErrorCode::SpaceMismatch, "tensors on different spaces");
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double diff = r.entries()[i] - s.entries()[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double biquadratic(const CurvatureTensor& r, const Vector& a, const Vector& b) {
  return r.evaluate(a, b, a, b);
}

double sectional(const CurvatureTensor& r, const TwoPlane& plane) {
  const double gram = plane.gram_determinant();
  const double scale = plane.u.squaredNorm() * plane.v.squaredNorm();
  if (!(gram > 1e-12 * scale) || scale == 0.0)
    fail(ErrorCode::DegeneratePlane, "vectors do not span a 2-plane");
  return biquadratic(r, plane.u, plane.v) / gram;
}

double holomorphic_sectional(const CurvatureTensor& r, const Vector& u) {
  const double norm2 = u.squaredNorm();
  if (!(norm2 > 0.0)) fail(ErrorCode::DegeneratePlane, "holomorphic sectional of the zero vector");
  const Vector ju = r.space().apply_j(u);
  return r.evaluate(u, ju, u, ju) / (norm2 * norm2);
}

}  // namespace kahler
