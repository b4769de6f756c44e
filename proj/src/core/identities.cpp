#include <cmath>

#include <Eigen/LU>

#include "kahler/curvature.hpp"
#include "kahler/error.hpp"
#include "kahler/random.hpp"

namespace kahler {

void require_unitary_pair(const HermitianSpace& space, const Vector& u, const Vector& v,
                          double tol) {
  if (space.n() < 2)
    fail(ErrorCode::DimensionTooSmall, "{u, Ju, v, Jv} needs complex dimension >= 2");
  if (u.size() != space.dim() || v.size() != space.dim())
    fail(ErrorCode::SpaceMismatch, "vector length differs from the space dimension");
  Matrix frame(space.dim(), 4);
  frame << u, space.apply_j(u), v, space.apply_j(v);
  const Matrix gram = frame.transpose() * frame;
  if ((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > tol)
    fail(ErrorCode::Precondition, "{u, Ju, v, Jv} is not orthonormal");
}

double identity_one_residual(const CurvatureTensor& r, const Vector& u, const Vector& v) {
  require_unitary_pair(r.space(), u, v);
  const Vector ju = r.space().apply_j(u);
  const Vector jv = r.space().apply_j(v);
  return biquadratic(r, u, v) + biquadratic(r, u, jv) - r.evaluate(u, ju, v, jv);
}

CurvatureTensor reconstruct_from_sectional(const BiquadraticOracle& k, const HermitianSpace& space) {
  const int d = space.dim();
  CurvatureTensor out(space);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          const Vector x = Vector::Unit(d, i);
          const Vector y = Vector::Unit(d, j);
          const Vector z = Vector::Unit(d, p);
          const Vector t = Vector::Unit(d, q);
          const double sum = k(x + z, y + t) + k(x - z, y - t) - k(x + z, y - t) -
                             k(x - z, y + t) - k(x + t, y + z) - k(x - t, y - z) +
                             k(x + t, y - z) + k(x - t, y + z);
          out.at(i, j, p, q) = sum / 24.0;
        }
  return out;
}

namespace {

double raw_h(const CurvatureTensor& r, const Vector& x) {
  const Vector jx = r.space().apply_j(x);
  return r.evaluate(x, jx, x, jx);
}

}  // namespace

double polarization_residual_real(const CurvatureTensor& r, const Vector& u, const Vector& v,
                                  double a) {
  require_unitary_pair(r.space(), u, v);
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  const Vector ju = r.space().apply_j(u);
  const Vector jv = r.space().apply_j(v);
  const double a2b2 = a * a * b * b;
  const double lhs = raw_h(r, a * u + b * v) + raw_h(r, a * u - b * v);
  const double rhs = 2 * std::pow(a, 4) * raw_h(r, u) + 2 * std::pow(b, 4) * raw_h(r, v) +
                     12 * a2b2 * r.evaluate(u, ju, v, jv) - 8 * a2b2 * biquadratic(r, u, v);
  return lhs - rhs;
}

double polarization_residual_complex(const CurvatureTensor& r, const Vector& u, const Vector& v,
                                     double a, double coefficient) {
  require_unitary_pair(r.space(), u, v);
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  const Vector ju = r.space().apply_j(u);
  const Vector jv = r.space().apply_j(v);
  const double a2b2 = a * a * b * b;
  const double lhs = raw_h(r, a * u + b * jv) + raw_h(r, a * u - b * jv);
  const double rhs = 2 * std::pow(a, 4) * raw_h(r, u) + 2 * std::pow(b, 4) * raw_h(r, v) +
                     12 * a2b2 * r.evaluate(u, ju, v, jv) -
                     coefficient * a2b2 * biquadratic(r, u, jv);
  return lhs - rhs;
}

double fit_second_polarization_coefficient(const HermitianSpace& space, int samples,
                                           std::uint64_t seed) {
  // residual(c) = residual(0) + c * slope, slope = a^2 b^2 K(u,Jv).
  double numerator = 0.0;
  double denominator = 0.0;
  for (int s = 0; s < samples; ++s) {
    const std::uint64_t sample_seed = derive_seed(seed, s);
    const CurvatureTensor r = random_kahler(space, derive_seed(sample_seed, 0), 1.0);
    const auto [u, v] =
        random_orthonormal_pair(space, derive_seed(sample_seed, 1), PairConstraint::PerpendicularToJ);
    Rng rng(derive_seed(sample_seed, 2));
    const double a = 0.1 + 0.8 * rng.uniform();
    const double b2 = 1.0 - a * a;
    const double slope = a * a * b2 * biquadratic(r, u, r.space().apply_j(v));
    const double base = polarization_residual_complex(r, u, v, a, 0.0);
    numerator += base * slope;
    denominator += slope * slope;
  }
  if (denominator == 0.0) fail(ErrorCode::IdentityInconsistency, "no information to fit");
  return -numerator / denominator;
}

std::array<double, 6> holomorphic_samples(const CurvatureTensor& r, const Vector& u,
                                          const Vector& v) {
  const Vector jv = r.space().apply_j(v);
  const double s = 1.0 / std::sqrt(2.0);
  return {raw_h(r, u),           raw_h(r, v),           raw_h(r, s * (u + v)),
          raw_h(r, s * (u - v)), raw_h(r, s * (u + jv)), raw_h(r, s * (u - jv))};
}

Eigen::Matrix<double, 3, 6> sectional_from_h_coefficients(double coefficient) {
  // Unknowns x = (K(u,v), K(u,Jv), R(u,Ju,v,Jv)); at a = b = 1/sqrt2 the
  // identities read  S1 - (H(u)+H(v))/2 = -2 K(u,v) + 3 X,
  //                  S2 - (H(u)+H(v))/2 = -(c/4) K(u,Jv) + 3 X,
  // and K(u,v) + K(u,Jv) = R(u,Ju,v,Jv) gives K(u,v) + K(u,Jv) - X = 0.
  Eigen::Matrix3d system;
  system << -2.0, 0.0, 3.0,
            0.0, -coefficient / 4.0, 3.0,
            1.0, 1.0, -1.0;
  Eigen::Matrix<double, 3, 6> rhs;
  rhs << -0.5, -0.5, 1.0, 1.0, 0.0, 0.0,
         -0.5, -0.5, 0.0, 0.0, 1.0, 1.0,
          0.0,  0.0, 0.0, 0.0, 0.0, 0.0;
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(system);
  if (!lu.isInvertible())
    fail(ErrorCode::IdentityInconsistency, "polarization system is singular");
  return lu.solve(rhs);
}

SectionalTriple solve_sectional_from_h(const CurvatureTensor& r, const Vector& u, const Vector& v,
                                       double coefficient) {
  require_unitary_pair(r.space(), u, v);
  const auto h = holomorphic_samples(r, u, v);
  const Eigen::Matrix<double, 6, 1> values(h.data());
  const Eigen::Vector3d x = sectional_from_h_coefficients(coefficient) * values;
  return {x[0], x[1], x[2]};
}

}  // namespace kahler
