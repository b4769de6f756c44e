#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kahler/hermitian_space.hpp"

namespace kahler {

// Max residual of each defining condition, by exhaustive basis enumeration:
//   (1) R(X,Y,Z,W) = -R(Y,X,Z,W) = -R(X,Y,W,Z)
//   (2) R(Z,W,X,Y) = R(X,Y,Z,W)
//   (3) R(X,Y,Z,W) + R(X,W,Y,Z) + R(X,Z,W,Y) = 0   (first Bianchi)
//   (4) R(JX,JY,Z,W) = R(X,Y,JZ,JW) = R(X,Y,Z,W)
struct SymmetryCertificate {
  double antisymmetry = 0.0;
  double pair_symmetry = 0.0;
  double bianchi = 0.0;
  double j_invariance = 0.0;
  double tolerance = 0.0;
  bool passed = false;

  double max_residual() const;
};

// Dense rank-4 coefficient table R[i][j][k][l] over the standard basis,
// row-major with l fastest.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(const HermitianSpace& space);
  CurvatureTensor(const HermitianSpace& space, std::vector<double> entries);

  const HermitianSpace& space() const { return space_; }
  int dim() const { return space_.dim(); }

  std::span<const double> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::size_t offset(int i, int j, int k, int l) const {
    const std::size_t d = static_cast<std::size_t>(space_.dim());
    return ((i * d + j) * d + k) * d + l;
  }
  double operator()(int i, int j, int k, int l) const { return entries_[offset(i, j, k, l)]; }
  // Mutable access drops any attached certificate.
  double& at(int i, int j, int k, int l);

  double evaluate(const Vector& x, const Vector& y, const Vector& z, const Vector& w) const;
  double frobenius_norm() const;

  const std::optional<SymmetryCertificate>& certificate() const { return certificate_; }
  bool is_certified() const { return certificate_.has_value(); }
  // Attaches `cert` when it passed; returns whether it did.
  bool attach_certificate(const SymmetryCertificate& cert);

  CurvatureTensor& operator+=(const CurvatureTensor& other);
  CurvatureTensor& operator-=(const CurvatureTensor& other);
  CurvatureTensor& operator*=(double scalar);

  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) { return a += b; }
  friend CurvatureTensor operator-(CurvatureTensor a, const CurvatureTensor& b) { return a -= b; }
  friend CurvatureTensor operator*(double s, CurvatureTensor a) { return a *= s; }

 private:
  HermitianSpace space_;
  std::vector<double> entries_;
  std::optional<SymmetryCertificate> certificate_;
};

// Default symmetry tolerance, relative to the Frobenius norm.
inline constexpr double kSymmetryTolerance = 1e-9;

// Curvature tensor of complex hyperbolic space:
//   -4 R0(u,v,z,w) = <u,z><v,w> - <u,w><v,z> + <u,Jz><v,Jw> - <u,Jw><v,Jz>
//                    + 2 <u,Jv><z,Jw>.
// Sectional curvatures fill [-1, -1/4], H == -1.
CurvatureTensor build_r0(const HermitianSpace& space);

// Residuals of (1)-(4); `passed` iff every residual <= tol (absolute).
SymmetryCertificate check_kahler(const CurvatureTensor& r, double tol);

// Certified tensors pass through; otherwise checks at kSymmetryTolerance
// relative to the norm, attaches on success, throws Precondition on failure.
CurvatureTensor ensure_kahler(CurvatureTensor r);

// Orthogonal projection onto the space of Kahler curvature tensors.
// Throws ResourceLimit if n > max_n.
inline constexpr int kProjectorDimensionCap = 4;
CurvatureTensor project_kahler(const CurvatureTensor& t, int max_n = kProjectorDimensionCap);

// Dimension of the Kahler curvature subspace (rank of the projector).
int kahler_subspace_dimension(const HermitianSpace& space, int max_n = kProjectorDimensionCap);

// Orthonormal basis (columns, length (2n)^4) of the Kahler curvature subspace.
const Matrix& kahler_basis(const HermitianSpace& space, int max_n = kProjectorDimensionCap);

// Standard-normal entries projected and rescaled to the requested norm.
CurvatureTensor random_kahler(const HermitianSpace& space, std::uint64_t seed,
                              double frobenius_norm);

double distance(const CurvatureTensor& r, const CurvatureTensor& s);

struct TwoPlane {
  Vector u;
  Vector v;

  double gram_determinant() const { return u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2); }
};

// R(u,v,u,v) / (|u|^2 |v|^2 - <u,v>^2).
double sectional(const CurvatureTensor& r, const TwoPlane& plane);

// R(u,Ju,u,Ju) / |u|^4.
double holomorphic_sectional(const CurvatureTensor& r, const Vector& u);

// Unnormalized biquadratic R(a,b,a,b).
double biquadratic(const CurvatureTensor& r, const Vector& a, const Vector& b);

// Throws Precondition unless {u, Ju, v, Jv} is orthonormal within tol.
void require_unitary_pair(const HermitianSpace& space, const Vector& u, const Vector& v,
                          double tol = 1e-9);

// K(u,v) + K(u,Jv) - R(u,Ju,v,Jv) for {u,Ju,v,Jv} orthonormal.
double identity_one_residual(const CurvatureTensor& r, const Vector& u, const Vector& v);

using BiquadraticOracle = std::function<double(const Vector&, const Vector&)>;

// 24 R(x,y,z,t) = K(x+z,y+t) + K(x-z,y-t) - K(x+z,y-t) - K(x-z,y+t)
//               - K(x+t,y+z) - K(x-t,y-z) + K(x+t,y-z) + K(x-t,y+z)
// with K the raw biquadratic, over every basis tuple.
CurvatureTensor reconstruct_from_sectional(const BiquadraticOracle& k, const HermitianSpace& space);

// Polarization identities for unit u, v with {u,Ju,v,Jv} orthonormal and
// a^2 + b^2 = 1:
//   H(au+bv) + H(au-bv)   = 2a^4 H(u) + 2b^4 H(v) + 12a^2b^2 R(u,Ju,v,Jv) - 8a^2b^2 K(u,v)
//   H(au+bJv) + H(au-bJv) = 2a^4 H(u) + 2b^4 H(v) + 12a^2b^2 R(u,Ju,v,Jv) - c a^2b^2 K(u,Jv)
// The second identity has appeared in print with c = 1; it only holds with c = 8.
inline constexpr double kPrintedSecondPolarizationCoefficient = 1.0;
inline constexpr double kSecondPolarizationCoefficient = 8.0;

double polarization_residual_real(const CurvatureTensor& r, const Vector& u, const Vector& v,
                                  double a);
double polarization_residual_complex(const CurvatureTensor& r, const Vector& u, const Vector& v,
                                     double a, double coefficient);

// Least-squares estimate of c in the second identity from `samples` random
// Kahler tensors and unitary pairs.
double fit_second_polarization_coefficient(const HermitianSpace& space, int samples,
                                           std::uint64_t seed);

// The six H-values consumed by solve_sectional_from_h, in order:
// H(u), H(v), H((u+v)/sqrt2), H((u-v)/sqrt2), H((u+Jv)/sqrt2), H((u-Jv)/sqrt2).
std::array<double, 6> holomorphic_samples(const CurvatureTensor& r, const Vector& u,
                                          const Vector& v);

// 3x6 matrix C with (K(u,v), K(u,Jv), R(u,Ju,v,Jv)) = C * holomorphic_samples,
// obtained by solving the two polarization identities at a = b = 1/sqrt2
// together with K(u,v) + K(u,Jv) = R(u,Ju,v,Jv). Throws IdentityInconsistency
// if singular.
Eigen::Matrix<double, 3, 6> sectional_from_h_coefficients(
    double coefficient = kSecondPolarizationCoefficient);

struct SectionalTriple {
  double k_uv = 0.0;        // K(u, v)
  double k_ujv = 0.0;       // K(u, Jv)
  double r_ujuvjv = 0.0;    // R(u, Ju, v, Jv)
};

SectionalTriple solve_sectional_from_h(const CurvatureTensor& r, const Vector& u, const Vector& v,
                                       double coefficient = kSecondPolarizationCoefficient);

}  // namespace kahler
