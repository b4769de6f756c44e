#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace kahler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Largest complex dimension any module accepts (real dimension 16).
inline constexpr int kMaxComplexDimension = 8;

// The model space V = R^{2n} with complex structure J and the standard inner
// product. Basis convention (0-based): J e_{2a} = e_{2a+1}, J e_{2a+1} = -e_{2a}.
// With omega(u, v) = <u, J v> this gives omega(e_{2a}, e_{2a+1}) = -1.
class HermitianSpace {
 public:
  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const Matrix& j_matrix() const { return j_; }
  const Matrix& metric() const { return metric_; }

  // J e_i = j_sign(i) * e_{j_target(i)}.
  int j_target(int i) const { return i ^ 1; }
  double j_sign(int i) const { return (i % 2 == 0) ? 1.0 : -1.0; }

  Vector apply_j(const Vector& v) const;
  double inner(const Vector& v, const Vector& w) const { return v.dot(w); }
  double omega(const Vector& u, const Vector& v) const;

  bool operator==(const HermitianSpace& other) const { return n_ == other.n_; }

 private:
  friend HermitianSpace make_space(int n);
  explicit HermitianSpace(int n);

  int n_;
  Matrix j_;
  Matrix metric_;
};

// Throws InvalidDimension unless 1 <= n <= kMaxComplexDimension.
HermitianSpace make_space(int n);

// n vectors f_a such that {f_1, J f_1, ..., f_n, J f_n} is orthonormal.
std::vector<Vector> random_unitary_frame(const HermitianSpace& space, std::uint64_t seed);

// f_a = e_{2a}, J f_a = e_{2a+1}.
std::vector<Vector> standard_unitary_frame(const HermitianSpace& space);

// Max |Gram - I| over {f_1, J f_1, ..., f_n, J f_n}.
double unitary_frame_defect(const HermitianSpace& space, const std::vector<Vector>& frame);

enum class PairConstraint { None, PerpendicularToJ };

// Orthonormal (u, v); PerpendicularToJ additionally forces <v, J u> = 0 so that
// {u, Ju, v, Jv} is orthonormal (requires n >= 2).
std::pair<Vector, Vector> random_orthonormal_pair(const HermitianSpace& space,
                                                  std::uint64_t seed,
                                                  PairConstraint constraint);

Vector random_unit_vector(const HermitianSpace& space, std::uint64_t seed);

}  // namespace kahler
