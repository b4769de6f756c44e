#include <array>
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kahler/curvature.hpp"
#include "kahler/error.hpp"

namespace kahler {

namespace {

// Tensors satisfying (1) and (2) are lifts of symmetric matrices on sorted
// index pairs. Each coordinate (A <= B) lifts to a tensor with entries +-1 on
// the orbit of (A, B) under (1) and (2), normalized to unit Frobenius norm,
// and distinct coordinates have disjoint supports. Bianchi and J-invariance
// are imposed as linear equations in these coordinates; the null space of
// that system, lifted back, is an orthonormal basis of the Kahler subspace.
class PairCoordinates {
 public:
  explicit PairCoordinates(int dim) : dim_(dim), pair_index_(dim * dim, -1) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) pair_index_[i * dim + j] = pair_count_++;
  }

  int count() const { return pair_count_ * (pair_count_ + 1) / 2; }

  // Coordinate of the unordered pair-of-pairs {A, B}.
  int coordinate(int a, int b) const {
    if (a > b) std::swap(a, b);
    return a * pair_count_ - a * (a - 1) / 2 + (b - a);
  }

  double lift_norm(int a, int b) const { return a == b ? 2.0 : std::sqrt(8.0); }

  // Entry (i,j,k,l) of the lifted coordinate tensors: returns (coordinate,
  // value) or coordinate -1 when the entry is identically zero.
  std::pair<int, double> entry(int i, int j, int k, int l) const {
    if (i == j || k == l) return {-1, 0.0};
    double sign = 1.0;
    if (i > j) { std::swap(i, j); sign = -sign; }
    if (k > l) { std::swap(k, l); sign = -sign; }
    const int a = pair_index_[i * dim_ + j];
    const int b = pair_index_[k * dim_ + l];
    return {coordinate(a, b), sign / lift_norm(a, b)};
  }

  Matrix lift_matrix() const {
    const std::size_t d = dim_;
    Matrix lift = Matrix::Zero(d * d * d * d, count());
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          for (int l = 0; l < dim_; ++l) {
            const auto [c, value] = entry(i, j, k, l);
            if (c >= 0) lift(((i * d + j) * d + k) * d + l, c) = value;
          }
    return lift;
  }

 private:
  int dim_;
  int pair_count_ = 0;
  std::vector<int> pair_index_;
};

Matrix build_basis(const HermitianSpace& space) {
  const int d = space.dim();
  const PairCoordinates coords(d);
  const int m = coords.count();
  Matrix gram = Matrix::Zero(m, m);

  std::vector<std::pair<int, double>> row;
  auto add_term = [&](double scale, int i, int j, int k, int l) {
    const auto [c, value] = coords.entry(i, j, k, l);
    if (c >= 0) row.emplace_back(c, scale * value);
  };
  auto flush = [&] {
    for (const auto& [ca, va] : row)
      for (const auto& [cb, vb] : row) gram(ca, cb) += va * vb;
    row.clear();
  };

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          add_term(1.0, i, j, k, l);
          add_term(1.0, i, l, j, k);
          add_term(1.0, i, k, l, j);
          flush();

          add_term(space.j_sign(i) * space.j_sign(j), space.j_target(i), space.j_target(j), k, l);
          add_term(-1.0, i, j, k, l);
          flush();

          add_term(space.j_sign(k) * space.j_sign(l), i, j, space.j_target(k), space.j_target(l));
          add_term(-1.0, i, j, k, l);
          flush();
        }

  const Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double threshold = 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff());
  int nullity = 0;
  while (nullity < m && values[nullity] < threshold) ++nullity;
  return coords.lift_matrix() * solver.eigenvectors().leftCols(nullity);
}

}  // namespace

const Matrix& kahler_basis(const HermitianSpace& space, int max_n) {
  if (space.n() > max_n)
    fail(ErrorCode::ResourceLimit, "Kahler projector limited to n <= " + std::to_string(max_n) +
                                       ", got n = " + std::to_string(space.n()));
  static std::array<Matrix, kMaxComplexDimension + 1> bases;
  static std::array<std::once_flag, kMaxComplexDimension + 1> flags;
  std::call_once(flags[space.n()], [&] { bases[space.n()] = build_basis(space); });
  return bases[space.n()];
}

int kahler_subspace_dimension(const HermitianSpace& space, int max_n) {
  return static_cast<int>(kahler_basis(space, max_n).cols());
}

CurvatureTensor project_kahler(const CurvatureTensor& t, int max_n) {
  const Matrix& basis = kahler_basis(t.space(), max_n);
  const Eigen::Map<const Eigen::VectorXd> entries(t.entries().data(),
                                                  static_cast<Eigen::Index>(t.size()));
  const Eigen::VectorXd coefficients = basis.transpose() * entries;
  const Eigen::VectorXd projected = basis * coefficients;
  CurvatureTensor out(t.space(), std::vector<double>(projected.data(),
                                                     projected.data() + projected.size()));
  out.attach_certificate(
      check_kahler(out, kSymmetryTolerance * std::max(out.frobenius_norm(), 1.0)));
  return out;
}

}  // namespace kahler
