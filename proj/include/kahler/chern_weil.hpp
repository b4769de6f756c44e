#pragma once

#include <string>
#include <vector>

#include "kahler/curvature.hpp"
#include "kahler/exterior.hpp"

namespace kahler {

// Multi-index (a_1, ..., a_n) naming c_1^{a_1} ^ ... ^ c_n^{a_n}.
class ChernIndex {
 public:
  // Throws IndexError unless entries are nonnegative and sum_i i * a_i = n.
  explicit ChernIndex(std::vector<int> exponents);

  // Parses "a_1,...,a_n".
  static ChernIndex parse(const std::string& text);

  int n() const { return static_cast<int>(exponents_.size()); }
  const std::vector<int>& exponents() const { return exponents_; }
  std::string to_string() const;

  bool operator==(const ChernIndex&) const = default;

 private:
  std::vector<int> exponents_;
};

struct ChernDensity {
  ChernIndex index;
  double gamma = 0.0;  // c_I(R) = gamma * omega^n
};

// Omega_ab(x, y) = R(x, y, eps_a, conj(eps_b)) with eps_a = (f_a - i J f_a) / sqrt2,
// R extended complex-multilinearly. Throws Precondition for a non-unitary frame.
ComplexFormMatrix curvature_matrix(const CurvatureTensor& r, const std::vector<Vector>& frame);

// c_k(R): degree-k part of det(I + (i / 2 pi) Omega), a real form of degree
// 2k. Throws IndexError for k outside [0, n]; throws Precondition if the
// imaginary part does not cancel.
AlternatingForm chern_form(const CurvatureTensor& r, int k, const std::vector<Vector>& frame);

// c_0 .. c_n at once, plus the largest imaginary residue seen before it was
// discarded.
struct ChernForms {
  std::vector<AlternatingForm> forms;
  double imaginary_residue = 0.0;
};
ChernForms chern_forms(const CurvatureTensor& r, const std::vector<Vector>& frame);

ChernDensity chern_product(const CurvatureTensor& r, const ChernIndex& index,
                           const std::vector<Vector>& frame);
ChernDensity chern_product(const CurvatureTensor& r, const ChernIndex& index);

// gamma_I / gamma_J in the standard frame. Throws DegenerateDenominator when
// |gamma_J| <= 1e-12 * |gamma_J(R0)|.
double chern_ratio(const CurvatureTensor& r, const ChernIndex& i, const ChernIndex& j);

// Every multi-index with sum_i i * a_i = n, in descending lexicographic order
// ((n,0,...,0) first, (0,...,0,1) last).
std::vector<ChernIndex> enumerate_indices(int n);

// gamma_I(R0) for every index of enumerate_indices(n), computed once per n.
// Throws Precondition if the table disagrees with complex_space_form_ratio.
const std::vector<ChernDensity>& reference_constants(int n);

// prod_k C(n+1, k)^{a_k} / prod_k C(n+1, k)^{b_k}: Chern number ratios of
// complex space forms.
double complex_space_form_ratio(const ChernIndex& i, const ChernIndex& j);

}  // namespace kahler
