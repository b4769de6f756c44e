#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kahler/hermitian_space.hpp"

namespace kahler {

// Degree-k alternating form on R^dim, stored as coefficients over strictly
// increasing index tuples in lexicographic order:
//   f = sum_{i_1 < ... < i_k} f_I e^{i_1} ^ ... ^ e^{i_k},
// with the determinant convention (e^1 ^ e^2)(e_1, e_2) = 1.
class AlternatingForm {
 public:
  AlternatingForm(int dim, int degree);

  static AlternatingForm constant(int dim, double value);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  double& operator[](std::size_t slot) { return coeffs_[slot]; }
  double operator[](std::size_t slot) const { return coeffs_[slot]; }
  std::span<const double> coefficients() const { return coeffs_; }

  // Coefficient of e^{i_1} ^ ... ^ e^{i_k}; indices must be strictly increasing.
  double coefficient(std::span<const int> indices) const;
  void set_coefficient(std::span<const int> indices, double value);

  // Sorted index tuple addressed by a storage slot.
  std::vector<int> indices_of(std::size_t slot) const;

  double evaluate(std::span<const Vector> args) const;

  // Euclidean norm of the coefficient table.
  double norm() const;
  double max_abs() const;

  AlternatingForm& operator+=(const AlternatingForm& other);
  AlternatingForm& operator-=(const AlternatingForm& other);
  AlternatingForm& operator*=(double scalar);

  friend AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) { return a += b; }
  friend AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) { return a -= b; }
  friend AlternatingForm operator*(double s, AlternatingForm a) { return a *= s; }
  friend AlternatingForm operator*(AlternatingForm a, double s) { return a *= s; }

 private:
  friend AlternatingForm wedge(const AlternatingForm& f, const AlternatingForm& g);

  int dim_;
  int degree_;
  std::vector<double> coeffs_;
};

AlternatingForm wedge(const AlternatingForm& f, const AlternatingForm& g);

// f ^ ... ^ f (m factors); power(f, 0) is the constant 1.
AlternatingForm power(const AlternatingForm& f, int m);

// omega(u, v) = <u, J v> as a degree-2 form.
AlternatingForm kahler_form(const HermitianSpace& space);

// gamma with f = gamma * omega^n. Throws WrongDegree unless deg f = 2n.
double top_coefficient(const AlternatingForm& f);

// Complex-valued form carried as a pair of real forms.
struct ComplexForm {
  AlternatingForm re;
  AlternatingForm im;

  int degree() const { return re.degree(); }
  ComplexForm& operator+=(const ComplexForm& other);
  ComplexForm& operator-=(const ComplexForm& other);
  ComplexForm& scale(double re_factor, double im_factor);
};

ComplexForm wedge(const ComplexForm& f, const ComplexForm& g);

// n x n matrix of complex 2-forms (the Chern-Weil curvature matrix).
class ComplexFormMatrix {
 public:
  ComplexFormMatrix(int size, int dim, int degree);

  int size() const { return size_; }
  ComplexForm& at(int a, int b) { return entries_[a * size_ + b]; }
  const ComplexForm& at(int a, int b) const { return entries_[a * size_ + b]; }

  // max_{a,b} |Omega_ab + conj(Omega_ba)| over coefficients.
  double skew_hermitian_defect() const;

 private:
  int size_;
  std::vector<ComplexForm> entries_;
};

ComplexFormMatrix multiply(const ComplexFormMatrix& a, const ComplexFormMatrix& b);

}  // namespace kahler
