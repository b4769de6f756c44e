#include "kahler/exterior.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "kahler/error.hpp"

namespace kahler {

namespace {

constexpr int kMaxDim = 2 * kMaxComplexDimension;

// Index tuples of every degree for one ambient dimension, as bitmasks.
struct Combinations {
  std::vector<std::vector<std::uint32_t>> masks;  // masks[k][slot]
  std::vector<std::uint32_t> slot_of;             // slot_of[mask]
};

void generate(int dim, int start, int remaining, std::uint32_t mask,
              std::vector<std::uint32_t>& out) {
  if (remaining == 0) {
    out.push_back(mask);
    return;
  }
  for (int i = start; i <= dim - remaining; ++i)
    generate(dim, i + 1, remaining - 1, mask | (1u << i), out);
}

const Combinations& combinations(int dim) {
  static std::array<Combinations, kMaxDim + 1> tables;
  static std::array<std::once_flag, kMaxDim + 1> flags;
  std::call_once(flags[dim], [dim] {
    Combinations& c = tables[dim];
    c.masks.resize(dim + 1);
    c.slot_of.assign(std::size_t{1} << dim, 0);
    for (int k = 0; k <= dim; ++k) {
      generate(dim, 0, k, 0, c.masks[k]);
      for (std::size_t s = 0; s < c.masks[k].size(); ++s) c.slot_of[c.masks[k][s]] = s;
    }
  });
  return tables[dim];
}

std::uint32_t mask_of(std::span<const int> indices, int dim) {
  std::uint32_t mask = 0;
  int previous = -1;
  for (int i : indices) {
    if (i <= previous || i >= dim)
      fail(ErrorCode::IndexError, "form indices must be strictly increasing and < dim");
    mask |= 1u << i;
    previous = i;
  }
  return mask;
}

// Sign of the shuffle that sorts the concatenation (I, J) of disjoint masks.
double shuffle_sign(std::uint32_t left, std::uint32_t right) {
  int inversions = 0;
  while (right != 0) {
    const int j = std::countr_zero(right);
    inversions += std::popcount(left >> (j + 1));
    right &= right - 1;
  }
  return (inversions % 2 == 0) ? 1.0 : -1.0;
}

void require_same_shape(const AlternatingForm& a, const AlternatingForm& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::SpaceMismatch, "forms live on different spaces");
  if (a.degree() != b.degree())
    fail(ErrorCode::WrongDegree, "cannot add forms of different degree");
}

}  // namespace

AlternatingForm::AlternatingForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || dim > kMaxDim)
    fail(ErrorCode::InvalidDimension, "form dimension out of range: " + std::to_string(dim));
  if (degree < 0 || degree > dim)
    fail(ErrorCode::DegreeOutOfRange,
         "degree " + std::to_string(degree) + " outside [0, " + std::to_string(dim) + "]");
  coeffs_.assign(combinations(dim).masks[degree].size(), 0.0);
}

AlternatingForm AlternatingForm::constant(int dim, double value) {
  AlternatingForm f(dim, 0);
  f.coeffs_[0] = value;
  return f;
}

double AlternatingForm::coefficient(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_)
    fail(ErrorCode::WrongDegree, "index tuple length differs from form degree");
  return coeffs_[combinations(dim_).slot_of[mask_of(indices, dim_)]];
}

void AlternatingForm::set_coefficient(std::span<const int> indices, double value) {
  if (static_cast<int>(indices.size()) != degree_)
    fail(ErrorCode::WrongDegree, "index tuple length differs from form degree");
  coeffs_[combinations(dim_).slot_of[mask_of(indices, dim_)]] = value;
}

std::vector<int> AlternatingForm::indices_of(std::size_t slot) const {
  std::uint32_t mask = combinations(dim_).masks[degree_].at(slot);
  std::vector<int> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

double AlternatingForm::evaluate(std::span<const Vector> args) const {
  if (static_cast<int>(args.size()) != degree_)
    fail(ErrorCode::WrongDegree, "wrong number of arguments for form evaluation");
  if (degree_ == 0) return coeffs_[0];
  Matrix columns(dim_, degree_);
  for (int c = 0; c < degree_; ++c) columns.col(c) = args[c];
  const auto& masks = combinations(dim_).masks[degree_];
  double total = 0.0;
  Matrix minor(degree_, degree_);
  for (std::size_t s = 0; s < masks.size(); ++s) {
    if (coeffs_[s] == 0.0) continue;
    std::uint32_t mask = masks[s];
    for (int r = 0; r < degree_; ++r) {
      minor.row(r) = columns.row(std::countr_zero(mask));
      mask &= mask - 1;
    }
    total += coeffs_[s] * minor.determinant();
  }
  return total;
}

double AlternatingForm::norm() const {
  double sum = 0.0;
  for (double c : coeffs_) sum += c * c;
  return std::sqrt(sum);
}

double AlternatingForm::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& other) {
  require_same_shape(*this, other);
  for (std::size_t s = 0; s < coeffs_.size(); ++s) coeffs_[s] += other.coeffs_[s];
  return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& other) {
  require_same_shape(*this, other);
  for (std::size_t s = 0; s < coeffs_.size(); ++s) coeffs_[s] -= other.coeffs_[s];
  return *this;
}

AlternatingForm& AlternatingForm::operator*=(double scalar) {
  for (double& c : coeffs_) c *= scalar;
  return *this;
}

AlternatingForm wedge(const AlternatingForm& f, const AlternatingForm& g) {
  if (f.dim() != g.dim()) fail(ErrorCode::SpaceMismatch, "wedge of forms on different spaces");
  const int degree = f.degree() + g.degree();
  if (degree > f.dim())
    fail(ErrorCode::DegreeOutOfRange, "wedge degree " + std::to_string(degree) +
                                          " exceeds dimension " + std::to_string(f.dim()));
  const Combinations& table = combinations(f.dim());
  const auto& f_masks = table.masks[f.degree()];
  const auto& g_masks = table.masks[g.degree()];
  AlternatingForm out(f.dim(), degree);
  for (std::size_t a = 0; a < f_masks.size(); ++a) {
    const double fa = f.coeffs_[a];
    if (fa == 0.0) continue;
    for (std::size_t b = 0; b < g_masks.size(); ++b) {
      const double gb = g.coeffs_[b];
      if (gb == 0.0 || (f_masks[a] & g_masks[b]) != 0) continue;
      out.coeffs_[table.slot_of[f_masks[a] | g_masks[b]]] +=
          shuffle_sign(f_masks[a], g_masks[b]) * fa * gb;
    }
  }
  return out;
}

AlternatingForm power(const AlternatingForm& f, int m) {
  if (m < 0) fail(ErrorCode::DegreeOutOfRange, "negative wedge power");
  if (static_cast<long>(m) * f.degree() > f.dim())
    fail(ErrorCode::DegreeOutOfRange, "wedge power exceeds top degree");
  AlternatingForm out = AlternatingForm::constant(f.dim(), 1.0);
  for (int i = 0; i < m; ++i) out = wedge(out, f);
  return out;
}

AlternatingForm kahler_form(const HermitianSpace& space) {
  AlternatingForm omega(space.dim(), 2);
  const Matrix& j = space.j_matrix();
  for (int i = 0; i < space.dim(); ++i)
    for (int k = i + 1; k < space.dim(); ++k) {
      const std::array<int, 2> idx{i, k};
      omega.set_coefficient(idx, j(i, k));  // <e_i, J e_k>
    }
  return omega;
}

double top_coefficient(const AlternatingForm& f) {
  if (f.dim() % 2 != 0 || f.degree() != f.dim())
    fail(ErrorCode::WrongDegree, "top_coefficient needs a form of degree 2n");
  const HermitianSpace space = make_space(f.dim() / 2);
  const AlternatingForm volume = power(kahler_form(space), space.n());
  return f[0] / volume[0];
}

ComplexForm& ComplexForm::operator+=(const ComplexForm& other) {
  re += other.re;
  im += other.im;
  return *this;
}

ComplexForm& ComplexForm::operator-=(const ComplexForm& other) {
  re -= other.re;
  im -= other.im;
  return *this;
}

// Multiplies by the complex scalar (re_factor + i im_factor).
ComplexForm& ComplexForm::scale(double re_factor, double im_factor) {
  AlternatingForm new_re = re_factor * re - im_factor * im;
  AlternatingForm new_im = re_factor * im + im_factor * re;
  re = std::move(new_re);
  im = std::move(new_im);
  return *this;
}

ComplexForm wedge(const ComplexForm& f, const ComplexForm& g) {
  return ComplexForm{wedge(f.re, g.re) - wedge(f.im, g.im),
                     wedge(f.re, g.im) + wedge(f.im, g.re)};
}

ComplexFormMatrix::ComplexFormMatrix(int size, int dim, int degree) : size_(size) {
  entries_.reserve(static_cast<std::size_t>(size) * size);
  for (int i = 0; i < size * size; ++i)
    entries_.push_back(ComplexForm{AlternatingForm(dim, degree), AlternatingForm(dim, degree)});
}

double ComplexFormMatrix::skew_hermitian_defect() const {
  double defect = 0.0;
  for (int a = 0; a < size_; ++a)
    for (int b = 0; b < size_; ++b) {
      // Omega_ab + conj(Omega_ba): re parts add, im parts subtract.
      defect = std::max(defect, (at(a, b).re + at(b, a).re).max_abs());
      defect = std::max(defect, (at(a, b).im - at(b, a).im).max_abs());
    }
  return defect;
}

ComplexFormMatrix multiply(const ComplexFormMatrix& a, const ComplexFormMatrix& b) {
  if (a.size() != b.size()) fail(ErrorCode::SpaceMismatch, "matrix size mismatch");
  const int n = a.size();
  const int dim = a.at(0, 0).re.dim();
  const int degree = a.at(0, 0).degree() + b.at(0, 0).degree();
  ComplexFormMatrix out(n, dim, degree);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out.at(i, k) += wedge(a.at(i, j), b.at(j, k));
  return out;
}

}  // namespace kahler
