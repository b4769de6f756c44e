#include "kahler/chern_weil.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "kahler/error.hpp"

namespace kahler {

ChernIndex::ChernIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) fail(ErrorCode::IndexError, "empty Chern multi-index");
  long weight = 0;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] < 0) fail(ErrorCode::IndexError, "negative Chern exponent");
    weight += static_cast<long>(i + 1) * exponents_[i];
  }
  if (weight != static_cast<long>(exponents_.size()))
    fail(ErrorCode::IndexError, "Chern multi-index " + to_string() +
                                    " does not have top degree (sum i*a_i = n)");
}

ChernIndex ChernIndex::parse(const std::string& text) {
  std::vector<int> exponents;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::IndexError, "malformed Chern multi-index '" + text + "'");
    }
    if (used != item.size()) fail(ErrorCode::IndexError, "malformed Chern multi-index '" + text + "'");
    exponents.push_back(value);
  }
  if (text.empty() || text.back() == ',')
    fail(ErrorCode::IndexError, "malformed Chern multi-index '" + text + "'");
  return ChernIndex(std::move(exponents));
}

std::string ChernIndex::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(exponents_[i]);
  }
  return out;
}

ComplexFormMatrix curvature_matrix(const CurvatureTensor& r, const std::vector<Vector>& frame) {
  const HermitianSpace& space = r.space();
  if (unitary_frame_defect(space, frame) > 1e-9)
    fail(ErrorCode::Precondition, "frame is not unitary");
  const int d = space.dim();
  const int n = space.n();
  std::vector<Vector> jframe;
  for (const auto& f : frame) jframe.push_back(space.apply_j(f));

  ComplexFormMatrix omega(n, d, 2);
  Matrix slice(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = i + 1; k < d; ++k) {
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) slice(p, q) = r(i, k, p, q);
      const std::array<int, 2> idx{i, k};
      for (int a = 0; a < n; ++a) {
        const Vector sf = slice.transpose() * frame[a];    // R(e_i, e_k, f_a, .)
        const Vector sjf = slice.transpose() * jframe[a];  // R(e_i, e_k, J f_a, .)
        for (int b = 0; b < n; ++b) {
          const double re = 0.5 * (sf.dot(frame[b]) + sjf.dot(jframe[b]));
          const double im = 0.5 * (sf.dot(jframe[b]) - sjf.dot(frame[b]));
          omega.at(a, b).re.set_coefficient(idx, re);
          omega.at(a, b).im.set_coefficient(idx, im);
        }
      }
    }
  return omega;
}

ChernForms chern_forms(const CurvatureTensor& r, const std::vector<Vector>& frame) {
  const CurvatureTensor tensor = ensure_kahler(r);
  const int n = tensor.space().n();
  const int d = tensor.space().dim();

  ComplexFormMatrix a = curvature_matrix(tensor, frame);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.at(i, j).scale(0.0, 1.0 / (2.0 * std::numbers::pi));

  // Power traces p_j = tr(A^j); the entries are even forms, so Newton's
  // identities hold verbatim.
  std::vector<ComplexForm> traces;
  traces.reserve(n);
  ComplexFormMatrix power = a;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) power = multiply(power, a);
    ComplexForm trace{AlternatingForm(d, 2 * j), AlternatingForm(d, 2 * j)};
    for (int i = 0; i < n; ++i) trace += power.at(i, i);
    traces.push_back(std::move(trace));
  }

  std::vector<ComplexForm> sigma;
  sigma.push_back({AlternatingForm::constant(d, 1.0), AlternatingForm::constant(d, 0.0)});
  for (int k = 1; k <= n; ++k) {
    ComplexForm acc{AlternatingForm(d, 2 * k), AlternatingForm(d, 2 * k)};
    for (int j = 1; j <= k; ++j) {
      ComplexForm term = wedge(sigma[k - j], traces[j - 1]);
      if (j % 2 == 1) acc += term;
      else acc -= term;
    }
    acc.scale(1.0 / k, 0.0);
    sigma.push_back(std::move(acc));
  }

  ChernForms out;
  for (int k = 0; k <= n; ++k) {
    const double residue = sigma[k].im.max_abs();
    out.imaginary_residue = std::max(out.imaginary_residue, residue);
    if (residue > 1e-10 * std::max(1.0, sigma[k].re.max_abs()))
      fail(ErrorCode::Precondition, "Chern form c_" + std::to_string(k) +
                                        " has a non-negligible imaginary part");
    out.forms.push_back(std::move(sigma[k].re));
  }
  return out;
}

AlternatingForm chern_form(const CurvatureTensor& r, int k, const std::vector<Vector>& frame) {
  if (k < 0 || k > r.space().n())
    fail(ErrorCode::IndexError, "Chern form degree k=" + std::to_string(k) + " outside [0, n]");
  return std::move(chern_forms(r, frame).forms[k]);
}

namespace {

double density_of(const std::vector<AlternatingForm>& forms, const ChernIndex& index) {
  AlternatingForm product = AlternatingForm::constant(forms.front().dim(), 1.0);
  for (int k = 1; k <= index.n(); ++k)
    product = wedge(product, power(forms[k], index.exponents()[k - 1]));
  return top_coefficient(product);
}

}  // namespace

ChernDensity chern_product(const CurvatureTensor& r, const ChernIndex& index,
                           const std::vector<Vector>& frame) {
  if (index.n() != r.space().n())
    fail(ErrorCode::IndexError, "multi-index " + index.to_string() + " does not match n = " +
                                    std::to_string(r.space().n()));
  return {index, density_of(chern_forms(r, frame).forms, index)};
}

ChernDensity chern_product(const CurvatureTensor& r, const ChernIndex& index) {
  return chern_product(r, index, standard_unitary_frame(r.space()));
}

double chern_ratio(const CurvatureTensor& r, const ChernIndex& i, const ChernIndex& j) {
  const int n = r.space().n();
  if (i.n() != n || j.n() != n)
    fail(ErrorCode::IndexError, "multi-index length does not match n = " + std::to_string(n));
  double reference = 0.0;
  for (const auto& density : reference_constants(n))
    if (density.index == j) reference = std::abs(density.gamma);

  const ChernForms forms = chern_forms(r, standard_unitary_frame(r.space()));
  const double denominator = density_of(forms.forms, j);
  if (std::abs(denominator) <= 1e-12 * reference)
    fail(ErrorCode::DegenerateDenominator,
         "c_J density vanishes for J = " + j.to_string());
  return density_of(forms.forms, i) / denominator;
}

namespace {

void enumerate_from(int position, int remaining, std::vector<int>& current,
                    std::vector<ChernIndex>& out) {
  const int n = static_cast<int>(current.size());
  if (position > n) {
    if (remaining == 0) out.emplace_back(current);
    return;
  }
  for (int a = remaining / position; a >= 0; --a) {
    current[position - 1] = a;
    enumerate_from(position + 1, remaining - a * position, current, out);
  }
  current[position - 1] = 0;
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

std::vector<ChernIndex> enumerate_indices(int n) {
  if (n < 1) fail(ErrorCode::InvalidDimension, "enumerate_indices needs n >= 1");
  std::vector<ChernIndex> out;
  std::vector<int> current(n, 0);
  enumerate_from(1, n, current, out);
  return out;
}

double complex_space_form_ratio(const ChernIndex& i, const ChernIndex& j) {
  if (i.n() != j.n()) fail(ErrorCode::IndexError, "multi-indices of different length");
  const int n = i.n();
  double ratio = 1.0;
  for (int k = 1; k <= n; ++k)
    ratio *= std::pow(binomial(n + 1, k), i.exponents()[k - 1] - j.exponents()[k - 1]);
  return ratio;
}

const std::vector<ChernDensity>& reference_constants(int n) {
  const HermitianSpace space = make_space(n);
  static std::array<std::vector<ChernDensity>, kMaxComplexDimension + 1> tables;
  static std::array<std::once_flag, kMaxComplexDimension + 1> flags;
  std::call_once(flags[n], [&] {
    const CurvatureTensor r0 = build_r0(space);
    const ChernForms forms = chern_forms(r0, standard_unitary_frame(space));
    std::vector<ChernDensity> table;
    for (const ChernIndex& index : enumerate_indices(n))
      table.push_back({index, density_of(forms.forms, index)});
    for (const auto& a : table)
      for (const auto& b : table) {
        const double expected = complex_space_form_ratio(a.index, b.index);
        if (b.gamma == 0.0 || std::abs(a.gamma / b.gamma - expected) > 1e-8 * expected)
          fail(ErrorCode::Precondition, "reference Chern constants disagree with the space-form ratio");
      }
    tables[n] = std::move(table);
  });
  return tables[n];
}

}  // namespace kahler
