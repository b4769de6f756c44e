#include "kahler/kahler.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "kahler/chern_weil.hpp"
#include "kahler/curvature.hpp"
#include "kahler/error.hpp"
#include "kahler/experiments.hpp"
#include "kahler/identity_suite.hpp"
#include "kahler/pinching.hpp"
#include "kahler/tensor_io.hpp"

struct kahler_tensor {
  kahler::CurvatureTensor tensor;
};

namespace {

using kahler::ErrorCode;

static_assert(static_cast<int>(ErrorCode::InvalidDimension) == KAHLER_INVALID_DIMENSION);
static_assert(static_cast<int>(ErrorCode::ResourceLimit) == KAHLER_RESOURCE_LIMIT);
static_assert(static_cast<int>(ErrorCode::IndexError) == KAHLER_INDEX_ERROR);
static_assert(static_cast<int>(ErrorCode::Io) == KAHLER_IO);

thread_local std::string last_error;

struct InvalidArgument {
  const char* what;
};

template <typename F>
kahler_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return KAHLER_OK;
  } catch (const kahler::Error& e) {
    last_error = e.what();
    return static_cast<kahler_status>(e.code());
  } catch (const InvalidArgument& e) {
    last_error = e.what;
    return KAHLER_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KAHLER_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KAHLER_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return KAHLER_INTERNAL;
  }
}

template <typename T>
T& require(T* p, const char* name) {
  if (p == nullptr) throw InvalidArgument{name};
  return *p;
}

std::string text_arg(const char* p, const char* name) {
  if (p == nullptr) throw InvalidArgument{name};
  return p;
}

kahler_tensor* wrap(kahler::CurvatureTensor t) { return new kahler_tensor{std::move(t)}; }

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void copy_vector(const kahler::Vector& v, double* out) {
  std::fill(out, out + KAHLER_MAX_DIM, 0.0);
  std::copy(v.data(), v.data() + std::min<Eigen::Index>(v.size(), KAHLER_MAX_DIM), out);
}

kahler::ChernIndex index_from(const int* exponents, int n) {
  if (exponents == nullptr) throw InvalidArgument{"null exponents"};
  return kahler::ChernIndex(std::vector<int>(exponents, exponents + n));
}

int resolve_restarts(int restarts, int n) {
  return restarts == 0 ? kahler::default_restarts(n) : restarts;
}

}  // namespace

extern "C" {

const char* kahler_status_name(kahler_status status) {
  switch (status) {
    case KAHLER_OK:
      return "ok";
    case KAHLER_INVALID_ARGUMENT:
      return "invalid-argument";
    case KAHLER_INTERNAL:
      return "internal";
    default:
      if (status >= KAHLER_INVALID_DIMENSION && status <= KAHLER_IO)
        return kahler::error_code_name(static_cast<ErrorCode>(status));
      return "unknown";
  }
}

const char* kahler_last_error(void) { return last_error.c_str(); }

void kahler_string_free(char* text) { std::free(text); }

kahler_status kahler_tensor_r0(int n, kahler_tensor** out) {
  return guard([&] { require(out, "null output") = wrap(kahler::build_r0(kahler::make_space(n))); });
}

kahler_status kahler_tensor_random(int n, uint64_t seed, double norm, kahler_tensor** out) {
  return guard([&] {
    require(out, "null output") = wrap(kahler::random_kahler(kahler::make_space(n), seed, norm));
  });
}

kahler_status kahler_tensor_perturbed(int n, double t, uint64_t seed, kahler_tensor** out) {
  return guard([&] {
    require(out, "null output") = wrap(kahler::perturb(kahler::make_space(n), t, seed));
  });
}

kahler_status kahler_tensor_from_entries(int n, const double* entries, size_t count,
                                         kahler_tensor** out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const kahler::HermitianSpace space = kahler::make_space(n);
    const auto d = static_cast<size_t>(space.dim());
    if (entries == nullptr || count != d * d * d * d)
      throw InvalidArgument{"entry count must be (2n)^4"};
    target = wrap(kahler::CurvatureTensor(space, std::vector<double>(entries, entries + count)));
  });
}

kahler_status kahler_tensor_load(const char* path, kahler_tensor** out,
                                 double* symmetry_tolerance) {
  return guard([&] {
    auto& target = require(out, "null output");
    kahler::TensorFile file = kahler::load_tensor(text_arg(path, "null path"));
    if (symmetry_tolerance != nullptr) *symmetry_tolerance = file.symmetry_tolerance;
    target = wrap(std::move(file.tensor));
  });
}

kahler_status kahler_tensor_save(const kahler_tensor* tensor, const char* path,
                                 double symmetry_tolerance) {
  return guard([&] {
    kahler::save_tensor(text_arg(path, "null path"), require(tensor, "null tensor").tensor,
                        symmetry_tolerance);
  });
}

kahler_status kahler_tensor_scale(kahler_tensor* tensor, double factor) {
  return guard([&] { require(tensor, "null tensor").tensor *= factor; });
}

void kahler_tensor_free(kahler_tensor* tensor) { delete tensor; }

int kahler_tensor_n(const kahler_tensor* tensor) { return tensor ? tensor->tensor.space().n() : 0; }

size_t kahler_tensor_size(const kahler_tensor* tensor) { return tensor ? tensor->tensor.size() : 0; }

kahler_status kahler_tensor_entries(const kahler_tensor* tensor, double* out, size_t count) {
  return guard([&] {
    const auto& t = require(tensor, "null tensor").tensor;
    if (out == nullptr || count < t.size()) throw InvalidArgument{"output buffer too small"};
    std::copy(t.entries().begin(), t.entries().end(), out);
  });
}

kahler_status kahler_tensor_distance(const kahler_tensor* a, const kahler_tensor* b, double* out) {
  return guard([&] {
    require(out, "null output") =
        kahler::distance(require(a, "null tensor").tensor, require(b, "null tensor").tensor);
  });
}

kahler_status kahler_check(const kahler_tensor* tensor, double tolerance,
                           kahler_certificate* out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const auto cert = kahler::check_kahler(require(tensor, "null tensor").tensor, tolerance);
    target = {cert.antisymmetry, cert.pair_symmetry, cert.bianchi, cert.j_invariance,
              cert.tolerance,    cert.passed ? 1 : 0};
  });
}

kahler_status kahler_pinch(const kahler_tensor* tensor, int restarts, uint64_t seed,
                           kahler_pinch_report* out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const auto& t = require(tensor, "null tensor").tensor;
    const auto rep = kahler::pinch(t, resolve_restarts(restarts, t.space().n()), seed);
    target.dim = t.dim();
    target.k_min = rep.k_min;
    target.k_max = rep.k_max;
    copy_vector(rep.argmin_plane.u, target.argmin_u);
    copy_vector(rep.argmin_plane.v, target.argmin_v);
    copy_vector(rep.argmax_plane.u, target.argmax_u);
    copy_vector(rep.argmax_plane.v, target.argmax_v);
    target.envelope_lo = rep.envelope_lo;
    target.envelope_hi = rep.envelope_hi;
    target.restarts = rep.restarts;
    target.converged = rep.converged ? 1 : 0;
  });
}

kahler_status kahler_hol(const kahler_tensor* tensor, int restarts, uint64_t seed,
                         kahler_hol_report* out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const auto& t = require(tensor, "null tensor").tensor;
    const auto rep = kahler::hol_extremes(t, resolve_restarts(restarts, t.space().n()), seed);
    target.dim = t.dim();
    target.h_min = rep.h_min;
    target.h_max = rep.h_max;
    copy_vector(rep.argmin_u, target.argmin_u);
    copy_vector(rep.argmax_u, target.argmax_u);
    target.restarts = rep.restarts;
    target.converged = rep.converged ? 1 : 0;
  });
}

kahler_status kahler_chern_index_count(int n, size_t* out) {
  return guard([&] { require(out, "null output") = kahler::enumerate_indices(n).size(); });
}

kahler_status kahler_chern_index_get(int n, size_t position, int* exponents) {
  return guard([&] {
    if (exponents == nullptr) throw InvalidArgument{"null exponents"};
    const auto indices = kahler::enumerate_indices(n);
    if (position >= indices.size()) kahler::fail(ErrorCode::IndexError, "position out of range");
    std::copy(indices[position].exponents().begin(), indices[position].exponents().end(),
              exponents);
  });
}

kahler_status kahler_chern_index_parse(const char* text, int* exponents, int capacity, int* n) {
  return guard([&] {
    const auto index = kahler::ChernIndex::parse(text_arg(text, "null text"));
    if (exponents == nullptr || capacity < index.n()) throw InvalidArgument{"capacity too small"};
    std::copy(index.exponents().begin(), index.exponents().end(), exponents);
    require(n, "null length") = index.n();
  });
}

kahler_status kahler_chern_density(const kahler_tensor* tensor, const int* exponents,
                                   double* gamma) {
  return guard([&] {
    auto& target = require(gamma, "null output");
    const auto& t = require(tensor, "null tensor").tensor;
    target = kahler::chern_product(t, index_from(exponents, t.space().n())).gamma;
  });
}

kahler_status kahler_chern_ratio(const kahler_tensor* tensor, const int* numerator,
                                 const int* denominator, double* ratio) {
  return guard([&] {
    auto& target = require(ratio, "null output");
    const auto& t = require(tensor, "null tensor").tensor;
    const int n = t.space().n();
    target = kahler::chern_ratio(t, index_from(numerator, n), index_from(denominator, n));
  });
}

kahler_status kahler_chern_reference_ratio(int n, const int* numerator, const int* denominator,
                                           double* ratio) {
  return guard([&] {
    auto& target = require(ratio, "null output");
    kahler::make_space(n);
    target = kahler::complex_space_form_ratio(index_from(numerator, n), index_from(denominator, n));
  });
}

kahler_status kahler_identities(int n, int samples, uint64_t seed, double tolerance,
                                kahler_identity_report* out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const auto rep = kahler::run_identity_suite(n, samples, seed, tolerance);
    target.n = rep.n;
    target.samples = rep.samples;
    target.tolerance = rep.tolerance;
    target.identity_one = rep.identity_one;
    target.polarization_real = rep.polarization_real;
    target.polarization_complex_printed = rep.polarization_complex_printed;
    target.polarization_complex_fitted = rep.polarization_complex_fitted;
    target.fitted_coefficient = rep.fitted_coefficient;
    target.suspected_typo = rep.suspected_typo ? 1 : 0;
    target.reconstruction = rep.reconstruction;
    target.solve_from_h = rep.solve_from_h;
    target.projector_idempotence = rep.projector_idempotence;
    target.projector_self_adjoint = rep.projector_self_adjoint;
    target.projector_fixes_r0 = rep.projector_fixes_r0;
    target.berger_r0_violation = rep.berger_r0_violation;
    target.berger_r0_attained = rep.berger_r0_attained;
    target.passed = rep.passed ? 1 : 0;
  });
}

kahler_status kahler_proof_constants(double epsilon, int n, kahler_constant_chain* out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const auto c = kahler::proof_constants(epsilon, n);
    target = {c.epsilon, c.n, c.coefficient_bound, c.eta, c.delta_1, c.delta, c.epsilon_1};
  });
}

kahler_status kahler_certify(const kahler_constant_chain* chain, int samples, uint64_t seed,
                             int restarts, kahler_certification* out) {
  return guard([&] {
    auto& target = require(out, "null output");
    const auto& c = require(chain, "null chain");
    const kahler::ConstantChain core{c.epsilon, c.n,     c.coefficient_bound, c.eta,
                                     c.delta_1, c.delta, c.epsilon_1};
    const auto res = kahler::certify_constants(core, samples, seed, restarts);
    target = {res.accepted, res.attempts, res.counterexamples, res.max_delta, res.max_ratio_dev};
  });
}

kahler_status kahler_sweep(const char* config_json, char** csv, char** summary) {
  return guard([&] {
    auto& csv_out = require(csv, "null csv output");
    auto& summary_out = require(summary, "null summary output");
    const auto config = kahler::parse_sweep_config(text_arg(config_json, "null config"));
    const auto result = kahler::sweep(config);

    nlohmann::ordered_json doc;
    doc["n"] = config.n;
    doc["samples_per_t"] = config.samples_per_t;
    doc["seed"] = config.seed;
    doc["restarts"] = resolve_restarts(config.restarts, config.n);
    doc["index_pairs"] = nlohmann::ordered_json::array();
    for (const auto& [i, j] : result.index_pairs)
      doc["index_pairs"].push_back(nlohmann::ordered_json::array({i.to_string(), j.to_string()}));
    doc["aggregates"] = nlohmann::ordered_json::array();
    for (const auto& a : result.aggregates)
      doc["aggregates"].push_back(nlohmann::ordered_json{{"t", a.t},
                                   {"included", a.included},
                                   {"excluded", a.excluded},
                                   {"max_delta", a.max_delta},
                                   {"max_frobenius_dist", a.max_frobenius_dist},
                                   {"max_h_dev", a.max_h_dev},
                                   {"max_ratio_dev", a.max_ratio_dev}});
    doc["records"] = result.records.size();
    doc["excluded"] = result.excluded;

    char* table = duplicate(kahler::emit_csv(result.records));
    try {
      summary_out = duplicate(doc.dump(2));
    } catch (...) {
      std::free(table);
      throw;
    }
    csv_out = table;
  });
}

}  // extern "C"
