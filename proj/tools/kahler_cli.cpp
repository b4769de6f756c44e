// Command-line front end over the C API. JSON payloads go to stdout,
// diagnostics to stderr. Exit codes: 0 ok, 1 check failed, 2 usage or input
// error, 3 resource limit.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kahler/kahler.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kMaxCliN = 4;

struct TensorDeleter {
  void operator()(kahler_tensor* t) const { kahler_tensor_free(t); }
};
using TensorPtr = std::unique_ptr<kahler_tensor, TensorDeleter>;

struct CommandError {
  int exit_code;
};

int exit_code_for(kahler_status status, bool precondition_is_usage) {
  switch (status) {
    case KAHLER_OK:
      return kExitOk;
    case KAHLER_RESOURCE_LIMIT:
      return kExitResource;
    case KAHLER_PARSE:
    case KAHLER_IO:
    case KAHLER_INVALID_DIMENSION:
    case KAHLER_DIMENSION_TOO_SMALL:
    case KAHLER_INDEX_ERROR:
    case KAHLER_INVALID_ARGUMENT:
      return kExitUsage;
    case KAHLER_PRECONDITION:
      return precondition_is_usage ? kExitUsage : kExitCheckFailed;
    default:
      return kExitCheckFailed;
  }
}

// Throws CommandError after reporting a failed call.
void check(kahler_status status, bool precondition_is_usage = false) {
  if (status == KAHLER_OK) return;
  std::cerr << "error: " << kahler_status_name(status) << ": " << kahler_last_error() << "\n";
  throw CommandError{exit_code_for(status, precondition_is_usage)};
}

[[noreturn]] void usage_error(const std::string& message, int code = kExitUsage) {
  std::cerr << "error: " << message << "\n";
  throw CommandError{code};
}

void require_cli_dimension(int n, int minimum) {
  if (n < minimum) usage_error("n must be at least " + std::to_string(minimum));
  if (n > kMaxCliN)
    usage_error("n = " + std::to_string(n) + " exceeds the supported maximum " +
                    std::to_string(kMaxCliN),
                kExitResource);
}

TensorPtr load(const std::string& path) {
  kahler_tensor* raw = nullptr;
  check(kahler_tensor_load(path.c_str(), &raw, nullptr));
  TensorPtr t(raw);
  if (kahler_tensor_n(raw) > kMaxCliN)
    usage_error("tensor dimension exceeds the supported maximum", kExitResource);
  return t;
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

Json vector_json(const double* v, int dim) { return Json(std::vector<double>(v, v + dim)); }

std::string index_string(const std::vector<int>& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
  return out;
}

std::vector<int> parse_index(const std::string& text, int n) {
  std::vector<int> e(text.size() + 1);
  int length = 0;
  check(kahler_chern_index_parse(text.c_str(), e.data(), static_cast<int>(e.size()), &length));
  e.resize(static_cast<std::size_t>(length));
  if (length != n) usage_error("index " + text + " does not match n = " + std::to_string(n));
  return e;
}

std::vector<std::vector<int>> all_indices(int n) {
  std::size_t count = 0;
  check(kahler_chern_index_count(n, &count));
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<int> e(static_cast<std::size_t>(n));
    check(kahler_chern_index_get(n, i, e.data()));
    out.push_back(std::move(e));
  }
  return out;
}

// ---- commands -----------------------------------------------------------

struct R0Options {
  int n = 2;
  std::string out;
};

int cmd_r0(const R0Options& o) {
  require_cli_dimension(o.n, 1);
  kahler_tensor* raw = nullptr;
  check(kahler_tensor_r0(o.n, &raw));
  TensorPtr t(raw);
  kahler_certificate cert{};
  check(kahler_check(t.get(), 1e-9, &cert));
  check(kahler_tensor_save(t.get(), o.out.c_str(), cert.tolerance));
  emit(Json{{"command", "r0"}, {"n", o.n}, {"path", o.out}, {"entries", kahler_tensor_size(t.get())}});
  return kExitOk;
}

struct ValidateOptions {
  std::string path;
  std::optional<double> tolerance;
};

int cmd_validate(const ValidateOptions& o) {
  kahler_tensor* raw = nullptr;
  double file_tolerance = 0.0;
  check(kahler_tensor_load(o.path.c_str(), &raw, &file_tolerance));
  TensorPtr t(raw);
  if (kahler_tensor_n(raw) > kMaxCliN)
    usage_error("tensor dimension exceeds the supported maximum", kExitResource);
  const double tol = o.tolerance.value_or(file_tolerance);
  if (!(tol >= 0.0)) usage_error("--tol must be nonnegative");
  kahler_certificate cert{};
  check(kahler_check(t.get(), tol, &cert));
  emit(Json{{"command", "validate"},
            {"n", kahler_tensor_n(t.get())},
            {"tolerance", tol},
            {"residuals",
             {{"antisymmetry", cert.antisymmetry},
              {"pair_symmetry", cert.pair_symmetry},
              {"bianchi", cert.bianchi},
              {"j_invariance", cert.j_invariance}}},
            {"passed", cert.passed != 0}});
  if (!cert.passed) std::cerr << "symmetry check failed at tolerance " << tol << "\n";
  return cert.passed ? kExitOk : kExitCheckFailed;
}

struct PinchOptions {
  std::string path;
  int restarts = 0;
  std::uint64_t seed = 0;
};

int cmd_pinch(const PinchOptions& o) {
  if (o.restarts < 0) usage_error("--restarts must be >= 0");
  TensorPtr t = load(o.path);
  kahler_pinch_report rep{};
  check(kahler_pinch(t.get(), o.restarts, o.seed, &rep));
  Json doc{{"command", "pinch"},
           {"n", rep.dim / 2},
           {"seed", o.seed},
           {"restarts", rep.restarts},
           {"k_min", rep.k_min},
           {"k_max", rep.k_max},
           {"argmin_plane", {{"u", vector_json(rep.argmin_u, rep.dim)}, {"v", vector_json(rep.argmin_v, rep.dim)}}},
           {"argmax_plane", {{"u", vector_json(rep.argmax_u, rep.dim)}, {"v", vector_json(rep.argmax_v, rep.dim)}}},
           {"envelope", {{"lo", rep.envelope_lo}, {"hi", rep.envelope_hi}}}};
  // After rescaling to k_max = -1/4: -1 - delta <= K <= -1/4.
  doc["quarter_pinching_delta"] =
      rep.k_max < 0.0 ? Json(rep.k_min / (4.0 * rep.k_max) - 1.0) : Json(nullptr);
  doc["converged"] = rep.converged != 0;
  emit(doc);
  if (!rep.converged) std::cerr << "optimizer restarts did not agree\n";
  return rep.converged ? kExitOk : kExitCheckFailed;
}

struct ChernOptions {
  std::string path;
  std::string ratio;
  bool all = false;
};

int cmd_chern(const ChernOptions& o) {
  if (o.all == !o.ratio.empty()) usage_error("give exactly one of --ratio I:J or --all");
  TensorPtr t = load(o.path);
  const int n = kahler_tensor_n(t.get());

  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
  std::vector<std::vector<int>> indices;
  if (o.all) {
    indices = all_indices(n);
    for (std::size_t i = 0; i < indices.size(); ++i)
      for (std::size_t j = i + 1; j < indices.size(); ++j) pairs.emplace_back(indices[i], indices[j]);
  } else {
    const auto colon = o.ratio.find(':');
    if (colon == std::string::npos) usage_error("--ratio expects I:J, e.g. 2,0:0,1");
    const auto num = parse_index(o.ratio.substr(0, colon), n);
    const auto den = parse_index(o.ratio.substr(colon + 1), n);
    indices = {num};
    if (den != num) indices.push_back(den);
    pairs.emplace_back(num, den);
  }

  Json densities = Json::array();
  for (const auto& e : indices) {
    double gamma = 0.0;
    check(kahler_chern_density(t.get(), e.data(), &gamma));
    densities.push_back({{"index", index_string(e)}, {"gamma", gamma}});
  }
  Json ratios = Json::array();
  for (const auto& [num, den] : pairs) {
    double value = 0.0, reference = 0.0;
    check(kahler_chern_ratio(t.get(), num.data(), den.data(), &value));
    check(kahler_chern_reference_ratio(n, num.data(), den.data(), &reference));
    ratios.push_back({{"numerator", index_string(num)},
                      {"denominator", index_string(den)},
                      {"ratio", value},
                      {"space_form_ratio", reference},
                      {"deviation", std::abs(value - reference)}});
  }
  emit(Json{{"command", "chern"}, {"n", n}, {"densities", densities}, {"ratios", ratios}});
  return kExitOk;
}

struct IdentitiesOptions {
  int n = 2;
  int samples = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
};

int cmd_identities(const IdentitiesOptions& o) {
  require_cli_dimension(o.n, 2);
  if (o.samples < 1) usage_error("--samples must be >= 1");
  if (!(o.tolerance > 0.0)) usage_error("--tol must be > 0");
  kahler_identity_report r{};
  check(kahler_identities(o.n, o.samples, o.seed, o.tolerance, &r), true);
  emit(Json{{"command", "identities"},
            {"n", r.n},
            {"samples", r.samples},
            {"seed", o.seed},
            {"tolerance", r.tolerance},
            {"max_residuals",
             {{"identity_one", r.identity_one},
              {"polarization_real", r.polarization_real},
              {"polarization_complex_printed", r.polarization_complex_printed},
              {"polarization_complex_fitted", r.polarization_complex_fitted},
              {"reconstruction", r.reconstruction},
              {"solve_from_h", r.solve_from_h},
              {"projector_idempotence", r.projector_idempotence},
              {"projector_self_adjoint", r.projector_self_adjoint},
              {"projector_fixes_r0", r.projector_fixes_r0},
              {"berger_r0_violation", r.berger_r0_violation},
              {"berger_r0_attained", r.berger_r0_attained}}},
            {"fitted_coefficient", r.fitted_coefficient},
            {"suspected_typo", r.suspected_typo != 0},
            {"passed", r.passed != 0}});
  if (r.suspected_typo)
    std::cerr << "note: second polarization identity fails with its printed coefficient; "
                 "fitted coefficient "
              << r.fitted_coefficient << "\n";
  return r.passed ? kExitOk : kExitCheckFailed;
}

struct SweepOptions {
  std::string config;
  std::string out;
};

int cmd_sweep(const SweepOptions& o) {
  std::ifstream in(o.config);
  if (!in) usage_error("cannot read config " + o.config);
  std::stringstream text;
  text << in.rdbuf();
  const Json config = Json::parse(text.str(), nullptr, false);
  if (config.is_object() && config.contains("n") && config["n"].is_number_integer() &&
      config["n"].get<long long>() > kMaxCliN)
    usage_error("sweep dimension exceeds the supported maximum", kExitResource);
  char* csv = nullptr;
  char* summary = nullptr;
  check(kahler_sweep(text.str().c_str(), &csv, &summary), true);
  const std::unique_ptr<char, void (*)(char*)> csv_guard(csv, kahler_string_free);
  const std::unique_ptr<char, void (*)(char*)> summary_guard(summary, kahler_string_free);
  std::ofstream out(o.out, std::ios::binary);
  if (!(out << csv)) usage_error("cannot write " + o.out);
  out.close();
  Json doc = Json::parse(summary);
  doc["csv"] = o.out;
  Json payload{{"command", "sweep"}};
  payload.update(doc);
  emit(payload);
  return kExitOk;
}

struct ConstantsOptions {
  double epsilon = 0.1;
  int n = 2;
  int certify = 0;
  std::uint64_t seed = 0;
  int restarts = 0;
};

int cmd_constants(const ConstantsOptions& o) {
  if (!(o.epsilon > 0.0)) usage_error("--epsilon must be > 0");
  require_cli_dimension(o.n, 2);
  if (o.certify < 0 || o.restarts < 0) usage_error("--certify and --restarts must be >= 0");
  kahler_constant_chain c{};
  check(kahler_proof_constants(o.epsilon, o.n, &c), true);
  Json doc{{"command", "constants"},
           {"epsilon", c.epsilon},
           {"n", c.n},
           {"coefficient_bound", c.coefficient_bound},
           {"eta", c.eta},
           {"delta_1", c.delta_1},
           {"delta", c.delta},
           {"epsilon_1", c.epsilon_1}};
  int code = kExitOk;
  if (o.certify > 0) {
    kahler_certification cert{};
    check(kahler_certify(&c, o.certify, o.seed, o.restarts, &cert), true);
    doc["certification"] = {{"samples", o.certify},
                            {"seed", o.seed},
                            {"accepted", cert.accepted},
                            {"attempts", cert.attempts},
                            {"counterexamples", cert.counterexamples},
                            {"max_delta", cert.max_delta},
                            {"max_ratio_dev", cert.max_ratio_dev}};
    if (cert.counterexamples > 0) {
      std::cerr << cert.counterexamples << " sampled tensors violate the ratio bound\n";
      code = kExitCheckFailed;
    }
  }
  emit(doc);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kahler curvature tensor toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "kahler 1.0");

  R0Options r0;
  auto* r0_cmd = app.add_subcommand("r0", "write the model tensor R0 to a file");
  r0_cmd->add_option("--n", r0.n, "complex dimension (1..4)")->required();
  r0_cmd->add_option("--out", r0.out, "output tensor file")->required();

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "check the Kahler symmetries of a tensor file");
  validate_cmd->add_option("path", validate.path, "tensor file")->required();
  validate_cmd->add_option("--tol", validate.tolerance, "absolute tolerance (default: file value)");

  PinchOptions pinch;
  auto* pinch_cmd = app.add_subcommand("pinch", "extremes of sectional curvature");
  pinch_cmd->add_option("path", pinch.path, "tensor file")->required();
  pinch_cmd->add_option("--restarts", pinch.restarts, "optimizer restarts (0: default for n)");
  pinch_cmd->add_option("--seed", pinch.seed, "random seed")->required();

  ChernOptions chern;
  auto* chern_cmd = app.add_subcommand("chern", "Chern number densities and ratios");
  chern_cmd->add_option("path", chern.path, "tensor file")->required();
  chern_cmd->add_option("--ratio", chern.ratio, "index pair a_1,...,a_n:b_1,...,b_n");
  chern_cmd->add_flag("--all", chern.all, "every pair of indices");

  IdentitiesOptions identities;
  auto* identities_cmd = app.add_subcommand("identities", "residuals of the curvature identities");
  identities_cmd->add_option("--n", identities.n, "complex dimension (2..4)");
  identities_cmd->add_option("--samples", identities.samples, "random samples");
  identities_cmd->add_option("--seed", identities.seed, "random seed")->required();
  identities_cmd->add_option("--tol", identities.tolerance, "pass tolerance");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "perturbation sweep around R0");
  sweep_cmd->add_option("--config", sweep.config, "JSON config file")->required();
  sweep_cmd->add_option("--out", sweep.out, "CSV output file")->required();

  ConstantsOptions constants;
  auto* constants_cmd = app.add_subcommand("constants", "explicit pinching constants for epsilon");
  constants_cmd->add_option("--epsilon", constants.epsilon, "target ratio accuracy")->required();
  constants_cmd->add_option("--n", constants.n, "complex dimension (2..4)");
  constants_cmd->add_option("--certify", constants.certify, "sample this many sub-delta tensors");
  constants_cmd->add_option("--seed", constants.seed, "random seed for --certify");
  constants_cmd->add_option("--restarts", constants.restarts, "optimizer restarts for --certify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*r0_cmd) return cmd_r0(r0);
    if (*validate_cmd) return cmd_validate(validate);
    if (*pinch_cmd) return cmd_pinch(pinch);
    if (*chern_cmd) return cmd_chern(chern);
    if (*identities_cmd) return cmd_identities(identities);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*constants_cmd) return cmd_constants(constants);
  } catch (const CommandError& e) {
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
