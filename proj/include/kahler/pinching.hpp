#pragma once

#include <cstdint>
#include <vector>

#include "kahler/curvature.hpp"

namespace kahler {

// Symmetric curvature operator on sorted index pairs (i<j), (k<l):
// M[(i,j),(k,l)] = R[i][j][k][l]. For orthonormal u, v the Rayleigh quotient
// of the bivector u^v (coefficients u_i v_j - u_j v_i) equals K(u, v).
Matrix curvature_operator(const CurvatureTensor& r);

struct Envelope {
  double lo = 0.0;
  double hi = 0.0;
};

// Extreme eigenvalues of the curvature operator; every sectional curvature
// lies in [lo, hi].
Envelope curvature_operator_envelope(const CurvatureTensor& r);

struct OptimizerSettings {
  int max_iterations = 10000;
  double gradient_tolerance = 1e-10;
  double stability_tolerance = 1e-8;
};

// 64 restarts for n <= 3, 256 above.
int default_restarts(int n);

struct PinchReport {
  double k_min = 0.0;
  double k_max = 0.0;
  TwoPlane argmin_plane;
  TwoPlane argmax_plane;
  double envelope_lo = 0.0;
  double envelope_hi = 0.0;
  int restarts = 0;
  bool converged = false;
};

struct HolReport {
  double h_min = 0.0;
  double h_max = 0.0;
  Vector argmin_u;
  Vector argmax_u;
  int restarts = 0;
  bool converged = false;
};

// Value and Euclidean gradient of the Gram-normalized sectional curvature
// R(u,v,u,v) / (|u|^2|v|^2 - <u,v>^2), from a precomputed curvature operator.
struct SectionalGradient {
  double value = 0.0;
  Vector grad_u;
  Vector grad_v;
};
SectionalGradient sectional_gradient(const Matrix& curvature_op, const Vector& u, const Vector& v);

// Value and gradient of H(u) / |u|^4.
struct HolomorphicGradient {
  double value = 0.0;
  Vector grad;
};
HolomorphicGradient holomorphic_gradient(const HermitianSpace& space, const Matrix& curvature_op,
                                         const Vector& u);

// Multistart safeguarded Newton search, in local Grassmannian charts, for
// the extremes of the sectional curvature over 2-planes. Restart i starts
// from a plane seeded by derive_seed(seed, i); the lowest-index restart wins
// ties.
PinchReport pinch(const CurvatureTensor& r, int restarts, std::uint64_t seed,
                  const OptimizerSettings& settings = {});

// Same search for the holomorphic sectional curvature over the unit sphere.
HolReport hol_extremes(const CurvatureTensor& r, int restarts, std::uint64_t seed,
                       const OptimizerSettings& settings = {});

struct BergerReport {
  double alpha = 0.0;               // -k_min
  double bound = 0.0;               // (2/3)(alpha - 1/4)
  double max_abs_component = 0.0;   // max |R(X,Y,Z,W)| over sampled quadruples
  double max_violation = 0.0;       // max |R(X,Y,Z,W)| - bound
  int samples = 0;
};

// Samples orthonormal quadruples (half generic, half of the form
// {u, Ju, v, Jv}) and compares |R(X,Y,Z,W)| with (2/3)(alpha - 1/4).
// Violations are reported, never thrown; n = 1 throws DimensionTooSmall.
BergerReport berger_bound_check(const CurvatureTensor& r, const PinchReport& report, int samples,
                                std::uint64_t seed);

struct NormalizedTensor {
  CurvatureTensor tensor;
  PinchReport report;   // extremes of the rescaled tensor
  double scale = 1.0;   // lambda = -1 / (4 k_max)
  double delta = 0.0;   // -(new k_min) - 1
  bool anomaly = false; // delta < 0 beyond rounding: better than quarter-pinched
};

// Rescales so that k_max = -1/4. Throws NotNegativelyCurved if k_max >= 0.
NormalizedTensor normalize_quarter(const CurvatureTensor& r, const PinchReport& report);

}  // namespace kahler
