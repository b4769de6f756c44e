#pragma once

#include <cstdint>

namespace kahler {

// Max residuals of the algebraic identities over `samples` random unit-norm
// Kahler tensors (each with a random unitary pair {u, Ju, v, Jv}), plus the
// projector and Berger checks. Requires n >= 2.
struct IdentityReport {
  int n = 0;
  int samples = 0;
  double tolerance = 1e-9;

  double identity_one = 0.0;                  // K(u,v) + K(u,Jv) - R(u,Ju,v,Jv)
  double polarization_real = 0.0;             // first identity, as printed
  double polarization_complex_printed = 0.0;  // second identity, printed coefficient
  double polarization_complex_fitted = 0.0;   // second identity, fitted coefficient
  double fitted_coefficient = 0.0;
  bool suspected_typo = false;                // printed second identity fails
  double reconstruction = 0.0;                // 24-term formula roundtrip
  double solve_from_h = 0.0;                  // H-value solve vs direct contraction
  double projector_idempotence = 0.0;
  double projector_self_adjoint = 0.0;
  double projector_fixes_r0 = 0.0;
  double berger_r0_violation = 0.0;           // max |R0(X,Y,Z,W)| - 1/2
  double berger_r0_attained = 0.0;            // | |R0(u,Ju,v,Jv)| - 1/2 |

  // Every required residual (all but the printed second identity) <= tolerance.
  bool passed = false;
};

IdentityReport run_identity_suite(int n, int samples, std::uint64_t seed, double tolerance = 1e-9);

}  // namespace kahler
