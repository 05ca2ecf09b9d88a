#pragma once

namespace weylforge {

// Unitarity checks on inputs.
inline constexpr double tol_unitary = 1e-12;

// Reconstruction residuals of exact algebraic identities (decompose/rebuild).
inline constexpr double tol_recon = 1e-12;

// Class-membership and equivalence decisions.  Defaults to 1e-9 and may be
// overridden at runtime (the CLI honors the WEYLFORGE_TOL environment
// variable through set_tol_class).
double tol_class();

// Accepts values in [1e-14, 1e-6]; throws std::invalid_argument otherwise.
void set_tol_class(double value);

} // namespace weylforge
