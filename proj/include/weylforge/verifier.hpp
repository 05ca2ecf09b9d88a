#pragma once

#include <cstdint>
#include <vector>

#include "weylforge/composer.hpp"

namespace weylforge {

struct equivalence_verdict {
    bool exact_up_to_phase = false;
    bool locally_equivalent = false;
    canonical_class class_a;
    canonical_class class_b;
    double phase_residual = 0.0;     // phase_distance(a, b)
    double invariant_residual = 0.0; // invariant triple distance
};

struct coverage_sample_report {
    int n = 0;
    double gamma = 0.0;
    long long samples = 0;
    long long violations = 0;
    // Largest signed distance past the coverage boundary seen over all
    // samples (negative when every sample sits strictly inside).
    double max_boundary_excess = 0.0;
};

struct bounds_row {
    double gamma = 0.0;
    int minimum = 0;
    int constructive = 0;
    int old_bound = 0;
};

// Multiply out a circuit (temporal order, first item rightmost) into its
// 4x4 matrix including the global phase.  Throws malformed_circuit on
// non-finite angles or non-unitary local blocks.
unitary4 simulate(const circuit_ir& circuit);

equivalence_verdict check_equivalence(const unitary4& a, const unitary4& b);

// Sample circuits of n ZZ(gamma) pulses interleaved with n+1 Haar-random
// local layers and test every sampled class against class_covered.
// Parallelized when OpenMP is available; per-sample seeds are derived
// independently, so the report is identical to the serial reference.
coverage_sample_report coverage_monte_carlo(int n, gate_strength gamma,
                                            long long samples, std::uint64_t seed);
coverage_sample_report coverage_monte_carlo_serial(int n, gate_strength gamma,
                                                   long long samples, std::uint64_t seed);

std::vector<bounds_row> bounds_table(const std::vector<double>& gamma_grid);

} // namespace weylforge
