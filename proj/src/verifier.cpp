#include "weylforge/verifier.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "weylforge/errors.hpp"

namespace weylforge {

namespace {

const complexd im{0.0, 1.0};
constexpr double pi = std::numbers::pi;

unitary4 item_matrix(const circuit_item& item) {
    if (const auto* ia = std::get_if<interaction_item>(&item)) {
        if (!std::isfinite(ia->gamma)) {
            throw malformed_circuit("interaction strength is not finite");
        }
        switch (ia->kind) {
        case interaction_item::kind_t::zz:
            return exp_canonical(pauli_axis::z, ia->gamma);
        case interaction_item::kind_t::xxyy:
            return exp_canonical(pauli_axis::x, pi / 2) * exp_canonical(pauli_axis::y, pi / 2);
        }
        throw malformed_circuit("unknown interaction kind");
    }
    const auto& loc = std::get<local_item>(item);
    if (!is_unitary(loc.q1, 1e-9) || !is_unitary(loc.q2, 1e-9)) {
        throw malformed_circuit("local block is not unitary");
    }
    return kron(loc.q1, loc.q2);
}

// One interleaved sample for the coverage experiment: n pulses separated by
// n+1 Haar-random local layers, reporting the signed distance of its class
// past the coverage boundary (positive = outside both tetrahedra).
double sample_boundary_excess(int n, double gamma, std::uint64_t sample_seed) {
    rng r(sample_seed);
    const unitary4 pulse = exp_canonical(pauli_axis::z, gamma);
    unitary4 m = kron(haar_random_su2(r), haar_random_su2(r));
    for (int k = 0; k < n; ++k) {
        m = kron(haar_random_su2(r), haar_random_su2(r)) * (pulse * m);
    }
    const canonical_class c = class_from_unitary(m);
    const double ng = n * gamma;
    return std::min(c.c1 + c.c2 + c.c3 - ng, (pi - ng) - (c.c1 - c.c2 - c.c3));
}

coverage_sample_report run_coverage(int n, gate_strength gamma, long long samples,
                                    std::uint64_t seed, bool parallel) {
    if (n < 3) {
        throw std::invalid_argument("coverage sampling is defined for n >= 3 applications");
    }
    if (samples < 0) {
        throw std::invalid_argument("sample count must be non-negative");
    }
    const double tol = tol_class();
    long long violations = 0;
    double max_excess = -std::numeric_limits<double>::infinity();

#ifdef _OPENMP
#pragma omp parallel for if (parallel) schedule(static) \
    reduction(+ : violations) reduction(max : max_excess)
#endif
    for (long long i = 0; i < samples; ++i) {
        const double e =
            sample_boundary_excess(n, gamma.gamma, rng::derive(seed, static_cast<std::uint64_t>(i)));
        if (e > tol) {
            ++violations;
        }
        if (e > max_excess) {
            max_excess = e;
        }
    }
    (void)parallel;

    coverage_sample_report report;
    report.n = n;
    report.gamma = gamma.gamma;
    report.samples = samples;
    report.violations = violations;
    report.max_boundary_excess = samples > 0 ? max_excess : 0.0;
    return report;
}

} // namespace

unitary4 simulate(const circuit_ir& circuit) {
    if (!std::isfinite(circuit.global_phase)) {
        throw malformed_circuit("global phase is not finite");
    }
    unitary4 m = unitary4::Identity();
    for (const auto& item : circuit.items) {
        m = item_matrix(item) * m;
    }
    return std::exp(im * circuit.global_phase) * m;
}

equivalence_verdict check_equivalence(const unitary4& a, const unitary4& b) {
    equivalence_verdict v;
    v.phase_residual = phase_distance(a, b);
    v.exact_up_to_phase = v.phase_residual < tol_class();
    v.class_a = class_from_unitary(a);
    v.class_b = class_from_unitary(b);
    v.invariant_residual = invariant_distance(invariants_from_unitary(a), invariants_from_unitary(b));
    v.locally_equivalent = v.invariant_residual < tol_class();
    return v;
}

coverage_sample_report coverage_monte_carlo(int n, gate_strength gamma, long long samples,
                                            std::uint64_t seed) {
    return run_coverage(n, gamma, samples, seed, true);
}

coverage_sample_report coverage_monte_carlo_serial(int n, gate_strength gamma, long long samples,
                                                   std::uint64_t seed) {
    return run_coverage(n, gamma, samples, seed, false);
}

std::vector<bounds_row> bounds_table(const std::vector<double>& gamma_grid) {
    std::vector<bounds_row> rows;
    rows.reserve(gamma_grid.size());
    for (const double g : gamma_grid) {
        const gate_strength gs(g);
        bounds_row row;
        row.gamma = g;
        row.minimum = min_applications(gs);
        row.constructive = constructive_applications(gs);
        row.old_bound = old_bound_applications(gs);
        rows.push_back(row);
    }
    return rows;
}

} // namespace weylforge
