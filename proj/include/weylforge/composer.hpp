#pragma once

#include <variant>
#include <vector>

#include "weylforge/weyl_geometry.hpp"

namespace weylforge {

// The entangling resource the synthesizer is allowed to use.
struct gate_spec {
    enum class kind_t { controlled_u, cnot, dcnot };

    kind_t kind = kind_t::controlled_u;
    double gamma = 0.0; // reduced interaction strength (pi/2 for cnot/dcnot)

    static gate_spec controlled_u(double gamma);
    static gate_spec cnot();
    static gate_spec dcnot();
};

// One use of the entangling resource: either a ZZ pulse exp(gamma (i/2) ZZ)
// or the fixed exp((pi/2)(i/2) XX) exp((pi/2)(i/2) YY) block.
struct interaction_item {
    enum class kind_t { zz, xxyy };
    kind_t kind = kind_t::zz;
    double gamma = 0.0; // zz strength; ignored for xxyy
};

struct local_item {
    unitary2 q1 = unitary2::Identity(); // top wire (left Kronecker factor)
    unitary2 q2 = unitary2::Identity();
};

using circuit_item = std::variant<interaction_item, local_item>;

// Items are in temporal order: items.front() acts first, so the circuit's
// matrix is exp(i global_phase) * M(items.back()) * ... * M(items.front()).
struct circuit_ir {
    std::vector<circuit_item> items;
    double global_phase = 0.0;

    int interaction_count() const;
};

struct composition_angles {
    double beta1 = 0.0;
    double beta2 = 0.0;
};

struct synthesis_report {
    circuit_ir circuit;
    int applications = 0;
    int min_bound = 0;
    int constructive_bound = 0;
    canonical_class target_class;
    double residual = 0.0;
};

// Reduce a controlled exp(-i gamma0 n.sigma) gate (gamma0 = |n|) to its ZZ
// normal form: returns the folded strength in (0, pi/2] and the single-qubit
// gate u1 diagonalizing n.sigma, such that with the raw angle g0 = |n|,
//   ctrl(exp(-i g0 n.sigma))
//     = (I (x) u1^dag exp(-g0 (i/2) sigma_z)) exp(g0 (i/2) ZZ) (I (x) u1).
// Throws not_entangling when |n| is a multiple of pi.
std::pair<gate_strength, unitary2> controlled_u_normalize(const Eigen::Vector3d& n);

// Angles (beta1, beta2) with
//   exp(g2 (i/2) ZZ) (Ry(beta1) (x) Ry(beta2)) exp(g1 (i/2) ZZ)
// locally equivalent to the class [c1, c2, 0]; cos(beta1) is the larger root
// of the interaction quadratic and both betas are principal arccos values.
// Throws out_of_reach when the class is not in the two-pulse image.
composition_angles two_pulse_solve(gate_strength gamma1, gate_strength gamma2,
                                   double c1, double c2);

// A circuit of ZZ(gamma) pulses locally equivalent to [c3, 0, 0]: empty when
// c3 = 0, a single pulse when c3 = gamma, otherwise max(2, ceil(c3/gamma))
// pulses (one pulse can only realize c3 = gamma exactly, so sub-gamma
// fractions take two): a balanced adjacent split with one Ry (x) Ry seam.
circuit_ir zz_fraction_synthesize(gate_strength gamma, double c3);

// A circuit of ZZ(gamma) pulses whose matrix equals
// exp(c1 (i/2) XX) exp(c2 (i/2) YY) (class [c1, c2, 0] after folding), using
// at most max(2, ceil(((c1 folded) + c2)/gamma)) pulses: a lattice of whole
// pulses plus one equal-pair two-pulse tail.
circuit_ir base_plane_synthesize(gate_strength gamma, double c1, double c2);

// Exactly three applications for any chamber class, gate = controlled-not.
circuit_ir cnot3_synthesize(const canonical_class& c);

// Exactly three applications for any chamber class, gate = double
// controlled-not (the XX+YY block).
circuit_ir dcnot3_synthesize(const canonical_class& c);

// End-to-end synthesis of an arbitrary 4x4 unitary from the given resource:
// decompose, split the class into ZZ-axis and base-plane parts, synthesize
// each, dress with recovered locals, fuse adjacent local items.  Local
// targets use zero applications; cnot/dcnot resources use exactly three.
synthesis_report full_synthesize(const unitary4& target, const gate_spec& spec);

} // namespace weylforge
