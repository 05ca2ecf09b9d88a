#pragma once

#include <array>
#include <utility>

#include "weylforge/su_algebra.hpp"

namespace weylforge {

// A point of the Weyl chamber pi - c2 >= c1 >= c2 >= c3 >= 0.  The canonical
// representative additionally folds base-plane points (c3 = 0) to c1 <= pi/2.
struct canonical_class {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

struct local_invariants {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
};

// An interaction strength in (0, pi/2]; the constructor validates (with a
// tiny snap-to-pi/2 guard for rounded inputs).
struct gate_strength {
    explicit gate_strength(double g);
    double gamma;
};

struct local_gate_pair {
    unitary2 k1_left  = unitary2::Identity(); // outer pair (applied last)
    unitary2 k1_right = unitary2::Identity();
    unitary2 k2_left  = unitary2::Identity(); // inner pair (applied first)
    unitary2 k2_right = unitary2::Identity();
    double phase = 0.0;
};

struct kak_result {
    local_gate_pair locals;
    canonical_class c;
};

struct coverage_region {
    int n = 0;
    double gamma = 0.0;
    // Corners of the covered polytope: the B face (around the identity) and
    // the C face (around the chamber's far edge), valid for n >= 3.
    std::array<canonical_class, 3> vertices_b{};
    std::array<canonical_class, 3> vertices_c{};
};

// A(c) = exp(c1 (i/2) XX) exp(c2 (i/2) YY) exp(c3 (i/2) ZZ).
unitary4 canonical_gate(const canonical_class& c);

// Reduce an arbitrary interaction triple into the canonical chamber
// representative (shift mod pi, sort, and fold), discarding the local
// bookkeeping.
canonical_class canonicalize(double r1, double r2, double r3);

// Same reduction, but also returns locals (l, r) and a phase with
//   A(r1, r2, r3) = exp(i phase) * l * A(c) * r,
// where l and r are single-qubit pairs (as 4x4 matrices).
struct reduction_result {
    canonical_class c;
    unitary4 left  = unitary4::Identity();
    unitary4 right = unitary4::Identity();
    double phase = 0.0;
};
reduction_result canonical_reduce(double r1, double r2, double r3);

local_invariants invariants_from_class(const canonical_class& c);
local_invariants invariants_from_unitary(const unitary4& u);

// Interaction content only (cheaper than a full decomposition).
canonical_class class_from_unitary(const unitary4& u);

// u = exp(i phase) (k1_left (x) k1_right) A(c) (k2_left (x) k2_right).
// Throws decomposition_failure if the reconstruction residual cannot be
// driven below tolerance.
kak_result kak_decompose(const unitary4& u);
unitary4 assemble_kak(const kak_result& k);

// Splits a local (tensor-product) 4x4 unitary into exp(i phase) l (x) r with
// det l = det r = 1.  Throws decomposition_failure when u is not a local
// gate to within tol_recon-level residuals.
struct local_split {
    unitary2 l;
    unitary2 r;
    double phase = 0.0;
};
local_split split_local(const unitary4& u);

// Chamber membership test (type invariant only, not the base fold).
bool in_chamber(const canonical_class& c, double tol = 1e-9);

// Componentwise max-abs distance between class triples.
double class_distance(const canonical_class& a, const canonical_class& b);

// Max-abs distance between invariant triples, comparing |g2| (the g2 sign is
// not observable from a raw unitary).
double invariant_distance(const local_invariants& a, const local_invariants& b);

// Whether n applications of a ZZ pulse of strength gamma suffice for the
// class c: for n >= 3 the two-faced polytope condition, for n = 2 the base
// plane within pulse budget, for n = 1 the single pulse point.
bool class_covered(int n, gate_strength gamma, const canonical_class& c);

// Lower bound ceil(3 pi / (2 gamma)) on the number of applications needed to
// cover the whole chamber.
int min_applications(gate_strength gamma);

// Applications the constructive synthesis pipeline guarantees:
// 4 at gamma = pi/2, otherwise ceil(pi/gamma) + ceil(pi/(2 gamma)).
int constructive_applications(gate_strength gamma);

// Older uniform-compilation guarantee 6 ceil(pi/(4 gamma)), for comparison.
int old_bound_applications(gate_strength gamma);

// Corner points of the n-application coverage region (requires n >= 3).
coverage_region coverage_vertices(int n, gate_strength gamma);

// Locals (and phase) dressing v into u:
//   u = exp(i phase) (k1_left (x) k1_right) v (k2_left (x) k2_right).
// Throws not_locally_equivalent if the invariants of u and v differ beyond
// tolerance or no dressing reaches the residual target.
local_gate_pair local_gate_recovery(const unitary4& u, const unitary4& v);

} // namespace weylforge
