#include "weylforge/composer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "weylforge/errors.hpp"
#include "weylforge/verifier.hpp"

namespace weylforge {

namespace {

const complexd im{0.0, 1.0};
constexpr double pi = std::numbers::pi;

unitary2 rot(pauli_axis axis, double theta) {
    return std::cos(theta / 2) * unitary2::Identity() +
           im * std::sin(theta / 2) * pauli(axis);
}

unitary2 rot_axis(double theta, const Eigen::Vector3d& n) {
    const unitary2 ns = n.x() * pauli(pauli_axis::x) + n.y() * pauli(pauli_axis::y) +
                        n.z() * pauli(pauli_axis::z);
    return std::cos(theta / 2) * unitary2::Identity() + im * std::sin(theta / 2) * ns;
}

unitary2 hadamard() {
    unitary2 h;
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

// Quadratic coefficients for the two-pulse interaction equation
// a x^2 + b x + C = 0 in x = cos(beta), written as products of sines so that
// no coefficient suffers cancellation near the reachability boundaries.
double rad_fact(double g1, double g2, double c1, double c2) {
    const double gd = g1 - g2, s = c1 + c2, d = c1 - c2;
    return 4 * std::sin((s + gd) / 2) * std::sin((s - gd) / 2) * std::sin((d + gd) / 2) *
           std::sin((d - gd) / 2);
}

double disc_fact(double g1, double g2, double c1, double c2) {
    const double g = g1 + g2, s = c1 + c2, d = c1 - c2;
    return 4 * std::sin((s + g) / 2) * std::sin((g - s) / 2) * std::sin((d + g) / 2) *
           std::sin((g - d) / 2);
}

double c_fact(double g1, double g2, double c1, double c2) {
    const double gd = g1 - g2, g = g1 + g2, s = c1 + c2, d = c1 - c2;
    return -std::sin((gd + d) / 2) * std::sin((gd - d) / 2) -
           std::sin((g + s) / 2) * std::sin((g - s) / 2);
}

void append_local(std::vector<circuit_item>& items, const unitary2& q1, const unitary2& q2) {
    items.push_back(local_item{q1, q2});
}

void append_zz(std::vector<circuit_item>& items, double gamma, int count) {
    for (int i = 0; i < count; ++i) {
        items.push_back(interaction_item{interaction_item::kind_t::zz, gamma});
    }
}

bool near_identity(const unitary2& q) {
    return (q - unitary2::Identity()).cwiseAbs().maxCoeff() < 1e-14;
}

// Merge runs of adjacent local items (temporal order: the later item's matrix
// multiplies from the left) and drop exact identities.
void fuse_locals(circuit_ir& circuit) {
    std::vector<circuit_item> fused;
    fused.reserve(circuit.items.size());
    bool pending = false;
    unitary2 p1 = unitary2::Identity();
    unitary2 p2 = unitary2::Identity();
    auto flush = [&] {
        if (pending) {
            if (!near_identity(p1) || !near_identity(p2)) {
                fused.push_back(local_item{p1, p2});
            }
            pending = false;
            p1 = unitary2::Identity();
            p2 = unitary2::Identity();
        }
    };
    for (const auto& item : circuit.items) {
        if (const auto* loc = std::get_if<local_item>(&item)) {
            p1 = loc->q1 * p1;
            p2 = loc->q2 * p2;
            pending = true;
        } else {
            flush();
            fused.push_back(item);
        }
    }
    flush();
    circuit.items = std::move(fused);
}

int ceil_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-9) {
        return static_cast<int>(r);
    }
    return static_cast<int>(std::ceil(x));
}

double clip(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

} // namespace

int circuit_ir::interaction_count() const {
    int n = 0;
    for (const auto& item : items) {
        if (std::holds_alternative<interaction_item>(item)) {
            ++n;
        }
    }
    return n;
}

gate_spec gate_spec::controlled_u(double gamma) {
    return gate_spec{kind_t::controlled_u, gamma};
}
gate_spec gate_spec::cnot() { return gate_spec{kind_t::cnot, pi / 2}; }
gate_spec gate_spec::dcnot() { return gate_spec{kind_t::dcnot, pi / 2}; }

std::pair<gate_strength, unitary2> controlled_u_normalize(const Eigen::Vector3d& n) {
    const double g0 = n.norm();
    double r = std::fmod(g0, pi);
    if (r > pi / 2) {
        r = pi - r;
    }
    if (r < 1e-12) {
        throw not_entangling("controlled rotation angle is a multiple of pi");
    }

    // u1 rows are the bra vectors of the +1/-1 eigenstates of nhat.sigma, so
    // u1 (nhat.sigma) u1^dag = sigma_z.
    const Eigen::Vector3d nh = n / g0;
    unitary2 u1;
    if (1.0 + nh.z() < 1e-12) {
        u1 = pauli(pauli_axis::x);
    } else {
        const double norm = std::sqrt(2.0 * (1.0 + nh.z()));
        const double a = (1.0 + nh.z()) / norm;
        const complexd b = complexd(nh.x(), nh.y()) / norm;
        u1 << a, std::conj(b), -b, a;
    }
    return {gate_strength(r), u1};
}

composition_angles two_pulse_solve(gate_strength gamma1, gate_strength gamma2,
                                   double c1, double c2) {
    if (!(std::isfinite(c1) && std::isfinite(c2))) {
        throw std::invalid_argument("target angles must be finite");
    }
    if (c2 < -1e-12 || c1 < c2 - 1e-12 || c1 > pi + 1e-12) {
        throw std::invalid_argument("target must satisfy 0 <= c2 <= c1 <= pi");
    }
    c1 = std::max(c1, 0.0);
    c2 = clip(c2, 0.0, c1);

    const double g1 = gamma1.gamma;
    const double g2 = gamma2.gamma;
    const double tol = tol_class();
    if (c1 + c2 > g1 + g2 + tol) {
        throw out_of_reach("interaction sum c1 + c2 exceeds the pulse budget gamma1 + gamma2");
    }

    const double a = std::sin(g1) * std::sin(g2);
    const double cc = c_fact(g1, g2, c1, c2);
    double x1 = 0.0, x2 = 0.0;

    if (std::min(c1, c2) < 1e-12) {
        // Base-boundary target (c, 0): x = -1 is an exact root, and the
        // target is reachable iff |g1 - g2| stays within c.
        if (std::cos(g1 - g2) < std::cos(std::max(c1, c2)) - 1e-12) {
            throw out_of_reach("pulse strength imbalance exceeds the boundary target");
        }
        x1 = -cc / a;
        x2 = -1.0;
    } else {
        const double rad = rad_fact(g1, g2, c1, c2);
        if (rad < -4e-12) {
            throw out_of_reach("interaction radicand is negative: class not in the two-pulse image");
        }
        const double b = std::sqrt(std::max(rad, 0.0));
        const double disc = disc_fact(g1, g2, c1, c2);
        if (disc < -1e-12) {
            throw out_of_reach("root discriminant is negative");
        }
        const double sd = std::sqrt(std::max(disc, 0.0));
        const double q = -(b + sd) / 2; // b >= 0, so this never cancels
        if (std::abs(q) < 1e-300) {
            x1 = x2 = 0.0;
        } else {
            x1 = cc / q;
            x2 = q / a;
        }
    }

    if (x1 < x2) {
        std::swap(x1, x2);
    }
    if (x1 > 1 + 1e-6 || x2 < -1 - 1e-6) {
        throw out_of_reach("quadratic root leaves the admissible cosine range");
    }
    composition_angles out;
    out.beta1 = std::acos(clip(x1, -1.0, 1.0));
    out.beta2 = std::acos(clip(x2, -1.0, 1.0));
    return out;
}

circuit_ir zz_fraction_synthesize(gate_strength gamma, double c3) {
    if (!(c3 >= -1e-12 && c3 <= pi / 2 + 1e-12)) {
        throw std::invalid_argument("third interaction component must lie in [0, pi/2]");
    }
    c3 = clip(c3, 0.0, pi / 2);
    const double g = gamma.gamma;

    circuit_ir circuit;
    if (c3 < 1e-12) {
        return circuit;
    }
    if (std::abs(c3 - g) < 1e-12) {
        append_zz(circuit.items, g, 1);
        return circuit;
    }
    const int k = std::max(2, ceil_snapped(c3 / g));
    const int a = (k + 1) / 2;
    const int b = k - a;
    const composition_angles beta =
        two_pulse_solve(gate_strength(a * g), gate_strength(b * g), c3, 0.0);
    append_zz(circuit.items, g, a);
    append_local(circuit.items, rot(pauli_axis::y, beta.beta1), rot(pauli_axis::y, beta.beta2));
    append_zz(circuit.items, g, b);
    return circuit;
}

circuit_ir base_plane_synthesize(gate_strength gamma, double c1, double c2) {
    if (!(c2 >= -1e-12 && c1 >= c2 - 1e-12 && c1 <= pi - c2 + 1e-12)) {
        throw std::invalid_argument("target must lie in the base triangle pi - c2 >= c1 >= c2 >= 0");
    }
    c1 = std::max(c1, 0.0);
    c2 = clip(c2, 0.0, c1);
    const double g = gamma.gamma;

    // Fold targets past the chamber midpoint:
    //   exp(c1 (i/2) XX) = (i XX) (sy (x) I) exp((pi - c1)(i/2) XX) (sy (x) I),
    // and (sy (x) I) commutes with the YY factor, so the folded pair
    // (d1, c2) is synthesized and wrapped with local conversion items.
    const bool wrap = c1 > pi / 2 + 1e-12;
    const double d1 = wrap ? pi - c1 : c1;

    circuit_ir circuit;
    std::vector<circuit_item>& items = circuit.items;
    if (wrap) {
        append_local(items, pauli(pauli_axis::y), unitary2::Identity());
    }

    if (d1 + c2 >= 1e-12) {
        const int n1_exact = static_cast<int>(std::lround(d1 / g));
        const int n2_exact = static_cast<int>(std::lround(c2 / g));
        const bool lattice_only = std::abs(d1 - n1_exact * g) < 1e-12 &&
                                  std::abs(c2 - n2_exact * g) < 1e-12;

        int n1 = 0, n2 = 0;
        if (lattice_only) {
            n1 = n1_exact;
            n2 = n2_exact;
        } else {
            const int k = std::max(2, ceil_snapped((d1 + c2) / g));
            const int q = k - 2;
            n1 = std::min(q, static_cast<int>(std::floor(d1 / g + 1e-12)));
            n2 = q - n1;
            const double t1 = d1 - n1 * g;
            const double t2 = c2 - n2 * g;

            // Equal-pair tail exp(t1 (i/2) XX) exp(t2 (i/2) YY): solved at the
            // canonical (sorted) angles, then dressed exactly onto the axes.
            const composition_angles beta = two_pulse_solve(
                gate_strength(g), gate_strength(g), std::max(t1, t2), std::min(t1, t2));
            circuit_ir tail;
            append_zz(tail.items, g, 1);
            append_local(tail.items, rot(pauli_axis::y, beta.beta1),
                         rot(pauli_axis::y, beta.beta2));
            append_zz(tail.items, g, 1);
            const unitary4 tail_target =
                exp_canonical(pauli_axis::x, t1) * exp_canonical(pauli_axis::y, t2);
            const local_gate_pair rec = local_gate_recovery(tail_target, simulate(tail));

            append_local(items, rec.k2_left, rec.k2_right);
            items.insert(items.end(), tail.items.begin(), tail.items.end());
            append_local(items, rec.k1_left, rec.k1_right);
            circuit.global_phase += rec.phase;
        }

        const unitary2 h = hadamard();
        const unitary2 ky = rot(pauli_axis::x, pi / 2);
        if (n2 > 0) {
            append_local(items, ky.adjoint(), ky.adjoint());
            append_zz(items, g, n2);
            append_local(items, ky, ky);
        }
        if (n1 > 0) {
            append_local(items, h, h);
            append_zz(items, g, n1);
            append_local(items, h, h);
        }
    }

    if (wrap) {
        append_local(items, -pauli(pauli_axis::z), pauli(pauli_axis::x));
    }
    fuse_locals(circuit);
    return circuit;
}

circuit_ir cnot3_synthesize(const canonical_class& c) {
    if (!in_chamber(c)) {
        throw std::invalid_argument("class must lie in the Weyl chamber");
    }
    circuit_ir circuit;
    std::vector<circuit_item>& items = circuit.items;
    append_zz(items, pi / 2, 1);
    append_local(items, rot(pauli_axis::y, c.c1), rot(pauli_axis::y, pi / 2));
    append_zz(items, pi / 2, 1);
    append_local(items, rot(pauli_axis::x, c.c2),
                 rot_axis(pi / 2, Eigen::Vector3d(std::sin(c.c3), std::cos(c.c3), 0.0)));
    append_zz(items, pi / 2, 1);
    return circuit;
}

circuit_ir dcnot3_synthesize(const canonical_class& c) {
    if (!in_chamber(c)) {
        throw std::invalid_argument("class must lie in the Weyl chamber");
    }
    auto xxyy = [] { return interaction_item{interaction_item::kind_t::xxyy, pi / 2}; };
    circuit_ir circuit;
    std::vector<circuit_item>& items = circuit.items;
    items.push_back(xxyy());
    append_local(items, rot(pauli_axis::y, pi / 2 - c.c1), rot(pauli_axis::y, pi / 2));
    items.push_back(xxyy());
    append_local(items, rot(pauli_axis::y, pi / 2) * rot(pauli_axis::z, pi / 2 - c.c3),
                 rot(pauli_axis::y, 3 * pi / 2 - c.c2) * rot(pauli_axis::z, pi / 2));
    items.push_back(xxyy());
    return circuit;
}

synthesis_report full_synthesize(const unitary4& target, const gate_spec& spec) {
    if (!is_unitary(target)) {
        throw decomposition_failure("synthesis target is not unitary within tolerance");
    }
    const gate_strength gamma(spec.kind == gate_spec::kind_t::controlled_u ? spec.gamma
                                                                           : pi / 2);
    synthesis_report report;
    if (spec.kind == gate_spec::kind_t::controlled_u) {
        report.min_bound = min_applications(gamma);
        report.constructive_bound = constructive_applications(gamma);
    } else {
        // The dedicated three-application constructions are both the
        // guarantee and the pulse-count lower bound for these gates.
        report.min_bound = 3;
        report.constructive_bound = 3;
    }

    const kak_result kak = kak_decompose(target);
    report.target_class = kak.c;

    circuit_ir circuit;
    if (class_distance(kak.c, canonical_class{}) < tol_class()) {
        // Local target: a single fused local layer, no interactions.
        circuit.items.push_back(local_item{kak.locals.k1_left * kak.locals.k2_left,
                                           kak.locals.k1_right * kak.locals.k2_right});
        circuit.global_phase = kak.locals.phase;
    } else if (spec.kind == gate_spec::kind_t::controlled_u) {
        circuit_ir zz = zz_fraction_synthesize(gamma, kak.c.c3);
        double phase = kak.locals.phase;
        std::vector<circuit_item>& items = circuit.items;
        append_local(items, kak.locals.k2_left, kak.locals.k2_right);
        if (!zz.items.empty()) {
            const unitary4 zz_target = exp_canonical(pauli_axis::z, kak.c.c3);
            const local_gate_pair rec = local_gate_recovery(zz_target, simulate(zz));
            append_local(items, rec.k2_left, rec.k2_right);
            items.insert(items.end(), zz.items.begin(), zz.items.end());
            append_local(items, rec.k1_left, rec.k1_right);
            phase += rec.phase + zz.global_phase;
        }
        circuit_ir base = base_plane_synthesize(gamma, kak.c.c1, kak.c.c2);
        items.insert(items.end(), base.items.begin(), base.items.end());
        phase += base.global_phase;
        append_local(items, kak.locals.k1_left, kak.locals.k1_right);
        circuit.global_phase = phase;
    } else {
        circuit_ir core = spec.kind == gate_spec::kind_t::cnot ? cnot3_synthesize(kak.c)
                                                               : dcnot3_synthesize(kak.c);
        const local_gate_pair rec = local_gate_recovery(target, simulate(core));
        append_local(circuit.items, rec.k2_left, rec.k2_right);
        circuit.items.insert(circuit.items.end(), core.items.begin(), core.items.end());
        append_local(circuit.items, rec.k1_left, rec.k1_right);
        circuit.global_phase = core.global_phase + rec.phase;
    }

    fuse_locals(circuit);
    report.circuit = std::move(circuit);
    report.applications = report.circuit.interaction_count();
    report.residual = phase_distance(simulate(report.circuit), target);
    return report;
}

} // namespace weylforge
