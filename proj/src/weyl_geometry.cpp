#include "weylforge/weyl_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "weylforge/errors.hpp"

namespace weylforge {

namespace {

const complexd im{0.0, 1.0};
constexpr double pi = std::numbers::pi;

// Bell/magic basis change: conjugating by this matrix sends local gates to
// real orthogonal matrices and canonical gates to diagonal ones.
const unitary4& magic_basis() {
    static const unitary4 q = [] {
        unitary4 b;
        const double s = 1.0 / std::sqrt(2.0);
        b << s, s * im, 0, 0,
             0, 0, s * im, s,
             0, 0, s * im, -s,
             s, -s * im, 0, 0;
        return b;
    }();
    return q;
}

const std::array<unitary4, 3>& axis_squares() {
    static const std::array<unitary4, 3> sig = {
        kron(pauli(pauli_axis::x), pauli(pauli_axis::x)),
        kron(pauli(pauli_axis::y), pauli(pauli_axis::y)),
        kron(pauli(pauli_axis::z), pauli(pauli_axis::z)),
    };
    return sig;
}

// Single-qubit conjugator w with (w (x) w) A (w (x) w)^dag swapping the two
// given interaction axes (pairs indexed over {0: XX, 1: YY, 2: ZZ}).
unitary2 swap_conjugator(int i, int j) {
    pauli_axis a = pauli_axis::z;
    if (i == 0 && j == 1) a = pauli_axis::z;
    else if (i == 1 && j == 2) a = pauli_axis::x;
    else if (i == 0 && j == 2) a = pauli_axis::y;
    const unitary2 s = pauli(a);
    return std::cos(pi / 4) * unitary2::Identity() + im * std::sin(pi / 4) * s;
}

// (sigma_l (x) I) with l the axis complementary to the pair (i, j): flips the
// signs of interaction components i and j simultaneously.
unitary4 flip_conjugator(int i, int j) {
    pauli_axis a = pauli_axis::z;
    if (i == 0 && j == 1) a = pauli_axis::z;
    else if (i == 1 && j == 2) a = pauli_axis::x;
    else if (i == 0 && j == 2) a = pauli_axis::y;
    return kron(pauli(a), unitary2::Identity());
}

// Shared reduction loop: brings an arbitrary triple into the canonical
// chamber representative; when track is set, maintains locals and phase with
// A(t_in) = exp(i phase) left A(t_out) right.
reduction_result reduce_impl(std::array<double, 3> t, bool track) {
    reduction_result out;
    unitary4& left = out.left;
    unitary4& right = out.right;
    double& ph = out.phase;
    const auto& sig = axis_squares();

    auto shift_down = [&](int k) {
        t[k] -= pi;
        if (track) {
            right = sig[k] * right;
            ph += pi / 2;
        }
    };
    auto shift_up = [&](int k) {
        t[k] += pi;
        if (track) {
            right = sig[k] * right;
            ph -= pi / 2;
        }
    };
    auto flip_pair = [&](int i, int j) {
        t[i] = -t[i];
        t[j] = -t[j];
        if (track) {
            const unitary4 v = flip_conjugator(i, j);
            left = left * v.adjoint();
            right = v * right;
        }
    };

    bool converged = false;
    for (int iter = 0; iter < 300 && !converged; ++iter) {
        bool moved = false;
        for (int k = 0; k < 3; ++k) {
            while (t[k] < -1e-15) {
                shift_up(k);
                moved = true;
            }
            while (t[k] >= pi - 1e-15) {
                shift_down(k);
                moved = true;
            }
        }
        // Bubble into descending order via axis-swap conjugations.
        const std::array<std::pair<int, int>, 3> passes = {{{0, 1}, {1, 2}, {0, 1}}};
        for (const auto& [i, j] : passes) {
            if (t[i] < t[j]) {
                std::swap(t[i], t[j]);
                if (track) {
                    const unitary2 w = swap_conjugator(i, j);
                    const unitary4 ww = kron(w, w);
                    left = left * ww.adjoint();
                    right = ww * right;
                }
                moved = true;
            }
        }
        if (t[0] + t[1] > pi + 1e-14) {
            shift_down(0);
            shift_down(1);
            flip_pair(0, 1);
            continue;
        }
        if (t[2] < 1e-10 && t[0] > pi / 2 + 1e-14) {
            shift_down(0);
            flip_pair(0, 2);
            continue;
        }
        converged = !moved;
    }

    out.c = canonical_class{t[0], t[1], t[2]};
    if (!in_chamber(out.c, 1e-10)) {
        throw decomposition_failure("canonical reduction did not converge to the chamber");
    }
    // Scrub sub-tolerance negatives produced by the folds.
    out.c.c1 = std::max(out.c.c1, 0.0);
    out.c.c2 = std::max(out.c.c2, 0.0);
    out.c.c3 = std::max(out.c.c3, 0.0);
    return out;
}

// Phases of the eigenvalues of M^T M (magic-basis Gram matrix), with the
// winding of the total phase removed so they sum to zero.
std::array<double, 4> balanced_angles(const Eigen::Vector4cd& eigs) {
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        lam[i] = std::arg(eigs[i]);
    }
    double total = lam[0] + lam[1] + lam[2] + lam[3];
    const int k = static_cast<int>(std::lround(total / (2 * pi)));
    for (int step = 0; step < std::abs(k); ++step) {
        if (k > 0) {
            *std::max_element(lam.begin(), lam.end()) -= 2 * pi;
        } else {
            *std::min_element(lam.begin(), lam.end()) += 2 * pi;
        }
    }
    total = lam[0] + lam[1] + lam[2] + lam[3];
    if (std::abs(total) > 1e-6) {
        throw decomposition_failure("eigenphase winding could not be balanced");
    }
    return lam;
}

canonical_class triple_from_angles(const std::array<double, 4>& lam) {
    return canonicalize((lam[0] + lam[2]) / 2, (lam[1] + lam[2]) / 2, (lam[0] + lam[1]) / 2);
}

} // namespace

gate_strength::gate_strength(double g) : gamma(g) {
    constexpr double hi = pi / 2;
    if (gamma > hi && gamma <= hi + 1e-12) {
        gamma = hi;
    }
    if (!(gamma > 0.0 && gamma <= hi)) {
        throw std::invalid_argument("interaction strength must lie in (0, pi/2]");
    }
}

unitary4 canonical_gate(const canonical_class& c) {
    return exp_canonical(pauli_axis::x, c.c1) * exp_canonical(pauli_axis::y, c.c2) *
           exp_canonical(pauli_axis::z, c.c3);
}

canonical_class canonicalize(double r1, double r2, double r3) {
    return reduce_impl({r1, r2, r3}, false).c;
}

reduction_result canonical_reduce(double r1, double r2, double r3) {
    return reduce_impl({r1, r2, r3}, true);
}

local_invariants invariants_from_class(const canonical_class& c) {
    local_invariants g;
    g.g1 = std::cos(c.c1) * std::cos(c.c2) * std::cos(c.c3);
    g.g2 = std::sin(c.c1) * std::sin(c.c2) * std::sin(c.c3);
    g.g3 = 2 * (std::cos(c.c1) * std::cos(c.c1) + std::cos(c.c2) * std::cos(c.c2) +
                std::cos(c.c3) * std::cos(c.c3)) -
           3;
    return g;
}

local_invariants invariants_from_unitary(const unitary4& u) {
    const unitary4& q = magic_basis();
    const double ph0 = std::arg(u.determinant()) / 4;
    const unitary4 us = u * std::exp(-im * ph0);
    const unitary4 mm = q.adjoint() * us * q;
    const unitary4 m = mm.transpose() * mm;
    const complexd tr = m.trace();
    const complexd tr2 = (m * m).trace();
    const complexd big_g1 = tr * tr / 16.0;

    // tr(m)/4 = +-(g1 + i g2); take the square root branch with g2 >= 0 (the
    // raw-unitary invariants cannot see the g2 sign), tie-broken to g1 >= 0.
    complexd w = std::sqrt(big_g1);
    if (w.imag() < -1e-12) {
        w = -w;
    } else if (std::abs(w.imag()) <= 1e-12) {
        w = complexd(std::abs(w.real()), 0.0);
    }

    local_invariants g;
    g.g1 = w.real();
    g.g2 = w.imag();
    g.g3 = ((tr * tr - tr2) / 4.0).real();
    return g;
}

canonical_class class_from_unitary(const unitary4& u) {
    const unitary4& q = magic_basis();
    const double ph0 = std::arg(u.determinant()) / 4;
    const unitary4 us = u * std::exp(-im * ph0);
    const unitary4 mm = q.adjoint() * us * q;
    const unitary4 m = mm.transpose() * mm;
    Eigen::ComplexEigenSolver<unitary4> es(m, /*computeEigenvectors=*/false);
    return triple_from_angles(balanced_angles(es.eigenvalues()));
}

local_split split_local(const unitary4& u) {
    // Pull the right factor out of the largest 2x2 block, then project the
    // left factor entrywise.
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double n = u.block<2, 2>(2 * i, 2 * j).norm();
            if (n > best) {
                best = n;
                bi = i;
                bj = j;
            }
        }
    }
    const unitary2 rb = u.block<2, 2>(2 * bi, 2 * bj);
    // For a true tensor product the dominant block is (entry of l) * r, whose
    // determinant magnitude is at least 1/2; a tiny determinant already rules
    // the factorization out (and would otherwise turn the division into NaNs).
    if (std::abs(rb.determinant()) < 1e-6) {
        throw decomposition_failure("matrix is not a tensor product of single-qubit gates");
    }
    local_split out;
    out.r = rb / std::sqrt(rb.determinant());
    unitary2 l;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            l(i, j) = (u.block<2, 2>(2 * i, 2 * j) * out.r.adjoint()).trace() / 2.0;
        }
    }
    if (std::abs(l.determinant()) < 1e-6) {
        throw decomposition_failure("matrix is not a tensor product of single-qubit gates");
    }
    out.l = l / std::sqrt(l.determinant());
    const complexd s = (kron(out.l, out.r).adjoint() * u).trace() / 4.0;
    if (!(std::abs(std::abs(s) - 1.0) <= 1e-9)) {
        throw decomposition_failure("matrix is not a tensor product of single-qubit gates");
    }
    out.phase = std::arg(s);
    return out;
}

kak_result kak_decompose(const unitary4& u) {
    if (!is_unitary(u)) {
        throw decomposition_failure("input matrix is not unitary within tolerance");
    }
    const unitary4& q = magic_basis();
    const double ph0 = std::arg(u.determinant()) / 4;
    const unitary4 us = u * std::exp(-im * ph0);
    const unitary4 mm = q.adjoint() * us * q;
    const unitary4 m = mm.transpose() * mm;
    const Eigen::Matrix4d mre = m.real();
    const Eigen::Matrix4d mim = m.imag();

    // m is complex symmetric with unitary value; diagonalize its commuting
    // real and imaginary parts with a real orthogonal basis, using random
    // mixing weights (fixed stream: the decomposition stays deterministic)
    // to split degenerate eigenspaces.
    rng mix(0x7265616c6d697800ULL);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double w0 = mix.gaussian();
        const double w1 = mix.gaussian();
        const Eigen::Matrix4d h = w0 * mre + w1 * mim;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h);
        if (es.info() != Eigen::Success) {
            continue;
        }
        Eigen::Matrix4d p = es.eigenvectors();
        const unitary4 dm = p.transpose() * m * p;
        double off = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i != j) {
                    off = std::max(off, std::abs(dm(i, j)));
                }
            }
        }
        if (off > 1e-10) {
            continue;
        }
        if (p.determinant() < 0) {
            p.col(0) *= -1;
        }
        const unitary4 dm2 = p.transpose() * m * p;
        Eigen::Vector4cd eigs;
        for (int i = 0; i < 4; ++i) {
            eigs[i] = dm2(i, i);
        }
        const std::array<double, 4> lam = balanced_angles(eigs);

        unitary4 o1c = mm * p;
        for (int i = 0; i < 4; ++i) {
            o1c.col(i) /= std::exp(0.5 * im * lam[i]);
        }
        if (o1c.imag().cwiseAbs().maxCoeff() > 1e-8) {
            continue;
        }
        const Eigen::Matrix4d o1 = o1c.real();
        if ((o1 * o1.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
            continue;
        }

        const std::array<double, 3> t_raw = {
            (lam[0] + lam[2]) / 2,
            (lam[1] + lam[2]) / 2,
            (lam[0] + lam[1]) / 2,
        };
        const unitary4 k1 = q * o1 * q.adjoint();
        const unitary4 k2 = q * p.transpose().cast<complexd>() * q.adjoint();

        const reduction_result red = canonical_reduce(t_raw[0], t_raw[1], t_raw[2]);
        const unitary4 k1f = k1 * red.left;
        const unitary4 k2f = red.right * k2;
        const local_split s1 = split_local(k1f);
        const local_split s2 = split_local(k2f);

        kak_result result;
        result.c = red.c;
        result.locals.k1_left = s1.l;
        result.locals.k1_right = s1.r;
        result.locals.k2_left = s2.l;
        result.locals.k2_right = s2.r;
        result.locals.phase = ph0 + red.phase + s1.phase + s2.phase;

        if ((u - assemble_kak(result)).cwiseAbs().maxCoeff() < 1e-9) {
            return result;
        }
    }
    throw decomposition_failure("canonical decomposition did not reach its residual target");
}

unitary4 assemble_kak(const kak_result& k) {
    return std::exp(im * k.locals.phase) * kron(k.locals.k1_left, k.locals.k1_right) *
           canonical_gate(k.c) * kron(k.locals.k2_left, k.locals.k2_right);
}

bool in_chamber(const canonical_class& c, double tol) {
    return pi - c.c2 >= c.c1 - tol && c.c1 >= c.c2 - tol && c.c2 >= c.c3 - tol &&
           c.c3 >= -tol;
}

double class_distance(const canonical_class& a, const canonical_class& b) {
    return std::max({std::abs(a.c1 - b.c1), std::abs(a.c2 - b.c2), std::abs(a.c3 - b.c3)});
}

double invariant_distance(const local_invariants& a, const local_invariants& b) {
    return std::max({std::abs(a.g1 - b.g1), std::abs(std::abs(a.g2) - std::abs(b.g2)),
                     std::abs(a.g3 - b.g3)});
}

bool class_covered(int n, gate_strength gamma, const canonical_class& c) {
    if (n < 0) {
        throw std::invalid_argument("application count must be non-negative");
    }
    const double tol = tol_class();
    const double g = gamma.gamma;
    if (n == 0) {
        return std::max({c.c1, c.c2, c.c3}) <= tol;
    }
    if (n == 1) {
        return std::abs(c.c1 - g) <= tol && c.c2 <= tol && c.c3 <= tol;
    }
    if (n == 2) {
        if (c.c3 > tol) {
            return false;
        }
        return c.c1 + c.c2 <= 2 * g + tol || (pi - c.c1) + c.c2 <= 2 * g + tol;
    }
    // n >= 3: the class polytope is the union of a tetrahedron around the
    // identity and its mirror around the chamber's far corner.
    const double ng = n * g;
    return (c.c1 + c.c2 + c.c3 <= ng + tol) || (c.c1 - c.c2 - c.c3 >= pi - ng - tol);
}

namespace {

// Ceiling with a snap window so ratios that are integral up to parse/rounding
// noise (e.g. a decimal-literal pi/4) do not jump a whole application.
int ceil_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-9) {
        return static_cast<int>(r);
    }
    return static_cast<int>(std::ceil(x));
}

} // namespace

int min_applications(gate_strength gamma) {
    return ceil_snapped(3 * pi / (2 * gamma.gamma));
}

int constructive_applications(gate_strength gamma) {
    if (std::abs(gamma.gamma - pi / 2) < 1e-12) {
        return 4;
    }
    return ceil_snapped(pi / gamma.gamma) + ceil_snapped(pi / (2 * gamma.gamma));
}

int old_bound_applications(gate_strength gamma) {
    return 6 * ceil_snapped(pi / (4 * gamma.gamma));
}

coverage_region coverage_vertices(int n, gate_strength gamma) {
    if (n < 3) {
        throw std::invalid_argument("the coverage region is defined for n >= 3 applications");
    }
    const double ng = n * gamma.gamma;
    coverage_region r;
    r.n = n;
    r.gamma = gamma.gamma;
    r.vertices_b = {canonical_class{ng, 0, 0}, canonical_class{ng / 2, ng / 2, 0},
                    canonical_class{ng / 3, ng / 3, ng / 3}};
    r.vertices_c = {canonical_class{pi - ng, 0, 0}, canonical_class{pi - ng / 2, ng / 2, 0},
                    canonical_class{pi - ng / 3, ng / 3, ng / 3}};
    return r;
}

local_gate_pair local_gate_recovery(const unitary4& u, const unitary4& v) {
    const local_invariants gu = invariants_from_unitary(u);
    const local_invariants gv = invariants_from_unitary(v);
    if (invariant_distance(gu, gv) > tol_class()) {
        throw not_locally_equivalent("local invariants differ beyond tolerance");
    }
    const kak_result ku = kak_decompose(u);
    const kak_result kv = kak_decompose(v);

    local_gate_pair out;
    out.k1_left = ku.locals.k1_left * kv.locals.k1_left.adjoint();
    out.k1_right = ku.locals.k1_right * kv.locals.k1_right.adjoint();
    out.k2_left = kv.locals.k2_left.adjoint() * ku.locals.k2_left;
    out.k2_right = kv.locals.k2_right.adjoint() * ku.locals.k2_right;
    out.phase = ku.locals.phase - kv.locals.phase;

    const unitary4 rec = std::exp(im * out.phase) * kron(out.k1_left, out.k1_right) * v *
                         kron(out.k2_left, out.k2_right);
    if ((u - rec).cwiseAbs().maxCoeff() > 1e-8) {
        throw not_locally_equivalent("no local dressing reached the reconstruction target");
    }
    return out;
}

} // namespace weylforge
