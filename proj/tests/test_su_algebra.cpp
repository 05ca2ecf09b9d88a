#include <cmath>
#include <complex>
#include <numbers>

#include "catch2/catch_amalgamated.hpp"

#include "weylforge/errors.hpp"
#include "weylforge/su_algebra.hpp"

using namespace weylforge;

namespace {

constexpr double pi = std::numbers::pi;
const complexd im(0.0, 1.0);

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

// Independent oracle: truncated exponential series, accurate to well below
// 1e-14 for the argument norms used here.
unitary4 exp_series(const unitary4& a) {
    unitary4 sum = unitary4::Identity();
    unitary4 term = unitary4::Identity();
    for (int k = 1; k <= 40; ++k) {
        term = (term * a) / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("pauli matrices have their textbook entries") {
    unitary2 sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -im, im, 0;
    sz << 1, 0, 0, -1;
    REQUIRE(max_abs_diff(pauli(pauli_axis::x), sx) == 0.0);
    REQUIRE(max_abs_diff(pauli(pauli_axis::y), sy) == 0.0);
    REQUIRE(max_abs_diff(pauli(pauli_axis::z), sz) == 0.0);
}

TEST_CASE("pauli algebra: squares, commutator, tracelessness") {
    const unitary2 sx = pauli(pauli_axis::x);
    const unitary2 sy = pauli(pauli_axis::y);
    const unitary2 sz = pauli(pauli_axis::z);
    REQUIRE(max_abs_diff(sx * sx, unitary2::Identity()) < 1e-15);
    REQUIRE(max_abs_diff(sy * sy, unitary2::Identity()) < 1e-15);
    REQUIRE(max_abs_diff(sz * sz, unitary2::Identity()) < 1e-15);
    REQUIRE(max_abs_diff(sx * sy - sy * sx, 2.0 * im * sz) < 1e-15);
    REQUIRE(std::abs(sx.trace()) < 1e-15);
    REQUIRE(std::abs(sy.trace()) < 1e-15);
    REQUIRE(std::abs(sz.trace()) < 1e-15);
}

TEST_CASE("kron reproduces a hand-expanded product") {
    unitary2 a, b;
    a << complexd(1, 2), complexd(3, -1), complexd(0, 1), complexd(-2, 0);
    b << complexd(1, 0), complexd(0, 1), complexd(2, 2), complexd(0, -3);
    unitary4 expected;
    expected.block<2, 2>(0, 0) = a(0, 0) * b;
    expected.block<2, 2>(0, 2) = a(0, 1) * b;
    expected.block<2, 2>(2, 0) = a(1, 0) * b;
    expected.block<2, 2>(2, 2) = a(1, 1) * b;
    REQUIRE(max_abs_diff(kron(a, b), expected) == 0.0);
}

TEST_CASE("kron anchors: left factor on the top wire") {
    // sigma_z (x) I is diag(1, 1, -1, -1): the top wire carries the z flip.
    const unitary4 zi = kron(pauli(pauli_axis::z), unitary2::Identity());
    REQUIRE(zi(0, 0) == complexd(1, 0));
    REQUIRE(zi(1, 1) == complexd(1, 0));
    REQUIRE(zi(2, 2) == complexd(-1, 0));
    REQUIRE(zi(3, 3) == complexd(-1, 0));
    const unitary4 iz = kron(unitary2::Identity(), pauli(pauli_axis::z));
    REQUIRE(iz(1, 1) == complexd(-1, 0));
    REQUIRE(iz(2, 2) == complexd(1, 0));
}

TEST_CASE("kron is multiplicative: (a x b)(c x d) = ac x bd") {
    rng r(11);
    for (int k = 0; k < 25; ++k) {
        const unitary2 a = haar_random_su2(r), b = haar_random_su2(r);
        const unitary2 c = haar_random_su2(r), d = haar_random_su2(r);
        REQUIRE(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-14);
    }
}

TEST_CASE("exp_canonical matches a series-expansion oracle") {
    const double angles[] = {0.0, 0.3, -1.1, 2.9, pi, -pi / 2, 4.0};
    for (const pauli_axis axis : {pauli_axis::x, pauli_axis::y, pauli_axis::z}) {
        const unitary2 s = pauli(axis);
        const unitary4 ss = kron(s, s);
        for (const double c : angles) {
            const unitary4 oracle = exp_series((c / 2.0) * im * ss);
            REQUIRE(max_abs_diff(exp_canonical(axis, c), oracle) < 1e-14);
        }
    }
}

TEST_CASE("exp_canonical special values") {
    REQUIRE(max_abs_diff(exp_canonical(pauli_axis::x, 0.0), unitary4::Identity()) == 0.0);
    // Full period 2 pi lands on minus the identity.
    REQUIRE(max_abs_diff(exp_canonical(pauli_axis::y, 2 * pi), -unitary4::Identity()) < 1e-15);
    // Angle additivity on a shared axis.
    REQUIRE(max_abs_diff(exp_canonical(pauli_axis::z, 0.7) * exp_canonical(pauli_axis::z, 0.5),
                         exp_canonical(pauli_axis::z, 1.2)) < 1e-15);
}

TEST_CASE("su2_from_axis_angle anchors and unit determinant") {
    // exp(i t sigma_x) at t = pi is -I.
    REQUIRE(max_abs_diff(su2_from_axis_angle({pi, 0, 0}), -unitary2::Identity()) < 1e-15);
    // Zero vector maps to the identity.
    REQUIRE(max_abs_diff(su2_from_axis_angle({0, 0, 0}), unitary2::Identity()) == 0.0);
    // exp(i (pi/4) sigma_z) = diag(e^{i pi/4}, e^{-i pi/4}).
    const unitary2 rz = su2_from_axis_angle({0, 0, pi / 4});
    REQUIRE(std::abs(rz(0, 0) - std::exp(im * (pi / 4))) < 1e-15);
    REQUIRE(std::abs(rz(1, 1) - std::exp(-im * (pi / 4))) < 1e-15);
    REQUIRE(std::abs(rz(0, 1)) == 0.0);

    rng r(5);
    for (int k = 0; k < 50; ++k) {
        const Eigen::Vector3d n = 3.0 * Eigen::Vector3d(r.uniform() - 0.5, r.uniform() - 0.5,
                                                        r.uniform() - 0.5);
        const unitary2 u = su2_from_axis_angle(n);
        REQUIRE(is_unitary(u, 1e-13));
        REQUIRE(std::abs(u.determinant() - complexd(1, 0)) < 1e-13);
    }
}

TEST_CASE("euler_zyz round-trips random single-qubit unitaries") {
    rng r(21);
    for (int k = 0; k < 200; ++k) {
        unitary2 u = haar_random_su2(r);
        if (k % 2 == 1) {
            u *= std::exp(im * (2 * pi * r.uniform())); // general U(2), not just SU(2)
        }
        const euler_zyz_angles a = euler_zyz(u);
        REQUIRE(a.beta >= 0.0);
        REQUIRE(a.beta <= pi / 2 + 1e-12);
        REQUIRE(max_abs_diff(euler_zyz_reconstruct(a), u) < 1e-12);
    }
}

TEST_CASE("euler_zyz handles gimbal-locked inputs") {
    // Diagonal: beta = 0, gamma pinned to 0.
    unitary2 d = unitary2::Zero();
    d(0, 0) = std::exp(im * 0.9);
    d(1, 1) = std::exp(-im * 0.9);
    const euler_zyz_angles ad = euler_zyz(d);
    REQUIRE(ad.beta < 1e-12);
    REQUIRE(ad.gamma == 0.0);
    REQUIRE(max_abs_diff(euler_zyz_reconstruct(ad), d) < 1e-13);

    // Antidiagonal: beta = pi/2, gamma pinned to 0.
    unitary2 ad2 = unitary2::Zero();
    ad2(0, 1) = std::exp(im * 0.4);
    ad2(1, 0) = -std::exp(-im * 0.4);
    const euler_zyz_angles aa = euler_zyz(ad2);
    REQUIRE(std::abs(aa.beta - pi / 2) < 1e-12);
    REQUIRE(aa.gamma == 0.0);
    REQUIRE(max_abs_diff(euler_zyz_reconstruct(aa), ad2) < 1e-13);
}

TEST_CASE("phase_distance: metric anchors") {
    rng r(31);
    const unitary4 u = haar_random_su4(r);
    const unitary4 v = haar_random_su4(r);
    // Identical inputs, and inputs differing only by a global phase, are at
    // distance ~0 even though their entries differ by O(1).
    REQUIRE(phase_distance(u, u) < 1e-14);
    REQUIRE(phase_distance(u, std::exp(im * 1.234) * u) < 1e-14);
    // Symmetric, and positive for generically different unitaries.
    REQUIRE(std::abs(phase_distance(u, v) - phase_distance(v, u)) < 1e-12);
    REQUIRE(phase_distance(u, v) > 0.1);
    // Orthogonal pair: tr = 0 gives the ceiling value sqrt(2).
    const unitary4 zi = kron(pauli(pauli_axis::z), unitary2::Identity());
    REQUIRE(std::abs(phase_distance(unitary4::Identity(), zi) - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("phase_distance resolves tiny perturbations") {
    rng r(37);
    const unitary4 u = haar_random_su4(r);
    // A 1e-9 rotation must register near 1e-9, not at a sqrt(epsilon) floor.
    const unitary4 v = u * exp_series(unitary4::Identity() * (im * 1e-9));
    const double d0 = phase_distance(u, v); // pure-phase wiggle: still ~0
    REQUIRE(d0 < 1e-13);
    const unitary4 w = u * exp_series(kron(pauli(pauli_axis::x), pauli(pauli_axis::x)) *
                                      (im * 1e-9));
    const double d1 = phase_distance(u, w);
    REQUIRE(d1 > 1e-10);
    REQUIRE(d1 < 1e-8);
}

TEST_CASE("is_unitary accepts unitaries and rejects scaled ones") {
    rng r(41);
    const unitary4 u = haar_random_su4(r);
    REQUIRE(is_unitary(u));
    REQUIRE_FALSE(is_unitary(unitary4(1.01 * u)));
    REQUIRE_FALSE(is_unitary(unitary2(0.5 * unitary2::Identity())));
}

TEST_CASE("rng streams are deterministic and derive() separates them") {
    rng a(123), b(123), c(124);
    for (int k = 0; k < 100; ++k) {
        const double va = a.uniform();
        REQUIRE(va == b.uniform());
        REQUIRE(va >= 0.0);
        REQUIRE(va < 1.0);
    }
    REQUIRE(a.uniform() != c.uniform());
    REQUIRE(rng::derive(1, 0) != rng::derive(1, 1));
    REQUIRE(rng::derive(1, 0) != rng::derive(2, 0));
    REQUIRE(rng::derive(7, 5) == rng::derive(7, 5));
}

TEST_CASE("gaussian samples have roughly standard moments") {
    rng r(55);
    const int n = 20000;
    double sum = 0, sum2 = 0;
    for (int k = 0; k < n; ++k) {
        const double g = r.gaussian();
        sum += g;
        sum2 += g * g;
    }
    REQUIRE(std::abs(sum / n) < 0.05);
    REQUIRE(std::abs(sum2 / n - 1.0) < 0.05);
}

TEST_CASE("haar_random_su4 produces special unitaries, deterministically") {
    const unitary4 u1 = haar_random_su4(900);
    const unitary4 u2 = haar_random_su4(900);
    const unitary4 u3 = haar_random_su4(901);
    REQUIRE(max_abs_diff(u1, u2) == 0.0);
    REQUIRE(max_abs_diff(u1, u3) > 1e-3);
    rng r(77);
    for (int k = 0; k < 100; ++k) {
        const unitary4 u = haar_random_su4(r);
        REQUIRE(is_unitary(u));
        REQUIRE(std::abs(u.determinant() - complexd(1, 0)) < 1e-12);
    }
    rng r2(78);
    for (int k = 0; k < 100; ++k) {
        const unitary2 u = haar_random_su2(r2);
        REQUIRE(is_unitary(u));
        REQUIRE(std::abs(u.determinant() - complexd(1, 0)) < 1e-12);
    }
}

TEST_CASE("haar_random_su4 matrix elements have the uniform second moment") {
    // For Haar measure on U(4) (and its SU(4) section) E|u_ij|^2 = 1/4 for
    // every entry; check entry (0, 0) and entry (2, 3) empirically.
    rng r(88);
    const int n = 4000;
    double m00 = 0, m23 = 0;
    for (int k = 0; k < n; ++k) {
        const unitary4 u = haar_random_su4(r);
        m00 += std::norm(u(0, 0));
        m23 += std::norm(u(2, 3));
    }
    REQUIRE(std::abs(m00 / n - 0.25) < 0.02);
    REQUIRE(std::abs(m23 / n - 0.25) < 0.02);
}

TEST_CASE("tolerance override validates its range") {
    REQUIRE(tol_class() == 1e-9);
    set_tol_class(1e-7);
    REQUIRE(tol_class() == 1e-7);
    set_tol_class(1e-9);
    REQUIRE_THROWS_AS(set_tol_class(0.5), std::invalid_argument);
    REQUIRE_THROWS_AS(set_tol_class(1e-15), std::invalid_argument);
    REQUIRE_THROWS_AS(set_tol_class(-1e-9), std::invalid_argument);
    REQUIRE(tol_class() == 1e-9);
}
