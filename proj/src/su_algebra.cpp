#include "weylforge/su_algebra.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weylforge {

namespace {

const complexd im{0.0, 1.0};
constexpr double pi = std::numbers::pi;

} // namespace

double tol_class_value = 1e-9;

double tol_class() { return tol_class_value; }

void set_tol_class(double value) {
    if (!(value >= 1e-14 && value <= 1e-6)) {
        throw std::invalid_argument("class tolerance must lie in [1e-14, 1e-6]");
    }
    tol_class_value = value;
}

unitary2 pauli(pauli_axis axis) {
    unitary2 m;
    switch (axis) {
    case pauli_axis::x:
        m << 0, 1, 1, 0;
        break;
    case pauli_axis::y:
        m << 0, -im, im, 0;
        break;
    case pauli_axis::z:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

unitary4 kron(const unitary2& a, const unitary2& b) {
    unitary4 m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return m;
}

unitary4 exp_canonical(pauli_axis axis, double c) {
    const unitary2 s = pauli(axis);
    return std::cos(c / 2) * unitary4::Identity() + im * std::sin(c / 2) * kron(s, s);
}

unitary2 su2_from_axis_angle(const Eigen::Vector3d& n) {
    const double t = n.norm();
    if (t == 0.0) {
        return unitary2::Identity();
    }
    const Eigen::Vector3d u = n / t;
    const unitary2 ns = u.x() * pauli(pauli_axis::x) + u.y() * pauli(pauli_axis::y) +
                        u.z() * pauli(pauli_axis::z);
    return std::cos(t) * unitary2::Identity() + im * std::sin(t) * ns;
}

euler_zyz_angles euler_zyz(const unitary2& u) {
    euler_zyz_angles a{};
    a.phase = std::arg(u.determinant()) / 2;
    const complexd u00 = u(0, 0) * std::exp(-im * a.phase);
    const complexd u01 = u(0, 1) * std::exp(-im * a.phase);
    a.beta = std::atan2(std::abs(u01), std::abs(u00));

    // u00 = e^{i(alpha+gamma)} cos(beta), u01 = e^{i(alpha-gamma)} sin(beta)
    // (in this convention exp(i a sz) = diag(e^{ia}, e^{-ia}) and
    //  exp(i b sy) = [[cos b, sin b], [-sin b, cos b]]).
    if (std::abs(u00) < 1e-12) {
        a.gamma = 0.0;
        a.alpha = std::arg(u01);
    } else if (std::abs(u01) < 1e-12) {
        a.gamma = 0.0;
        a.alpha = std::arg(u00);
    } else {
        const double sum = std::arg(u00);
        const double diff = std::arg(u01);
        a.alpha = (sum + diff) / 2;
        a.gamma = (sum - diff) / 2;
    }
    return a;
}

unitary2 euler_zyz_reconstruct(const euler_zyz_angles& a) {
    unitary2 rz_a, ry_b, rz_g;
    rz_a << std::exp(im * a.alpha), 0, 0, std::exp(-im * a.alpha);
    ry_b << std::cos(a.beta), std::sin(a.beta), -std::sin(a.beta), std::cos(a.beta);
    rz_g << std::exp(im * a.gamma), 0, 0, std::exp(-im * a.gamma);
    return std::exp(im * a.phase) * rz_a * ry_b * rz_g;
}

double phase_distance(const unitary4& a, const unitary4& b) {
    // Equal to sqrt(max(0, 2*(1 - |tr(a^dag b)|/4))), but evaluated through the
    // phase-aligned Frobenius difference: the naive form cancels catastrophically
    // near zero distance and cannot resolve anything below sqrt(machine epsilon).
    const complexd s = (a.adjoint() * b).trace() / 4.0;
    const double mag = std::abs(s);
    if (mag < 1e-8) {
        return std::sqrt(std::max(0.0, 2.0 * (1.0 - mag)));
    }
    return (a * (s / mag) - b).norm() / 2.0;
}

bool is_unitary(const unitary2& u, double tol) {
    return (u.adjoint() * u - unitary2::Identity()).cwiseAbs().maxCoeff() < tol;
}

bool is_unitary(const unitary4& u, double tol) {
    return (u.adjoint() * u - unitary4::Identity()).cwiseAbs().maxCoeff() < tol;
}

rng::rng(std::uint64_t seed) : engine_(seed) {}

double rng::uniform() {
    // 53-bit mantissa in [0, 1).
    return (engine_() >> 11) * 0x1.0p-53;
}

double rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

std::uint64_t rng::derive(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the combined state.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

template <int N>
Eigen::Matrix<complexd, N, N> haar_random_su(rng& r) {
    using matrix_t = Eigen::Matrix<complexd, N, N>;
    matrix_t g;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            g(i, j) = complexd(r.gaussian(), r.gaussian());
        }
    }
    Eigen::HouseholderQR<matrix_t> qr(g);
    matrix_t q = qr.householderQ();
    const matrix_t rm = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int j = 0; j < N; ++j) {
        const complexd d = rm(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : complexd(1, 0));
    }
    // Normalize det to 1 via the principal N-th root.
    const complexd det = q.determinant();
    q *= std::exp(-im * (std::arg(det) / N));
    return q;
}

} // namespace

unitary2 haar_random_su2(rng& r) { return haar_random_su<2>(r); }
unitary4 haar_random_su4(rng& r) { return haar_random_su<4>(r); }

unitary2 haar_random_su2(std::uint64_t seed) {
    rng r(seed);
    return haar_random_su2(r);
}

unitary4 haar_random_su4(std::uint64_t seed) {
    rng r(seed);
    return haar_random_su4(r);
}

} // namespace weylforge
