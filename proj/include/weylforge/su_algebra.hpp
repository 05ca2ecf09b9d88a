#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "weylforge/tolerances.hpp"

namespace weylforge {

using complexd = std::complex<double>;
using unitary2 = Eigen::Matrix2cd;
using unitary4 = Eigen::Matrix4cd;

enum class pauli_axis { x, y, z };

// The 2x2 Pauli matrix for the given axis.
unitary2 pauli(pauli_axis axis);

// Kronecker product; the left factor acts on the top wire (most significant
// qubit), so kron(a, b) applies a to qubit 1 and b to qubit 2.
unitary4 kron(const unitary2& a, const unitary2& b);

// exp(c * (i/2) * sigma_axis (x) sigma_axis)
//   = cos(c/2) I + i sin(c/2) sigma_axis (x) sigma_axis.
unitary4 exp_canonical(pauli_axis axis, double c);

// exp(i n . sigma) = cos|n| I + i sin|n| (n/|n|) . sigma; the zero vector
// maps to the identity.
unitary2 su2_from_axis_angle(const Eigen::Vector3d& n);

// u = exp(i phase) exp(i alpha sigma_z) exp(i beta sigma_y) exp(i gamma sigma_z)
// with beta in [0, pi/2]; gamma is fixed to 0 on the gimbal-locked circles.
struct euler_zyz_angles {
    double alpha;
    double beta;
    double gamma;
    double phase;
};

euler_zyz_angles euler_zyz(const unitary2& u);
unitary2 euler_zyz_reconstruct(const euler_zyz_angles& a);

// sqrt(max(0, 2 (1 - |tr(a^dag b)| / 4))): zero exactly when a and b agree up
// to a global phase; a metric on the projective unitary group.
double phase_distance(const unitary4& a, const unitary4& b);

bool is_unitary(const unitary2& u, double tol = tol_unitary);
bool is_unitary(const unitary4& u, double tol = tol_unitary);

// Deterministic random stream: a fixed 64-bit engine with an explicit
// Box-Muller normal transform so that sampled matrices are identical across
// platforms and thread counts.
class rng {
public:
    explicit rng(std::uint64_t seed);

    double uniform();  // [0, 1)
    double gaussian(); // standard normal

    // Stateless mix of (seed, stream) into an independent child seed; used to
    // give each Monte-Carlo sample its own generator.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Haar-distributed special unitaries (QR of a complex Gaussian matrix with
// the R-diagonal phase fix, then determinant-normalized into SU(n)).
unitary2 haar_random_su2(rng& r);
unitary4 haar_random_su4(rng& r);
unitary2 haar_random_su2(std::uint64_t seed);
unitary4 haar_random_su4(std::uint64_t seed);

} // namespace weylforge
