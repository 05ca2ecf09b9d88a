#pragma once

#include <stdexcept>

namespace weylforge {

// A controlled gate whose reduced interaction strength is zero: it cannot
// generate entanglement and has no synthesis strength.
struct not_entangling : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A two-pulse target class that the requested pulse strengths cannot reach.
struct out_of_reach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two gates whose local invariants differ: there is no local dressing that
// maps one onto the other.
struct not_locally_equivalent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The canonical decomposition failed to reach its residual target after all
// degeneracy-handling branches; signals a numerics bug, not a user error.
struct decomposition_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A circuit description that cannot be simulated (unknown item kind,
// non-finite angle, or a non-unitary local block).
struct malformed_circuit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace weylforge
