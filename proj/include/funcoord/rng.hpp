#pragma once

#include <cstdint>

#include "funcoord/types.hpp"

namespace funcoord {

/// Deterministic 64-bit generator (splitmix64, increment 0x9E3779B97F4A7C15).
///
/// The standard <random> distributions are not bit-stable across standard
/// library implementations, so every "random" object in the library is drawn
/// through this generator: same seed, same bytes, on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (no cached spare, for reproducibility).
    double normal();

    Complex complex_normal() { return {normal(), normal()}; }

    /// Vector with i.i.d. complex normal entries.
    Vec vector(Eigen::Index n);

    /// Real vector with i.i.d. normal entries.
    RVec real_vector(Eigen::Index n);

    /// Unit-norm complex vector (plain l2 norm).
    Vec unit_vector(Eigen::Index n);

    /// GUE-normalized Hermitian matrix (B + B†)/(2√n); spectral radius ~ 2.
    Mat hermitian(Eigen::Index n);

    /// Hermitian as above, re-drawn until min |singular value| >= min_sv.
    Mat hermitian_invertible(Eigen::Index n, double min_sv = 0.2);

    /// Hermitian positive definite with eigenvalues in [lo, hi].
    Mat hermitian_positive(Eigen::Index n, double lo = 0.5, double hi = 2.0);

    /// Invertible matrix U diag(s) V† with singular values log-uniform in
    /// [0.5, 2]; condition number at most 4.
    Mat invertible(Eigen::Index n);

    /// Unitary matrix from the QR factor of a complex normal matrix.
    Mat unitary(Eigen::Index n);

private:
    std::uint64_t state_;
};

}  // namespace funcoord
