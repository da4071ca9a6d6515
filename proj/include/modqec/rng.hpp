#ifndef MODQEC_RNG_HPP
#define MODQEC_RNG_HPP

#include "modqec/types.hpp"

#include <cstdint>
#include <random>

namespace modqec {

/// Seeded random source with hand-rolled distributions.
///
/// std::mt19937_64 output is fully specified by the standard, and the
/// transformations below avoid std::normal_distribution (whose algorithm is
/// implementation-defined), so identical seeds produce bit-identical draws
/// on every platform.  Haar sampling follows the QR construction with the
/// R-diagonal phase fixed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard real normal via Box-Muller.
    double normal();

    /// Standard complex normal: E|z|^2 = 1.
    Complex complex_normal();

    /// Uniform integer in [lo, hi].
    std::uint64_t integer(std::uint64_t lo, std::uint64_t hi);

    /// Matrix of independent standard complex normals.
    Matrix gaussian(Index rows, Index cols);

    /// Haar-distributed isometry (rows >= cols), unitary when square.
    Matrix haar_isometry(Index rows, Index cols);

    /// Haar-uniform unit vector in C^d.
    Vector haar_vector(Index d);

    /// Unit vector with full Schmidt rank across C^n (x) C^n, Schmidt
    /// coefficients bounded away from zero.
    Vector full_schmidt_vector(Index n);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace modqec

#endif
