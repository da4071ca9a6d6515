#ifndef MODQEC_TYPES_HPP
#define MODQEC_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace modqec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Complex kImag{0.0, 1.0};

/// Outcome of a tolerance-based predicate: the flag plus the measured margin,
/// so reports can show how far a check was from flipping.
struct CheckResult {
    bool ok = false;
    double deviation = 0.0;
};

} // namespace modqec

#endif
