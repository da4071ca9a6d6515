#ifndef MODQEC_MODULAR_HPP
#define MODQEC_MODULAR_HPP

#include "modqec/algebra.hpp"

#include <vector>

namespace modqec {

/// Connes spatial derivative Delta(phi/omega') of a state on M with respect
/// to a state on M'.  In finite dimensions, with both densities taken
/// against the ambient un-normalized trace, Delta = h_phi * pinv(h_omega')
/// on the joint support; the two densities commute so the product is
/// positive.  supp Delta = s(phi) s(omega').
struct SpatialDerivative {
    Matrix op;
    SpectralDecomposition eig;
    AlgebraState numerator;   // phi on M
    AlgebraState denominator; // omega' on M'

    Matrix power(Complex z) const { return positive_power(eig, z); }
    Matrix log_on_support() const { return matrix_log_on_support(eig); }
};

SpatialDerivative spatial_derivative(const AlgebraState& phi, const AlgebraState& omega_prime);

/// Araki relative modular operator Delta(omega_psi, omega_Omega) realized as
/// the spatial derivative of omega_psi|_M against the commutant vector state
/// of Omega.  Throws NotSeparating when Omega is not separating for M.
SpatialDerivative relative_modular(const Vector& psi, const Vector& omega_vec,
                                   const VonNeumannAlgebra& m);

/// Modular flow sigma_t(x) = h^{it} x h^{-it} of a faithful state.
/// Throws NotFaithful / NotInAlgebra.
Matrix modular_flow(const AlgebraState& omega, const Matrix& x, double t);

/// One flow-time sample of the Connes cocycle [D phi : D omega]_t, with its
/// recorded (not assumed) membership and isometry margins.  For faithful
/// omega this is h_phi^{it} h_omega^{-it}; for non-faithful omega the
/// construction routes through the faithful average (omega + omega_perp)/2
/// with the normalized trace on the complementary corner as filler,
/// u_t = 2^{-it} [D phi : D tilde]_t s(omega).
struct CocycleSample {
    double t = 0.0;
    Matrix u;
    bool faithful_pair = false;
    double membership_deviation = 0.0;
    double isometry_deviation = 0.0; // || u* u - s(omega) ||_F
};

CocycleSample cocycle(const AlgebraState& phi, const AlgebraState& omega, double t);

/// Precomputed spectral data for evaluating one cocycle at many flow times.
/// `at(t)` returns the same operator as cocycle(phi, omega, t).u.
class CocycleEngine {
public:
    CocycleEngine(const AlgebraState& phi, const AlgebraState& omega);
    Matrix at(double t) const;
    const Matrix& support() const { return s_omega_; }
    bool faithful_pair() const { return faithful_pair_; }

private:
    SpectralDecomposition phi_eig_;
    SpectralDecomposition den_eig_; // h_omega, or the faithful average
    Matrix s_omega_;
    bool faithful_pair_ = false;
    bool general_route_ = false; // 2^{-it} [D phi : D tilde]_t s(omega)
};

/// Same cocycle through the spatial-derivative route with an explicit
/// faithful reference state on the commutant; the result is independent of
/// the reference.  Used to cross-check the trace-density route.
Matrix cocycle_via_spatial(const AlgebraState& phi, const AlgebraState& omega,
                           const AlgebraState& omega0_prime, double t);

/// Fixed points of the modular flow of a faithful state: elements of M
/// commuting with the density.  Throws NotFaithful.
VonNeumannAlgebra centralizer(const AlgebraState& omega);

/// Araki relative entropy S(omega_psi, phi) on phi's algebra:
/// +infinity when the support of omega_psi's density escapes supp(h_phi),
/// otherwise -<psi, log Delta(phi / omega'_psi) psi> with log on support.
double relative_entropy(const Vector& psi, const AlgebraState& phi);

/// Blockwise density cross-check Tr h_omega (log h_omega - log h_phi);
/// agrees with the Araki value whenever both are finite.
double relative_entropy_trace_formula(const AlgebraState& omega, const AlgebraState& phi);

inline const std::vector<double> kEntropyGrid{1e-2, 1e-3, 1e-4, 1e-5};

/// Limit estimator -t^{-1}(||Delta^{t/2} psi||^2 - 1) on a decreasing grid
/// with two-point Richardson extrapolation; `divergent` mirrors the
/// +infinity branch (the raw sequence blows up under support violation).
struct LimitEstimate {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> raw;
    bool divergent = false;
};

LimitEstimate relative_entropy_limit(const Vector& psi, const AlgebraState& phi,
                                     const std::vector<double>& t_grid = kEntropyGrid);

/// Cocycle-derivative estimator Re[ i s^{-1} (omega_psi(u_s) - 1) ] on small
/// s, extrapolated.  Not applicable when the direct entropy is infinite.
struct DerivativeEstimate {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> raw;
    bool applicable = true;
};

DerivativeEstimate relative_entropy_cocycle_derivative(
    const Vector& psi, const AlgebraState& phi,
    const std::vector<double>& s_grid = kEntropyGrid);

/// Von Neumann algebra generated by the cocycles [D omega_psi : D omega_Omega]_t
/// over the sampled states and flow times; coincides with M for sufficiently
/// rich samples of cyclic-separating states.
VonNeumannAlgebra generated_algebra_from_cocycles(const VonNeumannAlgebra& m,
                                                  const Vector& omega_vec,
                                                  const std::vector<Vector>& state_samples,
                                                  const std::vector<double>& t_samples);

} // namespace modqec

#endif
