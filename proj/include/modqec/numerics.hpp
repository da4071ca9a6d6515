#ifndef MODQEC_NUMERICS_HPP
#define MODQEC_NUMERICS_HPP

#include "modqec/types.hpp"

#include <functional>
#include <vector>

namespace modqec {

/// Frobenius norm shorthand.
double frobenius(const Matrix& a);

/// Hermiticity / positivity / unitarity / projection predicates.  Each
/// returns the flag together with the measured deviation; nothing is ever
/// assumed without a check.
CheckResult hermitian_check(const Matrix& a, double tol = 1e-10);
CheckResult positive_check(const Matrix& a, double tol = 1e-10);
CheckResult unitary_check(const Matrix& a, double tol = 1e-10);
CheckResult isometry_check(const Matrix& v, double tol = 1e-10);
CheckResult projection_check(const Matrix& p, double tol = 1e-10);

/// Rank-revealing threshold for support decisions on a positive operator:
/// dim * machine epsilon * largest |eigenvalue|.  Overridable per call in
/// every operation that consumes it.
double default_support_cutoff(const RealVector& eigenvalues, Index dim);

/// Eigensystem of a Hermitian operator with a deterministic phase convention
/// (first significant component of each eigenvector made real positive) so
/// repeated runs are bit-stable for nondegenerate spectra.  Eigenvalues come
/// out ascending.  Individual eigenvectors inside a degenerate cluster are
/// not stable; downstream code only ever uses spectral projections, which
/// are.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;
    Index support_rank = 0;
    double cutoff = 0.0;

    Index dim() const { return eigenvalues.size(); }

    /// U f(lambda) U* with f applied on the support and 0 on the kernel.
    Matrix apply_on_support(const std::function<Complex(double)>& f) const;

    /// U diag(lambda) U*.
    Matrix reconstruct() const;

    /// Spectral projection onto eigenvalues strictly above the cutoff.
    Matrix support_projection() const;
};

/// Throws NotHermitian if ||A - A*||_F > tol * max(||A||_F, 1).
SpectralDecomposition hermitian_eig(const Matrix& a, double cutoff_override = -1.0);

/// A^z on supp(A), 0 on the kernel, for positive semidefinite A.  For purely
/// imaginary z the result is a partial isometry with initial and final
/// projection supp(A).  Throws NotPositive.
Matrix positive_power(const Matrix& a, Complex z);
Matrix positive_power(const SpectralDecomposition& eig, Complex z);

/// log(A) on supp(A), 0 on the kernel.  Support-domination checks are the
/// caller's business.  Throws NotPositive.
Matrix matrix_log_on_support(const Matrix& a);
Matrix matrix_log_on_support(const SpectralDecomposition& eig);

/// Column-major vectorization and its inverse.
Vector vectorize(const Matrix& x);
Matrix unvectorize(const Vector& v, Index rows, Index cols);

/// Kronecker product (standard block convention, compatible with
/// vec(AXB) = (B^T (x) A) vec(X) for column-major vec).
Matrix kron(const Matrix& a, const Matrix& b);

/// Matrix of the commutator map X -> gX - Xg acting on vectorized operators.
Matrix commutator_map(const Matrix& g);

/// Orthonormal (Hilbert-Schmidt) basis of { X : ||L(X)|| <= tol ||X|| } for a
/// linear map L on operator space given as an (m d^2) x d^2 matrix (stacked
/// maps allowed).  Singular-value thresholding at tol * max(sigma_max, 1).
/// An empty basis is a valid answer.
std::vector<Matrix> nullspace(const Matrix& stacked_map, Index dim, double tol);

/// Joint commutant { X : [X, g] = 0 for every listed g and g* }, computed as
/// the nullspace of the stacked commutator maps via the Gram form (one d^2
/// Hermitian eigenproblem instead of a tall SVD).  Generators are normalized
/// internally so the tolerance is scale-free.
std::vector<Matrix> commutant_basis(const std::vector<Matrix>& generators, Index dim,
                                    double tol = 1e-9);

} // namespace modqec

#endif
