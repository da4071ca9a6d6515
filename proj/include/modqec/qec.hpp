#ifndef MODQEC_QEC_HPP
#define MODQEC_QEC_HPP

#include "modqec/algebra.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace modqec {

/// Quantum channel in Kraus form.  Heisenberg picture throughout: the
/// observable action E(x) = sum K_i* x K_i maps out-side observables to
/// in-side observables and is unital (sum K_i* K_i = 1_in); the density
/// action rho -> sum K_i rho K_i* runs S_in -> S_out and is trace
/// preserving.
struct Channel {
    Index in_dim = 0;
    Index out_dim = 0;
    std::vector<Matrix> kraus; // each out_dim x in_dim

    Matrix heisenberg(const Matrix& x) const;   // M_out -> M_in
    Matrix schrodinger(const Matrix& rho) const; // S_in -> S_out
    CheckResult unital_check(double tol = 1e-10) const;
};

/// Single-Kraus channel x -> V* x V of an isometry.  Throws NotIsometry.
Channel channel_from_isometry(const Matrix& v);

Channel identity_channel(Index d);

/// Density-action composition outer after inner.
Channel compose(const Channel& outer, const Channel& inner);

/// Trace-preserving conditional expectation onto a von Neumann algebra as a
/// channel on the ambient space (closed-form Kraus from the block data).
Channel conditional_expectation_channel(const VonNeumannAlgebra& m);

/// Choi matrix of the density action, (out*in) x (out*in), PSD.
Matrix choi_matrix(const Channel& e);

/// Kraus decomposition from a Choi matrix via eigen-factorization.
/// Throws NotPositive when the Choi matrix fails complete positivity.
Channel channel_from_choi(const Matrix& choi, Index in_dim, Index out_dim,
                          double rank_tol = 1e-12);

/// Privacy certificate: C is private for E on the listed domain when the
/// Heisenberg image of the domain lands in C'.  Deviation is the largest
/// projection residual over the domain basis.
CheckResult is_private(const Channel& e, const VonNeumannAlgebra& domain,
                       const VonNeumannAlgebra& c, double tol);

/// Correctability through complementarity: B is correctable for V*(.)V
/// restricted to A iff B is private for the complementary channel V*(.)V
/// restricted to A'.  Returns that privacy deviation.
CheckResult is_correctable(const Matrix& v, const VonNeumannAlgebra& a,
                           const VonNeumannAlgebra& b, double tol);

/// The object Theorem-level verification quantifies over: an isometry
/// between bulk H and boundary K with algebras on both sides and a
/// bulk reference vector whose image stays cyclic and separating.
struct EncodingInstance {
    Index h_dim = 0;
    Index k_dim = 0;
    Matrix V; // k_dim x h_dim isometry
    VonNeumannAlgebra A;
    VonNeumannAlgebra B;
    Vector omega;

    std::string kind = "custom";
    std::uint64_t seed = 0;
    double epsilon = 0.0;

    /// Throws unless V is an isometry, omega is cyclic and separating for B,
    /// and V omega is cyclic and separating for A.
    void validate(double tol = 1e-8) const;
};

/// Unital *-homomorphism candidate R: B -> A solved in least squares on the
/// spanning family A' V H, with its certificate.
struct RecoveryCertificate {
    double max_residual = 0.0;       // relative LS residual, worst basis element
    double unitality = 0.0;          // ||R(1) - 1||_F
    double multiplicativity = 0.0;   // worst ||R(bc) - R(b)R(c)||_F
    double star_preservation = 0.0;  // worst ||R(b*) - R(b)*||_F
    double correctability = 0.0;     // worst ||V* R(b) V - b||_F
};

struct RecoveryHomomorphism {
    std::vector<Matrix> images; // R(b_i) for the B basis
    RecoveryCertificate certificate;

    /// Apply to any element of B by expanding in the basis.
    Matrix apply(const VonNeumannAlgebra& b_algebra, const Matrix& x) const;
};

/// Throws RecoveryInconsistent when the least-squares residual exceeds tol.
RecoveryHomomorphism recovery_homomorphism(const EncodingInstance& instance, double tol = 1e-8);

/// Petz recovery of a channel with respect to a faithful reference state on
/// the channel's density-input side:
///   R(rho) = h^{1/2} E-adjoint( sigma^{-1/2} rho sigma^{-1/2} ) h^{1/2},
/// sigma = E(h) the image density.  Returned in Kraus form via Choi
/// factorization; fixes the reference density exactly.  Throws NotFaithful.
Channel petz_map(const Channel& e, const AlgebraState& phi);

/// Minimal Stinespring dilation E(a) = W* pi(a) W of the channel restricted
/// to a domain algebra, built by orthonormalizing the domain action on the
/// canonical dilation.
struct StinespringDilation {
    Index dilation_dim = 0;
    Matrix W;                // dilation_dim x in_dim isometry
    std::vector<Matrix> rep; // pi(b) for the domain basis
    double rep_defect = 0.0; // worst ||E(b) - W* pi(b) W||_F
    double hom_defect = 0.0; // worst multiplicativity defect of pi
    bool minimal = false;    // pi(domain) W H spans the dilation space
};

StinespringDilation stinespring_minimal(const Channel& e, const VonNeumannAlgebra& domain);

} // namespace modqec

#endif
