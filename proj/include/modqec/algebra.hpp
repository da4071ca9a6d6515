#ifndef MODQEC_ALGEBRA_HPP
#define MODQEC_ALGEBRA_HPP

#include "modqec/numerics.hpp"
#include "modqec/rng.hpp"
#include "modqec/types.hpp"

#include <memory>
#include <vector>

namespace modqec {

class VonNeumannAlgebra;

/// One central summand of a finite-dimensional von Neumann algebra: the
/// isometry `embedding` carries C^{factor_dim} (x) C^{multiplicity} onto the
/// corresponding central subspace, and the algebra acts there as
/// M_{factor_dim} (x) 1.
struct AlgebraBlock {
    Index factor_dim = 0;
    Index multiplicity = 0;
    Matrix embedding;
};

/// A positive normalized functional on an algebra, stored as the unique
/// density h in the algebra's span with phi(x) = Tr(h x) against the ambient
/// un-normalized matrix trace.
struct AlgebraState {
    std::shared_ptr<const VonNeumannAlgebra> algebra;
    Matrix density;
    bool faithful = false;
};

/// *-closed unit-containing operator algebra on C^d equal to its double
/// commutant, stored as a Hilbert-Schmidt orthonormal basis plus the derived
/// central block decomposition.  Instances are immutable; copies share data.
class VonNeumannAlgebra {
public:
    /// Double commutant of the generators (adjoints and the unit are added
    /// internally), basis orthonormalized, blocks discovered by spectral
    /// decomposition of a generic central element.
    static VonNeumannAlgebra from_generators(const std::vector<Matrix>& generators, Index dim,
                                             double tol = 1e-9);

    /// Wrap an already HS-orthonormal basis.  With verify=true the span is
    /// checked to contain the unit and to close under adjoints and products.
    static VonNeumannAlgebra from_orthonormal_basis(std::vector<Matrix> basis, Index dim,
                                                    bool verify = true, double tol = 1e-9);

    static VonNeumannAlgebra full(Index dim);
    static VonNeumannAlgebra trivial(Index dim);

    /// M_n (x) 1_m acting on C^{n m} (first tensor leg).
    static VonNeumannAlgebra tensor_factor(Index n, Index m);

    /// Assemble an algebra directly from block data.  The embeddings must be
    /// isometries with mutually orthogonal ranges covering C^dim; this is
    /// validated.
    static VonNeumannAlgebra from_block_data(std::vector<AlgebraBlock> blocks, Index dim);

    /// Block-diagonal direct sum; ambient dimensions add.
    static VonNeumannAlgebra direct_sum(const std::vector<VonNeumannAlgebra>& parts);

    VonNeumannAlgebra conjugated(const Matrix& unitary) const;
    VonNeumannAlgebra commutant() const;
    VonNeumannAlgebra center() const;

    Index dim() const { return data_->dim; }
    Index algebra_dim() const { return static_cast<Index>(data_->basis.size()); }
    const std::vector<Matrix>& basis() const { return data_->basis; }
    const std::vector<AlgebraBlock>& blocks() const { return data_->blocks; }

    /// HS-orthogonal projection onto the span.
    Matrix project(const Matrix& x) const;

    /// Membership: residual Frobenius norm of x after projection, flag
    /// residual <= tol * ||x||.
    CheckResult contains(const Matrix& x, double tol = 1e-9) const;

    /// The unique h in the span with Tr(h x) = Tr(F x) for all x in the
    /// algebra; positivity and normalization are re-verified after the
    /// projection.  Throws NotAState.
    AlgebraState trace_density(const Matrix& functional) const;

    /// trace_density of |psi><psi| for a unit vector.
    AlgebraState vector_state(const Vector& psi) const;

    bool is_cyclic(const Vector& psi, double tol = 1e-9) const;
    bool is_separating(const Vector& psi, double tol = 1e-9) const;

    Matrix random_selfadjoint(Rng& rng) const;
    Matrix random_element(Rng& rng) const;

    /// Symmetric span distance: max residual of either basis against the
    /// other span.  Zero iff the algebras coincide as subspaces.
    double span_distance(const VonNeumannAlgebra& other) const;

    std::shared_ptr<const VonNeumannAlgebra> shared() const;

private:
    struct Data {
        Index dim = 0;
        std::vector<Matrix> basis;
        Matrix basis_vec; // d^2 x r, orthonormal columns = vectorized basis
        std::vector<AlgebraBlock> blocks;
    };

    explicit VonNeumannAlgebra(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    static VonNeumannAlgebra from_blocks(std::vector<AlgebraBlock> blocks, Index dim);
    static std::shared_ptr<Data> make_data(std::vector<Matrix> basis, Index dim, bool with_blocks);

    std::shared_ptr<const Data> data_;
};

/// Spectral projection of the state's density onto its positive eigenvalues:
/// the smallest projection in the algebra with full measure.
Matrix support_projection(const AlgebraState& state);

/// Orthonormal basis of matrices for the span of the listed operators
/// (SVD-based, rank-revealing).
std::vector<Matrix> orthonormalize_span(const std::vector<Matrix>& ops, Index dim,
                                        double tol = 1e-10);

} // namespace modqec

#endif
