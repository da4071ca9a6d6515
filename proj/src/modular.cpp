#include "modqec/modular.hpp"

#include "modqec/errors.hpp"

#include <cmath>
#include <limits>

namespace modqec {

namespace {

constexpr double kSupportLeakTol = 1e-7;

void require_same_algebra(const AlgebraState& a, const AlgebraState& b) {
    if (a.algebra->dim() != b.algebra->dim() ||
        a.algebra->algebra_dim() != b.algebra->algebra_dim())
        throw AlgebraMismatch("states live on different algebras");
    if (a.algebra->span_distance(*b.algebra) > 1e-8)
        throw AlgebraMismatch("states live on different algebras (span mismatch)");
}

/// || (1 - p) q ||_F: how much of q's range escapes p's range.
double support_leak(const Matrix& p, const Matrix& q) {
    const Index d = p.rows();
    return ((Matrix::Identity(d, d) - p) * q).norm();
}

} // namespace

SpatialDerivative spatial_derivative(const AlgebraState& phi, const AlgebraState& omega_prime) {
    if (phi.algebra->dim() != omega_prime.algebra->dim())
        throw AlgebraMismatch("spatial derivative: ambient dimensions differ");
    const Matrix& h = phi.density;
    const Matrix& hp = omega_prime.density;
    if ((h * hp - hp * h).norm() > 1e-8)
        throw AlgebraMismatch("spatial derivative: densities do not commute "
                              "(denominator state is not on the commutant)");

    // Delta = w hp^{-1} h on the joint support, where the central weight
    // w = sum_k (m_k / n_k) P_k over the blocks of M compensates the
    // multiplicity mismatch between the ambient trace and the commutant's
    // GNS normalization.  On balanced blocks (n_k = m_k) w = 1 and this is
    // the plain density ratio; the weight is what makes the defining
    // quadratic form q(xi) = phi(R(xi) R(xi)*) come out exactly.
    const Index d = phi.algebra->dim();
    Matrix weight_sqrt = Matrix::Zero(d, d);
    for (const AlgebraBlock& block : phi.algebra->blocks()) {
        const double w = static_cast<double>(block.multiplicity) /
                         static_cast<double>(block.factor_dim);
        weight_sqrt += std::sqrt(w) * block.embedding * block.embedding.adjoint();
    }

    const Matrix hp_inv_sqrt = positive_power(hp, Complex(-0.5, 0.0));
    Matrix delta = weight_sqrt * hp_inv_sqrt * h * hp_inv_sqrt * weight_sqrt;
    delta = (delta + Matrix(delta.adjoint())) / 2.0;

    SpatialDerivative out;
    out.op = delta;
    out.eig = hermitian_eig(out.op);
    out.numerator = phi;
    out.denominator = omega_prime;
    return out;
}

SpatialDerivative relative_modular(const Vector& psi, const Vector& omega_vec,
                                   const VonNeumannAlgebra& m) {
    if (!m.is_separating(omega_vec))
        throw NotSeparating("reference vector must be separating for the algebra");
    return spatial_derivative(m.vector_state(psi), m.commutant().vector_state(omega_vec));
}

Matrix modular_flow(const AlgebraState& omega, const Matrix& x, double t) {
    if (!omega.faithful) throw NotFaithful("modular flow needs a faithful state");
    const CheckResult member = omega.algebra->contains(x, 1e-8);
    if (!member.ok)
        throw NotInAlgebra("modular flow argument, residual " +
                           std::to_string(member.deviation));
    const Matrix u = positive_power(omega.density, Complex(0.0, t));
    return u * x * u.adjoint();
}

CocycleEngine::CocycleEngine(const AlgebraState& phi, const AlgebraState& omega) {
    require_same_algebra(phi, omega);
    const Index d = phi.algebra->dim();
    faithful_pair_ = phi.faithful && omega.faithful;
    phi_eig_ = hermitian_eig(phi.density);

    if (omega.faithful) {
        s_omega_ = Matrix::Identity(d, d);
        den_eig_ = hermitian_eig(omega.density);
    } else {
        general_route_ = true;
        s_omega_ = support_projection(omega);
        const Matrix comp = Matrix::Identity(d, d) - s_omega_;
        const double comp_mass = comp.trace().real();
        if (comp_mass < 0.5)
            throw NotAState("non-faithful state with no complementary corner");
        // Faithful average (omega + trace filler)/2; the 2^{-it} phase in
        // at() undoes the averaging on supp(omega).
        den_eig_ = hermitian_eig((omega.density + comp / comp_mass) / 2.0);
    }
}

Matrix CocycleEngine::at(double t) const {
    const Complex it(0.0, t);
    Matrix u = positive_power(phi_eig_, it) * positive_power(den_eig_, -it);
    if (general_route_) u = std::exp(-it * std::log(2.0)) * u * s_omega_;
    return u;
}

CocycleSample cocycle(const AlgebraState& phi, const AlgebraState& omega, double t) {
    const CocycleEngine engine(phi, omega);

    CocycleSample sample;
    sample.t = t;
    sample.u = engine.at(t);
    sample.faithful_pair = engine.faithful_pair();
    sample.membership_deviation = phi.algebra->contains(sample.u, 1e-9).deviation;
    sample.isometry_deviation = (sample.u.adjoint() * sample.u - engine.support()).norm();
    return sample;
}

Matrix cocycle_via_spatial(const AlgebraState& phi, const AlgebraState& omega,
                           const AlgebraState& omega0_prime, double t) {
    require_same_algebra(phi, omega);
    const Complex it(0.0, t);
    const SpatialDerivative num = spatial_derivative(phi, omega0_prime);
    const SpatialDerivative den = spatial_derivative(omega, omega0_prime);
    return num.power(it) * den.power(-it);
}

VonNeumannAlgebra centralizer(const AlgebraState& omega) {
    if (!omega.faithful) throw NotFaithful("centralizer needs a faithful state");
    const VonNeumannAlgebra& m = *omega.algebra;
    const Index d = m.dim();
    const Index r = m.algebra_dim();

    // Nullspace of the commutator with the density, restricted to M's span.
    Matrix stacked(d * d, r);
    for (Index j = 0; j < r; ++j)
        stacked.col(j) = vectorize(m.basis()[j] * omega.density - omega.density * m.basis()[j]);
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const RealVector sv = svd.singularValues();
    const double threshold = 1e-9 * std::max(sv.size() ? sv(0) : 0.0, 1.0);

    std::vector<Matrix> basis;
    for (Index i = 0; i < r; ++i) {
        const double sigma = i < sv.size() ? sv(i) : 0.0;
        if (sigma > threshold) continue;
        Matrix x = Matrix::Zero(d, d);
        for (Index j = 0; j < r; ++j) x += svd.matrixV()(j, i) * m.basis()[j];
        basis.push_back(std::move(x));
    }
    return VonNeumannAlgebra::from_orthonormal_basis(std::move(basis), d, false);
}

double relative_entropy(const Vector& psi, const AlgebraState& phi) {
    const VonNeumannAlgebra& m = *phi.algebra;
    const AlgebraState omega = m.vector_state(psi);

    const Matrix s_phi = support_projection(phi);
    const Matrix s_psi = support_projection(omega);
    if (support_leak(s_phi, s_psi) > kSupportLeakTol)
        return std::numeric_limits<double>::infinity();

    const SpatialDerivative delta = spatial_derivative(phi, m.commutant().vector_state(psi));
    const Complex val = psi.adjoint() * delta.log_on_support() * psi;
    return -val.real();
}

double relative_entropy_trace_formula(const AlgebraState& omega, const AlgebraState& phi) {
    require_same_algebra(omega, phi);
    const Matrix s_phi = support_projection(phi);
    const Matrix s_omega = support_projection(omega);
    if (support_leak(s_phi, s_omega) > kSupportLeakTol)
        return std::numeric_limits<double>::infinity();
    const Matrix diff = matrix_log_on_support(omega.density) - matrix_log_on_support(phi.density);
    return (omega.density * diff).trace().real();
}

LimitEstimate relative_entropy_limit(const Vector& psi, const AlgebraState& phi,
                                     const std::vector<double>& t_grid) {
    const VonNeumannAlgebra& m = *phi.algebra;
    const SpatialDerivative delta = spatial_derivative(phi, m.commutant().vector_state(psi));

    // Spectral weights of psi; the grid values are evaluated via expm1 in
    // the eigenbasis so the t -> 0 cancellation costs no precision.
    const Index d = delta.eig.dim();
    RealVector weights(d);
    double kernel_mass = 0.0;
    for (Index i = 0; i < d; ++i) {
        const Complex amp = delta.eig.eigenvectors.col(i).adjoint() * psi;
        weights(i) = std::norm(amp);
        if (delta.eig.eigenvalues(i) <= delta.eig.cutoff) kernel_mass += weights(i);
    }

    LimitEstimate out;
    out.divergent = kernel_mass > kSupportLeakTol;
    for (double t : t_grid) {
        double acc = -kernel_mass;
        for (Index i = 0; i < d; ++i)
            if (delta.eig.eigenvalues(i) > delta.eig.cutoff)
                acc += weights(i) * std::expm1(t * std::log(delta.eig.eigenvalues(i)));
        out.raw.push_back(-acc / t);
    }

    const std::size_t n = out.raw.size();
    if (n >= 2) {
        const double t1 = t_grid[n - 2], f1 = out.raw[n - 2];
        const double t2 = t_grid[n - 1], f2 = out.raw[n - 1];
        out.value = f2 + (f2 - f1) * t2 / (t1 - t2);
        out.error = std::abs(out.raw[n - 1] - out.value);
    } else if (n == 1) {
        out.value = out.raw[0];
        out.error = std::abs(out.value);
    }
    return out;
}

DerivativeEstimate relative_entropy_cocycle_derivative(const Vector& psi,
                                                       const AlgebraState& phi,
                                                       const std::vector<double>& s_grid) {
    DerivativeEstimate out;
    if (std::isinf(relative_entropy(psi, phi))) {
        // Remark on the derivative formula: with infinite entropy there is
        // nothing to differentiate.
        out.applicable = false;
        return out;
    }
    const AlgebraState omega = phi.algebra->vector_state(psi);
    const CocycleEngine engine(phi, omega);
    for (double s : s_grid) {
        if (s == 0.0) continue;
        const Complex expectation = psi.adjoint() * engine.at(s) * psi;
        out.raw.push_back((kImag * (expectation - Complex(1.0, 0.0)) / s).real());
    }
    const std::size_t n = out.raw.size();
    if (n >= 2) {
        const double s1 = s_grid[n - 2], f1 = out.raw[n - 2];
        const double s2 = s_grid[n - 1], f2 = out.raw[n - 1];
        out.value = f2 + (f2 - f1) * s2 / (s1 - s2);
        out.error = std::abs(out.raw[n - 1] - out.value);
    } else if (n == 1) {
        out.value = out.raw[0];
        out.error = std::abs(out.value);
    }
    return out;
}

VonNeumannAlgebra generated_algebra_from_cocycles(const VonNeumannAlgebra& m,
                                                  const Vector& omega_vec,
                                                  const std::vector<Vector>& state_samples,
                                                  const std::vector<double>& t_samples) {
    if (!m.is_cyclic(omega_vec) || !m.is_separating(omega_vec))
        throw NotSeparating("reference vector must be cyclic and separating");
    const AlgebraState omega = m.vector_state(omega_vec);

    std::vector<Matrix> generators;
    for (const Vector& psi : state_samples) {
        const CocycleEngine engine(m.vector_state(psi), omega);
        for (double t : t_samples) generators.push_back(engine.at(t));
    }
    return VonNeumannAlgebra::from_generators(generators, m.dim());
}

} // namespace modqec
