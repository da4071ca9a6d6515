#include "modqec/qec.hpp"

#include "modqec/errors.hpp"
#include "modqec/modular.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace modqec {

Matrix Channel::heisenberg(const Matrix& x) const {
    if (x.rows() != out_dim || x.cols() != out_dim)
        throw DimensionMismatch("heisenberg action expects an out-side observable");
    Matrix acc = Matrix::Zero(in_dim, in_dim);
    for (const Matrix& k : kraus) acc += k.adjoint() * x * k;
    return acc;
}

Matrix Channel::schrodinger(const Matrix& rho) const {
    if (rho.rows() != in_dim || rho.cols() != in_dim)
        throw DimensionMismatch("schrodinger action expects an in-side density");
    Matrix acc = Matrix::Zero(out_dim, out_dim);
    for (const Matrix& k : kraus) acc += k * rho * k.adjoint();
    return acc;
}

CheckResult Channel::unital_check(double tol) const {
    Matrix acc = Matrix::Zero(in_dim, in_dim);
    for (const Matrix& k : kraus) acc += k.adjoint() * k;
    const double dev = (acc - Matrix::Identity(in_dim, in_dim)).norm();
    return {dev <= tol * std::sqrt(static_cast<double>(in_dim)), dev};
}

Channel channel_from_isometry(const Matrix& v) {
    const CheckResult iso = isometry_check(v, 1e-9);
    if (!iso.ok) throw NotIsometry("deviation " + std::to_string(iso.deviation));
    return Channel{v.cols(), v.rows(), {v}};
}

Channel identity_channel(Index d) {
    return Channel{d, d, {Matrix::Identity(d, d)}};
}

Channel compose(const Channel& outer, const Channel& inner) {
    if (inner.out_dim != outer.in_dim) throw DimensionMismatch("compose: channel dims");
    Channel out{inner.in_dim, outer.out_dim, {}};
    out.kraus.reserve(outer.kraus.size() * inner.kraus.size());
    for (const Matrix& ko : outer.kraus)
        for (const Matrix& ki : inner.kraus) out.kraus.push_back(ko * ki);
    return out;
}

Channel conditional_expectation_channel(const VonNeumannAlgebra& m) {
    // Per block: keep the factor leg, replace the multiplicity leg by the
    // normalized trace.  Kraus (1/sqrt(m_k)) W_k (1 (x) E_{uv}) W_k*.
    const Index d = m.dim();
    Channel out{d, d, {}};
    for (const AlgebraBlock& block : m.blocks()) {
        const Index n = block.factor_dim;
        const Index mult = block.multiplicity;
        const double scale = 1.0 / std::sqrt(static_cast<double>(mult));
        for (Index u = 0; u < mult; ++u) {
            for (Index v = 0; v < mult; ++v) {
                Matrix k = Matrix::Zero(d, d);
                for (Index i = 0; i < n; ++i)
                    k += block.embedding.col(i * mult + u) *
                         block.embedding.col(i * mult + v).adjoint();
                out.kraus.push_back(k * scale);
            }
        }
    }
    return out;
}

Matrix choi_matrix(const Channel& e) {
    const Index n = e.out_dim * e.in_dim;
    Matrix choi = Matrix::Zero(n, n);
    for (const Matrix& k : e.kraus) {
        Vector w(n);
        for (Index a = 0; a < e.out_dim; ++a)
            for (Index i = 0; i < e.in_dim; ++i) w(a * e.in_dim + i) = k(a, i);
        choi += w * w.adjoint();
    }
    return choi;
}

Channel channel_from_choi(const Matrix& choi, Index in_dim, Index out_dim, double rank_tol) {
    if (choi.rows() != in_dim * out_dim)
        throw DimensionMismatch("channel_from_choi: Choi size");
    const SpectralDecomposition eig = hermitian_eig(choi);
    const double top = eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    if (eig.eigenvalues.minCoeff() < -1e-9 * std::max(top, 1.0))
        throw NotPositive("Choi matrix is not completely positive");

    Channel out{in_dim, out_dim, {}};
    for (Index idx = 0; idx < eig.dim(); ++idx) {
        const double lam = eig.eigenvalues(idx);
        if (lam <= rank_tol * std::max(top, 1.0)) continue;
        Matrix k(out_dim, in_dim);
        for (Index a = 0; a < out_dim; ++a)
            for (Index i = 0; i < in_dim; ++i)
                k(a, i) = std::sqrt(lam) * eig.eigenvectors(a * in_dim + i, idx);
        out.kraus.push_back(std::move(k));
    }
    return out;
}

CheckResult is_private(const Channel& e, const VonNeumannAlgebra& domain,
                       const VonNeumannAlgebra& c, double tol) {
    if (domain.dim() != e.out_dim || c.dim() != e.in_dim)
        throw DimensionMismatch("is_private: algebra sides do not match the channel");
    const VonNeumannAlgebra c_commutant = c.commutant();
    double dev = 0.0;
    for (const Matrix& a : domain.basis())
        dev = std::max(dev, c_commutant.contains(e.heisenberg(a), tol).deviation);
    return {dev <= tol, dev};
}

CheckResult is_correctable(const Matrix& v, const VonNeumannAlgebra& a,
                           const VonNeumannAlgebra& b, double tol) {
    return is_private(channel_from_isometry(v), a.commutant(), b, tol);
}

void EncodingInstance::validate(double tol) const {
    if (V.rows() != k_dim || V.cols() != h_dim) throw DimensionMismatch("instance: V shape");
    if (A.dim() != k_dim || B.dim() != h_dim) throw DimensionMismatch("instance: algebra dims");
    if (omega.size() != h_dim) throw DimensionMismatch("instance: omega dim");
    const CheckResult iso = isometry_check(V, tol);
    if (!iso.ok) throw NotIsometry("instance V, deviation " + std::to_string(iso.deviation));
    if (std::abs(omega.norm() - 1.0) > tol) throw NotAState("omega not normalized");
    if (!B.is_cyclic(omega) || !B.is_separating(omega))
        throw NotSeparating("omega is not cyclic and separating for B");
    const Vector v_omega = V * omega;
    if (!A.is_cyclic(v_omega) || !A.is_separating(v_omega))
        throw NotSeparating("V omega is not cyclic and separating for A");
}

namespace {

Matrix pinv_solve(const Matrix& gram, const Vector& rhs) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const RealVector ev = eig.eigenvalues();
    const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    const double cutoff = std::max(top, 1.0) * 1e-12 * static_cast<double>(gram.rows());
    Vector y = eig.eigenvectors().adjoint() * rhs;
    for (Index i = 0; i < ev.size(); ++i) y(i) = ev(i) > cutoff ? y(i) / ev(i) : Complex(0, 0);
    return eig.eigenvectors() * y;
}

} // namespace

Matrix RecoveryHomomorphism::apply(const VonNeumannAlgebra& b_algebra, const Matrix& x) const {
    const Matrix proj = b_algebra.project(x);
    Matrix out = Matrix::Zero(images.front().rows(), images.front().cols());
    for (std::size_t i = 0; i < images.size(); ++i) {
        const Complex c = vectorize(b_algebra.basis()[i]).adjoint() * vectorize(proj);
        out += c * images[i];
    }
    return out;
}

RecoveryHomomorphism recovery_homomorphism(const EncodingInstance& instance, double tol) {
    const VonNeumannAlgebra& a = instance.A;
    const VonNeumannAlgebra& b = instance.B;
    const VonNeumannAlgebra a_prime = a.commutant();
    const Index r_a = a.algebra_dim();

    // The defining relation R(b) a' V xi = a' V b xi over the spanning
    // family A' V H is a least-squares problem per basis element, with the
    // Gram matrix shared across elements:
    //   sum_beta || R(b) a'_beta V - a'_beta V b ||_F^2 -> min over span(A).
    std::vector<Matrix> lhs; // A_alpha a'_beta V, indexed alpha-major
    lhs.reserve(static_cast<std::size_t>(r_a) * a_prime.basis().size());
    std::vector<Matrix> frames; // a'_beta V
    for (const Matrix& ap : a_prime.basis()) frames.push_back(ap * instance.V);
    for (const Matrix& a_basis : a.basis())
        for (const Matrix& frame : frames) lhs.push_back(a_basis * frame);

    const Index n_frames = static_cast<Index>(frames.size());
    Matrix gram(r_a, r_a);
    for (Index al = 0; al < r_a; ++al)
        for (Index be = 0; be <= al; ++be) {
            Complex g(0, 0);
            for (Index f = 0; f < n_frames; ++f)
                g += (lhs[al * n_frames + f].adjoint() * lhs[be * n_frames + f]).trace();
            gram(al, be) = std::conj(g);
            gram(be, al) = g;
        }

    RecoveryHomomorphism recovery;
    double worst_residual = 0.0;
    for (const Matrix& b_basis : b.basis()) {
        Vector rhs(r_a);
        double target_norm2 = 0.0;
        std::vector<Matrix> targets;
        targets.reserve(n_frames);
        for (Index f = 0; f < n_frames; ++f) {
            targets.push_back(frames[f] * b_basis);
            target_norm2 += targets.back().squaredNorm();
        }
        for (Index al = 0; al < r_a; ++al) {
            Complex y(0, 0);
            for (Index f = 0; f < n_frames; ++f)
                y += (lhs[al * n_frames + f].adjoint() * targets[f]).trace();
            rhs(al) = y;
        }
        const Matrix coeffs = pinv_solve(gram, rhs);
        Matrix image = Matrix::Zero(a.dim(), a.dim());
        for (Index al = 0; al < r_a; ++al) image += coeffs(al, 0) * a.basis()[al];

        double residual2 = 0.0;
        for (Index f = 0; f < n_frames; ++f)
            residual2 += (image * frames[f] - targets[f]).squaredNorm();
        worst_residual =
            std::max(worst_residual, std::sqrt(residual2 / std::max(target_norm2, 1e-30)));
        recovery.images.push_back(std::move(image));
    }
    recovery.certificate.max_residual = worst_residual;

    // Certificate: unitality, multiplicativity, *-preservation, and the
    // correctability equation E(R(b)) = b.
    const Matrix r_unit = recovery.apply(b, Matrix::Identity(b.dim(), b.dim()));
    recovery.certificate.unitality = (r_unit - Matrix::Identity(a.dim(), a.dim())).norm();
    for (std::size_t i = 0; i < recovery.images.size(); ++i) {
        const Matrix& bi = b.basis()[i];
        recovery.certificate.star_preservation =
            std::max(recovery.certificate.star_preservation,
                     (recovery.apply(b, bi.adjoint()) - Matrix(recovery.images[i].adjoint())).norm());
        recovery.certificate.correctability =
            std::max(recovery.certificate.correctability,
                     (instance.V.adjoint() * recovery.images[i] * instance.V - bi).norm());
        for (std::size_t j = 0; j < recovery.images.size(); ++j) {
            const Matrix prod = recovery.apply(b, bi * b.basis()[j]);
            recovery.certificate.multiplicativity =
                std::max(recovery.certificate.multiplicativity,
                         (prod - recovery.images[i] * recovery.images[j]).norm());
        }
    }

    if (worst_residual > tol)
        throw RecoveryInconsistent("least-squares residual " + std::to_string(worst_residual));
    return recovery;
}

Channel petz_map(const Channel& e, const AlgebraState& phi) {
    if (!phi.faithful) throw NotFaithful("Petz map needs a faithful reference state");
    if (phi.algebra->dim() != e.in_dim)
        throw DimensionMismatch("petz_map: reference lives on the channel input");

    const Matrix h_sqrt = positive_power(phi.density, Complex(0.5, 0.0));
    const Matrix sigma = e.schrodinger(phi.density);
    const SpectralDecomposition sigma_eig = hermitian_eig((sigma + sigma.adjoint()) / 2.0);
    const Matrix sigma_inv_sqrt = positive_power(sigma_eig, Complex(-0.5, 0.0));

    // Closed-form Kraus h^{1/2} K* sigma^{-1/2}; the channel is completed on
    // ker(sigma) by routing the missing mass back to the reference state so
    // the result is exactly trace preserving.
    Channel raw{e.out_dim, e.in_dim, {}};
    for (const Matrix& k : e.kraus) raw.kraus.push_back(h_sqrt * k.adjoint() * sigma_inv_sqrt);
    if (sigma_eig.support_rank < e.out_dim) {
        const SpectralDecomposition h_eig = hermitian_eig(phi.density);
        for (Index l = 0; l < sigma_eig.dim(); ++l) {
            if (sigma_eig.eigenvalues(l) > sigma_eig.cutoff) continue;
            for (Index m = 0; m < h_eig.dim(); ++m) {
                if (h_eig.eigenvalues(m) <= h_eig.cutoff) continue;
                raw.kraus.push_back(std::sqrt(h_eig.eigenvalues(m)) *
                                    h_eig.eigenvectors.col(m) *
                                    sigma_eig.eigenvectors.col(l).adjoint());
            }
        }
    }
    return channel_from_choi(choi_matrix(raw), raw.in_dim, raw.out_dim);
}

StinespringDilation stinespring_minimal(const Channel& e, const VonNeumannAlgebra& domain) {
    if (domain.dim() != e.out_dim)
        throw DimensionMismatch("stinespring: domain must live on the out side");
    const Index m = static_cast<Index>(e.kraus.size());
    const Index big = e.out_dim * m;

    // Canonical dilation: pi0(a) = a (x) 1_m, W0 xi = sum_i K_i xi (x) e_i.
    Matrix w0(big, e.in_dim);
    for (Index i = 0; i < m; ++i)
        for (Index a = 0; a < e.out_dim; ++a) w0.row(a * m + i) = e.kraus[i].row(a);

    // Minimal subspace: orthonormalize pi0(domain) W0 H.
    const Index r = domain.algebra_dim();
    Matrix span(big, r * e.in_dim);
    for (Index al = 0; al < r; ++al) {
        const Matrix lifted = kron(domain.basis()[al], Matrix::Identity(m, m));
        span.middleCols(al * e.in_dim, e.in_dim) = lifted * w0;
    }
    Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
    const RealVector sv = svd.singularValues();
    const double threshold = 1e-10 * std::max(sv.size() ? sv(0) : 0.0, 1.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    const Matrix frame = svd.matrixU().leftCols(rank);

    StinespringDilation out;
    out.dilation_dim = rank;
    out.W = frame.adjoint() * w0;
    for (Index al = 0; al < r; ++al) {
        const Matrix lifted = kron(domain.basis()[al], Matrix::Identity(m, m));
        out.rep.push_back(frame.adjoint() * lifted * frame);
    }

    for (Index al = 0; al < r; ++al) {
        const Matrix direct = e.heisenberg(domain.basis()[al]);
        const Matrix dilated = out.W.adjoint() * out.rep[al] * out.W;
        out.rep_defect = std::max(out.rep_defect, (direct - dilated).norm());
        for (Index be = 0; be < r; ++be) {
            const Matrix prod = domain.project(domain.basis()[al] * domain.basis()[be]);
            Matrix rep_prod = Matrix::Zero(rank, rank);
            for (Index ga = 0; ga < r; ++ga) {
                const Complex c = vectorize(domain.basis()[ga]).adjoint() * vectorize(prod);
                rep_prod += c * out.rep[ga];
            }
            out.hom_defect = std::max(out.hom_defect,
                                      (rep_prod - out.rep[al] * out.rep[be]).norm());
        }
    }

    // Minimality: pi(domain) W H spans the dilation space by construction;
    // re-verify the rank numerically.
    Matrix regen(rank, r * e.in_dim);
    for (Index al = 0; al < r; ++al)
        regen.middleCols(al * e.in_dim, e.in_dim) = out.rep[al] * out.W;
    Eigen::JacobiSVD<Matrix> check(regen);
    Index regen_rank = 0;
    const RealVector csv = check.singularValues();
    for (Index i = 0; i < csv.size(); ++i)
        if (csv(i) > 1e-10 * std::max(csv(0), 1.0)) ++regen_rank;
    out.minimal = regen_rank == rank;
    return out;
}

} // namespace modqec
