#include "modqec/numerics.hpp"

#include "modqec/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace modqec {

double frobenius(const Matrix& a) { return a.norm(); }

CheckResult hermitian_check(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return {false, std::numeric_limits<double>::infinity()};
    const double dev = (a - a.adjoint()).norm();
    return {dev <= tol * std::max(a.norm(), 1.0), dev};
}

CheckResult positive_check(const Matrix& a, double tol) {
    const CheckResult herm = hermitian_check(a, tol);
    if (!herm.ok) return {false, herm.deviation};
    Eigen::SelfAdjointEigenSolver<Matrix> solver((a + a.adjoint()) / 2.0);
    const double lo = solver.eigenvalues().minCoeff();
    const double scale = std::max(solver.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    const double dev = lo < 0.0 ? -lo : 0.0;
    return {dev <= tol * scale, dev};
}

CheckResult unitary_check(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return {false, std::numeric_limits<double>::infinity()};
    const double dev = (a.adjoint() * a - Matrix::Identity(a.cols(), a.cols())).norm();
    return {dev <= tol * std::sqrt(static_cast<double>(a.cols())), dev};
}

CheckResult isometry_check(const Matrix& v, double tol) {
    const double dev = (v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).norm();
    return {dev <= tol * std::max(1.0, std::sqrt(static_cast<double>(v.cols()))), dev};
}

CheckResult projection_check(const Matrix& p, double tol) {
    const CheckResult herm = hermitian_check(p, tol);
    const double dev = std::max(herm.deviation, (p * p - p).norm());
    return {dev <= tol * std::max(p.norm(), 1.0), dev};
}

double default_support_cutoff(const RealVector& eigenvalues, Index dim) {
    if (eigenvalues.size() == 0) return 0.0;
    const double top = eigenvalues.cwiseAbs().maxCoeff();
    return static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * top;
}

Matrix SpectralDecomposition::apply_on_support(const std::function<Complex(double)>& f) const {
    const Index d = dim();
    Vector fvals = Vector::Zero(d);
    for (Index i = 0; i < d; ++i)
        if (eigenvalues(i) > cutoff) fvals(i) = f(eigenvalues(i));
    return eigenvectors * fvals.asDiagonal() * eigenvectors.adjoint();
}

Matrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix SpectralDecomposition::support_projection() const {
    return apply_on_support([](double) { return Complex(1.0, 0.0); });
}

SpectralDecomposition hermitian_eig(const Matrix& a, double cutoff_override) {
    const CheckResult herm = hermitian_check(a, 1e-10);
    if (!herm.ok)
        throw NotHermitian("deviation " + std::to_string(herm.deviation));

    Eigen::SelfAdjointEigenSolver<Matrix> solver((a + a.adjoint()) / 2.0);
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();

    // Phase convention: first significant component real positive.
    const Index d = out.dim();
    for (Index j = 0; j < d; ++j) {
        const double colmax = out.eigenvectors.col(j).cwiseAbs().maxCoeff();
        for (Index i = 0; i < d; ++i) {
            const Complex c = out.eigenvectors(i, j);
            if (std::abs(c) > 1e-8 * colmax) {
                out.eigenvectors.col(j) *= std::conj(c) / std::abs(c);
                break;
            }
        }
    }

    out.cutoff = cutoff_override >= 0.0 ? cutoff_override
                                        : default_support_cutoff(out.eigenvalues, d);
    out.support_rank = 0;
    for (Index i = 0; i < d; ++i)
        if (out.eigenvalues(i) > out.cutoff) ++out.support_rank;
    return out;
}

namespace {

SpectralDecomposition positive_eig(const Matrix& a) {
    const CheckResult pos = positive_check(a, 1e-9);
    if (!pos.ok)
        throw NotPositive("most negative eigenvalue deviation " + std::to_string(pos.deviation));
    return hermitian_eig(a);
}

} // namespace

Matrix positive_power(const SpectralDecomposition& eig, Complex z) {
    return eig.apply_on_support([z](double lam) { return std::exp(z * std::log(lam)); });
}

Matrix positive_power(const Matrix& a, Complex z) {
    return positive_power(positive_eig(a), z);
}

Matrix matrix_log_on_support(const SpectralDecomposition& eig) {
    return eig.apply_on_support([](double lam) { return Complex(std::log(lam), 0.0); });
}

Matrix matrix_log_on_support(const Matrix& a) {
    return matrix_log_on_support(positive_eig(a));
}

Vector vectorize(const Matrix& x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvectorize(const Vector& v, Index rows, Index cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix commutator_map(const Matrix& g) {
    const Index d = g.rows();
    const Matrix id = Matrix::Identity(d, d);
    return kron(id, g) - kron(g.transpose(), id);
}

std::vector<Matrix> nullspace(const Matrix& stacked_map, Index dim, double tol) {
    if (stacked_map.cols() != dim * dim)
        throw DimensionMismatch("nullspace: map must act on d^2-vectors");
    // Full V: when the stack has fewer rows than d^2 the trailing columns of
    // V (beyond the listed singular values) are exact null directions.
    Eigen::JacobiSVD<Matrix> svd(stacked_map, Eigen::ComputeFullV);
    const RealVector sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = tol * std::max(sigma_max, 1.0);

    std::vector<Matrix> basis;
    for (Index i = 0; i < dim * dim; ++i) {
        const double sigma = i < sv.size() ? sv(i) : 0.0;
        if (sigma <= threshold)
            basis.push_back(unvectorize(svd.matrixV().col(i), dim, dim));
    }
    return basis;
}

std::vector<Matrix> commutant_basis(const std::vector<Matrix>& generators, Index dim, double tol) {
    // Gram form: Q = sum_g L_g* L_g over normalized g and g*.  The nullspace
    // of the stack is the eigenspace of Q below threshold^2.
    Matrix q = Matrix::Zero(dim * dim, dim * dim);
    for (const Matrix& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw DimensionMismatch("commutant_basis: generator size");
        const double n = g.norm();
        if (n == 0.0) continue;
        for (const Matrix& side : {Matrix(g / n), Matrix(g.adjoint() / n)}) {
            const Matrix l = commutator_map(side);
            q += l.adjoint() * l;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(q);
    const RealVector ev = solver.eigenvalues();
    // The Gram form squares singular values, so the working threshold must
    // sit above the eigenvalue noise floor eps * ||Q||.
    const double scale = std::max(ev.size() ? ev(ev.size() - 1) : 0.0, 1.0);
    const double threshold = std::max(tol * tol, 1e-13) * scale;

    std::vector<Matrix> basis;
    for (Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= threshold)
            basis.push_back(unvectorize(solver.eigenvectors().col(i), dim, dim));
    return basis;
}

} // namespace modqec
