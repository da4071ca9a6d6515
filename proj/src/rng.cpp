#include "modqec/rng.hpp"

#include <cmath>

namespace modqec {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
}

std::uint64_t Rng::integer(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    return lo + engine_() % span;
}

Matrix Rng::gaussian(Index rows, Index cols) {
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            g(i, j) = complex_normal();
    return g;
}

Matrix Rng::haar_isometry(Index rows, Index cols) {
    Matrix g = gaussian(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    // Fix the phase ambiguity Q -> Q D so the distribution is Haar and the
    // output is a deterministic function of the Gaussian draw.
    for (Index j = 0; j < cols; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        if (a > 0.0) q.col(j) *= d / a;
    }
    return q;
}

Vector Rng::haar_vector(Index d) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = complex_normal();
    v.normalize();
    return v;
}

Vector Rng::full_schmidt_vector(Index n) {
    // Schmidt weights 1/2n + uniform mass, so every coefficient is >= 1/(2n).
    RealVector w(n);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        w(i) = 0.5 / static_cast<double>(n) + uniform();
        total += w(i);
    }
    w /= total;
    // Re-normalize the floor after scaling: weights sum to one and each stays
    // strictly positive because the floor term survives the division.
    const Matrix u = haar_isometry(n, n);
    const Matrix v = haar_isometry(n, n);
    Vector psi = Vector::Zero(n * n);
    for (Index i = 0; i < n; ++i) {
        const double c = std::sqrt(w(i));
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b)
                psi(a * n + b) += c * u(a, i) * v(b, i);
    }
    psi.normalize();
    return psi;
}

} // namespace modqec
