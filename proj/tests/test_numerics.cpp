#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modqec/errors.hpp"
#include "modqec/numerics.hpp"
#include "modqec/rng.hpp"

#include <cmath>

using namespace modqec;

namespace {

Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Matrix pauli_z() {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

Matrix random_positive(Rng& rng, Index d) {
    const Matrix g = rng.gaussian(d, d);
    return g * g.adjoint() / static_cast<double>(d);
}

} // namespace

TEST_CASE("hermitian_eig on closed-form inputs") {
    const auto d21 = hermitian_eig(diag2(2, 1));
    CHECK(d21.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(d21.eigenvalues(1) == doctest::Approx(2.0));

    const auto id3 = hermitian_eig(Matrix::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(id3.eigenvalues(i) == doctest::Approx(1.0));

    // Pauli X: eigenvalues -1, 1 with eigenvectors (|0> -+ |1>)/sqrt(2).
    const auto x = hermitian_eig(pauli_x());
    CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(x.eigenvalues(1) == doctest::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(x.eigenvectors(0, 0) - Complex(s, 0)) < 1e-12);
    CHECK(std::abs(x.eigenvectors(1, 0) - Complex(-s, 0)) < 1e-12);
    CHECK(std::abs(x.eigenvectors(0, 1) - Complex(s, 0)) < 1e-12);
    CHECK(std::abs(x.eigenvectors(1, 1) - Complex(s, 0)) < 1e-12);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);
}

TEST_CASE("hermitian_eig round trip") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.integer(0, 10));
        Matrix a = rng.gaussian(d, d);
        a = (a + Matrix(a.adjoint())) / 2.0;
        const auto eig = hermitian_eig(a);
        CHECK((eig.reconstruct() - a).norm() <= 1e-12 * a.norm());
        CHECK(unitary_check(eig.eigenvectors, 1e-12).ok);
    }
}

TEST_CASE("positive_power support conventions") {
    // A^{1/2} is zero on the kernel.
    const Matrix root = positive_power(diag2(4, 0), Complex(0.5, 0));
    CHECK(std::abs(root(0, 0) - Complex(2, 0)) < 1e-12);
    CHECK(std::abs(root(1, 1)) < 1e-12);

    // identity^{it} = identity for any t.
    for (double t : {-2.3, 0.0, 1.7}) {
        const Matrix u = positive_power(Matrix::Identity(2, 2), Complex(0, t));
        CHECK((u - Matrix::Identity(2, 2)).norm() < 1e-12);
    }

    // lambda^{it} = exp(it log lambda) entrywise on a diagonal.
    const Matrix phases = positive_power(diag2(1.0 / 3.0, 2.0 / 3.0), Complex(0, 1));
    CHECK(std::abs(phases(0, 0) - std::exp(Complex(0, std::log(1.0 / 3.0)))) < 1e-12);
    CHECK(std::abs(phases(1, 1) - std::exp(Complex(0, std::log(2.0 / 3.0)))) < 1e-12);

    CHECK_THROWS_AS(positive_power(diag2(1, -1), Complex(0.5, 0)), NotPositive);
}

TEST_CASE("positive_power group law and commutation") {
    Rng rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const Index d = 2 + static_cast<Index>(rng.integer(0, 5));
        const Matrix a = random_positive(rng, d);
        const double t = -3.0 + 6.0 * rng.uniform();
        const double s = -3.0 + 6.0 * rng.uniform();
        const Matrix ut = positive_power(a, Complex(0, t));
        const Matrix us = positive_power(a, Complex(0, s));
        const Matrix uts = positive_power(a, Complex(0, t + s));
        CHECK((ut * us - uts).norm() < 1e-10);
        CHECK((ut * a - a * ut).norm() < 1e-10 * a.norm());

        // Imaginary powers are partial isometries with supp(A) on both sides.
        const auto eig = hermitian_eig(a);
        CHECK((ut.adjoint() * ut - eig.support_projection()).norm() < 1e-10);
    }
}

TEST_CASE("matrix_log_on_support") {
    CHECK(matrix_log_on_support(Matrix::Identity(4, 4)).norm() < 1e-12);

    const Matrix le = matrix_log_on_support(diag2(std::exp(1.0), std::exp(2.0)));
    CHECK(std::abs(le(0, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(le(1, 1) - Complex(2, 0)) < 1e-12);

    const Matrix lhalf = matrix_log_on_support(diag2(0.5, 0.5));
    CHECK(std::abs(lhalf(0, 0) - Complex(std::log(0.5), 0)) < 1e-12);
}

TEST_CASE("nullspace of commutator maps") {
    // Commutator with the identity annihilates everything.
    const auto all = nullspace(commutator_map(Matrix::Identity(2, 2)), 2, 1e-9);
    CHECK(all.size() == 4);

    // Commutator with diag(1,2): the nullspace is the diagonal matrices.
    const auto diag = nullspace(commutator_map(diag2(1, 2)), 2, 1e-9);
    CHECK(diag.size() == 2);
    for (const Matrix& m : diag) {
        CHECK(std::abs(m(0, 1)) < 1e-10);
        CHECK(std::abs(m(1, 0)) < 1e-10);
    }

    // Pauli X and Z generate an irreducible pair: joint commutant is C 1.
    const auto scalars = commutant_basis({pauli_x(), pauli_z()}, 2, 1e-9);
    REQUIRE(scalars.size() == 1);
    const Matrix unit = Matrix::Identity(2, 2) / std::sqrt(2.0);
    CHECK(std::min((scalars[0] - unit).norm(), (scalars[0] + unit).norm()) < 1e-10);

    // Same answer through the raw nullspace of the stacked commutator maps.
    Matrix stacked(8, 4);
    stacked.topRows(4) = commutator_map(pauli_x());
    stacked.bottomRows(4) = commutator_map(pauli_z());
    const auto joint = nullspace(stacked, 2, 1e-9);
    REQUIRE(joint.size() == 1);
    CHECK(std::min((joint[0] - unit).norm(), (joint[0] + unit).norm()) < 1e-10);
}

TEST_CASE("nullspace output is adjoint-closed for *-compatible systems") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Index d = 3;
        const Matrix g = rng.gaussian(d, d);
        const auto basis = commutant_basis({g}, d, 1e-9);
        // Span closure under adjoints: project each adjoint back onto the span.
        for (const Matrix& b : basis) {
            Vector coeffs = Vector::Zero(static_cast<Index>(basis.size()));
            Matrix reconstructed = Matrix::Zero(d, d);
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const Complex c = vectorize(basis[j]).adjoint() * vectorize(b.adjoint());
                reconstructed += c * basis[j];
            }
            CHECK((reconstructed - Matrix(b.adjoint())).norm() < 1e-9);
        }
    }
}

TEST_CASE("kron matches the vec identity") {
    Rng rng(14);
    const Matrix a = rng.gaussian(3, 3);
    const Matrix b = rng.gaussian(3, 3);
    const Matrix x = rng.gaussian(3, 3);
    const Vector lhs = vectorize(a * x * b);
    const Vector rhs = kron(b.transpose(), a) * vectorize(x);
    CHECK((lhs - rhs).norm() < 1e-12);
}
