#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modqec/algebra.hpp"
#include "modqec/errors.hpp"

#include <algorithm>
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

/// Partial trace over the second leg of C^n (x) C^m (test oracle).
Matrix partial_trace_second(const Matrix& rho, Index n, Index m) {
    Matrix out = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index mu = 0; mu < m; ++mu) out(i, j) += rho(i * m + mu, j * m + mu);
    return out;
}

/// Random block-balanced algebra (a Haar-conjugated direct sum), used to
/// exercise discovery and commutant paths.
VonNeumannAlgebra random_algebra(Rng& rng, const std::vector<std::pair<Index, Index>>& shape) {
    Index d = 0;
    for (const auto& [n, m] : shape) d += n * m;
    const Matrix u = rng.haar_isometry(d, d);
    std::vector<AlgebraBlock> blocks;
    Index offset = 0;
    for (const auto& [n, m] : shape) {
        Matrix embed = Matrix::Zero(d, n * m);
        embed.middleRows(offset, n * m) = Matrix::Identity(n * m, n * m);
        blocks.push_back({n, m, u * embed});
        offset += n * m;
    }
    return VonNeumannAlgebra::from_block_data(std::move(blocks), d);
}

std::vector<std::pair<Index, Index>> block_shape(const VonNeumannAlgebra& alg) {
    std::vector<std::pair<Index, Index>> shape;
    for (const AlgebraBlock& b : alg.blocks()) shape.emplace_back(b.factor_dim, b.multiplicity);
    std::sort(shape.begin(), shape.end());
    return shape;
}

} // namespace

TEST_CASE("from_generators: trivial, full, and diagonal bicommutants") {
    // No generators: C 1 with blocks [(1, 2)].
    const auto trivial = VonNeumannAlgebra::from_generators({}, 2);
    CHECK(trivial.algebra_dim() == 1);
    CHECK(block_shape(trivial) == std::vector<std::pair<Index, Index>>{{1, 2}});

    // Pauli X, Z: the full 2x2 algebra, blocks [(2, 1)].
    const auto full = VonNeumannAlgebra::from_generators({pauli_x(), pauli_z()}, 2);
    CHECK(full.algebra_dim() == 4);
    CHECK(block_shape(full) == std::vector<std::pair<Index, Index>>{{2, 1}});

    // diag(1,1,2): bicommutant is C 1_2 (+) C 1_1, blocks [(1,2),(1,1)].
    Matrix g = Matrix::Zero(3, 3);
    g(0, 0) = 1;
    g(1, 1) = 1;
    g(2, 2) = 2;
    const auto diag = VonNeumannAlgebra::from_generators({g}, 3);
    CHECK(diag.algebra_dim() == 2);
    CHECK(block_shape(diag) == std::vector<std::pair<Index, Index>>{{1, 1}, {1, 2}});
}

TEST_CASE("commutant closed forms") {
    const auto trivial = VonNeumannAlgebra::trivial(4);
    CHECK(trivial.commutant().span_distance(VonNeumannAlgebra::full(4)) < 1e-10);
    CHECK(VonNeumannAlgebra::full(4).commutant().span_distance(trivial) < 1e-10);

    // M_2 (x) 1 on C^2 (x) C^3 has commutant 1 (x) M_3; cross-check the
    // block-exchange route against the brute-force nullspace route.
    const auto factor = VonNeumannAlgebra::tensor_factor(2, 3);
    const auto comm = factor.commutant();
    CHECK(comm.algebra_dim() == 9);
    const auto brute = commutant_basis(factor.basis(), 6, 1e-9);
    const auto brute_alg = VonNeumannAlgebra::from_orthonormal_basis(brute, 6);
    CHECK(comm.span_distance(brute_alg) < 1e-9);
    CHECK(block_shape(comm) == std::vector<std::pair<Index, Index>>{{3, 2}});
}

TEST_CASE("center and membership") {
    const auto full = VonNeumannAlgebra::full(3);
    CHECK(full.center().span_distance(VonNeumannAlgebra::trivial(3)) < 1e-10);

    const auto factor = VonNeumannAlgebra::tensor_factor(2, 2);
    const auto in = factor.contains(kron(pauli_x(), Matrix::Identity(2, 2)), 1e-9);
    CHECK(in.ok);
    CHECK(in.deviation < 1e-12);

    // 1 (x) X is HS-orthogonal to M_2 (x) 1, so the residual is its norm.
    const Matrix out_of_span = kron(Matrix::Identity(2, 2), pauli_x());
    const auto out = factor.contains(out_of_span, 1e-9);
    CHECK(!out.ok);
    CHECK(out.deviation == doctest::Approx(out_of_span.norm()).epsilon(1e-10));
}

TEST_CASE("trace_density examples") {
    Rng rng(21);
    // Full algebra: the density is the functional itself.
    const auto full = VonNeumannAlgebra::full(3);
    Matrix rho = rng.gaussian(3, 3);
    rho = rho * rho.adjoint();
    rho /= rho.trace();
    const AlgebraState full_state = full.trace_density(rho);
    CHECK((full_state.density - rho).norm() < 1e-10);

    // C 1 on C^2 with F = |0><0|: h = identity / 2.
    const auto trivial = VonNeumannAlgebra::trivial(2);
    Matrix f = Matrix::Zero(2, 2);
    f(0, 0) = 1;
    const AlgebraState scalar_state = trivial.trace_density(f);
    CHECK((scalar_state.density - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);

    // M_2 (x) 1 with the maximally entangled functional: h = rho_A (x) 1/2.
    const auto factor = VonNeumannAlgebra::tensor_factor(2, 2);
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const AlgebraState bell_state = factor.trace_density(bell * bell.adjoint());
    CHECK((bell_state.density - Matrix::Identity(4, 4) / 4.0).norm() < 1e-12);
    CHECK(bell_state.faithful);
}

TEST_CASE("vector_state matches the partial-trace oracle") {
    const auto factor = VonNeumannAlgebra::tensor_factor(2, 2);

    Vector skew = Vector::Zero(4);
    skew(0) = std::sqrt(1.0 / 3.0);
    skew(3) = std::sqrt(2.0 / 3.0);
    const AlgebraState state = factor.vector_state(skew);

    const Matrix rho_a = partial_trace_second(Matrix(skew * skew.adjoint()), 2, 2);
    const Matrix expected = kron(rho_a, Matrix::Identity(2, 2) / 2.0);
    CHECK((state.density - expected).norm() < 1e-12);
    CHECK(state.density(0, 0).real() == doctest::Approx(1.0 / 6.0));
    CHECK(state.density(3, 3).real() == doctest::Approx(1.0 / 3.0));

    // Tr(h b) = <psi, b psi> on every basis element.
    for (const Matrix& b : factor.basis()) {
        const Complex lhs = (state.density * b).trace();
        const Complex rhs = skew.adjoint() * b * skew;
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("cyclic and separating vectors") {
    const auto full = VonNeumannAlgebra::full(3);
    Vector e0 = Vector::Zero(3);
    e0(0) = 1;
    CHECK(full.is_cyclic(e0));
    CHECK(!full.is_separating(e0));

    const auto factor = VonNeumannAlgebra::tensor_factor(2, 2);
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    CHECK(factor.is_cyclic(bell));
    CHECK(factor.is_separating(bell));

    Vector product = Vector::Zero(4);
    product(0) = 1;
    CHECK(!factor.is_cyclic(product));
    CHECK(!factor.is_separating(product));
}

TEST_CASE("support projections") {
    const auto factor = VonNeumannAlgebra::tensor_factor(2, 2);
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    CHECK((support_projection(factor.vector_state(bell)) - Matrix::Identity(4, 4)).norm() <
          1e-10);

    Vector product = Vector::Zero(4);
    product(0) = 1;
    const Matrix p = support_projection(factor.vector_state(product));
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(1, 1) = 1; // |0><0| (x) 1
    CHECK((p - expected).norm() < 1e-10);

    const AlgebraState state = factor.vector_state(product);
    CHECK(factor.contains(p, 1e-9).ok);
    CHECK(projection_check(p, 1e-9).ok);
    CHECK(std::abs((state.density * p).trace() - Complex(1, 0)) < 1e-10);
}

TEST_CASE("double commutant and block exchange on random algebras") {
    Rng rng(22);
    const std::vector<std::vector<std::pair<Index, Index>>> shapes = {
        {{2, 2}},          {{1, 2}, {2, 1}}, {{2, 1}, {1, 1}, {1, 2}},
        {{3, 2}, {2, 3}},  {{1, 4}},         {{4, 1}},
        {{2, 3}, {3, 1}},  {{2, 4}, {4, 2}},
    };
    for (const auto& shape : shapes) {
        const auto alg = random_algebra(rng, shape);

        // Rediscover the blocks from the bare basis.
        const auto rediscovered = VonNeumannAlgebra::from_orthonormal_basis(alg.basis(), alg.dim());
        CHECK(block_shape(rediscovered) == block_shape(alg));
        CHECK(rediscovered.span_distance(alg) < 1e-9);

        // M'' = M, and the commutant swaps multiplicities.
        const auto comm = alg.commutant();
        CHECK(comm.commutant().span_distance(alg) < 1e-9);
        auto swapped = block_shape(comm);
        std::vector<std::pair<Index, Index>> expected;
        for (const auto& [n, m] : block_shape(alg)) expected.emplace_back(m, n);
        std::sort(expected.begin(), expected.end());
        CHECK(swapped == expected);

        // Cross-check against the nullspace commutant.
        const auto brute = VonNeumannAlgebra::from_orthonormal_basis(
            commutant_basis(alg.basis(), alg.dim(), 1e-9), alg.dim());
        CHECK(comm.span_distance(brute) < 1e-8);

        // Elements of M and M' commute.
        Rng inner(23);
        const Matrix x = alg.random_element(inner);
        const Matrix y = comm.random_element(inner);
        CHECK((x * y - y * x).norm() < 1e-9 * std::max(1.0, x.norm() * y.norm()));
    }
}

TEST_CASE("trace_density rejects non-states") {
    const auto full = VonNeumannAlgebra::full(2);
    CHECK_THROWS_AS(full.trace_density(pauli_z()), NotAState); // trace zero
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 2;
    neg(1, 1) = -1;
    CHECK_THROWS_AS(full.trace_density(neg), NotAState); // not positive
}
