#include <gtest/gtest.h>

#include <array>
#include <complex>

#include "cqmac/matrix.hpp"
#include "cqmac/random_instances.hpp"

using namespace cqmac;

namespace {

// Independent index-formula oracle for the Kronecker product.
ComplexMatrix tensor_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            c(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    return c;
}

} // namespace

TEST(Tensor, IdentityTimesIdentity) {
    const auto r = tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
    EXPECT_NEAR(max_abs_diff(r, ComplexMatrix::identity(4)), 0.0, 1e-15);
}

TEST(Tensor, BasisProjectors) {
    const std::array<double, 2> d1{1.0, 0.0}, d2{0.0, 1.0};
    const auto r = tensor(ComplexMatrix::diagonal(d1), ComplexMatrix::diagonal(d2));
    const std::array<double, 4> expect{0.0, 1.0, 0.0, 0.0};
    EXPECT_NEAR(max_abs_diff(r, ComplexMatrix::diagonal(expect)), 0.0, 1e-15);
}

TEST(Tensor, RandomAgainstIndexOracle) {
    SplitMix64 rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_matrix(2, rng);
        const auto b = random_matrix(2, rng);
        EXPECT_LT(max_abs_diff(tensor(a, b), tensor_oracle(a, b)), 1e-14);
    }
}

TEST(Tensor, AssociativeAndMultiplicativeTrace) {
    SplitMix64 rng(12);
    for (int t = 0; t < 10; ++t) {
        const auto a = random_matrix(2, rng);
        const auto b = random_matrix(3, rng);
        const auto c = random_matrix(2, rng);
        EXPECT_LT(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))), 1e-13);
        const auto ab = tensor(a, b);
        EXPECT_LT(std::abs(trace(ab) - trace(a) * trace(b)), 1e-10);
    }
}

TEST(PartialTrace, ProductStateRecoversFactor) {
    SplitMix64 rng(13);
    const auto rho = random_density(2, rng);
    const auto sigma = random_density(3, rng);
    const auto joint = tensor(rho.matrix(), sigma.matrix());
    const std::array<std::size_t, 2> dims{2, 3};
    const std::array<std::size_t, 1> keep0{0}, keep1{1};
    EXPECT_LT(max_abs_diff(partial_trace(joint, dims, keep0), rho.matrix()), 1e-12);
    EXPECT_LT(max_abs_diff(partial_trace(joint, dims, keep1), sigma.matrix()), 1e-12);
}

TEST(PartialTrace, MaximallyMixed) {
    const auto mixed4 = DensityOperator::maximally_mixed(4);
    const std::array<std::size_t, 2> dims{2, 2};
    const std::array<std::size_t, 1> keep{1};
    const auto r = partial_trace(mixed4.matrix(), dims, keep);
    EXPECT_LT(max_abs_diff(r, DensityOperator::maximally_mixed(2).matrix()), 1e-14);
}

TEST(PartialTrace, RandomTwoQubitAgainstSummationOracle) {
    SplitMix64 rng(14);
    for (int t = 0; t < 10; ++t) {
        const auto rho = random_density(4, rng);
        const std::array<std::size_t, 2> dims{2, 2};
        const std::array<std::size_t, 1> keep{0};
        const auto r = partial_trace(rho.matrix(), dims, keep);
        // oracle: R[i][j] = sum_k rho[(i,k),(j,k)]
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Complex expect = 0.0;
                for (std::size_t k = 0; k < 2; ++k) expect += rho.matrix()(2 * i + k, 2 * j + k);
                EXPECT_LT(std::abs(r(i, j) - expect), 1e-14);
            }
        EXPECT_NEAR(trace(r).real(), 1.0, 1e-12);
    }
}

TEST(PartialTrace, ThreeFactorMiddle) {
    SplitMix64 rng(15);
    const auto a = random_density(2, rng);
    const auto b = random_density(2, rng);
    const auto c = random_density(3, rng);
    const auto joint = tensor(tensor(a.matrix(), b.matrix()), c.matrix());
    const std::array<std::size_t, 3> dims{2, 2, 3};
    const std::array<std::size_t, 2> keep{0, 2};
    const auto r = partial_trace(joint, dims, keep);
    EXPECT_LT(max_abs_diff(r, tensor(a.matrix(), c.matrix())), 1e-12);
}

TEST(PartialTrace, RejectsBadArguments) {
    const auto rho = DensityOperator::maximally_mixed(4);
    const std::array<std::size_t, 2> bad_dims{2, 3};
    const std::array<std::size_t, 1> keep{0};
    EXPECT_THROW(partial_trace(rho.matrix(), bad_dims, keep), validation_error);
    const std::array<std::size_t, 2> dims{2, 2};
    const std::array<std::size_t, 0> empty{};
    EXPECT_THROW(partial_trace(rho.matrix(), dims, empty), validation_error);
}

TEST(Matrix, ProductAndDagger) {
    SplitMix64 rng(16);
    const auto a = random_matrix(3, rng);
    const auto b = random_matrix(3, rng);
    EXPECT_LT(max_abs_diff(dagger(a * b), dagger(b) * dagger(a)), 1e-12);
    EXPECT_LT(std::abs(trace_of_product(a, b) - trace(a * b)), 1e-12);
}

TEST(Matrix, DimensionCapEnforced) {
    EXPECT_THROW(enforce_dimension_cap(tolerances().dimension_cap + 1, "test"), budget_error);
    EXPECT_NO_THROW(enforce_dimension_cap(tolerances().dimension_cap, "test"));
}
