#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "cqmac/eig.hpp"
#include "cqmac/random_instances.hpp"

using namespace cqmac;

TEST(HermitianEig, Diagonal) {
    const std::array<double, 2> d{0.25, 0.75};
    const auto ev = hermitian_eigenvalues(ComplexMatrix::diagonal(d));
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0], 0.25, 1e-12);
    EXPECT_NEAR(ev[1], 0.75, 1e-12);
}

TEST(HermitianEig, Identity) {
    const auto ev = hermitian_eigenvalues(ComplexMatrix::identity(5));
    for (double v : ev) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(HermitianEig, HalfHalfMatrix) {
    // characteristic polynomial oracle: det([[0.5-l, 0.5],[0.5, 0.5-l]]) =
    // l^2 - l = 0 with roots 0 and 1
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.5;
    m(0, 1) = 0.5;
    m(1, 0) = 0.5;
    m(1, 1) = 0.5;
    const double tr = 1.0, det = 0.5 * 0.5 - 0.5 * 0.5;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    const double lo = (tr - disc) / 2.0, hi = (tr + disc) / 2.0;
    const auto ev = hermitian_eigenvalues(m);
    EXPECT_NEAR(ev[0], lo, 1e-10);
    EXPECT_NEAR(ev[1], hi, 1e-10);
}

TEST(HermitianEig, RandomReconstruction) {
    SplitMix64 rng(21);
    for (std::size_t dim : {2u, 3u, 5u, 8u, 16u, 32u}) {
        const auto h = random_hermitian(dim, rng);
        const auto r = hermitian_eig(h);
        // H = V diag V^dagger
        ComplexMatrix rebuilt(dim, dim);
        for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    rebuilt(i, j) += r.vectors(i, c) * std::conj(r.vectors(j, c)) * r.values[c];
        EXPECT_LT(max_abs_diff(h, rebuilt), 1e-8);
        // eigenvalues sorted ascending, sum equals trace
        double sum = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            sum += r.values[i];
            if (i > 0) {
                EXPECT_GE(r.values[i], r.values[i - 1]);
            }
        }
        EXPECT_NEAR(sum, trace(h).real(), 1e-9);
        // V unitary
        EXPECT_LT(max_abs_diff(dagger(r.vectors) * r.vectors, ComplexMatrix::identity(dim)), 1e-10);
    }
}

TEST(HermitianEig, TwoByTwoAgainstClosedForm) {
    SplitMix64 rng(22);
    for (int t = 0; t < 50; ++t) {
        const auto h = random_hermitian(2, rng);
        const double a = h(0, 0).real(), d = h(1, 1).real();
        const double b2 = std::norm(h(0, 1));
        const double mean = (a + d) / 2.0;
        const double disc = std::sqrt((a - d) * (a - d) / 4.0 + b2);
        const auto ev = hermitian_eigenvalues(h);
        EXPECT_NEAR(ev[0], mean - disc, 1e-10);
        EXPECT_NEAR(ev[1], mean + disc, 1e-10);
    }
}

TEST(HermitianEig, RejectsNonHermitian) {
    ComplexMatrix m(2, 2);
    m(0, 1) = Complex(1.0, 0.0);
    m(1, 0) = Complex(0.5, 0.0);
    EXPECT_THROW(hermitian_eigenvalues(m), validation_error);
}
