#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cqmac/matrix.hpp"

namespace cqmac {

struct EigResult {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // columns; H = V diag(values) V^dagger
};

namespace detail {

inline double off_diagonal_frobenius(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

// One cyclic sweep of complex Jacobi rotations. Each rotation zeroes a(p,q)
// by first absorbing its phase into column q, then applying the classical
// symmetric Schur rotation (Golub & Van Loan 8.4).
inline void jacobi_sweep(ComplexMatrix& a, ComplexMatrix& v) {
    const std::size_t n = a.rows();
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const Complex apq = a(p, q);
            const double g = std::abs(apq);
            if (g == 0.0) continue;
            const Complex u = std::conj(apq) / g; // phase: a(p,q)*u is real = g
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();
            const double tau = (aqq - app) / (2.0 * g);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            // Combined unitary in the (p,q) plane:
            //   col p <- c*col p - conj(? ) ... expressed directly below.
            //   G(p,p)=c, G(p,q)=s, G(q,p)=-u*s, G(q,q)=u*c   (A' = G^dagger A G)
            const Complex gqp = -u * s;
            const Complex gqq = u * static_cast<double>(c);

            // right multiply: columns p and q of A and V
            for (std::size_t i = 0; i < n; ++i) {
                const Complex aip = a(i, p), aiq = a(i, q);
                a(i, p) = aip * c + aiq * gqp;
                a(i, q) = aip * s + aiq * gqq;
                const Complex vip = v(i, p), viq = v(i, q);
                v(i, p) = vip * c + viq * gqp;
                v(i, q) = vip * s + viq * gqq;
            }
            // left multiply by G^dagger: rows p and q of A
            for (std::size_t j = 0; j < n; ++j) {
                const Complex apj = a(p, j), aqj = a(q, j);
                a(p, j) = apj * c + aqj * std::conj(gqp);
                a(q, j) = apj * s + aqj * std::conj(gqq);
            }
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            a(p, p) = Complex(a(p, p).real(), 0.0);
            a(q, q) = Complex(a(q, q).real(), 0.0);
        }
    }
}

} // namespace detail

// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
// Converges when the off-diagonal Frobenius norm drops below the configured
// target (1e-12 by default). Throws on non-Hermitian input.
inline EigResult hermitian_eig(const ComplexMatrix& h) {
    if (!h.square()) throw validation_error("hermitian_eig: matrix not square");
    if (hermiticity_defect(h) > tolerances().hermitian)
        throw validation_error("hermitian_eig: matrix not Hermitian within tolerance");
    const std::size_t n = h.rows();

    // Work on the exact Hermitian part so rotations cannot drift.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double target = tolerances().jacobi_off;
    constexpr int max_sweeps = 100;
    int sweep = 0;
    while (detail::off_diagonal_frobenius(a) > target && sweep < max_sweeps) {
        detail::jacobi_sweep(a, v);
        ++sweep;
    }
    if (sweep == max_sweeps && detail::off_diagonal_frobenius(a) > 1e-9)
        throw numerical_error("hermitian_eig: Jacobi iteration did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigResult r;
    r.values.resize(n);
    r.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

// Eigenvalues only, ascending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
    return hermitian_eig(h).values;
}

} // namespace cqmac
