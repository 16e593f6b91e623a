#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cqmac/errors.hpp"
#include "cqmac/tolerances.hpp"

namespace cqmac {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Small fixed-arity linear algebra only;
// everything downstream stays below the global dimension cap.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw validation_error("entry count does not match matrix shape");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n, n); }

    // |i><j| in the computational basis of dimension n.
    static ComplexMatrix basis_op(std::size_t n, std::size_t i, std::size_t j) {
        ComplexMatrix m(n, n);
        m(i, j) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw validation_error("matrix product shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

private:
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw validation_error("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

inline ComplexMatrix dagger(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

inline Complex trace(const ComplexMatrix& m) {
    if (!m.square()) throw validation_error("trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

// tr(a * b) without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw validation_error("trace_of_product shape mismatch");
    Complex t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
    return t;
}

inline double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (const auto& e : m.entries()) v = std::max(v, std::abs(e));
    return v;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw validation_error("max_abs_diff shape mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        v = std::max(v, std::abs(a.entries()[i] - b.entries()[i]));
    return v;
}

// Entrywise deviation from A = A^dagger.
inline double hermiticity_defect(const ComplexMatrix& m) {
    if (!m.square()) return std::numeric_limits<double>::infinity();
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            v = std::max(v, std::abs(m(i, j) - std::conj(m(j, i))));
    return v;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.square() && hermiticity_defect(m) <= tol;
}

// Kronecker product; index convention C[(i1*r2+i2),(j1*c2+j2)] = A(i1,j1)*B(i2,j2).
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const Complex v = a(i1, j1);
            if (v == Complex(0.0, 0.0)) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
                    c(i1 * b.rows() + i2, j1 * b.cols() + j2) = v * b(i2, j2);
        }
    return c;
}

namespace detail {

inline std::vector<std::size_t> factor_strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

inline std::size_t compose_index(std::span<const std::size_t> digits,
                                 std::span<const std::size_t> strides,
                                 std::span<const std::size_t> positions) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) idx += digits[i] * strides[positions[i]];
    return idx;
}

} // namespace detail

// Partial trace over the factors NOT listed in `keep` (0-based, strictly
// increasing). The kept factors preserve their original relative order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   std::span<const std::size_t> factor_dims,
                                   std::span<const std::size_t> keep) {
    if (!m.square()) throw validation_error("partial_trace of non-square matrix");
    std::size_t total = 1;
    for (auto d : factor_dims) {
        if (d == 0) throw validation_error("partial_trace: zero factor dimension");
        total *= d;
    }
    if (total != m.rows())
        throw validation_error("partial_trace: factor dimensions do not multiply to matrix dimension");
    if (keep.empty()) throw validation_error("partial_trace: keep set must be nonempty");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= factor_dims.size()) throw validation_error("partial_trace: keep index out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw validation_error("partial_trace: keep indices must be strictly increasing");
    }

    std::vector<std::size_t> traced;
    for (std::size_t f = 0; f < factor_dims.size(); ++f)
        if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);

    const auto strides = detail::factor_strides(factor_dims);
    std::size_t keep_dim = 1;
    for (auto f : keep) keep_dim *= factor_dims[f];
    std::size_t traced_dim = 1;
    for (auto f : traced) traced_dim *= factor_dims[f];

    // mixed-radix digit expansion of a flat index over the given factors
    auto digits_of = [&](std::size_t flat, const std::vector<std::size_t>& factors) {
        std::vector<std::size_t> d(factors.size());
        for (std::size_t i = factors.size(); i-- > 0;) {
            d[i] = flat % factor_dims[factors[i]];
            flat /= factor_dims[factors[i]];
        }
        return d;
    };

    const std::vector<std::size_t> keep_v(keep.begin(), keep.end());
    ComplexMatrix r(keep_dim, keep_dim);
    for (std::size_t rk = 0; rk < keep_dim; ++rk) {
        const auto rdig = digits_of(rk, keep_v);
        for (std::size_t ck = 0; ck < keep_dim; ++ck) {
            const auto cdig = digits_of(ck, keep_v);
            Complex acc = 0.0;
            for (std::size_t t = 0; t < traced_dim; ++t) {
                const auto tdig = digits_of(t, traced);
                const std::size_t row = detail::compose_index(rdig, strides, keep_v) +
                                        detail::compose_index(tdig, strides, traced);
                const std::size_t col = detail::compose_index(cdig, strides, keep_v) +
                                        detail::compose_index(tdig, strides, traced);
                acc += m(row, col);
            }
            r(rk, ck) = acc;
        }
    }
    return r;
}

inline void enforce_dimension_cap(std::size_t dim, const std::string& what) {
    if (dim > tolerances().dimension_cap)
        throw budget_error(what + ": dimension " + std::to_string(dim) + " exceeds cap " +
                           std::to_string(tolerances().dimension_cap));
}

} // namespace cqmac
