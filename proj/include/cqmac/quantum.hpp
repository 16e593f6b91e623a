#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqmac/eig.hpp"
#include "cqmac/matrix.hpp"

namespace cqmac {

// Quantum state: Hermitian, PSD, unit trace. Immutable after construction;
// the constructor is the single validation gate.
class DensityOperator {
public:
    explicit DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
        const auto problems = violations(m_);
        if (!problems.empty()) throw validation_error("invalid density operator: " + problems.front());
    }

    // Itemized invariant check, used by file validation to report every
    // problem instead of the first one.
    static std::vector<std::string> violations(const ComplexMatrix& m) {
        std::vector<std::string> out;
        const auto& tol = tolerances();
        if (!m.square()) {
            out.push_back("matrix not square");
            return out;
        }
        const bool hermitian_ok = hermiticity_defect(m) <= tol.hermitian;
        if (!hermitian_ok)
            out.push_back("not hermitian (defect " + std::to_string(hermiticity_defect(m)) + ")");
        const double tr = trace(m).real();
        if (std::abs(tr - 1.0) > tol.trace_one)
            out.push_back("unit trace violated (tr = " + std::to_string(tr) + ")");
        if (hermitian_ok) {
            const auto ev = hermitian_eigenvalues(m);
            if (!ev.empty() && ev.front() < tol.psd_floor)
                out.push_back("not positive semidefinite (min eigenvalue " + std::to_string(ev.front()) + ")");
        }
        return out;
    }

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

    static DensityOperator pure_basis_state(std::size_t dim, std::size_t i) {
        return DensityOperator(ComplexMatrix::basis_op(dim, i, i));
    }

    static DensityOperator maximally_mixed(std::size_t dim) {
        ComplexMatrix m = ComplexMatrix::identity(dim);
        m *= Complex(1.0 / static_cast<double>(dim), 0.0);
        return DensityOperator(std::move(m));
    }

private:
    ComplexMatrix m_;
};

// Measurement effect with 0 <= E <= 1; no completeness requirement.
class SubPOVMElement {
public:
    explicit SubPOVMElement(ComplexMatrix m) : m_(std::move(m)) {
        const auto& tol = tolerances();
        if (!m_.square()) throw validation_error("sub-POVM element not square");
        if (hermiticity_defect(m_) > tol.hermitian)
            throw validation_error("sub-POVM element not Hermitian");
        const auto ev = hermitian_eigenvalues(m_);
        if (ev.front() < tol.psd_floor || ev.back() > 1.0 + tol.povm_element_max)
            throw validation_error("sub-POVM element spectrum outside [0, 1]");
    }

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

// Finite measurement: PSD elements with spectrum in [0,1] summing to the
// identity. Labels are free-form strings carried through reports.
class POVM {
public:
    POVM(std::vector<ComplexMatrix> elements, std::vector<std::string> labels = {})
        : elems_(std::move(elements)), labels_(std::move(labels)) {
        if (elems_.empty()) throw validation_error("POVM needs at least one element");
        if (!labels_.empty() && labels_.size() != elems_.size())
            throw validation_error("POVM label count mismatch");
        const auto& tol = tolerances();
        const std::size_t d = elems_.front().rows();
        ComplexMatrix sum(d, d);
        for (const auto& e : elems_) {
            if (!e.square() || e.rows() != d) throw validation_error("POVM element dimension mismatch");
            if (hermiticity_defect(e) > tol.hermitian) throw validation_error("POVM element not Hermitian");
            const auto ev = hermitian_eigenvalues(e);
            if (ev.front() < tol.psd_floor || ev.back() > 1.0 + tol.povm_element_max)
                throw validation_error("POVM element spectrum outside [0, 1]");
            sum += e;
        }
        if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol.povm_completeness)
            throw validation_error("POVM elements do not sum to identity");
    }

    std::size_t size() const { return elems_.size(); }
    std::size_t dim() const { return elems_.front().rows(); }
    const ComplexMatrix& element(std::size_t i) const { return elems_[i]; }
    const std::vector<ComplexMatrix>& elements() const { return elems_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::string label(std::size_t i) const {
        return labels_.empty() ? std::to_string(i) : labels_[i];
    }

    // Measurement in the computational basis.
    static POVM computational_basis(std::size_t dim) {
        std::vector<ComplexMatrix> es;
        std::vector<std::string> ls;
        for (std::size_t i = 0; i < dim; ++i) {
            es.push_back(ComplexMatrix::basis_op(dim, i, i));
            ls.push_back(std::to_string(i));
        }
        return POVM(std::move(es), std::move(ls));
    }

private:
    std::vector<ComplexMatrix> elems_;
    std::vector<std::string> labels_;
};

// Reduction of a state onto the kept tensor factors; the result is again a
// valid state (trace preserved up to the usual tolerance).
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     std::span<const std::size_t> factor_dims,
                                     std::span<const std::size_t> keep) {
    return DensityOperator(partial_trace(rho.matrix(), factor_dims, keep));
}

// tr(rho * e), clamped to [0,1]. A grossly out-of-range value signals a
// numerical integrity problem rather than user error.
inline double expectation(const DensityOperator& rho, const ComplexMatrix& e) {
    if (rho.dim() != e.rows() || !e.square())
        throw validation_error("expectation: dimension mismatch");
    const double v = trace_of_product(rho.matrix(), e).real();
    if (v < -1e-6 || v > 1.0 + 1e-6)
        throw numerical_error("expectation outside [0,1] beyond tolerance: " + std::to_string(v));
    return std::clamp(v, 0.0, 1.0);
}

inline double expectation(const DensityOperator& rho, const SubPOVMElement& e) {
    return expectation(rho, e.matrix());
}

// S(rho) = -sum lambda_i log2 lambda_i, in bits. Eigenvalues in
// [-entropy_clip, 0) count as zero.
inline double von_neumann_entropy(const DensityOperator& rho) {
    const auto ev = hermitian_eigenvalues(rho.matrix());
    double s = 0.0;
    for (double lambda : ev) {
        if (lambda < 0.0) {
            if (lambda < -tolerances().entropy_clip * 100) // deep negatives mean a broken state
                throw numerical_error("entropy: eigenvalue " + std::to_string(lambda));
            continue;
        }
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

// Entropy of a nonnegative spectrum that may not be validated as a state;
// shared by the classical and blockwise channel-state paths.
inline double entropy_of_spectrum(std::span<const double> spectrum) {
    double s = 0.0;
    for (double lambda : spectrum)
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    return std::max(s, 0.0);
}

} // namespace cqmac
