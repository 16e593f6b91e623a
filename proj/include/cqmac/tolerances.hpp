#pragma once

#include <cstddef>

namespace cqmac {

// Global numerical tolerance record. Every invariant check reads from
// here, so a single override changes the whole stack consistently.
struct Tolerances {
    double hermitian = 1e-9;        // max entrywise |A - A^dagger|
    double trace_one = 1e-9;        // |tr(rho) - 1|
    double psd_floor = -1e-10;      // smallest admissible eigenvalue
    double povm_element_max = 1e-9; // eigenvalues may exceed 1 by this
    double povm_completeness = 1e-9;// entrywise |sum E_i - I|
    double distribution = 1e-9;     // |sum p - 1|
    double induced_renorm = 1e-8;   // residual before renormalizing tr(rho E_i)
    double entropy_clip = 1e-10;    // eigenvalues in [-clip, 0) clamp to 0
    double mi_clamp = 1e-8;         // negative MI within this clamps to 0
    double reconstruction = 1e-8;   // subset-sum / eigendecomposition residuals
    double jacobi_off = 1e-12;      // off-diagonal Frobenius norm target
    std::size_t dimension_cap = 4096;
    std::size_t max_attempts = 64;  // rejection sampling retries per map
    std::size_t grid_budget = 1000000;
};

inline Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

} // namespace cqmac
