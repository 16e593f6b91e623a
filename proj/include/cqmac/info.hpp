#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "cqmac/channel.hpp"
#include "cqmac/distribution.hpp"
#include "cqmac/quantum.hpp"

namespace cqmac {

// H(p) = -sum p log2 p, in bits.
inline double shannon_entropy(const Distribution& p) {
    return entropy_of_spectrum(p.weights());
}

namespace detail {

inline double clamp_mi(double v, const char* what) {
    if (v < -tolerances().mi_clamp)
        throw numerical_error(std::string(what) + ": mutual information " + std::to_string(v));
    return std::max(v, 0.0);
}

} // namespace detail

// I(X;Z) = H(X) + H(Z) - H(X,Z).
inline double classical_mi(const JointDistribution& j) {
    const double hx = entropy_of_spectrum(j.row_marginal());
    const double hz = entropy_of_spectrum(j.col_marginal());
    const double hxz = entropy_of_spectrum(j.weights());
    return detail::clamp_mi(hx + hz - hxz, "classical_mi");
}

// rho(E)(i) = tr(rho E_i); residual against 1 is checked, then the weights
// are renormalized exactly.
inline Distribution induced_distribution(const DensityOperator& rho, const POVM& e) {
    if (rho.dim() != e.dim()) throw validation_error("induced_distribution: dimension mismatch");
    std::vector<double> w(e.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        w[i] = expectation(rho, e.element(i));
        sum += w[i];
    }
    if (std::abs(sum - 1.0) > tolerances().induced_renorm)
        throw numerical_error("induced_distribution: renormalization residual " +
                              std::to_string(std::abs(sum - 1.0)));
    for (auto& v : w) v /= sum;
    return Distribution(std::move(w));
}

// d1(p, q) = sum |p - q|, range [0, 2].
inline double total_variation(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw validation_error("total_variation: support mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return d;
}

// d_E(rho, sigma) = d1(rho(E), sigma(E)).
inline double povm_distance(const DensityOperator& rho, const DensityOperator& sigma, const POVM& e) {
    return total_variation(induced_distribution(rho, e), induced_distribution(sigma, e));
}

// P(D) = {D, 1 - D}.
inline POVM binary_povm(const SubPOVMElement& d) {
    ComplexMatrix complement = ComplexMatrix::identity(d.dim());
    complement -= d.matrix();
    std::vector<ComplexMatrix> elems{d.matrix(), std::move(complement)};
    return POVM(std::move(elems), {"D", "notD"});
}

struct CoarseGrainCheck {
    double refined;        // d1 under the full POVM
    double coarse;         // d1 under {D, 1-D} with D = sum over the first part
    bool holds;            // refined >= coarse - 1e-9
};

// Coarse-graining a measurement cannot increase the induced distance.
inline CoarseGrainCheck coarse_grain_distance_check(const DensityOperator& rho,
                                                    const DensityOperator& sigma, const POVM& e,
                                                    std::span<const std::size_t> part_a,
                                                    std::span<const std::size_t> part_b) {
    std::vector<bool> seen(e.size(), false);
    for (auto i : part_a) {
        if (i >= e.size() || seen[i]) throw validation_error("coarse_grain: invalid partition");
        seen[i] = true;
    }
    for (auto i : part_b) {
        if (i >= e.size() || seen[i]) throw validation_error("coarse_grain: invalid partition");
        seen[i] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw validation_error("coarse_grain: partition does not cover the POVM");

    ComplexMatrix d(e.dim(), e.dim());
    for (auto i : part_a) d += e.element(i);
    const CoarseGrainCheck r{povm_distance(rho, sigma, e),
                             povm_distance(rho, sigma, binary_povm(SubPOVMElement(std::move(d)))),
                             false};
    return CoarseGrainCheck{r.refined, r.coarse, r.refined >= r.coarse - 1e-9};
}

namespace detail {

inline std::vector<std::size_t> sorted_union(std::span<const std::size_t> a,
                                             std::span<const std::size_t> b) {
    std::vector<std::size_t> u(a.begin(), a.end());
    u.insert(u.end(), b.begin(), b.end());
    std::sort(u.begin(), u.end());
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] == u[i - 1]) throw validation_error("factor sets must be disjoint");
    return u;
}

} // namespace detail

// I(A;C) = S(A) + S(C) - S(AC) on a channel state, with A and C given as
// disjoint factor index sets.
inline double quantum_mi(const ChannelState& gamma, std::span<const std::size_t> part_a,
                         std::span<const std::size_t> part_c) {
    const auto ac = detail::sorted_union(part_a, part_c);
    std::vector<std::size_t> a(part_a.begin(), part_a.end()), c(part_c.begin(), part_c.end());
    std::sort(a.begin(), a.end());
    std::sort(c.begin(), c.end());
    const double v = gamma.subset_entropy(a) + gamma.subset_entropy(c) - gamma.subset_entropy(ac);
    return detail::clamp_mi(v, "quantum_mi");
}

// I(A;C|B) = S(AB) + S(CB) - S(ABC) - S(B).
inline double conditional_quantum_mi(const ChannelState& gamma, std::span<const std::size_t> part_a,
                                     std::span<const std::size_t> part_c,
                                     std::span<const std::size_t> part_b) {
    if (part_b.empty()) return quantum_mi(gamma, part_a, part_c);
    const auto ab = detail::sorted_union(part_a, part_b);
    const auto cb = detail::sorted_union(part_c, part_b);
    auto abc = detail::sorted_union(ab, part_c);
    std::vector<std::size_t> b(part_b.begin(), part_b.end());
    std::sort(b.begin(), b.end());
    const double v = gamma.subset_entropy(ab) + gamma.subset_entropy(cb) - gamma.subset_entropy(abc) -
                     gamma.subset_entropy(b);
    return detail::clamp_mi(v, "conditional_quantum_mi");
}

// chi(p, W) = S(sum p W) - sum p S(W(x)); equals I(A;C) of the CQ channel state.
inline double holevo(const Distribution& p, const CQChannel& w) {
    if (p.size() != w.input_size()) throw validation_error("holevo: distribution size mismatch");
    double avg = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x)
        if (p[x] > 0.0) avg += p[x] * von_neumann_entropy(w.output(x));
    const double v = von_neumann_entropy(mix_output(w, p)) - avg;
    return detail::clamp_mi(v, "holevo");
}

// Joint law of (X, Z) when X ~ p is pushed through a classical channel.
inline JointDistribution joint_from_channel(const Distribution& p, const ClassicalChannel& w) {
    if (p.size() != w.inputs()) throw validation_error("joint_from_channel: size mismatch");
    std::vector<double> j(p.size() * w.outputs());
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t z = 0; z < w.outputs(); ++z) j[x * w.outputs() + z] = p[x] * w.prob(z, x);
    return JointDistribution(p.size(), w.outputs(), std::move(j));
}

// Indices of the family whose induced mutual information reaches the
// threshold; this is the complement of the low-information set the converse
// proof filters out. Deterministic (ascending) order.
inline std::vector<std::size_t> mi_threshold_filter(const std::vector<Distribution>& family,
                                                    const ClassicalChannel& w, double threshold) {
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < family.size(); ++i)
        if (classical_mi(joint_from_channel(family[i], w)) >= threshold) picked.push_back(i);
    return picked;
}

} // namespace cqmac
