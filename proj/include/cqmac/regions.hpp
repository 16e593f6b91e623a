#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cqmac/channel.hpp"
#include "cqmac/info.hpp"

namespace cqmac {

enum class RegionKind { Ck, Rk };

struct RatePair {
    double r1 = 0.0, r2 = 0.0;
};

// One evaluated input pair: the product distribution and its bound tuple
// ((1/k)I(A;C), (1/k)I(B;C)) for Ck, plus the sum bound for Rk.
struct RegionPoint {
    std::vector<double> p1, p2;
    std::vector<double> bounds; // 2 entries for Ck, 3 for Rk
};

struct RateRegion {
    RegionKind kind = RegionKind::Ck;
    int k = 1;
    double resolution = 0.0;
    std::size_t refinement_evals = 0;
    std::vector<RegionPoint> support_points; // every evaluated point
    std::vector<RegionPoint> frontier;       // nondominated, lexicographic (r1, r2)
};

// (1/k) ( I(A^k;C^k), I(B^k;C^k) ) at the channel state of (p1, p2).
inline std::pair<double, double> eval_ck_point(const CCQChannel& wk, const Distribution& p1,
                                               const Distribution& p2) {
    const auto gamma = channel_state(wk, p1, p2);
    const std::array<std::size_t, 1> a{0}, b{1}, c{2};
    const double inv_k = 1.0 / static_cast<double>(wk.k());
    return {inv_k * quantum_mi(gamma, a, c), inv_k * quantum_mi(gamma, b, c)};
}

// (1/k) ( I(A;C|B), I(B;C|A), I(A,B;C) ).
inline std::array<double, 3> eval_rk_point(const CCQChannel& wk, const Distribution& p1,
                                           const Distribution& p2) {
    const auto gamma = channel_state(wk, p1, p2);
    const std::array<std::size_t, 1> a{0}, b{1}, c{2};
    const std::array<std::size_t, 2> ab{0, 1};
    const double inv_k = 1.0 / static_cast<double>(wk.k());
    return {inv_k * conditional_quantum_mi(gamma, a, c, b),
            inv_k * conditional_quantum_mi(gamma, b, c, a), inv_k * quantum_mi(gamma, ab, c)};
}

namespace detail {

// All compositions of `steps` into `dim` nonnegative parts, as probability
// vectors with resolution 1/steps. Lexicographic order, so deterministic.
inline void enumerate_simplex(std::size_t dim, std::size_t steps,
                              const std::function<void(const std::vector<double>&)>& visit) {
    std::vector<std::size_t> counts(dim, 0);
    std::vector<double> w(dim, 0.0);
    const double unit = 1.0 / static_cast<double>(steps);
    auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
        if (pos + 1 == dim) {
            counts[pos] = remaining;
            for (std::size_t i = 0; i < dim; ++i) w[i] = unit * static_cast<double>(counts[i]);
            visit(w);
            return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    rec(rec, 0, steps);
}

inline std::size_t simplex_count(std::size_t dim, std::size_t steps) {
    // C(steps + dim - 1, dim - 1), guarded against overflow at desk scale
    long double v = 1.0L;
    for (std::size_t i = 1; i < dim; ++i)
        v = v * static_cast<long double>(steps + i) / static_cast<long double>(i);
    return static_cast<std::size_t>(v + 0.5L);
}

inline std::vector<RegionPoint> nondominated(const std::vector<RegionPoint>& pool) {
    std::vector<RegionPoint> front;
    for (const auto& p : pool) {
        bool dominated = false;
        for (const auto& q : pool) {
            if (&p == &q) continue;
            bool all_ge = true, any_gt = false;
            for (std::size_t i = 0; i < p.bounds.size(); ++i) {
                if (q.bounds[i] < p.bounds[i] - 1e-12) all_ge = false;
                if (q.bounds[i] > p.bounds[i] + 1e-12) any_gt = true;
            }
            if (all_ge && any_gt) {
                dominated = true;
                break;
            }
        }
        if (!dominated) front.push_back(p);
    }
    std::sort(front.begin(), front.end(), [](const RegionPoint& a, const RegionPoint& b) {
        for (std::size_t i = 0; i < a.bounds.size(); ++i) {
            if (a.bounds[i] < b.bounds[i] - 1e-12) return true;
            if (a.bounds[i] > b.bounds[i] + 1e-12) return false;
        }
        return false;
    });
    // drop near-duplicates left by the tolerance in the sort
    std::vector<RegionPoint> unique;
    for (auto& p : front) {
        if (!unique.empty()) {
            bool same = true;
            for (std::size_t i = 0; i < p.bounds.size(); ++i)
                if (std::abs(unique.back().bounds[i] - p.bounds[i]) > 1e-12) same = false;
            if (same) continue;
        }
        unique.push_back(std::move(p));
    }
    return unique;
}

} // namespace detail

// Union over a product-simplex grid of the per-point bound tuples, refined
// by coordinate-exchange ascent (step halving from `resolution` down to
// 1e-4) around the nondominated grid points.
inline RateRegion compute_region(const CCQChannel& w, int k, double resolution, RegionKind kind) {
    if (!(resolution > 0.0 && resolution <= 0.5))
        throw validation_error("compute_region: resolution must lie in (0, 0.5]");
    const CCQChannel wk = w.k() == k ? w : extend_memoryless(w, k);
    const std::size_t nx = wk.x_words(), ny = wk.y_words();
    const std::size_t steps = static_cast<std::size_t>(std::lround(1.0 / resolution));
    const std::size_t grid_count =
        detail::simplex_count(nx, steps) * detail::simplex_count(ny, steps);
    if (grid_count > tolerances().grid_budget)
        throw budget_error("compute_region: grid of " + std::to_string(grid_count) +
                           " points exceeds budget " + std::to_string(tolerances().grid_budget));

    RateRegion region;
    region.kind = kind;
    region.k = k;
    region.resolution = resolution;

    auto evaluate = [&](const std::vector<double>& p1w, const std::vector<double>& p2w) {
        const Distribution p1(p1w), p2(p2w);
        RegionPoint pt;
        pt.p1 = p1w;
        pt.p2 = p2w;
        if (kind == RegionKind::Ck) {
            const auto [r1, r2] = eval_ck_point(wk, p1, p2);
            pt.bounds = {r1, r2};
        } else {
            const auto b = eval_rk_point(wk, p1, p2);
            pt.bounds = {b[0], b[1], b[2]};
        }
        region.support_points.push_back(pt);
        return pt;
    };

    std::vector<std::vector<double>> grid1, grid2;
    detail::enumerate_simplex(nx, steps, [&](const std::vector<double>& p) { grid1.push_back(p); });
    detail::enumerate_simplex(ny, steps, [&](const std::vector<double>& p) { grid2.push_back(p); });
    for (const auto& p1 : grid1)
        for (const auto& p2 : grid2) evaluate(p1, p2);

    // local polish around the nondominated grid points
    const auto seeds = detail::nondominated(region.support_points);
    const std::size_t n_objectives = kind == RegionKind::Ck ? 2 : 3;
    const std::size_t max_seeds = 64;
    const std::size_t stride = std::max<std::size_t>(1, seeds.size() / max_seeds);
    for (std::size_t s = 0; s < seeds.size(); s += stride) {
        for (std::size_t obj = 0; obj <= n_objectives; ++obj) {
            // obj == n_objectives means the sum of all components
            auto score = [&](const RegionPoint& pt) {
                if (obj < n_objectives) return pt.bounds[obj];
                double total = 0.0;
                for (double b : pt.bounds) total += b;
                return total;
            };
            RegionPoint current = seeds[s];
            double step = resolution;
            while (step >= 1e-4) {
                bool improved = false;
                RegionPoint best = current;
                for (int which = 0; which < 2; ++which) {
                    const auto& vec = which == 0 ? current.p1 : current.p2;
                    for (std::size_t from = 0; from < vec.size(); ++from) {
                        if (vec[from] < step) continue;
                        for (std::size_t to = 0; to < vec.size(); ++to) {
                            if (to == from) continue;
                            auto p1 = current.p1;
                            auto p2 = current.p2;
                            auto& target = which == 0 ? p1 : p2;
                            target[from] -= step;
                            target[to] += step;
                            const auto candidate = evaluate(p1, p2);
                            ++region.refinement_evals;
                            if (score(candidate) > score(best) + 1e-12) {
                                best = candidate;
                                improved = true;
                            }
                        }
                    }
                }
                if (improved)
                    current = best;
                else
                    step /= 2.0;
            }
        }
    }

    region.frontier = detail::nondominated(region.support_points);
    return region;
}

// Downward-closed containment against the frontier, with per-coordinate
// slack; the Rk frontier also carries the sum constraint.
inline bool region_contains(const RateRegion& region, RatePair p, double slack) {
    if (slack < 0.0) throw validation_error("region_contains: slack must be nonnegative");
    for (const auto& f : region.frontier) {
        const bool fits = p.r1 <= f.bounds[0] + slack && p.r2 <= f.bounds[1] + slack;
        if (!fits) continue;
        if (region.kind == RegionKind::Rk) {
            if (p.r1 + p.r2 <= f.bounds[2] + slack) return true;
        } else {
            return true;
        }
    }
    return false;
}

struct SubadditivityReport {
    double lhs = 0.0;          // I(A^2; C^2) of the pair state
    double single_letter = 0.0; // I(A; C) of the one-instance restriction
    double rhs = 0.0;          // 2 * single_letter
    bool holds = false;
};

// I(A^2;C^2)_{gamma^2} <= 2 I(A;C)_gamma with gamma the one-instance
// restriction (partial trace onto the first A and C factors).
inline SubadditivityReport subadditivity_check(const CCQChannel& w, const Distribution& p1_pair,
                                               const Distribution& p2_pair) {
    if (w.k() != 1) throw validation_error("subadditivity_check: base channel expected");
    const auto w2 = extend_memoryless(w, 2);
    if (p1_pair.size() != w2.x_words() || p2_pair.size() != w2.y_words())
        throw validation_error("subadditivity_check: pair distributions expected");
    const auto gamma2 = channel_state(w2, p1_pair, p2_pair);
    const std::array<std::size_t, 1> a{0}, c{2};
    SubadditivityReport rep;
    rep.lhs = quantum_mi(gamma2, a, c);

    // restriction to one instance: marginals of the pair inputs
    const std::size_t nx = w.x_alphabet().size(), ny = w.y_alphabet().size();
    std::vector<double> p1m(nx, 0.0), p2m(ny, 0.0);
    for (std::size_t x1 = 0; x1 < nx; ++x1)
        for (std::size_t x2 = 0; x2 < nx; ++x2) p1m[x1] += p1_pair[x1 * nx + x2];
    for (std::size_t y1 = 0; y1 < ny; ++y1)
        for (std::size_t y2 = 0; y2 < ny; ++y2) p2m[y1] += p2_pair[y1 * ny + y2];
    const auto gamma = channel_state(w, Distribution(p1m), Distribution(p2m));
    rep.single_letter = quantum_mi(gamma, a, c);
    rep.rhs = 2.0 * rep.single_letter;
    rep.holds = rep.lhs <= rep.rhs + 1e-8;
    return rep;
}

struct ContainmentViolation {
    std::vector<double> p1, p2;
    double ck_r1 = 0.0, ck_r2 = 0.0;
    std::array<double, 3> rk{};
};

struct ContainmentReport {
    std::size_t points_checked = 0;
    std::vector<ContainmentViolation> violations;
    bool holds() const { return violations.empty(); }
};

// Per-point check that the Ck bound pair is dominated by the Rk bound
// triple, componentwise and in the sum.
inline ContainmentReport containment_check(const CCQChannel& w, int k, double resolution) {
    const CCQChannel wk = w.k() == k ? w : extend_memoryless(w, k);
    const std::size_t steps = static_cast<std::size_t>(std::lround(1.0 / resolution));
    const std::size_t nx = wk.x_words(), ny = wk.y_words();
    if (detail::simplex_count(nx, steps) * detail::simplex_count(ny, steps) >
        tolerances().grid_budget)
        throw budget_error("containment_check: grid exceeds budget");
    ContainmentReport rep;
    std::vector<std::vector<double>> grid1, grid2;
    detail::enumerate_simplex(nx, steps, [&](const std::vector<double>& p) { grid1.push_back(p); });
    detail::enumerate_simplex(ny, steps, [&](const std::vector<double>& p) { grid2.push_back(p); });
    for (const auto& p1w : grid1)
        for (const auto& p2w : grid2) {
            const Distribution p1(p1w), p2(p2w);
            const auto [c1, c2] = eval_ck_point(wk, p1, p2);
            const auto rk = eval_rk_point(wk, p1, p2);
            ++rep.points_checked;
            const double tol = 1e-8;
            if (c1 > rk[0] + tol || c2 > rk[1] + tol || c1 + c2 > rk[2] + tol)
                rep.violations.push_back({p1w, p2w, c1, c2, rk});
        }
    return rep;
}

} // namespace cqmac
