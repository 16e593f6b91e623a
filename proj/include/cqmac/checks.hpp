#pragma once

#include <array>
#include <string>
#include <vector>

#include "cqmac/io.hpp"
#include "cqmac/random_instances.hpp"
#include "cqmac/regions.hpp"
#include "cqmac/transforms.hpp"

namespace cqmac {

// One executed invariant check. On failure `counterexample` carries the
// replayable inputs (seed and serialized instance), never prose.
struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
    json counterexample;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckOutcome> outcomes;
    std::size_t failures() const {
        std::size_t f = 0;
        for (const auto& o : outcomes)
            if (!o.pass) ++f;
        return f;
    }
    bool pass() const { return failures() == 0; }
};

// Coarse-graining can only lose distinguishability: d1 through the full
// POVM dominates d1 through any two-outcome merge of it.
inline SuiteReport check_d1(std::uint64_t seed, std::size_t trials = 100) {
    SuiteReport rep{"d1", {}};
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(seed + t);
        const std::size_t dim = 2 + rng.next_below(3);
        const std::size_t m = 2 + rng.next_below(4);
        const auto rho = random_density(dim, rng);
        const auto sigma = random_density(dim, rng);
        const auto e = random_povm(dim, m, rng);
        std::vector<std::size_t> a, b;
        for (std::size_t i = 0; i < m; ++i) (rng.next_below(2) ? a : b).push_back(i);
        if (a.empty()) {
            a.push_back(b.back());
            b.pop_back();
        }
        const auto r = coarse_grain_distance_check(rho, sigma, e, a, b);
        CheckOutcome out;
        out.name = "d1[" + std::to_string(t) + "]";
        out.pass = r.holds;
        out.detail = "refined " + format_double(r.refined) + " >= coarse " + format_double(r.coarse);
        if (!out.pass) {
            json elems = json::array();
            for (const auto& el : e.elements()) elems.push_back(matrix_to_json(el));
            out.counterexample = json{{"seed", seed + t},
                                      {"rho", matrix_to_json(rho.matrix())},
                                      {"sigma", matrix_to_json(sigma.matrix())},
                                      {"povm", elems},
                                      {"partition_a", a},
                                      {"partition_b", b}};
        }
        rep.outcomes.push_back(std::move(out));
    }
    return rep;
}

// Mutual-information inequalities on channel states with independent
// senders, plus the Holevo bound against measured information.
inline SuiteReport check_chainrules(const CCQChannel& base, std::uint64_t seed,
                                    std::size_t trials = 100) {
    SuiteReport rep{"chainrules", {}};
    const std::array<std::size_t, 1> a{0}, b{1}, c{2};
    const std::array<std::size_t, 2> ab{0, 1};
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(seed + t);
        // alternate between the supplied channel and fresh random ones
        const CCQChannel w = (t % 2 == 0) ? base
                                          : random_ccq_channel(2 + rng.next_below(2),
                                                               2 + rng.next_below(2), 2, rng);
        const auto p1 = random_distribution(w.x_words(), rng);
        const auto p2 = random_distribution(w.y_words(), rng);
        const auto gamma = channel_state(w, p1, p2);
        const double i_ac = quantum_mi(gamma, a, c);
        const double i_bc = quantum_mi(gamma, b, c);
        const double i_acb = conditional_quantum_mi(gamma, a, c, b);
        const double i_bca = conditional_quantum_mi(gamma, b, c, a);
        const double i_abc = quantum_mi(gamma, ab, c);
        CheckOutcome out;
        out.name = "c_sub_r[" + std::to_string(t) + "]";
        out.pass = i_ac <= i_acb + 1e-8 && i_bc <= i_bca + 1e-8 && i_ac + i_bc <= i_abc + 1e-8;
        out.detail = "I(A;C)=" + format_double(i_ac) + " I(A;C|B)=" + format_double(i_acb) +
                     " I(B;C)=" + format_double(i_bc) + " I(B;C|A)=" + format_double(i_bca) +
                     " I(AB;C)=" + format_double(i_abc);
        if (!out.pass)
            out.counterexample = json{{"seed", seed + t},
                                      {"channel", channel_to_json(w)},
                                      {"p1", p1.weights()},
                                      {"p2", p2.weights()}};
        rep.outcomes.push_back(std::move(out));
    }
    // Holevo upper bound on extractable information
    const std::size_t holevo_trials = trials / 2;
    for (std::size_t t = 0; t < holevo_trials; ++t) {
        SplitMix64 rng(seed + 0x10000 + t);
        const std::size_t dim = 2 + rng.next_below(2);
        const auto w = random_cq_channel(2 + rng.next_below(2), dim, rng);
        const auto p = random_distribution(w.input_size(), rng);
        const auto e = random_povm(dim, 2 + rng.next_below(3), rng);
        const double chi = holevo(p, w);
        const double measured = classical_mi(joint_from_channel(p, induce_classical(w, e)));
        CheckOutcome out;
        out.name = "holevo[" + std::to_string(t) + "]";
        out.pass = measured <= chi + 1e-8;
        out.detail = "measured " + format_double(measured) + " <= chi " + format_double(chi);
        if (!out.pass) {
            json elems = json::array();
            for (const auto& el : e.elements()) elems.push_back(matrix_to_json(el));
            out.counterexample = json{{"seed", seed + 0x10000 + t}, {"povm", elems}};
        }
        rep.outcomes.push_back(std::move(out));
    }
    return rep;
}

// Subadditivity of mutual information at block length two: exchangeable
// correlated inputs for sender 1, product inputs for sender 2; product
// instances must sit exactly on the bound.
inline SuiteReport check_subadd(const CCQChannel& base, std::uint64_t seed,
                                std::size_t trials = 50) {
    SuiteReport rep{"subadd", {}};
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(seed + t);
        const CCQChannel w = (t % 2 == 0) ? base : random_ccq_channel(2, 2, 2, rng);
        const std::size_t nx = w.x_alphabet().size(), ny = w.y_alphabet().size();
        const bool product_case = t % 5 == 0;
        std::vector<double> p1(nx * nx), p2(ny * ny);
        if (product_case) {
            const auto q = random_distribution(nx, rng);
            for (std::size_t i = 0; i < nx; ++i)
                for (std::size_t j = 0; j < nx; ++j) p1[i * nx + j] = q[i] * q[j];
        } else {
            const auto raw = random_distribution(nx * nx, rng);
            for (std::size_t i = 0; i < nx; ++i)
                for (std::size_t j = 0; j < nx; ++j)
                    p1[i * nx + j] = 0.5 * (raw[i * nx + j] + raw[j * nx + i]);
        }
        const auto r = random_distribution(ny, rng);
        for (std::size_t i = 0; i < ny; ++i)
            for (std::size_t j = 0; j < ny; ++j) p2[i * ny + j] = r[i] * r[j];
        const auto res = subadditivity_check(w, Distribution(p1), Distribution(p2));
        CheckOutcome out;
        out.name = std::string(product_case ? "subadd_product[" : "subadd[") + std::to_string(t) + "]";
        out.pass = res.holds && (!product_case || std::abs(res.lhs - res.rhs) <= 1e-8);
        out.detail = "I(A2;C2) " + format_double(res.lhs) + " <= 2 I(A;C) " + format_double(res.rhs);
        if (!out.pass)
            out.counterexample =
                json{{"seed", seed + t}, {"channel", channel_to_json(w)}, {"p1", p1}, {"p2", p2}};
        rep.outcomes.push_back(std::move(out));
    }
    return rep;
}

// Monte Carlo Chernov-Hoeffding: empirical tails of Bernoulli sums stay
// below 2^{-m D(lambda || mu)} on every grid batch.
inline SuiteReport check_chernoff(std::uint64_t seed, std::size_t trials_per_batch = 100000) {
    SuiteReport rep{"chernoff", {}};
    const double lambdas[] = {0.4, 0.5, 0.6};
    const double mus[] = {0.1, 0.2, 0.25};
    const std::size_t ms[] = {10, 20, 50};
    std::size_t batch = 0;
    for (double lambda : lambdas)
        for (double mu : mus)
            for (std::size_t m : ms) {
                if (!(mu < lambda)) continue;
                SplitMix64 rng(seed + batch);
                std::size_t exceed = 0;
                for (std::size_t t = 0; t < trials_per_batch; ++t) {
                    std::size_t sum = 0;
                    for (std::size_t i = 0; i < m; ++i) sum += rng.next_double() < mu ? 1 : 0;
                    if (static_cast<double>(sum) > lambda * static_cast<double>(m)) ++exceed;
                }
                const double empirical = static_cast<double>(exceed) / trials_per_batch;
                const double bound = chernoff_tail_bound(lambda, mu, m);
                CheckOutcome out;
                out.name = "chernoff[l=" + format_double(lambda) + ",mu=" + format_double(mu) +
                           ",m=" + std::to_string(m) + "]";
                out.pass = empirical <= bound;
                out.detail = "empirical " + format_double(empirical) + " <= bound " +
                             format_double(bound);
                if (!out.pass)
                    out.counterexample = json{{"seed", seed + batch},
                                              {"lambda", lambda},
                                              {"mu", mu},
                                              {"m", m},
                                              {"trials", trials_per_batch}};
                rep.outcomes.push_back(std::move(out));
                ++batch;
            }
    return rep;
}

} // namespace cqmac
