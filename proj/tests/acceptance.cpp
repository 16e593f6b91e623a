// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. argv[1] must point at the
// cqmac CLI binary (used by the determinism criterion). Exits nonzero if
// any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "cqmac/checks.hpp"
#include "cqmac/io.hpp"
#include "cqmac/random_instances.hpp"
#include "cqmac/regions.hpp"
#include "cqmac/transforms.hpp"

using namespace cqmac;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& text) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, text.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Noiseless binary CCQ channel: Rk frontier at resolution 0.05 matches
//    {R1 <= 1, R2 <= 1, R1+R2 <= 2} within 0.01 per coordinate, under 30 s.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = noiseless_channel(2, 2);
    const auto region = compute_region(w, 1, 0.05, RegionKind::Rk);
    bool inside = true;
    for (const auto& f : region.frontier)
        inside = inside && f.bounds[0] <= 1.01 && f.bounds[1] <= 1.01 && f.bounds[2] <= 2.01;
    bool covers = true;
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        covers = covers && region_contains(region, {1.0, a}, 0.01);
        covers = covers && region_contains(region, {a, 1.0}, 0.01);
    }
    const double elapsed = seconds_since(t0);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "noiseless binary Rk frontier within 0.01 of {R1<=1, R2<=1, R1+R2<=2} "
                  "(frontier %zu pts, inside=%d covers=%d, %.1fs < 30s)",
                  region.frontier.size(), int(inside), int(covers), elapsed);
    report(1, inside && covers && elapsed < 30.0, buf);
}

// 2. Single-sender reduction never increases the average error.
void criterion_2() {
    std::size_t failures = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        SplitMix64 rng(1000 + s);
        const auto w = random_ccq_channel(2, 2, 2, rng);
        const auto c = random_code(w, 1 + rng.next_below(4), 1 + rng.next_below(4), rng);
        const double original = avg_error(c, w);
        const auto rx = reduce_single_sender(c, w, MarginalSide::keep_x);
        const auto ry = reduce_single_sender(c, w, MarginalSide::keep_y);
        if (cq_avg_error(rx.code, rx.channel) > original + 1e-9) ++failures;
        if (cq_avg_error(ry.code, ry.channel) > original + 1e-9) ++failures;
    }
    report(2, failures == 0,
           "single-sender reduction: reduced avg error <= original avg error + 1e-9 on 50 random "
           "codes (" +
               std::to_string(failures) + " failures)");
}

// 3. Max-error extraction with keep = ceil(M/2): lambda <= 2 avg, sort exact.
void criterion_3() {
    std::size_t failures = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        SplitMix64 rng(2000 + s);
        const auto w = random_ccq_channel(2, 2, 2, rng);
        const std::size_t m = 2 + rng.next_below(3);
        const auto c = random_code(w, m, 1 + rng.next_below(4), rng);
        const std::size_t keep = (m + 1) / 2;
        const auto r = extract_max_error(c, w, keep);
        if (r.lambda > 2.0 * avg_error(c, w) + 1e-12) ++failures;
        // brute-force stable sort of the chosen column
        const auto errors = pair_errors(c, w);
        std::vector<std::size_t> expect(m);
        std::iota(expect.begin(), expect.end(), 0);
        std::stable_sort(expect.begin(), expect.end(), [&](std::size_t a, std::size_t b) {
            return errors[a * c.n_count() + r.n0] < errors[b * c.n_count() + r.n0];
        });
        if (expect != r.order) ++failures;
        if (std::abs(cq_max_error(r.code, r.channel) - r.lambda) > 1e-10) ++failures;
    }
    report(3, failures == 0,
           "max-error extraction: lambda <= 2*avg_error with keep=ceil(M/2), exact sort, on 50 "
           "random codes (" +
               std::to_string(failures) + " failures)");
}

struct ToyRealization {
    TransformatorResult res;
    double e1 = 0.0, e2_literal = 0.0, e2_cross = 0.0;
};

std::vector<ToyRealization> g_realizations; // shared between criteria 4 and 9

// 4. Transformator desk instance: binary noiseless, M = N = 3, lambda = 0.6,
//    seeds 1..20; every accepted realization meets the first- and
//    second-kind chains and reconstructs exactly. Under 60 s.
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = noiseless_channel(2, 2);
    const auto outer = perfect_code(w);
    const auto inner = perfect_code(w);
    const auto w2 = extend_memoryless(w, 2);
    const double lambda = 0.6;
    const double lam_outer = max_error(outer, w);
    const double lam_inner = max_error(inner, w);
    const double lambda_k = transformator_lambda_k(lam_outer, lam_inner);
    const double e1_bound = lam_outer + lam_inner + 1e-8;
    const double e2_bound = lambda * lambda + 3.0 * lambda_k + 1e-8;

    std::size_t accepted = 0, failures = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        TransformatorResult res;
        try {
            res = transformator_build(outer, inner, 3, 3, seed, lambda);
        } catch (const sampling_error&) {
            continue; // not an accepted realization
        }
        ++accepted;
        if (!transformator_verify(res, lambda).ok) ++failures;
        ToyRealization real;
        real.res = res;
        real.e1 = id_error_1(res.id_code, w2);
        real.e2_literal = id_error_2(res.id_code, w2);
        real.e2_cross = id_error_2_cross(res.id_code, w2);
        if (real.e1 > e1_bound) ++failures;
        if (real.e2_cross > e2_bound) ++failures;
        const auto check = check_simultaneous(res.id_code, res.structure);
        if (!check.simultaneous || check.max_residual > 1e-8) ++failures;
        g_realizations.push_back(std::move(real));
    }
    const double elapsed = seconds_since(t0);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "transformator M=N=3 lambda=0.6, 20 seeds: %zu accepted, e1 <= %.3g, "
                  "cross-pair e2 <= %.3g, residual <= 1e-8 (%zu failures, %.1fs < 60s)",
                  accepted, e1_bound, e2_bound, failures, elapsed);
    report(4, accepted == 20 && failures == 0 && elapsed < 60.0, buf);
}

// 5. Chernov-Hoeffding: empirical tails below the bound on every grid
//    batch; binary_kl(0.5, 0.25) = 0.207519 +- 1e-6.
void criterion_5() {
    const auto rep = check_chernoff(42);
    const bool kl_ok = std::abs(binary_kl(0.5, 0.25) - 0.207519) <= 1e-6;
    report(5, rep.pass() && kl_ok,
           "chernoff: empirical tail <= 2^{-m D} on " + std::to_string(rep.outcomes.size()) +
               " batches of 1e5 trials (" + std::to_string(rep.failures()) +
               " failures); binary_kl(0.5,0.25)=" + format_double(binary_kl(0.5, 0.25)));
}

// 6. Coarse-graining never increases measured distance: 100 seeded random
//    (rho, sigma, E, partition) instances.
void criterion_6() {
    const auto rep = check_d1(3000, 100);
    report(6, rep.pass(),
           "d1 coarse-graining: coarse <= refined + 1e-9 on 100 seeded instances (" +
               std::to_string(rep.failures()) + " failures)");
}

// 7. Conditioning inequalities and the Holevo bound.
void criterion_7() {
    std::size_t trio_failures = 0;
    const std::array<std::size_t, 1> a{0}, b{1}, c{2};
    const std::array<std::size_t, 2> ab{0, 1};
    for (std::uint64_t s = 0; s < 100; ++s) {
        SplitMix64 rng(4000 + s);
        const auto w = random_ccq_channel(2 + rng.next_below(2), 2 + rng.next_below(2), 2, rng);
        const auto gamma =
            channel_state(w, random_distribution(w.x_words(), rng), random_distribution(w.y_words(), rng));
        const double i_ac = quantum_mi(gamma, a, c);
        const double i_bc = quantum_mi(gamma, b, c);
        if (i_ac > conditional_quantum_mi(gamma, a, c, b) + 1e-8) ++trio_failures;
        if (i_bc > conditional_quantum_mi(gamma, b, c, a) + 1e-8) ++trio_failures;
        if (i_ac + i_bc > quantum_mi(gamma, ab, c) + 1e-8) ++trio_failures;
    }
    std::size_t holevo_failures = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        SplitMix64 rng(5000 + s);
        const std::size_t dim = 2 + rng.next_below(2);
        const auto w = random_cq_channel(2 + rng.next_below(2), dim, rng);
        const auto p = random_distribution(w.input_size(), rng);
        const auto e = random_povm(dim, 2 + rng.next_below(3), rng);
        const double measured = classical_mi(joint_from_channel(p, induce_classical(w, e)));
        if (measured > holevo(p, w) + 1e-8) ++holevo_failures;
    }
    report(7, trio_failures == 0 && holevo_failures == 0,
           "conditioning inequalities on 100 channel states (" + std::to_string(trio_failures) +
               " failures) and measured MI <= Holevo chi on 50 triples (" +
               std::to_string(holevo_failures) + " failures)");
}

// 8. Subadditivity at k = 2 with correlated pair inputs; equality on
//    product inputs.
void criterion_8() {
    std::size_t failures = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        SplitMix64 rng(6000 + s);
        const auto w = random_ccq_channel(2, 2, 2, rng);
        // exchangeable correlated pair law for sender 1, product for sender 2
        const auto raw = random_distribution(4, rng);
        std::vector<double> p1(4);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) p1[i * 2 + j] = 0.5 * (raw[i * 2 + j] + raw[j * 2 + i]);
        const auto r = random_distribution(2, rng);
        std::vector<double> p2(4);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) p2[i * 2 + j] = r[i] * r[j];
        if (!subadditivity_check(w, Distribution(p1), Distribution(p2)).holds) ++failures;

        // product inputs achieve equality
        const auto q = random_distribution(2, rng);
        std::vector<double> p1p(4);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) p1p[i * 2 + j] = q[i] * q[j];
        const auto rep = subadditivity_check(w, Distribution(p1p), Distribution(p2));
        if (!rep.holds || std::abs(rep.lhs - rep.rhs) > 1e-8) ++failures;
    }
    report(8, failures == 0,
           "subadditivity at k=2: I(A2;C2) <= 2 I(A;C) + 1e-8 on 50 channels, equality on product "
           "inputs (" +
               std::to_string(failures) + " failures)");
}

// 9. Converse distance chain on every constructed ID code with e1+e2 < 1:
//    min pairwise d1 through the common refinement exceeds 2(1-e1-e2)-1e-8.
void criterion_9() {
    const auto w2 = extend_memoryless(noiseless_channel(2, 2), 2);
    std::size_t qualified = 0, failures = 0;
    for (const auto& real : g_realizations) {
        if (real.e1 + real.e2_literal >= 1.0) continue;
        ++qualified;
        const auto refinement = common_refinement(real.res.id_code, real.res.structure);
        const double floor = 2.0 * (1.0 - real.e1 - real.e2_literal) - 1e-8;
        const auto& code = real.res.id_code;
        for (std::size_t j = 0; j < code.n_count(); ++j) {
            const auto q = dense_distribution(code.dists_y[j], code.y_size, code.k);
            const auto wj = fix_sender_y(w2, q);
            for (std::size_t a = 0; a < code.m_count(); ++a)
                for (std::size_t b = a + 1; b < code.m_count(); ++b) {
                    const auto pa = dense_distribution(code.dists_x[a], code.x_size, code.k);
                    const auto pb = dense_distribution(code.dists_x[b], code.x_size, code.k);
                    if (povm_distance(mix_output(wj, pa), mix_output(wj, pb), refinement) <= floor)
                        ++failures;
                }
        }
        for (std::size_t i = 0; i < code.m_count(); ++i) {
            const auto p = dense_distribution(code.dists_x[i], code.x_size, code.k);
            const auto vi = fix_sender_x(w2, p);
            for (std::size_t a = 0; a < code.n_count(); ++a)
                for (std::size_t b = a + 1; b < code.n_count(); ++b) {
                    const auto qa = dense_distribution(code.dists_y[a], code.y_size, code.k);
                    const auto qb = dense_distribution(code.dists_y[b], code.y_size, code.k);
                    if (povm_distance(mix_output(vi, qa), mix_output(vi, qb), refinement) <= floor)
                        ++failures;
                }
        }
    }
    report(9, qualified > 0 && failures == 0,
           "converse distance chain: min pairwise d1 > 2(1-e1-e2) - 1e-8 under the common "
           "refinement on " +
               std::to_string(qualified) + " constructed codes (" + std::to_string(failures) +
               " failures)");
}

// 10. Determinism of the CLI construction: identical artifacts byte for
//     byte across two runs with the same seed.
void criterion_10(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cqmac_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string channel = (dir / "channel.json").string();
    const std::string code = (dir / "code.json").string();
    save_json(channel, channel_to_json(noiseless_channel(2, 2)));
    save_json(code, code_to_json(perfect_code(noiseless_channel(2, 2))));
    auto run = [&](const std::string& out) {
        const std::string cmd = cli + " build-id " + channel + " --outer " + code + " --inner " +
                                code + " --m 3 --n 3 --seed 11 --lambda 0.6 --out-dir " + out +
                                " >/dev/null 2>/dev/null";
        return std::system(cmd.c_str());
    };
    const int ra = run((dir / "a").string());
    const int rb = run((dir / "b").string());
    bool identical = ra == 0 && rb == 0;
    for (const char* name : {"id_code.json", "structure.json", "report.json"}) {
        if (!identical) break;
        identical = read_file((dir / "a" / name).string()) == read_file((dir / "b" / name).string());
    }
    fs::remove_all(dir);
    report(10, identical,
           std::string("determinism: build-id with fixed seed emits byte-identical artifacts") +
               (ra != 0 || rb != 0 ? " (cli run failed)" : ""));
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (cli.empty()) {
        report(10, false, "determinism: no CLI path supplied (pass it as argv[1])");
    } else {
        criterion_10(cli);
    }
    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
