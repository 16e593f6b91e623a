// Command-line surface for the channel laboratory: validation, code
// evaluation, the Transformator construction, rate-region sweeps, and the
// seeded invariant check suites.
//
// Exit codes: 0 pass, 1 invariant violation or incompatibility, 2 parse
// error, 3 sampling exhaustion, 4 budget exceeded.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cqmac/checks.hpp"
#include "cqmac/io.hpp"

using namespace cqmac;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitParse = 2;
constexpr int kExitSampling = 3;
constexpr int kExitBudget = 4;

void apply_env_overrides() {
    auto read = [](const char* name, auto& target) {
        if (const char* v = std::getenv(name))
            target = static_cast<std::decay_t<decltype(target)>>(std::strtod(v, nullptr));
    };
    auto& tol = tolerances();
    read("CQMAC_DIM_CAP", tol.dimension_cap);
    read("CQMAC_MAX_ATTEMPTS", tol.max_attempts);
    read("CQMAC_GRID_BUDGET", tol.grid_budget);
    read("CQMAC_TOL_HERMITIAN", tol.hermitian);
    read("CQMAC_TOL_TRACE", tol.trace_one);
    read("CQMAC_TOL_COMPLETENESS", tol.povm_completeness);
    read("CQMAC_TOL_RECONSTRUCTION", tol.reconstruction);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~Timer() {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::cerr << "elapsed_ms: " << ms << "\n";
    }
};

void print_input(const std::string& tag, const std::string& path) {
    std::cout << "input " << tag << ": " << path << " fnv1a=" << digest_hex(read_file(path)) << "\n";
}

int cmd_validate(const std::string& channel_path) {
    std::cout << "command: validate\n";
    print_input("channel", channel_path);
    const json j = load_json(channel_path);
    const ParsedChannel pc = parse_channel(j);
    std::vector<std::string> items;
    try {
        Alphabet ax(pc.x_alphabet);
        Alphabet ay(pc.y_alphabet);
    } catch (const validation_error& e) {
        items.push_back(e.what());
    }
    for (std::size_t x = 0; x < pc.x_alphabet.size(); ++x)
        for (std::size_t y = 0; y < pc.y_alphabet.size(); ++y) {
            const auto& m = pc.outputs[x * pc.y_alphabet.size() + y];
            for (const auto& v : DensityOperator::violations(m))
                items.push_back("output (" + pc.x_alphabet[x] + "," + pc.y_alphabet[y] + "): " + v);
        }
    if (items.empty()) {
        std::cout << "result: pass (" << pc.x_alphabet.size() << "x" << pc.y_alphabet.size()
                  << " inputs, dim " << pc.dim << ", tol trace "
                  << format_double(tolerances().trace_one) << ", tol hermitian "
                  << format_double(tolerances().hermitian) << ")\n";
        return kExitOk;
    }
    std::cout << "result: fail, " << items.size() << " violation(s)\n";
    for (const auto& it : items) std::cout << "  - " << it << "\n";
    return kExitInvariant;
}

int cmd_eval_code(const std::string& channel_path, const std::string& code_path, int k_flag) {
    std::cout << "command: eval-code\n";
    print_input("channel", channel_path);
    print_input("code", code_path);
    const CCQChannel base = load_channel(channel_path);
    const LoadedCode lc = load_code(code_path);
    const int k = lc.transmission ? lc.transmission->k : lc.id->k;
    if (k_flag > 0 && k_flag != k)
        throw validation_error("--k " + std::to_string(k_flag) + " does not match code block length " +
                               std::to_string(k));
    const CCQChannel wk = k == 1 ? base : extend_memoryless(base, k);
    if (lc.transmission) {
        const auto& c = *lc.transmission;
        const auto rates = rate_report(c.m_count(), c.n_count(), c.k);
        std::cout << "code: transmission k=" << c.k << " M=" << c.m_count() << " N=" << c.n_count()
                  << "\n";
        std::cout << "avg_error: " << format_double(avg_error(c, wk)) << "\n";
        std::cout << "max_error: " << format_double(max_error(c, wk)) << "\n";
        std::cout << "rate_r1: " << format_double(rates.r1_transmission)
                  << " rate_r2: " << format_double(rates.r2_transmission) << "\n";
        if (rates.r1_id && rates.r2_id)
            std::cout << "id_rate_r1: " << format_double(*rates.r1_id)
                      << " id_rate_r2: " << format_double(*rates.r2_id) << "\n";
    } else {
        const auto& c = *lc.id;
        const auto rates = rate_report(c.m_count(), c.n_count(), c.k);
        std::cout << "code: id k=" << c.k << " M=" << c.m_count() << " N=" << c.n_count() << "\n";
        std::cout << "e1: " << format_double(id_error_1(c, wk)) << "\n";
        if (c.m_count() * c.n_count() >= 2)
            std::cout << "e2: " << format_double(id_error_2(c, wk)) << "\n";
        if (c.m_count() >= 2 && c.n_count() >= 2)
            std::cout << "e2_cross: " << format_double(id_error_2_cross(c, wk)) << "\n";
        if (rates.r1_id && rates.r2_id)
            std::cout << "id_rate_r1: " << format_double(*rates.r1_id)
                      << " id_rate_r2: " << format_double(*rates.r2_id) << "\n";
    }
    return kExitOk;
}

int cmd_build_id(const std::string& channel_path, const std::string& outer_path,
                 const std::string& inner_path, std::size_t m, std::size_t n, std::uint64_t seed,
                 double lambda, std::size_t max_attempts, const std::string& out_dir) {
    std::cout << "command: build-id\n";
    print_input("channel", channel_path);
    print_input("outer", outer_path);
    print_input("inner", inner_path);
    std::cout << "config: m=" << m << " n=" << n << " seed=" << seed
              << " lambda=" << format_double(lambda) << " max_attempts="
              << (max_attempts ? max_attempts : tolerances().max_attempts) << "\n";

    const CCQChannel base = load_channel(channel_path);
    const auto outer_loaded = load_code(outer_path);
    const auto inner_loaded = load_code(inner_path);
    if (!outer_loaded.transmission || !inner_loaded.transmission)
        throw validation_error("build-id expects transmission codes as outer and inner inputs");
    const TransmissionCode& outer = *outer_loaded.transmission;
    const TransmissionCode& inner = *inner_loaded.transmission;
    const CCQChannel w_outer = outer.k == 1 ? base : extend_memoryless(base, outer.k);
    const CCQChannel w_inner = inner.k == 1 ? base : extend_memoryless(base, inner.k);
    require_compatible(outer, w_outer);
    require_compatible(inner, w_inner);

    TransformatorResult res;
    try {
        res = transformator_build(outer, inner, m, n, seed, lambda, max_attempts);
    } catch (const sampling_error&) {
        // union-bound diagnosis: what the tail bounds say about feasibility
        const double mu_a = 1.0 / static_cast<double>(inner.m_count());
        const double mu_b = 1.0 / static_cast<double>(inner.n_count());
        const double pa = mu_a < lambda ? chernoff_tail_bound(lambda, mu_a, outer.m_count()) : 1.0;
        const double pb = mu_b < lambda ? chernoff_tail_bound(lambda, mu_b, outer.n_count()) : 1.0;
        const double total = (double(m) - 1.0) * pa + (double(n) - 1.0) * pb;
        std::cout << "sampling failed; union bound (M-1) 2^{-M' D(lambda||1/M'')} + (N-1) "
                     "2^{-N' D(lambda||1/N'')} = "
                  << format_double(total) << (total >= 1.0 ? " >= 1: targets not guaranteed samplable"
                                                           : " < 1: retry with another seed")
                  << "\n";
        throw;
    }
    const auto verify = transformator_verify(res, lambda);
    const double lam_outer = max_error(outer, w_outer);
    const double lam_inner = max_error(inner, w_inner);
    const double lambda_k = transformator_lambda_k(lam_outer, lam_inner);
    const double e1_bound = lam_outer + lam_inner;
    const double e2_bound = lambda * lambda + 3.0 * lambda_k;

    std::cout << "attempts: " << res.attempts << "\n";
    std::cout << "verify: " << (verify.ok ? "pass" : "fail")
              << " max_overlap_a=" << verify.max_overlap_a << "/" << format_double(verify.threshold_a)
              << " max_overlap_b=" << verify.max_overlap_b << "/" << format_double(verify.threshold_b)
              << "\n";
    std::cout << "chernoff pair bounds: a=" << format_double(verify.pair_bound_a)
              << " b=" << format_double(verify.pair_bound_b)
              << " union=" << format_double(verify.union_bound_total) << "\n";
    std::cout << "bound e1 <= " << format_double(e1_bound) << " (lambda_outer + lambda_inner)\n";
    std::cout << "bound e2_cross <= " << format_double(e2_bound) << " (lambda^2 + 3 lambda_k)\n";

    const auto check = check_simultaneous(res.id_code, res.structure);
    std::cout << "simultaneous: " << (check.simultaneous ? "true" : "false")
              << " residual=" << format_double(check.max_residual) << " (tol "
              << format_double(tolerances().reconstruction) << ")\n";

    // brute-force error values whenever the composite dimension permits
    const std::size_t ident_dim = res.id_code.identifiers.front().rows();
    if (ident_dim <= 512) {
        const CCQChannel wm = extend_memoryless(base, res.id_code.k);
        const double e1 = id_error_1(res.id_code, wm);
        std::cout << "e1: " << format_double(e1)
                  << (e1 <= e1_bound + 1e-8 ? " (within bound)" : " (EXCEEDS bound)") << "\n";
        if (m * n >= 2) std::cout << "e2: " << format_double(id_error_2(res.id_code, wm)) << "\n";
        if (m >= 2 && n >= 2) {
            const double e2c = id_error_2_cross(res.id_code, wm);
            std::cout << "e2_cross: " << format_double(e2c)
                      << (e2c <= e2_bound + 1e-8 ? " (within bound)" : " (EXCEEDS bound)") << "\n";
        }
    } else {
        std::cout << "e1/e2: skipped (identifier dimension " << ident_dim << ")\n";
    }

    std::filesystem::create_directories(out_dir);
    const std::string id_path = out_dir + "/id_code.json";
    const std::string st_path = out_dir + "/structure.json";
    const std::string rep_path = out_dir + "/report.json";
    save_json(id_path, id_code_to_json(res.id_code));
    save_json(st_path, structure_to_json(res.structure));
    save_json(rep_path, transformator_report_json(res, verify, seed));
    std::cout << "wrote: " << id_path << " " << st_path << " " << rep_path << "\n";
    return kExitOk;
}

int cmd_region(const std::string& channel_path, int k, const std::string& kind_name,
               double resolution, const std::string& out_dir, bool containment) {
    std::cout << "command: region\n";
    print_input("channel", channel_path);
    const RegionKind kind = kind_name == "rk" ? RegionKind::Rk : RegionKind::Ck;
    std::cout << "config: k=" << k << " kind=" << kind_name
              << " resolution=" << format_double(resolution) << "\n";
    const CCQChannel base = load_channel(channel_path);

    if (containment) {
        const auto rep = containment_check(base, k, resolution);
        std::cout << "containment ck_in_rk: " << (rep.holds() ? "pass" : "FAIL") << " ("
                  << rep.points_checked << " grid points, " << rep.violations.size()
                  << " violations, tol 1e-08)\n";
        for (const auto& v : rep.violations)
            std::cout << "  violation: ck=(" << format_double(v.ck_r1) << ","
                      << format_double(v.ck_r2) << ") rk=(" << format_double(v.rk[0]) << ","
                      << format_double(v.rk[1]) << "," << format_double(v.rk[2]) << ")\n";
        if (!rep.holds()) return kExitInvariant;
    }

    const auto region = compute_region(base, k, resolution, kind);

    double max_r1 = 0.0, max_r2 = 0.0, max_sum = 0.0;
    for (const auto& f : region.frontier) {
        max_r1 = std::max(max_r1, f.bounds[0]);
        max_r2 = std::max(max_r2, f.bounds[1]);
        max_sum =
            std::max(max_sum, kind == RegionKind::Rk ? f.bounds[2] : f.bounds[0] + f.bounds[1]);
    }
    std::cout << "points_evaluated: " << region.support_points.size() << "\n";
    std::cout << "frontier_points: " << region.frontier.size() << "\n";
    std::cout << "max_r1: " << format_double(max_r1) << "\n";
    std::cout << "max_r2: " << format_double(max_r2) << "\n";
    std::cout << "max_sum: " << format_double(max_sum) << "\n";

    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/region.csv";
    const std::string frontier_path = out_dir + "/frontier.json";
    write_file(csv_path, region_csv(region));
    save_json(frontier_path, frontier_to_json(region));
    std::cout << "wrote: " << csv_path << " " << frontier_path << "\n";
    return kExitOk;
}

int cmd_check(const std::string& channel_path, const std::string& suite, std::uint64_t seed,
              const std::string& counterexample_path) {
    std::cout << "command: check\n";
    print_input("channel", channel_path);
    std::cout << "config: suite=" << suite << " seed=" << seed << "\n";
    const CCQChannel base = load_channel(channel_path);

    std::vector<SuiteReport> reports;
    if (suite == "d1" || suite == "all") reports.push_back(check_d1(seed));
    if (suite == "chainrules" || suite == "all") reports.push_back(check_chainrules(base, seed));
    if (suite == "subadd" || suite == "all") reports.push_back(check_subadd(base, seed));
    if (suite == "chernoff" || suite == "all") reports.push_back(check_chernoff(seed));
    if (reports.empty()) throw validation_error("unknown suite: " + suite);

    bool all_pass = true;
    json counterexamples = json::array();
    for (const auto& rep : reports) {
        std::cout << "suite " << rep.suite << ": " << (rep.outcomes.size() - rep.failures()) << "/"
                  << rep.outcomes.size() << " checks passed -> " << (rep.pass() ? "PASS" : "FAIL")
                  << "\n";
        for (const auto& o : rep.outcomes)
            if (!o.pass) {
                std::cout << "  FAIL " << o.name << ": " << o.detail << "\n";
                counterexamples.push_back(o.counterexample);
                all_pass = false;
            }
    }
    if (!all_pass) {
        json dump;
        dump["schema"] = kSchemaVersion;
        dump["type"] = "counterexamples";
        dump["seed"] = seed;
        dump["cases"] = counterexamples;
        save_json(counterexample_path, dump);
        std::cout << "counterexamples: " << counterexample_path << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    apply_env_overrides();
    CLI::App app{"desk-scale laboratory for classical-quantum multiple access channels"};
    app.require_subcommand(1);

    std::string channel_path, code_path, outer_path, inner_path, out_dir = ".",
                                                                 kind_name = "ck", suite = "all",
                                                                 counterexample_path =
                                                                     "counterexamples.json";
    int k = 1, k_flag = 0;
    std::size_t m = 2, n = 2, max_attempts = 0;
    std::uint64_t seed = 1;
    double lambda = 0.5, resolution = 0.1;
    bool containment = false;

    auto* validate = app.add_subcommand("validate", "validate a channel file");
    validate->add_option("channel", channel_path, "channel spec JSON")->required();

    auto* eval = app.add_subcommand("eval-code", "evaluate a code over a channel");
    eval->add_option("channel", channel_path)->required();
    eval->add_option("code", code_path)->required();
    eval->add_option("--k", k_flag, "expected block length (checked against the code file)");

    auto* build = app.add_subcommand("build-id", "run the random ID-code construction");
    build->add_option("channel", channel_path)->required();
    build->add_option("--outer", outer_path, "outer transmission code")->required();
    build->add_option("--inner", inner_path, "inner transmission code")->required();
    build->add_option("--m", m, "number of sender-1 identities")->required();
    build->add_option("--n", n, "number of sender-2 identities")->required();
    build->add_option("--seed", seed, "PRNG seed (SplitMix64)")->required();
    build->add_option("--lambda", lambda, "overlap threshold in (0,1)")->required();
    build->add_option("--max-attempts", max_attempts, "rejection sampling retries per map");
    build->add_option("--out-dir", out_dir, "directory for the emitted artifacts");

    auto* region = app.add_subcommand("region", "sweep a rate region");
    region->add_option("channel", channel_path)->required();
    region->add_option("--k", k, "block length")->required();
    region->add_option("--kind", kind_name, "ck or rk")
        ->check(CLI::IsMember({"ck", "rk"}))
        ->required();
    region->add_option("--resolution", resolution, "simplex grid step")->required();
    region->add_option("--out-dir", out_dir, "directory for CSV and frontier JSON");
    region->add_flag("--containment", containment,
                     "also check Ck containment in Rk on the same grid");

    auto* check = app.add_subcommand("check", "run seeded invariant suites");
    check->add_option("channel", channel_path)->required();
    check->add_option("--suite", suite, "d1, chainrules, subadd, chernoff or all")
        ->check(CLI::IsMember({"d1", "chainrules", "subadd", "chernoff", "all"}));
    check->add_option("--seed", seed, "PRNG seed")->required();
    check->add_option("--out", counterexample_path, "counterexample dump path");

    CLI11_PARSE(app, argc, argv);

    Timer timer;
    try {
        if (validate->parsed()) return cmd_validate(channel_path);
        if (eval->parsed()) return cmd_eval_code(channel_path, code_path, k_flag);
        if (build->parsed())
            return cmd_build_id(channel_path, outer_path, inner_path, m, n, seed, lambda,
                                max_attempts, out_dir);
        if (region->parsed())
            return cmd_region(channel_path, k, kind_name, resolution, out_dir, containment);
        if (check->parsed()) return cmd_check(channel_path, suite, seed, counterexample_path);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const sampling_error& e) {
        std::cerr << "sampling exhausted: " << e.what() << "\n";
        return kExitSampling;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}
