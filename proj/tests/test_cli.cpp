// End-to-end exercises of the cqmac binary; argv[1] supplies its path.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cqmac/io.hpp"
#include "cqmac/random_instances.hpp"

using namespace cqmac;

namespace {

std::string g_cli_path;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class CliEnv : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() / "cqmac_cli_test";
        std::filesystem::create_directories(dir_);
        channel_ = (dir_ / "channel.json").string();
        save_json(channel_, channel_to_json(noiseless_channel(2, 2)));
        code_ = (dir_ / "code.json").string();
        save_json(code_, code_to_json(perfect_code(noiseless_channel(2, 2))));
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::filesystem::path dir_;
    std::string channel_, code_;
};

} // namespace

TEST_F(CliEnv, ValidateAcceptsGoodChannel) {
    const auto r = run_cli("validate " + channel_);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("result: pass"), std::string::npos);
}

TEST_F(CliEnv, ValidateItemizesInvariantViolations) {
    json j = channel_to_json(noiseless_channel(2, 2));
    j["outputs"]["x0,y0"][0][0] = 0.9;          // trace now 0.9
    j["outputs"]["x0,y1"][2] = json::array({0.3, 0.0}); // hermiticity broken
    const std::string bad = (dir_ / "bad.json").string();
    save_json(bad, j);
    const auto r = run_cli("validate " + bad);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.out.find("unit trace"), std::string::npos);
    EXPECT_NE(r.out.find("hermitian"), std::string::npos);
}

TEST_F(CliEnv, ValidateRejectsMalformedJson) {
    const std::string broken = (dir_ / "broken.json").string();
    write_file(broken, "{ not json");
    EXPECT_EQ(run_cli("validate " + broken).exit_code, 2);
    const std::string wrong_schema = (dir_ / "schema.json").string();
    write_file(wrong_schema, "{\"schema\": 99}");
    EXPECT_EQ(run_cli("validate " + wrong_schema).exit_code, 2);
}

TEST_F(CliEnv, EvalCodeReportsErrorsAndRates) {
    const auto r = run_cli("eval-code " + channel_ + " " + code_);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("avg_error: 0"), std::string::npos);
    EXPECT_NE(r.out.find("max_error: 0"), std::string::npos);
    EXPECT_NE(r.out.find("rate_r1: 1"), std::string::npos);
    // block-length mismatch is an incompatibility
    EXPECT_EQ(run_cli("eval-code " + channel_ + " " + code_ + " --k 2").exit_code, 1);
}

TEST_F(CliEnv, BuildIdIsDeterministicByteForByte) {
    const std::string out_a = (dir_ / "a").string(), out_b = (dir_ / "b").string();
    const std::string args = " --outer " + code_ + " --inner " + code_ +
                             " --m 3 --n 3 --seed 7 --lambda 0.6 --out-dir ";
    const auto ra = run_cli("build-id " + channel_ + args + out_a);
    const auto rb = run_cli("build-id " + channel_ + args + out_b);
    ASSERT_EQ(ra.exit_code, 0);
    ASSERT_EQ(rb.exit_code, 0);
    // stdout is deterministic up to the differing out-dir paths on the last line
    EXPECT_EQ(ra.out.substr(0, ra.out.rfind("wrote:")), rb.out.substr(0, rb.out.rfind("wrote:")));
    for (const char* name : {"id_code.json", "structure.json", "report.json"})
        EXPECT_EQ(read_file(out_a + "/" + name), read_file(out_b + "/" + name)) << name;
    EXPECT_NE(ra.out.find("simultaneous: true"), std::string::npos);
}

TEST_F(CliEnv, BuildIdSamplingExhaustionExitsThree) {
    // 17 pairwise nearly-disjoint maps [2] -> [2] cannot exist
    const auto r = run_cli("build-id " + channel_ + " --outer " + code_ + " --inner " + code_ +
                           " --m 17 --n 2 --seed 1 --lambda 0.4 --out-dir " + (dir_ / "x").string());
    EXPECT_EQ(r.exit_code, 3);
}

TEST_F(CliEnv, RegionEmitsCsvAndFrontier) {
    const std::string out = (dir_ / "region").string();
    const auto r = run_cli("region " + channel_ +
                           " --k 1 --kind rk --resolution 0.2 --containment --out-dir " + out);
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("max_sum: 2"), std::string::npos);
    EXPECT_NE(r.out.find("containment ck_in_rk: pass"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(out + "/region.csv"));
    EXPECT_TRUE(std::filesystem::exists(out + "/frontier.json"));
    const auto frontier = load_json(out + "/frontier.json");
    EXPECT_EQ(frontier["kind"], "rk");
}

TEST_F(CliEnv, RegionBudgetExceededExitsFour) {
    // simplex grids at k=2 and step 0.05 need ~3.1M points > 1e6 budget
    const auto r = run_cli("region " + channel_ + " --k 2 --kind ck --resolution 0.05 --out-dir " +
                           (dir_ / "r2").string());
    EXPECT_EQ(r.exit_code, 4);
}

TEST_F(CliEnv, CheckSuitesPass) {
    const auto r = run_cli("check " + channel_ + " --suite d1 --seed 11");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("suite d1: 100/100 checks passed -> PASS"), std::string::npos);
    const auto r2 = run_cli("check " + channel_ + " --suite subadd --seed 3");
    EXPECT_EQ(r2.exit_code, 0);
}

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    if (argc > 1) g_cli_path = argv[1];
    if (g_cli_path.empty()) {
        std::fprintf(stderr, "usage: cli_tests <path-to-cqmac-binary>\n");
        return 1;
    }
    return RUN_ALL_TESTS();
}
