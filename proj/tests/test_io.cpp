#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "cqmac/io.hpp"
#include "cqmac/random_instances.hpp"

using namespace cqmac;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST(IoMatrix, RoundTripIsExact) {
    SplitMix64 rng(131);
    for (int t = 0; t < 20; ++t) {
        const auto m = random_matrix(1 + rng.next_below(5), rng);
        const auto back = matrix_from_json(matrix_to_json(m));
        EXPECT_EQ(back.rows(), m.rows());
        EXPECT_NEAR(max_abs_diff(back, m), 0.0, 0.0); // bit-exact through json doubles
    }
}

TEST(IoMatrix, RejectsMalformedEntries) {
    EXPECT_THROW(matrix_from_json(json::parse("[[1,0],[0,1],[1,0]]")), parse_error);
    EXPECT_THROW(matrix_from_json(json::parse("[[1],[0,1],[1,0],[0,0]]")), parse_error);
    EXPECT_THROW(matrix_from_json(json::parse("{}")), parse_error);
}

TEST(IoChannel, RoundTrip) {
    SplitMix64 rng(132);
    const auto w = random_ccq_channel(2, 3, 2, rng);
    const auto j = channel_to_json(w);
    const auto back = channel_from_json(j);
    EXPECT_EQ(back.x_alphabet().symbols(), w.x_alphabet().symbols());
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 3; ++y)
            EXPECT_NEAR(max_abs_diff(back.output(x, y).matrix(), w.output(x, y).matrix()), 0.0, 0.0);
}

TEST(IoChannel, SchemaVersionEnforced) {
    const auto path = temp_path("cqmac_schema_test.json");
    json j = channel_to_json(noiseless_channel(2, 2));
    j["schema"] = 2;
    save_json(path, j);
    EXPECT_THROW(load_json(path), parse_error);
    j.erase("schema");
    save_json(path, j);
    EXPECT_THROW(load_json(path), parse_error);
    std::filesystem::remove(path);
}

TEST(IoChannel, LoadRejectsInvalidStates) {
    json j = channel_to_json(noiseless_channel(2, 2));
    j["outputs"]["x0,y0"][0][0] = 0.9; // trace 0.9 now
    EXPECT_THROW(channel_from_json(j), validation_error);
}

TEST(IoCode, TransmissionRoundTrip) {
    SplitMix64 rng(133);
    const auto w = random_ccq_channel(2, 2, 2, rng);
    auto c = random_code(w, 2, 3, rng);
    const auto back = code_from_json(code_to_json(c));
    EXPECT_EQ(back.codewords_x, c.codewords_x);
    EXPECT_EQ(back.codewords_y, c.codewords_y);
    for (std::size_t i = 0; i < c.decoders.size(); ++i)
        EXPECT_NEAR(max_abs_diff(back.decoders[i], c.decoders[i]), 0.0, 0.0);
    EXPECT_NEAR(avg_error(back, w), avg_error(c, w), 0.0);
}

TEST(IoCode, IdCodeAndStructureRoundTrip) {
    const auto w = noiseless_channel(2, 2);
    const auto res = transformator_build(perfect_code(w), perfect_code(w), 2, 2, 5, 0.6);
    const auto id_back = id_code_from_json(id_code_to_json(res.id_code));
    EXPECT_EQ(id_back.m_count(), res.id_code.m_count());
    for (std::size_t i = 0; i < res.id_code.identifiers.size(); ++i)
        EXPECT_NEAR(max_abs_diff(id_back.identifiers[i], res.id_code.identifiers[i]), 0.0, 0.0);
    const auto st_back = structure_from_json(structure_to_json(res.structure));
    EXPECT_EQ(st_back.subsets_a, res.structure.subsets_a);
    const auto check = check_simultaneous(id_back, st_back);
    EXPECT_TRUE(check.simultaneous);
}

TEST(IoCode, LoaderDispatchesOnType) {
    const auto w = noiseless_channel(2, 2);
    const auto path = temp_path("cqmac_code_test.json");
    save_json(path, code_to_json(perfect_code(w)));
    const auto lc = load_code(path);
    EXPECT_TRUE(lc.transmission.has_value());
    EXPECT_FALSE(lc.id.has_value());
    std::filesystem::remove(path);
}

TEST(IoDigest, StableAndContentSensitive) {
    EXPECT_EQ(digest_hex("hello"), digest_hex("hello"));
    EXPECT_NE(digest_hex("hello"), digest_hex("hellp"));
    EXPECT_EQ(digest_hex(""), "cbf29ce484222325");
}

TEST(IoRegion, CsvAndFrontierShape) {
    const auto region = compute_region(noiseless_channel(2, 2), 1, 0.25, RegionKind::Rk);
    const auto csv = region_csv(region);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "kind,k,p1,p2,r1,r2,rsum");
    const auto j = frontier_to_json(region);
    EXPECT_EQ(j["kind"], "rk");
    EXPECT_EQ(j["schema"], 1);
    EXPECT_FALSE(j["points"].empty());
    for (const auto& p : j["points"]) EXPECT_EQ(p["bounds"].size(), 3u);
}

TEST(IoJson, SaveLoadDeterminism) {
    const auto path_a = temp_path("cqmac_det_a.json");
    const auto path_b = temp_path("cqmac_det_b.json");
    const auto w = noiseless_channel(2, 2);
    const auto res_a = transformator_build(perfect_code(w), perfect_code(w), 3, 3, 7, 0.6);
    const auto res_b = transformator_build(perfect_code(w), perfect_code(w), 3, 3, 7, 0.6);
    save_json(path_a, id_code_to_json(res_a.id_code));
    save_json(path_b, id_code_to_json(res_b.id_code));
    EXPECT_EQ(read_file(path_a), read_file(path_b));
    std::filesystem::remove(path_a);
    std::filesystem::remove(path_b);
}
