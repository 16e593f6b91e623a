#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqmac/channel.hpp"
#include "cqmac/coding.hpp"
#include "cqmac/regions.hpp"
#include "cqmac/transforms.hpp"

namespace cqmac {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---- files ----------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot write file: " + path);
    out << content;
}

// FNV-1a 64-bit content digest, hex encoded.
inline std::string digest_hex(const std::string& content) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : content) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json load_json(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("json parse failed: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_number_integer() ||
        j["schema"].get<int>() != kSchemaVersion)
        throw parse_error(path + ": missing or unsupported schema version");
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

// ---- matrices ---------------------------------------------------------------

// Shared encoding: row-major array of [re, im] pairs.
inline json matrix_to_json(const ComplexMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return out;
}

inline ComplexMatrix matrix_from_json(const json& j, std::size_t expected_dim = 0) {
    if (!j.is_array()) throw parse_error("matrix: expected an array of [re, im] pairs");
    const std::size_t len = j.size();
    std::size_t dim = expected_dim;
    if (dim == 0) {
        dim = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(len))));
        if (dim * dim != len) throw parse_error("matrix: entry count is not a perfect square");
    } else if (dim * dim != len) {
        throw parse_error("matrix: entry count does not match expected dimension");
    }
    ComplexMatrix m(dim, dim);
    for (std::size_t idx = 0; idx < len; ++idx) {
        const auto& e = j[idx];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw parse_error("matrix: entries must be [re, im] pairs");
        m(idx / dim, idx % dim) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

// ---- channels ---------------------------------------------------------------

inline json channel_to_json(const CCQChannel& w) {
    if (w.k() != 1) throw validation_error("channel files store base (k = 1) channels only");
    json j;
    j["schema"] = kSchemaVersion;
    j["x_alphabet"] = w.x_alphabet().symbols();
    j["y_alphabet"] = w.y_alphabet().symbols();
    j["dim"] = w.base_dim();
    json outs = json::object();
    for (std::size_t x = 0; x < w.x_alphabet().size(); ++x)
        for (std::size_t y = 0; y < w.y_alphabet().size(); ++y)
            outs[w.x_alphabet().symbol(x) + "," + w.y_alphabet().symbol(y)] =
                matrix_to_json(w.output(x, y).matrix());
    j["outputs"] = std::move(outs);
    return j;
}

// Structural parse of a channel file; density-operator invariants are only
// checked when `validate` is set so the validate command can itemize them.
struct ParsedChannel {
    std::vector<std::string> x_alphabet, y_alphabet;
    std::size_t dim = 0;
    std::vector<ComplexMatrix> outputs; // x * |Y| + y
};

inline ParsedChannel parse_channel(const json& j) {
    for (const char* key : {"x_alphabet", "y_alphabet", "dim", "outputs"})
        if (!j.contains(key)) throw parse_error(std::string("channel: missing field ") + key);
    ParsedChannel pc;
    pc.x_alphabet = j["x_alphabet"].get<std::vector<std::string>>();
    pc.y_alphabet = j["y_alphabet"].get<std::vector<std::string>>();
    pc.dim = j["dim"].get<std::size_t>();
    if (pc.x_alphabet.empty() || pc.y_alphabet.empty() || pc.dim == 0)
        throw parse_error("channel: empty alphabet or zero dimension");
    const auto& outs = j["outputs"];
    if (!outs.is_object()) throw parse_error("channel: outputs must be an object");
    pc.outputs.resize(pc.x_alphabet.size() * pc.y_alphabet.size(), ComplexMatrix());
    std::vector<bool> seen(pc.outputs.size(), false);
    for (std::size_t x = 0; x < pc.x_alphabet.size(); ++x)
        for (std::size_t y = 0; y < pc.y_alphabet.size(); ++y) {
            const std::string key = pc.x_alphabet[x] + "," + pc.y_alphabet[y];
            if (!outs.contains(key)) throw parse_error("channel: missing output for (" + key + ")");
            pc.outputs[x * pc.y_alphabet.size() + y] = matrix_from_json(outs[key], pc.dim);
            seen[x * pc.y_alphabet.size() + y] = true;
        }
    return pc;
}

inline CCQChannel channel_from_json(const json& j) {
    auto pc = parse_channel(j);
    std::vector<DensityOperator> outs;
    for (auto& m : pc.outputs) outs.emplace_back(std::move(m)); // validates each state
    return CCQChannel(Alphabet(std::move(pc.x_alphabet)), Alphabet(std::move(pc.y_alphabet)), pc.dim,
                      std::move(outs));
}

inline CCQChannel load_channel(const std::string& path) { return channel_from_json(load_json(path)); }

// ---- codes --------------------------------------------------------------------

inline json words_to_json(const std::vector<Word>& words) {
    json out = json::array();
    for (const auto& w : words) out.push_back(w);
    return out;
}

inline std::vector<Word> words_from_json(const json& j) {
    if (!j.is_array()) throw parse_error("codewords: expected array");
    std::vector<Word> out;
    for (const auto& e : j) out.push_back(e.get<Word>());
    return out;
}

inline json code_to_json(const TransmissionCode& c) {
    json j;
    j["schema"] = kSchemaVersion;
    j["type"] = "transmission";
    j["k"] = c.k;
    j["x_size"] = c.x_size;
    j["y_size"] = c.y_size;
    j["codewords_x"] = words_to_json(c.codewords_x);
    j["codewords_y"] = words_to_json(c.codewords_y);
    json ds = json::array();
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            ds.push_back(json{{"m", m}, {"n", n}, {"matrix", matrix_to_json(c.decoder(m, n))}});
    j["decoders"] = std::move(ds);
    if (c.failure_decoder) j["failure"] = matrix_to_json(*c.failure_decoder);
    return j;
}

inline TransmissionCode code_from_json(const json& j) {
    if (!j.contains("type") || j["type"] != "transmission")
        throw parse_error("code: not a transmission code file");
    TransmissionCode c;
    c.k = j.at("k").get<int>();
    c.x_size = j.at("x_size").get<std::size_t>();
    c.y_size = j.at("y_size").get<std::size_t>();
    c.codewords_x = words_from_json(j.at("codewords_x"));
    c.codewords_y = words_from_json(j.at("codewords_y"));
    c.decoders.assign(c.m_count() * c.n_count(), ComplexMatrix());
    std::vector<bool> seen(c.decoders.size(), false);
    for (const auto& d : j.at("decoders")) {
        const std::size_t m = d.at("m").get<std::size_t>();
        const std::size_t n = d.at("n").get<std::size_t>();
        if (m >= c.m_count() || n >= c.n_count() || seen[m * c.n_count() + n])
            throw parse_error("code: bad decoder label");
        c.decoders[m * c.n_count() + n] = matrix_from_json(d.at("matrix"));
        seen[m * c.n_count() + n] = true;
    }
    for (bool s : seen)
        if (!s) throw parse_error("code: missing decoder");
    if (j.contains("failure")) c.failure_decoder = matrix_from_json(j["failure"]);
    validate_code(c);
    return c;
}

inline json sparse_dist_to_json(const SparseDist& d) {
    return json{{"support", words_to_json(d.support())}, {"weights", d.weights()}};
}

inline SparseDist sparse_dist_from_json(const json& j) {
    return SparseDist(words_from_json(j.at("support")), j.at("weights").get<std::vector<double>>());
}

inline json id_code_to_json(const IDCode& c) {
    json j;
    j["schema"] = kSchemaVersion;
    j["type"] = "id";
    j["k"] = c.k;
    j["x_size"] = c.x_size;
    j["y_size"] = c.y_size;
    json dx = json::array(), dy = json::array();
    for (const auto& d : c.dists_x) dx.push_back(sparse_dist_to_json(d));
    for (const auto& d : c.dists_y) dy.push_back(sparse_dist_to_json(d));
    j["dists_x"] = std::move(dx);
    j["dists_y"] = std::move(dy);
    json is = json::array();
    for (std::size_t m = 0; m < c.m_count(); ++m)
        for (std::size_t n = 0; n < c.n_count(); ++n)
            is.push_back(json{{"m", m}, {"n", n}, {"matrix", matrix_to_json(c.identifier(m, n))}});
    j["identifiers"] = std::move(is);
    return j;
}

inline IDCode id_code_from_json(const json& j) {
    if (!j.contains("type") || j["type"] != "id") throw parse_error("code: not an id code file");
    IDCode c;
    c.k = j.at("k").get<int>();
    c.x_size = j.at("x_size").get<std::size_t>();
    c.y_size = j.at("y_size").get<std::size_t>();
    for (const auto& d : j.at("dists_x")) c.dists_x.push_back(sparse_dist_from_json(d));
    for (const auto& d : j.at("dists_y")) c.dists_y.push_back(sparse_dist_from_json(d));
    c.identifiers.assign(c.m_count() * c.n_count(), ComplexMatrix());
    std::vector<bool> seen(c.identifiers.size(), false);
    for (const auto& d : j.at("identifiers")) {
        const std::size_t m = d.at("m").get<std::size_t>();
        const std::size_t n = d.at("n").get<std::size_t>();
        if (m >= c.m_count() || n >= c.n_count() || seen[m * c.n_count() + n])
            throw parse_error("id code: bad identifier label");
        c.identifiers[m * c.n_count() + n] = matrix_from_json(d.at("matrix"));
        seen[m * c.n_count() + n] = true;
    }
    for (bool s : seen)
        if (!s) throw parse_error("id code: missing identifier");
    validate_id_code(c);
    return c;
}

inline json structure_to_json(const SimultaneousStructure& s) {
    json j;
    j["schema"] = kSchemaVersion;
    j["type"] = "structure";
    j["r_count"] = s.r_count;
    j["s_count"] = s.s_count;
    json es = json::array();
    for (std::size_t r = 0; r < s.r_count; ++r)
        for (std::size_t t = 0; t < s.s_count; ++t)
            es.push_back(json{{"r", r}, {"s", t}, {"matrix", matrix_to_json(s.element(r, t))}});
    j["refinement"] = std::move(es);
    j["subsets_a"] = s.subsets_a;
    j["subsets_b"] = s.subsets_b;
    return j;
}

inline SimultaneousStructure structure_from_json(const json& j) {
    if (!j.contains("type") || j["type"] != "structure")
        throw parse_error("structure: wrong file type");
    SimultaneousStructure s;
    s.r_count = j.at("r_count").get<std::size_t>();
    s.s_count = j.at("s_count").get<std::size_t>();
    s.refinement.assign(s.r_count * s.s_count, ComplexMatrix());
    std::vector<bool> seen(s.refinement.size(), false);
    for (const auto& e : j.at("refinement")) {
        const std::size_t r = e.at("r").get<std::size_t>();
        const std::size_t t = e.at("s").get<std::size_t>();
        if (r >= s.r_count || t >= s.s_count || seen[r * s.s_count + t])
            throw parse_error("structure: bad element label");
        s.refinement[r * s.s_count + t] = matrix_from_json(e.at("matrix"));
        seen[r * s.s_count + t] = true;
    }
    for (bool b : seen)
        if (!b) throw parse_error("structure: missing element");
    s.subsets_a = j.at("subsets_a").get<std::vector<std::vector<std::size_t>>>();
    s.subsets_b = j.at("subsets_b").get<std::vector<std::vector<std::size_t>>>();
    return s;
}

// Generic code-file loader used by eval-code.
struct LoadedCode {
    std::optional<TransmissionCode> transmission;
    std::optional<IDCode> id;
};

inline LoadedCode load_code(const std::string& path) {
    const json j = load_json(path);
    if (!j.contains("type")) throw parse_error("code: missing type");
    LoadedCode lc;
    if (j["type"] == "transmission")
        lc.transmission = code_from_json(j);
    else if (j["type"] == "id")
        lc.id = id_code_from_json(j);
    else
        throw parse_error("code: unknown type " + j["type"].get<std::string>());
    return lc;
}

// ---- transformator report -----------------------------------------------------

inline json transformator_report_json(const TransformatorResult& res,
                                      const TransformatorVerifyReport& rep, std::uint64_t seed) {
    json j;
    j["schema"] = kSchemaVersion;
    j["type"] = "transformator_report";
    j["seed"] = seed;
    j["lambda"] = res.lambda;
    j["m"] = res.maps.maps_a.size();
    j["n"] = res.maps.maps_b.size();
    j["m_prime"] = res.m_prime;
    j["n_prime"] = res.n_prime;
    j["m_double"] = res.m_double;
    j["n_double"] = res.n_double;
    j["attempts"] = res.attempts;
    j["maps_a"] = res.maps.maps_a;
    j["maps_b"] = res.maps.maps_b;
    j["overlap_a"] = res.overlap_a;
    j["overlap_b"] = res.overlap_b;
    j["verify"] = json{{"ok", rep.ok},
                       {"max_overlap_a", rep.max_overlap_a},
                       {"max_overlap_b", rep.max_overlap_b},
                       {"threshold_a", rep.threshold_a},
                       {"threshold_b", rep.threshold_b},
                       {"pair_bound_a", rep.pair_bound_a},
                       {"pair_bound_b", rep.pair_bound_b},
                       {"union_bound_total", rep.union_bound_total}};
    return j;
}

// ---- regions --------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string region_csv(const RateRegion& region) {
    std::ostringstream out;
    const bool rk = region.kind == RegionKind::Rk;
    out << "kind,k,p1,p2,r1,r2" << (rk ? ",rsum" : "") << "\n";
    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ';';
            s += format_double(v[i]);
        }
        return s;
    };
    for (const auto& p : region.support_points) {
        out << (rk ? "rk" : "ck") << ',' << region.k << ',' << join(p.p1) << ',' << join(p.p2) << ','
            << format_double(p.bounds[0]) << ',' << format_double(p.bounds[1]);
        if (rk) out << ',' << format_double(p.bounds[2]);
        out << "\n";
    }
    return out.str();
}

inline json frontier_to_json(const RateRegion& region) {
    json j;
    j["schema"] = kSchemaVersion;
    j["type"] = "frontier";
    j["kind"] = region.kind == RegionKind::Rk ? "rk" : "ck";
    j["k"] = region.k;
    j["resolution"] = region.resolution;
    j["refinement_evals"] = region.refinement_evals;
    json pts = json::array();
    for (const auto& p : region.frontier)
        pts.push_back(json{{"p1", p.p1}, {"p2", p.p2}, {"bounds", p.bounds}});
    j["points"] = std::move(pts);
    return j;
}

} // namespace cqmac
