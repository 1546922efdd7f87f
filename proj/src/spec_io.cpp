#include "repairforge/spec_io.hpp"

#include <fstream>

namespace repairforge {

namespace {

constexpr const char* kSpecFormat = "repairforge-spec-v1";
constexpr const char* kShardFormat = "repairforge-shard-v1";

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(errc::parse, "invalid hex digit");
}

}  // namespace

std::string pack_bits_hex(const BitVector& v) {
    static const char* digits = "0123456789abcdef";
    size_t nbytes = (v.size() + 7) / 8;
    std::string out;
    out.reserve(nbytes * 2);
    for (size_t b = 0; b < nbytes; ++b) {
        uint8_t byte = 0;
        for (size_t i = 0; i < 8; ++i) {
            size_t bit = b * 8 + i;
            if (bit < v.size() && v.get(bit)) byte |= uint8_t(1) << i;
        }
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xf]);
    }
    return out;
}

BitVector unpack_bits_hex(const std::string& hex, size_t len) {
    size_t nbytes = (len + 7) / 8;
    require(hex.size() == nbytes * 2, errc::parse, "hex payload has wrong length");
    BitVector v(len);
    for (size_t b = 0; b < nbytes; ++b) {
        uint8_t byte = static_cast<uint8_t>((hex_digit(hex[2 * b]) << 4) | hex_digit(hex[2 * b + 1]));
        for (size_t i = 0; i < 8 && b * 8 + i < len; ++i)
            if ((byte >> i) & 1) v.set(b * 8 + i, true);
    }
    return v;
}

std::string matrix_hex(const BitMatrix& m) {
    BitVector flat(m.rows() * m.cols());
    size_t at = 0;
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) flat.set(at++, m.get(r, c));
    return pack_bits_hex(flat);
}

BitMatrix matrix_from_hex(const std::string& hex, size_t rows, size_t cols) {
    BitVector flat = unpack_bits_hex(hex, rows * cols);
    BitMatrix m(rows, cols);
    size_t at = 0;
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) m.set(r, c, flat.get(at++));
    return m;
}

uint64_t fnv1a64(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

nlohmann::json spec_to_json(const CodeSpec& spec) {
    spec.validate();
    nlohmann::json j;
    j["format"] = kSpecFormat;
    j["name"] = spec.name;
    j["n"] = spec.n;
    j["k"] = spec.k;
    j["alpha"] = spec.alpha;
    j["coding_matrices"] = nlohmann::json::array();
    for (const auto& row : spec.A) {
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& m : row) jr.push_back(matrix_hex(m));
        j["coding_matrices"].push_back(std::move(jr));
    }
    j["repair"] = nlohmann::json::array();
    for (const auto& st : spec.repair) {
        nlohmann::json js;
        if (std::holds_alternative<Naive>(st)) {
            js["type"] = "naive";
        } else if (const auto* rs = std::get_if<RowSelect>(&st)) {
            js["type"] = "rows";
            js["rows"] = rs->rows;
        } else {
            const auto& ph = std::get<PerHelper>(st);
            js["type"] = "matrices";
            nlohmann::json helpers;
            for (const auto& [h, m] : ph.mats) {
                helpers[std::to_string(h)] = {
                    {"rows", m.rows()}, {"bits", matrix_hex(m)}};
            }
            js["helpers"] = std::move(helpers);
        }
        j["repair"].push_back(std::move(js));
    }
    return j;
}

CodeSpec spec_from_json(const nlohmann::json& j) {
    try {
        require(j.at("format").get<std::string>() == kSpecFormat, errc::parse,
                "not a repairforge spec file");
        CodeSpec spec;
        spec.name = j.value("name", "");
        spec.n = j.at("n").get<int>();
        spec.k = j.at("k").get<int>();
        spec.alpha = j.at("alpha").get<int>();
        require(spec.n > spec.k && spec.k > 0 && spec.alpha > 0, errc::parse,
                "spec file has invalid dimensions");
        const auto& cm = j.at("coding_matrices");
        for (const auto& row : cm) {
            std::vector<BitMatrix> mats;
            for (const auto& hex : row)
                mats.push_back(matrix_from_hex(hex.get<std::string>(), spec.alpha, spec.alpha));
            spec.A.push_back(std::move(mats));
        }
        for (const auto& js : j.at("repair")) {
            std::string type = js.at("type").get<std::string>();
            if (type == "naive") {
                spec.repair.push_back(Naive{});
            } else if (type == "rows") {
                RowSelect rs;
                rs.rows = js.at("rows").get<std::vector<uint32_t>>();
                spec.repair.push_back(std::move(rs));
            } else if (type == "matrices") {
                PerHelper ph;
                for (const auto& [key, val] : js.at("helpers").items()) {
                    size_t rows = val.at("rows").get<size_t>();
                    ph.mats[std::stoi(key)] =
                        matrix_from_hex(val.at("bits").get<std::string>(), rows, spec.alpha);
                }
                spec.repair.push_back(std::move(ph));
            } else {
                fail(errc::parse, "unknown repair strategy type: " + type);
            }
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse, std::string("malformed spec file: ") + e.what());
    }
}

std::string spec_hash(const CodeSpec& spec) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(spec_to_json(spec).dump())));
    return buf;
}

void save_spec(const CodeSpec& spec, const std::filesystem::path& path,
               const nlohmann::json& lineage) {
    nlohmann::json j = spec_to_json(spec);
    if (!lineage.is_null()) j["lineage"] = lineage;
    std::ofstream os(path);
    require(os.good(), errc::io, "cannot open " + path.string() + " for writing");
    os << j.dump(1) << "\n";
    require(os.good(), errc::io, "write failed: " + path.string());
}

LoadedSpec load_spec(const std::filesystem::path& path) {
    std::ifstream is(path);
    require(is.good(), errc::io, "cannot open " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse, path.string() + ": " + e.what());
    }
    LoadedSpec out{spec_from_json(j), nlohmann::json()};
    if (j.contains("lineage")) out.lineage = j["lineage"];
    return out;
}

namespace {

nlohmann::json config_json(const TransformConfig& cfg) {
    nlohmann::json j;
    j["targets"] = cfg.targets;
    j["perms"] = cfg.perms;
    j["variant"] =
        cfg.variant == PairingVariant::PairTargets ? "pair-targets" : "pair-remainders";
    j["N"] = cfg.N;
    j["delta"] = cfg.delta;
    return j;
}

}  // namespace

nlohmann::json transform_lineage(const CodeSpec& base, const TransformConfig& cfg) {
    nlohmann::json j;
    j["kind"] = "transform";
    j["base"] = spec_to_json(base);
    j["config"] = config_json(cfg);
    return j;
}

nlohmann::json pipeline_manifest(const Algorithm1Result& res, const CodeSpec& base) {
    nlohmann::json j;
    j["kind"] = "pipeline";
    j["algorithm"] = "alg1";
    j["base"] = spec_to_json(base);
    j["base_hash"] = spec_hash(base);
    j["N"] = res.N;
    j["auto_space_shared"] = res.auto_space_shared;
    j["rounds"] = nlohmann::json::array();
    for (const auto& round : res.rounds) {
        nlohmann::json rj;
        rj["round"] = round.plan.round;
        rj["targets"] = round.plan.targets;
        rj["variant"] = round.plan.variant == PairingVariant::PairTargets ? "pair-targets"
                                                                          : "pair-remainders";
        rj["perms"] = round.plan.perms;
        rj["N"] = round.plan.N;
        rj["delta"] = round.plan.delta;
        rj["alpha"] = round.output.alpha;
        rj["spec_hash"] = spec_hash(round.output);
        j["rounds"].push_back(std::move(rj));
    }
    j["final_hash"] = spec_hash(res.final_spec);
    return j;
}

nlohmann::json pipeline_manifest(const Algorithm2Result& res, const CodeSpec& base) {
    nlohmann::json j;
    j["kind"] = "pipeline";
    j["algorithm"] = "alg2";
    j["base"] = spec_to_json(base);
    j["base_hash"] = spec_hash(base);
    j["input_r1_ok"] = res.input_r1_ok;
    j["forced"] = res.forced;
    j["space_shared"] = res.space_shared;
    if (res.forced && res.input_r1_ok)
        j["note"] = "space-sharing was forced although the mask-shape check passed";
    j["config"] = config_json(res.tc.cfg);
    j["final_hash"] = spec_hash(res.final_spec);
    return j;
}

void save_shard(const ShardFile& shard, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = kShardFormat;
    j["node"] = shard.node;
    j["alpha"] = shard.alpha;
    j["blocks"] = shard.blocks;
    j["message_bits"] = shard.message_bits;
    j["spec_hash"] = shard.spec_hash;
    BitVector all(static_cast<size_t>(shard.alpha) * shard.blocks);
    for (long b = 0; b < shard.blocks; ++b) all.paste(b * shard.alpha, shard.payloads[b]);
    j["payload"] = pack_bits_hex(all);
    std::ofstream os(path);
    require(os.good(), errc::io, "cannot open " + path.string() + " for writing");
    os << j.dump() << "\n";
    require(os.good(), errc::io, "write failed: " + path.string());
}

ShardFile load_shard(const std::filesystem::path& path) {
    std::ifstream is(path);
    require(is.good(), errc::io, "cannot open " + path.string());
    nlohmann::json j;
    try {
        is >> j;
        require(j.at("format").get<std::string>() == kShardFormat, errc::parse,
                "not a repairforge shard file");
        ShardFile s;
        s.node = j.at("node").get<int>();
        s.alpha = j.at("alpha").get<int>();
        s.blocks = j.at("blocks").get<long>();
        s.message_bits = j.at("message_bits").get<long>();
        s.spec_hash = j.at("spec_hash").get<std::string>();
        require(s.alpha > 0 && s.blocks >= 0, errc::parse, "shard file has invalid dimensions");
        BitVector all = unpack_bits_hex(j.at("payload").get<std::string>(),
                                        static_cast<size_t>(s.alpha) * s.blocks);
        for (long b = 0; b < s.blocks; ++b)
            s.payloads.push_back(all.slice(b * s.alpha, s.alpha));
        return s;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse, path.string() + ": " + e.what());
    }
}

std::filesystem::path shard_path(const std::filesystem::path& dir, int node) {
    return dir / ("node_" + std::to_string(node) + ".shard");
}

std::vector<BitVector> message_blocks_from_bytes(const std::vector<uint8_t>& bytes,
                                                 size_t block_bits) {
    require(block_bits > 0, errc::value, "block size must be positive");
    size_t total_bits = bytes.size() * 8;
    size_t nblocks = total_bits == 0 ? 1 : (total_bits + block_bits - 1) / block_bits;
    std::vector<BitVector> blocks;
    for (size_t b = 0; b < nblocks; ++b) {
        BitVector v(block_bits);
        for (size_t i = 0; i < block_bits; ++i) {
            size_t bit = b * block_bits + i;
            if (bit < total_bits && ((bytes[bit / 8] >> (bit % 8)) & 1)) v.set(i, true);
        }
        blocks.push_back(std::move(v));
    }
    return blocks;
}

std::vector<uint8_t> bytes_from_message_blocks(const std::vector<BitVector>& blocks,
                                               long message_bits) {
    require(message_bits % 8 == 0, errc::value, "message length must be whole bytes");
    std::vector<uint8_t> bytes(message_bits / 8, 0);
    long bit = 0;
    for (const auto& block : blocks)
        for (size_t i = 0; i < block.size() && bit < message_bits; ++i, ++bit)
            if (block.get(i)) bytes[bit / 8] |= uint8_t(1) << (bit % 8);
    return bytes;
}

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), errc::io, "cannot open " + path.string());
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(is),
                                std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), errc::io, "cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(os.good(), errc::io, "write failed: " + path.string());
}

}  // namespace repairforge
