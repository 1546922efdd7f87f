#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "repairforge/code_spec.hpp"
#include "repairforge/pipelines.hpp"

namespace repairforge {

// Canonical bit packing for every file format: bit i of a stream lives in
// byte i/8 at position i%8 (LSB first); bytes render as lowercase hex.
std::string pack_bits_hex(const BitVector& v);
BitVector unpack_bits_hex(const std::string& hex, size_t len);

// Matrices serialize as one row-major bitstream of rows*cols bits.
std::string matrix_hex(const BitMatrix& m);
BitMatrix matrix_from_hex(const std::string& hex, size_t rows, size_t cols);

uint64_t fnv1a64(std::string_view data);

nlohmann::json spec_to_json(const CodeSpec& spec);
CodeSpec spec_from_json(const nlohmann::json& j);

// 16 hex digits identifying a spec's canonical JSON form.
std::string spec_hash(const CodeSpec& spec);

void save_spec(const CodeSpec& spec, const std::filesystem::path& path,
               const nlohmann::json& lineage = {});

struct LoadedSpec {
    CodeSpec spec;
    nlohmann::json lineage;  // null when absent
};
LoadedSpec load_spec(const std::filesystem::path& path);

// Lineage records written by the transform/pipeline commands.
nlohmann::json transform_lineage(const CodeSpec& base, const TransformConfig& cfg);
nlohmann::json pipeline_manifest(const Algorithm1Result& res, const CodeSpec& base);
nlohmann::json pipeline_manifest(const Algorithm2Result& res, const CodeSpec& base);

// One stored node: `blocks` codeword stripes of alpha symbols each.
struct ShardFile {
    int node = -1;
    int alpha = 0;
    long blocks = 0;
    long message_bits = 0;  // original length before zero padding
    std::string spec_hash;
    std::vector<BitVector> payloads;  // one per block
};

void save_shard(const ShardFile& shard, const std::filesystem::path& path);
ShardFile load_shard(const std::filesystem::path& path);
std::filesystem::path shard_path(const std::filesystem::path& dir, int node);

// Bytes <-> per-block messages of k*alpha bits (zero padded at the tail).
std::vector<BitVector> message_blocks_from_bytes(const std::vector<uint8_t>& bytes,
                                                 size_t block_bits);
std::vector<uint8_t> bytes_from_message_blocks(const std::vector<BitVector>& blocks,
                                               long message_bits);

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);

}  // namespace repairforge
