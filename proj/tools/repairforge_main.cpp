#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "repairforge/harness.hpp"
#include "repairforge/spec_io.hpp"

namespace fs = std::filesystem;
using namespace repairforge;

namespace {

const char* errc_name(errc c) {
    switch (c) {
        case errc::shape: return "shape";
        case errc::value: return "value";
        case errc::parse: return "parse";
        case errc::io: return "io";
        case errc::singular: return "singular";
        case errc::strategy: return "strategy";
        case errc::r1_violation: return "r1-violation";
        case errc::r2_violation: return "r2-violation";
        case errc::not_target: return "not-target";
        case errc::mds: return "mds";
        case errc::internal: return "internal";
    }
    return "unknown";
}

int exit_code_for(errc c) {
    switch (c) {
        case errc::value:
        case errc::shape: return 2;
        case errc::io:
        case errc::parse: return 3;
        case errc::r1_violation:
        case errc::r2_violation:
        case errc::not_target: return 5;
        default: return 4;
    }
}

void emit_error(errc c, const std::string& msg) {
    nlohmann::json j;
    j["error"] = errc_name(c);
    j["message"] = msg;
    std::cerr << j.dump() << "\n";
}

std::vector<int> parse_id_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

CodeSpec load_spec_checked(const std::string& path) { return load_spec(path).spec; }

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream os(path);
    require(os.good(), errc::io, "cannot open " + path + " for writing");
    os << body;
}

// Shards present in a directory, keyed by node id.
std::map<int, ShardFile> collect_shards(const fs::path& dir, const std::string& expect_hash) {
    require(fs::is_directory(dir), errc::io, dir.string() + " is not a directory");
    std::map<int, ShardFile> got;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".shard") continue;
        ShardFile s = load_shard(entry.path());
        require(s.spec_hash == expect_hash, errc::value,
                entry.path().string() + " belongs to a different spec");
        got[s.node] = std::move(s);
    }
    return got;
}

std::string format_table(const SimulationTable& table, const std::string& format) {
    if (format == "csv") return format_report_csv(table);
    if (format == "json") return format_report_json(table);
    return format_report_text(table);
}

int run(int argc, char** argv) {
    CLI::App app{"repairforge: binary MDS erasure codes with low-access repair"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "construct a code spec file");
    std::string gen_family, gen_out = "code.spec";
    int gen_p = 3, gen_n = 9, gen_k = 6, gen_w = 4;
    gen->add_option("family", gen_family, "evenodd | mdr1 | cauchy")->required();
    gen->add_option("--p", gen_p, "evenodd prime");
    gen->add_option("--n", gen_n, "cauchy code length");
    gen->add_option("--k", gen_k, "cauchy data nodes");
    gen->add_option("--w", gen_w, "cauchy field exponent (alpha = w)");
    gen->add_option("-o,--out", gen_out, "output spec path");

    // verify
    auto* verify = app.add_subcommand("verify", "exhaustive MDS check of a spec");
    std::string verify_spec;
    verify->add_option("--spec", verify_spec)->required();

    // encode
    auto* encode = app.add_subcommand("encode", "spread a message file over n shard files");
    std::string enc_spec, enc_in, enc_dir = ".";
    encode->add_option("--spec", enc_spec)->required();
    encode->add_option("--in", enc_in, "message file")->required();
    encode->add_option("--out-dir", enc_dir, "directory for node_<i>.shard files");

    // decode
    auto* decode = app.add_subcommand("decode", "rebuild the message from any k shards");
    std::string dec_spec, dec_dir = ".", dec_out;
    decode->add_option("--spec", dec_spec)->required();
    decode->add_option("--shard-dir", dec_dir);
    decode->add_option("--out", dec_out, "output message file")->required();

    // erase
    auto* erase = app.add_subcommand("erase", "delete shard files (simulated node failures)");
    std::vector<std::string> erase_paths;
    erase->add_option("paths", erase_paths, "shard files to remove")->required();

    // repair
    auto* repair = app.add_subcommand("repair", "rebuild one node from the surviving shards");
    std::string rep_spec, rep_dir = ".", rep_format = "text", rep_report;
    int rep_node = -1;
    repair->add_option("--spec", rep_spec)->required();
    repair->add_option("--shard-dir", rep_dir);
    repair->add_option("--node", rep_node, "node to rebuild")->required();
    repair->add_option("--report-format", rep_format, "text | csv | json");
    repair->add_option("--report-out", rep_report, "report path (default stdout)");

    // transform
    auto* transform = app.add_subcommand("transform", "endow r chosen nodes with exact alpha/r repair");
    std::string tr_spec, tr_out = "out.spec", tr_targets, tr_variant = "pair-targets",
                tr_perms = "auto";
    int tr_N = 0, tr_delta = 0;
    bool tr_auto_share = false;
    transform->add_option("--spec", tr_spec)->required();
    transform->add_option("--targets", tr_targets, "comma-separated node ids (default: parities)");
    transform->add_option("--variant", tr_variant, "pair-targets | pair-remainders");
    transform->add_option("--perms", tr_perms, "auto | id | cyclic");
    transform->add_option("--N", tr_N, "segment length (default: base alpha)");
    transform->add_option("--delta", tr_delta, "segments per payload");
    transform->add_flag("--auto-space-share", tr_auto_share,
                        "space-share two instances first when alpha is odd");
    transform->add_option("-o,--out", tr_out);

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "multi-round conversions");
    std::string pl_which, pl_spec, pl_out = "final.spec", pl_rounds_dir, pl_manifest;
    bool pl_force = false;
    pipeline->add_option("algorithm", pl_which, "alg1 | alg2")->required();
    pipeline->add_option("--spec", pl_spec)->required();
    pipeline->add_option("-o,--out", pl_out);
    pipeline->add_option("--rounds-dir", pl_rounds_dir, "write per-round specs here");
    pipeline->add_option("--manifest", pl_manifest, "write the round manifest here");
    pipeline->add_flag("--force-space-share", pl_force, "alg2: space-share even when not required");

    // report
    auto* report = app.add_subcommand("report", "repair bandwidth/access table");
    std::string rp_spec, rp_format = "text", rp_out;
    int rp_trials = 4;
    report->add_option("--spec", rp_spec)->required();
    report->add_option("--format", rp_format, "text | csv | json");
    report->add_option("--trials", rp_trials);
    report->add_option("-o,--out", rp_out);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        CodeSpec spec;
        if (gen_family == "evenodd") spec = evenodd(gen_p);
        else if (gen_family == "mdr1") spec = mdr1_6_4();
        else if (gen_family == "cauchy") spec = cauchy_binary_mds(gen_n, gen_k, gen_w);
        else fail(errc::value, "unknown family: " + gen_family);
        save_spec(spec, gen_out);
        std::cout << "wrote " << gen_out << " (" << spec.name << ", n=" << spec.n
                  << ", k=" << spec.k << ", alpha=" << spec.alpha << ")\n";
        return 0;
    }

    if (verify->parsed()) {
        CodeSpec spec = load_spec_checked(verify_spec);
        if (auto bad = spec.verify_mds()) {
            std::ostringstream os;
            for (int v : *bad) os << v << " ";
            fail(errc::mds, "subset { " + os.str() + "} cannot reconstruct the message");
        }
        std::cout << "OK: " << spec.name << " is MDS (all k-subsets reconstruct)\n";
        return 0;
    }

    if (encode->parsed()) {
        CodeSpec spec = load_spec_checked(enc_spec);
        auto bytes = read_file_bytes(enc_in);
        size_t block_bits = static_cast<size_t>(spec.k) * spec.alpha;
        auto blocks = message_blocks_from_bytes(bytes, block_bits);
        fs::create_directories(enc_dir);
        std::string hash = spec_hash(spec);
        for (int v = 0; v < spec.n; ++v) {
            ShardFile s;
            s.node = v;
            s.alpha = spec.alpha;
            s.blocks = static_cast<long>(blocks.size());
            s.message_bits = static_cast<long>(bytes.size()) * 8;
            s.spec_hash = hash;
            for (const auto& m : blocks) s.payloads.push_back(spec.node_payload(v, m));
            save_shard(s, shard_path(enc_dir, v));
        }
        std::cout << "wrote " << spec.n << " shards (" << blocks.size() << " block(s)) to "
                  << enc_dir << "\n";
        return 0;
    }

    if (decode->parsed()) {
        CodeSpec spec = load_spec_checked(dec_spec);
        auto shards = collect_shards(dec_dir, spec_hash(spec));
        require(static_cast<int>(shards.size()) >= spec.k, errc::value,
                "need at least k=" + std::to_string(spec.k) + " shards, found " +
                    std::to_string(shards.size()));
        std::vector<const ShardFile*> use;
        for (const auto& [node, s] : shards) {
            if (static_cast<int>(use.size()) < spec.k) use.push_back(&s);
        }
        long blocks = use.front()->blocks;
        std::vector<BitVector> msgs;
        for (long b = 0; b < blocks; ++b) {
            std::vector<Shard> in;
            for (const ShardFile* s : use) in.push_back({s->node, s->payloads[b]});
            msgs.push_back(spec.reconstruct(in));
        }
        write_file_bytes(dec_out, bytes_from_message_blocks(msgs, use.front()->message_bits));
        std::cout << "decoded " << use.front()->message_bits / 8 << " bytes from " << spec.k
                  << " shards\n";
        return 0;
    }

    if (erase->parsed()) {
        for (const auto& p : erase_paths) {
            (void)load_shard(p);  // refuse to delete files that are not shards
            require(fs::remove(p), errc::io, "could not remove " + p);
            std::cout << "erased " << p << "\n";
        }
        return 0;
    }

    if (repair->parsed()) {
        CodeSpec spec = load_spec_checked(rep_spec);
        require(rep_node >= 0 && rep_node < spec.n, errc::value, "node id out of range");
        auto shards = collect_shards(rep_dir, spec_hash(spec));
        require(shards.find(rep_node) == shards.end(), errc::value,
                "node " + std::to_string(rep_node) + " is still present; erase it first");
        long blocks = shards.empty() ? 0 : shards.begin()->second.blocks;
        require(static_cast<int>(shards.size()) >= spec.k, errc::value,
                "not enough survivors to repair");

        ShardFile rebuilt;
        rebuilt.node = rep_node;
        rebuilt.alpha = spec.alpha;
        rebuilt.blocks = blocks;
        rebuilt.message_bits = shards.begin()->second.message_bits;
        rebuilt.spec_hash = spec_hash(spec);

        bool full_helpers = static_cast<int>(shards.size()) == spec.n - 1;
        RepairReport report;
        for (long b = 0; b < blocks; ++b) {
            if (full_helpers) {
                Codeword cw;
                cw.payload.assign(spec.n, BitVector(spec.alpha));
                for (const auto& [node, s] : shards) cw.payload[node] = s.payloads[b];
                auto res = spec.repair_node(rep_node, cw);
                rebuilt.payloads.push_back(std::move(res.payload));
                if (b == 0) report = std::move(res.report);
            } else {
                // Degraded mode: fewer than n-1 survivors, fall back to
                // reconstruction from any k of them.
                std::vector<Shard> in;
                for (const auto& [node, s] : shards) {
                    if (static_cast<int>(in.size()) == spec.k) break;
                    in.push_back({node, s.payloads[b]});
                }
                BitVector msg = spec.reconstruct(in);
                rebuilt.payloads.push_back(spec.node_payload(rep_node, msg));
                if (b == 0) {
                    report.failed = rep_node;
                    report.alpha = spec.alpha;
                    report.r = spec.r();
                    for (const auto& sh : in) {
                        std::vector<uint32_t> rows(spec.alpha);
                        std::iota(rows.begin(), rows.end(), 0u);
                        report.survivors.push_back({sh.node, rows, spec.alpha});
                    }
                }
            }
        }
        save_shard(rebuilt, shard_path(rep_dir, rep_node));

        SimulationTable table;
        table.code_name = spec.name;
        table.n = spec.n;
        table.k = spec.k;
        table.alpha = spec.alpha;
        table.r = spec.r();
        table.trials = 1;
        table.nodes.push_back(report);
        write_text(rep_report, format_table(table, rep_format));
        if (!rep_report.empty()) std::cout << "rebuilt node " << rep_node << "\n";
        return 0;
    }

    if (transform->parsed()) {
        CodeSpec spec = load_spec_checked(tr_spec);
        if (spec.alpha % 2 != 0) {
            require(tr_auto_share, errc::shape,
                    "base sub-packetization is odd; pass --auto-space-share");
            spec = space_share(spec, 2);
        }
        TransformConfig cfg;
        if (tr_targets.empty())
            for (int v = spec.k; v < spec.n; ++v) cfg.targets.push_back(v);
        else cfg.targets = parse_id_list(tr_targets);
        cfg.variant = tr_variant == "pair-remainders" ? PairingVariant::PairRemainders
                                                      : PairingVariant::PairTargets;
        cfg.N = tr_N;
        cfg.delta = tr_delta;
        int r = spec.r();
        if (tr_perms == "id") {
            cfg.perms.assign(r, std::vector<int>(r));
            for (int l = 0; l < r; ++l)
                for (int j = 0; j < r; ++j) cfg.perms[l][j] = j;
        } else if (tr_perms == "cyclic") {
            cfg.perms.assign(r, std::vector<int>(r));
            for (int l = 0; l < r; ++l)
                for (int j = 0; j < r; ++j) cfg.perms[l][j] = (l + j) % r;
        } else {
            require(tr_perms == "auto", errc::value, "unknown --perms choice: " + tr_perms);
        }
        TransformedCode tc = apply_transform(spec, cfg);
        CodeSpec out = tc.to_systematic_spec();
        save_spec(out, tr_out, transform_lineage(spec, tc.cfg));
        std::cout << "wrote " << tr_out << " (alpha " << spec.alpha << " -> " << out.alpha
                  << ")\n";
        return 0;
    }

    if (pipeline->parsed()) {
        CodeSpec spec = load_spec_checked(pl_spec);
        if (pl_which == "alg1") {
            Algorithm1Result res = algorithm1(spec);
            nlohmann::json manifest = pipeline_manifest(res, spec);
            save_spec(res.final_spec, pl_out, manifest);
            if (!pl_rounds_dir.empty()) {
                fs::create_directories(pl_rounds_dir);
                for (const auto& round : res.rounds)
                    save_spec(round.output,
                              fs::path(pl_rounds_dir) /
                                  ("round_" + std::to_string(round.plan.round + 1) + ".spec"));
            }
            if (!pl_manifest.empty()) write_text(pl_manifest, manifest.dump(1) + "\n");
            std::cout << "wrote " << pl_out << " (alpha=" << res.final_spec.alpha << " after "
                      << res.rounds.size() << " rounds)\n";
        } else if (pl_which == "alg2") {
            Algorithm2Result res = algorithm2(spec, pl_force);
            nlohmann::json manifest = pipeline_manifest(res, spec);
            save_spec(res.final_spec, pl_out, manifest);
            if (!pl_manifest.empty()) write_text(pl_manifest, manifest.dump(1) + "\n");
            std::cout << "wrote " << pl_out << " (alpha=" << res.final_spec.alpha
                      << (res.space_shared ? ", space-shared input" : "") << ")\n";
        } else {
            fail(errc::value, "unknown pipeline: " + pl_which);
        }
        return 0;
    }

    if (report->parsed()) {
        CodeSpec spec = load_spec_checked(rp_spec);
        SimulationTable table = simulate_repair_all(spec, rp_trials, default_seed());
        write_text(rp_out, format_table(table, rp_format));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        emit_error(e.code(), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        emit_error(errc::internal, e.what());
        return 4;
    }
}
