#include "repairforge/harness.hpp"

#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace repairforge {

uint64_t default_seed() {
    if (const char* env = std::getenv("REPAIRFORGE_SEED")) {
        try {
            return std::stoull(env, nullptr, 0);
        } catch (const std::exception&) {
            fail(errc::value, "REPAIRFORGE_SEED is not a number");
        }
    }
    return 0x5eedf0553ull;
}

BitVector random_bits(size_t len, std::mt19937_64& rng) {
    BitVector v(len);
    for (size_t i = 0; i < len; ++i) v.set(i, rng() & 1);
    return v;
}

namespace {

void check_same_counts(const RepairReport& a, const RepairReport& b) {
    bool same = a.survivors.size() == b.survivors.size();
    for (size_t i = 0; same && i < a.survivors.size(); ++i)
        same = a.survivors[i].node == b.survivors[i].node &&
               a.survivors[i].accessed_rows == b.survivors[i].accessed_rows &&
               a.survivors[i].downloaded == b.survivors[i].downloaded;
    require(same, errc::internal, "repair counts changed between trials");
}

template <typename Code, typename EncodeFn, typename RepairFn>
SimulationTable simulate(const Code& code, int n, int k, long alpha, int r, size_t msg_len,
                         const std::string& name, int trials, uint64_t seed, EncodeFn encode,
                         RepairFn repair) {
    require(trials >= 1, errc::value, "simulate_repair_all: at least one trial");
    SimulationTable table;
    table.code_name = name;
    table.n = n;
    table.k = k;
    table.alpha = alpha;
    table.r = r;
    table.trials = trials;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        BitVector msg = random_bits(msg_len, rng);
        Codeword cw = encode(code, msg);
        for (int v = 0; v < n; ++v) {
            auto res = repair(code, v, cw);
            if (!(res.payload == cw.payload[v]))
                fail(errc::internal, "repair of node " + std::to_string(v) + " in " + name +
                                         " returned a wrong payload on trial " +
                                         std::to_string(trial));
            if (trial == 0) table.nodes.push_back(std::move(res.report));
            else check_same_counts(table.nodes[v], res.report);
        }
    }
    return table;
}

}  // namespace

SimulationTable simulate_repair_all(const CodeSpec& spec, int trials, uint64_t seed) {
    return simulate(
        spec, spec.n, spec.k, spec.alpha, spec.r(), static_cast<size_t>(spec.k) * spec.alpha,
        spec.name, trials, seed,
        [](const CodeSpec& s, const BitVector& m) { return s.encode(m); },
        [](const CodeSpec& s, int v, const Codeword& cw) { return s.repair_node(v, cw); });
}

SimulationTable simulate_repair_all(const TransformedCode& tc, int trials, uint64_t seed) {
    return simulate(
        tc, tc.n, tc.k, tc.alpha_out, tc.r, tc.info_len(), tc.base.name + "+t", trials, seed,
        [](const TransformedCode& c, const BitVector& m) { return c.encode(m); },
        [](const TransformedCode& c, int v, const Codeword& cw) { return c.repair_node(v, cw); });
}

namespace {

std::string rows_1based(const std::vector<uint32_t>& rows) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i) os << ',';
        os << rows[i] + 1;
    }
    os << '}';
    return os.str();
}

}  // namespace

std::string format_report_text(const SimulationTable& t) {
    std::ostringstream os;
    os << "code " << t.code_name << "  (n=" << t.n << ", k=" << t.k << ", alpha=" << t.alpha
       << ", r=" << t.r << ")\n";
    os << "optimal per helper: " << Rational(t.alpha, t.r).str() << " symbols, "
       << gamma_star(t.n, t.k, t.n - 1, t.alpha).str() << " total at d=n-1\n";
    for (const auto& rep : t.nodes) {
        os << "node " << rep.failed << ": total accessed=" << rep.total_accessed()
           << " downloaded=" << rep.total_downloaded()
           << (rep.optimal_access() ? "  [optimal access]" : "")
           << (rep.optimal_bandwidth() ? " [optimal bandwidth]" : "") << "\n";
        // Row listings are 1-based here; JSON output keeps them 0-based.
        bool uniform = true;
        for (const auto& s : rep.survivors)
            if (s.accessed_rows != rep.survivors.front().accessed_rows) uniform = false;
        if (uniform && !rep.survivors.empty()) {
            os << "  every helper: rows " << rows_1based(rep.survivors.front().accessed_rows)
               << " download " << rep.survivors.front().downloaded << "\n";
        } else {
            for (const auto& s : rep.survivors)
                os << "  helper " << s.node << ": rows " << rows_1based(s.accessed_rows)
                   << " download " << s.downloaded << "\n";
        }
    }
    return os.str();
}

std::string format_report_csv(const SimulationTable& t) {
    std::ostringstream os;
    os << "schema,1\n";
    os << "code,node,helper,accessed,downloaded,optimal_access,optimal_bandwidth\n";
    for (const auto& rep : t.nodes)
        for (const auto& s : rep.survivors)
            os << t.code_name << ',' << rep.failed << ',' << s.node << ',' << s.accessed() << ','
               << s.downloaded << ',' << (rep.optimal_access() ? 1 : 0) << ','
               << (rep.optimal_bandwidth() ? 1 : 0) << "\n";
    return os.str();
}

std::string format_report_json(const SimulationTable& t) {
    nlohmann::json j;
    j["schema"] = 1;
    j["code"] = t.code_name;
    j["n"] = t.n;
    j["k"] = t.k;
    j["alpha"] = t.alpha;
    j["r"] = t.r;
    j["trials"] = t.trials;
    j["optimal_per_node"] = Rational(t.alpha, t.r).str();
    j["nodes"] = nlohmann::json::array();
    for (const auto& rep : t.nodes) {
        nlohmann::json nj;
        nj["failed"] = rep.failed;
        nj["total_accessed"] = rep.total_accessed();
        nj["total_downloaded"] = rep.total_downloaded();
        nj["optimal_access"] = rep.optimal_access();
        nj["optimal_bandwidth"] = rep.optimal_bandwidth();
        nj["survivors"] = nlohmann::json::array();
        for (const auto& s : rep.survivors) {
            nlohmann::json sj;
            sj["node"] = s.node;
            sj["accessed_rows"] = s.accessed_rows;  // 0-based
            sj["downloaded"] = s.downloaded;
            nj["survivors"].push_back(std::move(sj));
        }
        j["nodes"].push_back(std::move(nj));
    }
    return j.dump(2);
}

}  // namespace repairforge
