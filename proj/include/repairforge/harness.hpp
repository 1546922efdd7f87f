#pragma once

#include <random>
#include <string>

#include "repairforge/pipelines.hpp"

namespace repairforge {

// Seed for randomized simulations; REPAIRFORGE_SEED overrides the default so
// every run is reproducible.
uint64_t default_seed();

BitVector random_bits(size_t len, std::mt19937_64& rng);

struct SimulationTable {
    std::string code_name;
    int n = 0, k = 0;
    long alpha = 0;
    int r = 1;
    int trials = 0;
    std::vector<RepairReport> nodes;  // one per node, counts identical across trials

    bool all_optimal_access() const {
        for (const auto& rep : nodes)
            if (!rep.optimal_access()) return false;
        return true;
    }
    bool all_optimal_bandwidth() const {
        for (const auto& rep : nodes)
            if (!rep.optimal_bandwidth()) return false;
        return true;
    }
};

// Repairs every node on `trials` random codewords. A payload mismatch is
// fatal; the returned table aggregates the (deterministic) per-node counts.
SimulationTable simulate_repair_all(const CodeSpec& spec, int trials, uint64_t seed);
SimulationTable simulate_repair_all(const TransformedCode& tc, int trials, uint64_t seed);

std::string format_report_text(const SimulationTable& table);
std::string format_report_csv(const SimulationTable& table);
std::string format_report_json(const SimulationTable& table);

}  // namespace repairforge
