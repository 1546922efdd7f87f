#pragma once

#include <vector>

#include "repairforge/common.hpp"

namespace repairforge {

// What one helper contributed to a repair. Row indices are 0-based and refer
// to symbols of the helper's payload; formatted output shifts them to 1-based.
struct SurvivorUsage {
    int node = -1;
    std::vector<uint32_t> accessed_rows;  // sorted, distinct
    long downloaded = 0;

    long accessed() const { return static_cast<long>(accessed_rows.size()); }
};

struct RepairReport {
    int failed = -1;
    long alpha = 0;  // sub-packetization of the repaired code
    int r = 1;
    std::vector<SurvivorUsage> survivors;

    long total_accessed() const {
        long t = 0;
        for (const auto& s : survivors) t += s.accessed();
        return t;
    }
    long total_downloaded() const {
        long t = 0;
        for (const auto& s : survivors) t += s.downloaded;
        return t;
    }
    Rational optimal_per_node() const { return Rational(alpha, r); }

    // True iff every helper touches exactly alpha/r symbols.
    bool optimal_access() const {
        for (const auto& s : survivors)
            if (s.accessed() * r != alpha) return false;
        return !survivors.empty();
    }
    bool optimal_bandwidth() const {
        for (const auto& s : survivors)
            if (s.downloaded * r != alpha) return false;
        return !survivors.empty();
    }
};

// Optimal repair bandwidth when contacting d helpers: d*alpha/(d-k+1) symbols
// in total. Decreasing in d, so d = n-1 is the cheapest point.
Rational gamma_star(int n, int k, int d, long alpha);

}  // namespace repairforge
