#pragma once

#include <optional>
#include <vector>

#include "repairforge/transform.hpp"

namespace repairforge {

struct RoundPlan {
    int round = 0;
    std::vector<int> targets;
    PairingVariant variant = PairingVariant::PairTargets;
    std::vector<std::vector<int>> perms;
    int N = 0;
    int delta = 0;
};

struct RoundArtifact {
    RoundPlan plan;
    TransformedCode tc;
    CodeSpec output;
};

struct Algorithm1Result {
    CodeSpec final_spec;
    std::vector<RoundArtifact> rounds;
    int N = 0;  // segment length, fixed across rounds
    bool auto_space_shared = false;
};

// Repeated conversion that walks a width-r target window across the
// systematic nodes and finishes on the parities, leaving every node with an
// exact alpha/r access repair. Sub-packetization grows to r^ceil(n/r) * N.
// Rounds whose targets are systematic keep the code systematic by
// re-encoding the parity contents instead of the targets.
Algorithm1Result algorithm1(const CodeSpec& base);

struct Algorithm2Result {
    CodeSpec final_spec;
    TransformedCode tc;
    CodeSpec transformed_base;   // the code the conversion ran on
    bool space_shared = false;
    bool input_r1_ok = false;    // verdict of the mask-shape check on the input
    bool forced = false;
};

// Upgrades a code whose systematic nodes already repair efficiently: the two
// halves of the mask-shape precondition decide whether the input is
// space-shared first, then the parities become the targets of one
// conversion. Output sub-packetization is 2x or 4x the input's.
// `force_space_share` takes the space-sharing path even when the mask check
// passes; reports flag the discrepancy so the choice stays visible.
Algorithm2Result algorithm2(const CodeSpec& base, bool force_space_share = false);

// Closed-form description of the strategies algorithm1 installs: node i ends
// up reading the rows whose block index has r-ary digit `digit` equal to
// `value`.
struct DigitSelector {
    int node = -1;
    int digit = 0;
    int value = 0;
};

// Selector each node carries after all rounds of algorithm1 (the last round
// that targeted the node wins).
std::vector<DigitSelector> algorithm1_expected_selectors(int n, int k);

// Rows {w*N + u : digit `digit` of w (r-ary, `rounds` digits) == value}.
std::vector<uint32_t> digit_row_set(int digit, int value, int r, int rounds, int N);

}  // namespace repairforge
