#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "repairforge/bitmat.hpp"
#include "repairforge/report.hpp"

namespace repairforge {

// Repair strategies for a single node.
//
// Naive     - rebuild by full reconstruction from any k survivors.
// RowSelect - read the same row set from every survivor.
// PerHelper - a repair matrix per helper; the rank of each matrix is the
//             number of symbols that helper transmits.
struct Naive {
    bool operator==(const Naive&) const = default;
};

struct RowSelect {
    std::vector<uint32_t> rows;  // sorted, distinct, 0-based
    bool operator==(const RowSelect&) const = default;
};

struct PerHelper {
    std::map<int, BitMatrix> mats;  // helper node id -> matrix with alpha columns
    bool operator==(const PerHelper&) const = default;
};

using RepairStrategy = std::variant<Naive, RowSelect, PerHelper>;

inline bool is_naive(const RepairStrategy& s) { return std::holds_alternative<Naive>(s); }

struct Codeword {
    std::vector<BitVector> payload;  // n entries, each of length alpha
};

struct Shard {
    int node = -1;
    BitVector payload;
};

// Precomputed linear repair of one node from all n-1 helpers: the lost
// payload equals `combine` applied to the concatenation of the helpers'
// masked payloads.
struct RepairPlan {
    int failed = -1;
    std::vector<int> helpers;       // ascending node ids
    std::vector<BitMatrix> masks;   // per helper, rows x alpha
    std::vector<long> downloaded;   // per helper, rank of the mask
    std::vector<std::vector<uint32_t>> accessed_rows;  // per helper
    BitMatrix combine;

    BitVector apply(const std::vector<BitVector>& masked) const;
};

// An (n, k) systematic linear code over GF(2) with sub-packetization alpha:
// node j < k stores message slice j, parity node i stores
// sum_j A[i][j] * f_j. All state is immutable after construction.
class CodeSpec {
public:
    int n = 0;
    int k = 0;
    int alpha = 0;
    std::string name;
    std::vector<std::vector<BitMatrix>> A;  // r rows of k coding matrices, each alpha x alpha
    std::vector<RepairStrategy> repair;     // one per node

    int r() const { return n - k; }
    void validate() const;

    // Generator of node v as an alpha x (k*alpha) matrix.
    BitMatrix node_generator(int v) const;
    // All n node generators stacked: (n*alpha) x (k*alpha).
    BitMatrix flattened_generator() const;

    Codeword encode(const BitVector& message) const;
    BitVector node_payload(int v, const BitVector& message) const;

    // Solves for the message from exactly k distinct shards.
    BitVector reconstruct(const std::vector<Shard>& shards) const;

    // nullopt when MDS; otherwise a k-subset whose stacked generator is
    // rank deficient.
    std::optional<std::vector<int>> verify_mds() const;

    RepairPlan repair_plan(int failed) const;

    struct RepairResult {
        BitVector payload;
        RepairReport report;
    };
    // Repairs node `failed` from the other n-1 payloads using its strategy.
    RepairResult repair_node(int failed, const Codeword& cw) const;

    // The strategy's mask for helper j, as a matrix with alpha columns.
    BitMatrix strategy_mask(int failed, int helper) const;
};

// Stacks `copies` independent codewords: sub-packetization becomes
// copies*alpha, coding matrices become block diagonal and strategies
// replicate blockwise.
CodeSpec space_share(const CodeSpec& spec, int copies);

// (p+2, p) array code with alpha = p-1: one row-parity node and one
// diagonal-parity node, XOR only. Repair strategy is naive everywhere.
CodeSpec evenodd(int p);

// The (6, 4) double-parity code with alpha = 8 whose four systematic nodes
// repair by reading half the rows of every survivor.
CodeSpec mdr1_6_4();

// Row sets used by mdr1_6_4 (and by codes derived from it): the indices
// j in [0, 2^bits) whose binary digits satisfy the node's predicate.
std::vector<uint32_t> mdr_row_set(int node, int bits);

// Binary MDS code for arbitrary (n, k): a Cauchy matrix over GF(2^w)
// expanded into w x w binary multiplication matrices; alpha = w. Requires
// n <= 2^w. Repair strategy is naive everywhere.
CodeSpec cauchy_binary_mds(int n, int k, int w);

}  // namespace repairforge
