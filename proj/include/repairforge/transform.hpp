#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repairforge/code_spec.hpp"
#include "repairforge/pairing.hpp"

namespace repairforge {

// PairTargets rewrites the chosen nodes' own contents; PairRemainders leaves
// them untouched and re-encodes a set of other nodes instead, which keeps
// systematic nodes raw when the targets are systematic.
enum class PairingVariant { PairTargets, PairRemainders };

struct TransformConfig {
    std::vector<int> targets;             // r distinct node ids
    std::vector<std::vector<int>> perms;  // r permutations of [0,r); empty = pick default
    PairingVariant variant = PairingVariant::PairTargets;
    int N = 0;      // even segment length; 0 = base alpha
    int delta = 0;  // base alpha = delta * N; 0 = derive
};

// Block decomposition of one node's repair masks, or where it first fails.
struct R1Result {
    bool ok = false;
    bool naive = false;
    int bad_helper = -1;
    BlockMismatch mismatch{};
    // helper node id (position = helper order, ascending, skipping the node)
    std::vector<int> helpers;
    std::vector<std::vector<BitMatrix>> blocks;  // per helper, delta half-blocks
};

struct R2Result {
    bool ok = false;
    bool symmetric_perms = false;  // pi_l(j) == pi_j(l) for all l, j
    bool constant_masks = false;   // same mask at every target helper
};

R1Result check_R1(const CodeSpec& spec, int node, int N, int delta);
R2Result check_R2(const CodeSpec& spec, const TransformConfig& cfg, int node);

// The output of the three-step conversion: r stacked instances of the base
// code with the target nodes' instance rows permuted and pairwise combined.
// Information coordinates are instance-major: instance l's message occupies
// columns [l*k*base_alpha, (l+1)*k*base_alpha).
class TransformedCode {
public:
    CodeSpec base;
    TransformConfig cfg;  // normalized: perms filled in, N/delta resolved
    int n = 0, k = 0, r = 0;
    int alpha_out = 0;

    std::vector<int> targets;     // sorted; target index j <-> targets[j]
    std::vector<int> remainders;  // ascending
    std::vector<int> modified;    // PairRemainders: re-encoded remainder nodes
    std::vector<int> others;      // PairRemainders: remainders \ modified

    std::vector<BitMatrix> node_gen;  // per node: alpha_out x (k*alpha_out)

    size_t info_len() const { return static_cast<size_t>(k) * alpha_out; }
    bool is_target(int v) const { return target_index_[v] >= 0; }
    int target_index(int v) const { return target_index_[v]; }

    Codeword encode(const BitVector& info) const;

    // Flattened-generator decode; the independent oracle for the structural path.
    BitVector oracle_decode(const std::vector<Shard>& shards) const;
    // info = op * concat(payloads in the given id order)
    BitMatrix oracle_decode_op(const std::vector<int>& ids) const;

    // Decode by unpairing within connected targets, per-instance base
    // completion, partner cancellation, then per-instance base decode.
    BitVector structural_decode(const std::vector<Shard>& shards) const;

    using RepairResult = CodeSpec::RepairResult;

    // Rebuilds target node j from one instance row of every survivor.
    RepairResult repair_target(int node_id, const Codeword& cw) const;
    // Rebuilds a remainder node with the base strategy lifted across
    // instances; requires the paired-block mask shape and compatible
    // permutations (or a naive base strategy).
    RepairResult repair_remainder(int node_id, const Codeword& cw) const;
    RepairResult repair_node(int node_id, const Codeword& cw) const;

    std::optional<std::vector<int>> verify_mds() const;

    // True when the node repairs through the structural remainder path.
    bool remainder_structural_ok(int node_id) const;

    // Repair strategies of the output code, suitable for chaining.
    std::vector<RepairStrategy> derived_strategies() const;

    // Re-expresses the output as a systematic spec. The strict form requires
    // nodes 0..k-1 to store raw message slices; the rebased form treats their
    // payloads as the message basis (always possible for an MDS code).
    CodeSpec to_systematic_spec() const;
    CodeSpec to_spec_rebased() const;

    // Generators of the permuted / re-encoded target components, exposed for
    // structural assertions. x-level means h for PairTargets, v for
    // PairRemainders.
    BitMatrix h_generator(int t, int l) const;
    BitMatrix v_generator(int t, int l) const;

    // Payload generator of base-code node v inside instance l (info coords).
    BitMatrix instance_node_generator(int v, int l) const;

private:
    friend TransformedCode apply_transform(const CodeSpec&, TransformConfig);
    std::vector<int> target_index_;  // node id -> target index or -1

    // payload_{targets[s]} = sum_i texpr_[s][i] * payload_{remainders[i]}
    std::vector<std::vector<BitMatrix>> texpr_;
    // payload_{modified[c]} = sum_o oexpr_[c][o] * payload_{others[o]}
    //                       + sum_s dexpr_[c][s] * payload_{targets[s]}
    std::vector<std::vector<BitMatrix>> oexpr_, dexpr_;

    BitMatrix stored_target_gen(int j, int l) const;
    BitMatrix square_mask(int failed, int helper) const;
    Codeword complete_instance(int l, const std::vector<Shard>& shards) const;
    RepairResult naive_repair(int node_id, const Codeword& cw) const;
};

// Steps 1-3: stack r instances, permute target rows, pair target rows.
// Requires base alpha = delta*N with N even; space-share the base first when
// its sub-packetization is odd.
TransformedCode apply_transform(const CodeSpec& base, TransformConfig cfg);

// Same conversion but the targets keep their (permuted) contents and the
// pairing is folded into `modified` remainder nodes, preserving systematic
// form when the targets are systematic and permutations are identity.
TransformedCode apply_transform_systematic(const CodeSpec& base, TransformConfig cfg);

// Shared MDS audit over explicit node generators.
std::optional<std::vector<int>> verify_mds_generators(const std::vector<BitMatrix>& node_gen,
                                                      int n, int k);

}  // namespace repairforge
