#include "repairforge/pipelines.hpp"

#include <algorithm>

namespace repairforge {

namespace {

std::vector<int> round_targets(int round, int rounds_total, int n, int k) {
    const int r = n - k;
    std::vector<int> targets;
    if (round < rounds_total - 1) {
        int start = std::min(round * r, k - r);
        if (start < 0) start = 0;  // narrow codes: window pinned at node 0
        for (int i = 0; i < r; ++i) targets.push_back(start + i);
    } else {
        for (int v = k; v < n; ++v) targets.push_back(v);
    }
    return targets;
}

}  // namespace

Algorithm1Result algorithm1(const CodeSpec& base) {
    base.validate();
    Algorithm1Result res;
    CodeSpec q = base;
    if (q.alpha % 2 != 0) {
        q = space_share(q, 2);
        res.auto_space_shared = true;
    }
    res.N = q.alpha;
    const int n = q.n, k = q.k, r = q.r();
    const int m = (n + r - 1) / r;

    for (int t = 0; t < m; ++t) {
        RoundPlan plan;
        plan.round = t;
        plan.targets = round_targets(t, m, n, k);
        bool all_systematic = true, all_parity = true;
        for (int v : plan.targets) (v < k ? all_parity : all_systematic) = false;
        // Re-encode the parities when the window sits on systematic nodes so
        // the chain stays in systematic form. Windows that already cover the
        // parities (or mix, when k < r) pair the targets directly.
        plan.variant = (all_systematic && k >= r) ? PairingVariant::PairRemainders
                                                  : PairingVariant::PairTargets;

        TransformConfig cfg;
        cfg.targets = plan.targets;
        cfg.variant = plan.variant;
        cfg.N = res.N;
        cfg.delta = q.alpha / res.N;
        TransformedCode tc = apply_transform(q, cfg);

        plan.perms = tc.cfg.perms;
        plan.N = tc.cfg.N;
        plan.delta = tc.cfg.delta;

        CodeSpec next = (plan.variant == PairingVariant::PairRemainders || all_parity)
                            ? tc.to_systematic_spec()
                            : tc.to_spec_rebased();
        next.name = base.name + "+r" + std::to_string(t + 1);
        res.rounds.push_back(RoundArtifact{std::move(plan), std::move(tc), next});
        q = std::move(next);
    }

    long expect = res.N;
    for (int t = 0; t < m; ++t) expect *= r;
    require(q.alpha == expect, errc::internal, "algorithm1: sub-packetization law violated");
    res.final_spec = std::move(q);
    return res;
}

Algorithm2Result algorithm2(const CodeSpec& base, bool force_space_share) {
    base.validate();
    for (int i = 0; i < base.k; ++i)
        require(!is_naive(base.repair[i]), errc::value,
                "algorithm2: every systematic node needs an efficient repair strategy");
    // Surface broken strategies before transforming: building the plan solves
    // for the lost payload and fails if the downloads do not determine it.
    for (int i = 0; i < base.k; ++i) (void)base.repair_plan(i);

    Algorithm2Result res;
    res.forced = force_space_share;
    res.input_r1_ok = base.alpha % 2 == 0;
    if (res.input_r1_ok) {
        for (int i = 0; i < base.k && res.input_r1_ok; ++i)
            res.input_r1_ok = check_R1(base, i, base.alpha, 1).ok;
    }

    res.space_shared = force_space_share || !res.input_r1_ok;
    res.transformed_base = res.space_shared ? space_share(base, 2) : base;

    TransformConfig cfg;
    for (int v = base.k; v < base.n; ++v) cfg.targets.push_back(v);
    cfg.variant = PairingVariant::PairTargets;
    cfg.N = res.transformed_base.alpha;
    cfg.delta = 1;
    res.tc = apply_transform(res.transformed_base, cfg);
    res.final_spec = res.tc.to_systematic_spec();
    res.final_spec.name = base.name + "+all";
    return res;
}

std::vector<DigitSelector> algorithm1_expected_selectors(int n, int k) {
    const int r = n - k;
    const int m = (n + r - 1) / r;
    std::vector<DigitSelector> sel(n);
    for (int v = 0; v < n; ++v) sel[v].node = v;
    for (int t = 0; t < m; ++t) {
        std::vector<int> targets = round_targets(t, m, n, k);
        for (size_t j = 0; j < targets.size(); ++j) {
            sel[targets[j]].digit = t;
            sel[targets[j]].value = static_cast<int>(j);
        }
    }
    return sel;
}

std::vector<uint32_t> digit_row_set(int digit, int value, int r, int rounds, int N) {
    require(digit >= 0 && digit < rounds, errc::value, "digit out of range");
    require(value >= 0 && value < r, errc::value, "digit value out of range");
    long blocks = 1;
    for (int i = 0; i < rounds; ++i) blocks *= r;
    std::vector<uint32_t> rows;
    for (long w = 0; w < blocks; ++w) {
        long d = w;
        for (int i = 0; i < digit; ++i) d /= r;
        if (d % r != value) continue;
        for (int u = 0; u < N; ++u) rows.push_back(static_cast<uint32_t>(w * N + u));
    }
    return rows;
}

}  // namespace repairforge
