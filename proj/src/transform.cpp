#include "repairforge/transform.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace repairforge {

namespace {

std::vector<int> inverse_perm(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
    return inv;
}

bool constant_masks_over_targets(const CodeSpec& spec, int node, const std::vector<int>& targets) {
    const RepairStrategy& st = spec.repair[node];
    if (std::holds_alternative<RowSelect>(st)) return true;  // same rows everywhere
    if (const auto* ph = std::get_if<PerHelper>(&st)) {
        const BitMatrix* first = nullptr;
        for (int t : targets) {
            auto it = ph->mats.find(t);
            if (it == ph->mats.end()) return false;
            if (!first) first = &it->second;
            else if (!(*first == it->second)) return false;
        }
        return true;
    }
    return true;  // naive: nothing is downloaded selectively
}

TransformConfig normalize_config(const CodeSpec& base, TransformConfig cfg) {
    base.validate();
    const int r = base.r();
    require(base.alpha % 2 == 0, errc::shape,
            "transform: base sub-packetization is odd; space-share two instances first");
    if (cfg.N == 0 && cfg.delta == 0) {
        cfg.N = base.alpha;
        cfg.delta = 1;
    } else if (cfg.delta == 0) {
        require(cfg.N > 0 && base.alpha % cfg.N == 0, errc::shape,
                "transform: N must divide the base sub-packetization");
        cfg.delta = base.alpha / cfg.N;
    } else if (cfg.N == 0) {
        require(cfg.delta > 0 && base.alpha % cfg.delta == 0, errc::shape,
                "transform: delta must divide the base sub-packetization");
        cfg.N = base.alpha / cfg.delta;
    }
    require(cfg.N >= 2 && cfg.N % 2 == 0, errc::shape, "transform: segment length must be even");
    require(cfg.delta >= 1 && cfg.delta * cfg.N == base.alpha, errc::shape,
            "transform: need delta * N == base sub-packetization");

    require(static_cast<int>(cfg.targets.size()) == r, errc::value,
            "transform: exactly r = n-k target nodes required");
    std::sort(cfg.targets.begin(), cfg.targets.end());
    for (size_t i = 0; i < cfg.targets.size(); ++i) {
        require(cfg.targets[i] >= 0 && cfg.targets[i] < base.n, errc::value,
                "transform: target id out of range");
        require(i == 0 || cfg.targets[i - 1] != cfg.targets[i], errc::value,
                "transform: duplicate target id");
    }

    if (cfg.perms.empty()) {
        // Identity keeps the layout readable and is valid whenever every
        // non-naive remainder node downloads the same mask from each target;
        // otherwise fall back to the symmetric choice pi_l(j) = l+j mod r.
        bool identity_ok = true;
        for (int v = 0; v < base.n && identity_ok; ++v) {
            if (std::find(cfg.targets.begin(), cfg.targets.end(), v) != cfg.targets.end()) continue;
            if (is_naive(base.repair[v])) continue;
            identity_ok = constant_masks_over_targets(base, v, cfg.targets);
        }
        cfg.perms.assign(r, std::vector<int>(r));
        for (int l = 0; l < r; ++l)
            for (int j = 0; j < r; ++j) cfg.perms[l][j] = identity_ok ? j : (l + j) % r;
    }
    require(static_cast<int>(cfg.perms.size()) == r, errc::value, "transform: need r permutations");
    for (const auto& p : cfg.perms) {
        require(static_cast<int>(p.size()) == r, errc::value, "transform: permutation has wrong size");
        std::vector<bool> seen(r, false);
        for (int x : p) {
            require(x >= 0 && x < r && !seen[x], errc::value,
                    "transform: permutation is not a bijection on [0,r)");
            seen[x] = true;
        }
    }
    return cfg;
}

}  // namespace

R1Result check_R1(const CodeSpec& spec, int node, int N, int delta) {
    require(node >= 0 && node < spec.n, errc::value, "check_R1: node out of range");
    require(delta * N == spec.alpha, errc::shape, "check_R1: delta*N must equal alpha");
    R1Result res;
    if (is_naive(spec.repair[node])) {
        res.ok = true;
        res.naive = true;
        return res;
    }
    for (int j = 0; j < spec.n; ++j) {
        if (j == node) continue;
        BitMatrix sq;
        if (const auto* rs = std::get_if<RowSelect>(&spec.repair[node])) {
            sq = BitMatrix::diag_selector(rs->rows, spec.alpha);
        } else {
            const auto& mats = std::get<PerHelper>(spec.repair[node]).mats;
            auto it = mats.find(j);
            if (it == mats.end() || it->second.rows() != static_cast<size_t>(spec.alpha)) {
                res.bad_helper = j;
                return res;  // missing or non-square mask cannot match the block form
            }
            sq = it->second;
        }
        auto pb = detect_paired_blocks(sq, N, delta);
        if (const auto* mm = std::get_if<BlockMismatch>(&pb)) {
            res.bad_helper = j;
            res.mismatch = *mm;
            return res;
        }
        res.helpers.push_back(j);
        res.blocks.push_back(std::get<std::vector<BitMatrix>>(std::move(pb)));
    }
    res.ok = true;
    return res;
}

R2Result check_R2(const CodeSpec& spec, const TransformConfig& cfg, int node) {
    require(node >= 0 && node < spec.n, errc::value, "check_R2: node out of range");
    R2Result res;
    const int r = static_cast<int>(cfg.perms.size());
    res.symmetric_perms = true;
    for (int l = 0; l < r && res.symmetric_perms; ++l)
        for (int j = 0; j < r; ++j)
            if (cfg.perms[l][j] != cfg.perms[j][l]) {
                res.symmetric_perms = false;
                break;
            }
    res.constant_masks = constant_masks_over_targets(spec, node, cfg.targets);
    res.ok = res.symmetric_perms || res.constant_masks;
    return res;
}

BitMatrix TransformedCode::instance_node_generator(int v, int l) const {
    const size_t base_cols = static_cast<size_t>(k) * base.alpha;
    BitMatrix g(base.alpha, info_len());
    g.paste(0, static_cast<size_t>(l) * base_cols, base.node_generator(v));
    return g;
}

BitMatrix TransformedCode::h_generator(int t, int l) const {
    return instance_node_generator(targets[cfg.perms[l][t]], l);
}

BitMatrix TransformedCode::v_generator(int t, int l) const {
    require(cfg.variant == PairingVariant::PairRemainders, errc::value,
            "v components exist only for the remainder-pairing variant");
    if (t == l) return h_generator(t, t);
    BitMatrix phi = half_mix_matrix(base.alpha, cfg.N);
    if (t > l) return phi * (h_generator(t, l) ^ h_generator(l, t));
    return (phi * h_generator(t, l)) ^ (phi * (phi * h_generator(l, t)));
}

BitMatrix TransformedCode::stored_target_gen(int j, int l) const {
    if (cfg.variant == PairingVariant::PairRemainders) return h_generator(j, l);
    if (j == l) return h_generator(j, j);
    if (j > l) return h_generator(j, l) ^ h_generator(l, j);
    return h_generator(j, l) ^ half_mix_matrix(base.alpha, cfg.N) * h_generator(l, j);
}

TransformedCode apply_transform(const CodeSpec& base, TransformConfig cfg) {
    TransformedCode tc;
    tc.base = base;
    tc.cfg = normalize_config(base, std::move(cfg));
    tc.n = base.n;
    tc.k = base.k;
    tc.r = base.r();
    tc.alpha_out = tc.r * base.alpha;
    tc.targets = tc.cfg.targets;
    tc.target_index_.assign(tc.n, -1);
    for (int j = 0; j < tc.r; ++j) tc.target_index_[tc.targets[j]] = j;
    for (int v = 0; v < tc.n; ++v)
        if (!tc.is_target(v)) tc.remainders.push_back(v);

    // Express every target payload from the remainder payloads.
    {
        std::vector<BitMatrix> gens;
        gens.reserve(tc.remainders.size());
        for (int v : tc.remainders) gens.push_back(base.node_generator(v));
        auto inv = invert(BitMatrix::vstack(gens));
        if (!inv) fail(errc::mds, "transform: remainder set does not determine the base code");
        for (int s = 0; s < tc.r; ++s) {
            BitMatrix e = base.node_generator(tc.targets[s]) * *inv;
            std::vector<BitMatrix> row;
            for (int i = 0; i < tc.k; ++i)
                row.push_back(e.block(0, static_cast<size_t>(i) * base.alpha, base.alpha, base.alpha));
            tc.texpr_.push_back(std::move(row));
        }
    }

    if (tc.cfg.variant == PairingVariant::PairRemainders) {
        require(tc.k >= tc.r, errc::value,
                "remainder pairing needs k >= r nodes available for re-encoding");
        tc.others.assign(tc.remainders.begin(), tc.remainders.end() - tc.r);
        tc.modified.assign(tc.remainders.end() - tc.r, tc.remainders.end());
        std::vector<BitMatrix> gens;
        for (int v : tc.others) gens.push_back(base.node_generator(v));
        for (int v : tc.targets) gens.push_back(base.node_generator(v));
        auto inv = invert(BitMatrix::vstack(gens));
        if (!inv) fail(errc::mds, "transform: base code is not MDS on others+targets");
        for (int c : tc.modified) {
            BitMatrix e = base.node_generator(c) * *inv;
            std::vector<BitMatrix> orow, drow;
            for (size_t o = 0; o < tc.others.size(); ++o)
                orow.push_back(e.block(0, o * base.alpha, base.alpha, base.alpha));
            for (int s = 0; s < tc.r; ++s)
                drow.push_back(
                    e.block(0, (tc.others.size() + s) * base.alpha, base.alpha, base.alpha));
            tc.oexpr_.push_back(std::move(orow));
            tc.dexpr_.push_back(std::move(drow));
        }
    }

    tc.node_gen.resize(tc.n);
    for (int v = 0; v < tc.n; ++v) {
        std::vector<BitMatrix> rows;
        rows.reserve(tc.r);
        int j = tc.target_index(v);
        if (j >= 0) {
            for (int l = 0; l < tc.r; ++l) rows.push_back(tc.stored_target_gen(j, l));
        } else if (tc.cfg.variant == PairingVariant::PairTargets ||
                   std::find(tc.modified.begin(), tc.modified.end(), v) == tc.modified.end()) {
            for (int l = 0; l < tc.r; ++l) rows.push_back(tc.instance_node_generator(v, l));
        } else {
            size_t c = std::find(tc.modified.begin(), tc.modified.end(), v) - tc.modified.begin();
            for (int l = 0; l < tc.r; ++l) {
                BitMatrix g(base.alpha, tc.info_len());
                for (size_t o = 0; o < tc.others.size(); ++o)
                    g ^= tc.oexpr_[c][o] * tc.instance_node_generator(tc.others[o], l);
                for (int s = 0; s < tc.r; ++s)
                    g ^= tc.dexpr_[c][tc.cfg.perms[l][s]] * tc.v_generator(s, l);
                rows.push_back(std::move(g));
            }
        }
        tc.node_gen[v] = BitMatrix::vstack(rows);
    }
    return tc;
}

TransformedCode apply_transform_systematic(const CodeSpec& base, TransformConfig cfg) {
    cfg.variant = PairingVariant::PairRemainders;
    return apply_transform(base, std::move(cfg));
}

Codeword TransformedCode::encode(const BitVector& info) const {
    require(info.size() == info_len(), errc::shape, "encode: wrong information length");
    Codeword cw;
    cw.payload.reserve(n);
    for (int v = 0; v < n; ++v) cw.payload.push_back(node_gen[v] * info);
    return cw;
}

BitMatrix TransformedCode::oracle_decode_op(const std::vector<int>& ids) const {
    require(ids.size() == static_cast<size_t>(k), errc::value, "decode: need exactly k nodes");
    std::vector<BitMatrix> gens;
    std::vector<bool> seen(n, false);
    for (int id : ids) {
        require(id >= 0 && id < n && !seen[id], errc::value, "decode: bad node id set");
        seen[id] = true;
        gens.push_back(node_gen[id]);
    }
    auto inv = invert(BitMatrix::vstack(gens));
    if (!inv) fail(errc::singular, "oracle decode: node set does not determine the information");
    return *inv;
}

BitVector TransformedCode::oracle_decode(const std::vector<Shard>& shards) const {
    std::vector<int> ids;
    std::vector<BitVector> data;
    for (const auto& s : shards) {
        ids.push_back(s.node);
        require(s.payload.size() == static_cast<size_t>(alpha_out), errc::shape,
                "decode: payload length mismatch");
        data.push_back(s.payload);
    }
    return oracle_decode_op(ids) * BitVector::concat(data);
}

Codeword TransformedCode::complete_instance(int /*l*/, const std::vector<Shard>& shards) const {
    return base.encode(base.reconstruct(shards));
}

BitVector TransformedCode::structural_decode(const std::vector<Shard>& shards) const {
    require(shards.size() == static_cast<size_t>(k), errc::value, "decode: need exactly k nodes");
    const int A = base.alpha;
    const size_t N = cfg.N;

    std::vector<const BitVector*> target_payload(r, nullptr);
    std::vector<int> conn;  // connected target indices, ascending
    std::vector<Shard> conn_rem;
    std::vector<bool> seen(n, false);
    for (const auto& s : shards) {
        require(s.node >= 0 && s.node < n && !seen[s.node], errc::value, "decode: bad node id set");
        require(s.payload.size() == static_cast<size_t>(alpha_out), errc::shape,
                "decode: payload length mismatch");
        seen[s.node] = true;
        int j = target_index(s.node);
        if (j >= 0) {
            conn.push_back(j);
            target_payload[j] = &s.payload;
        } else {
            conn_rem.push_back(s);
        }
    }
    std::sort(conn.begin(), conn.end());

    auto row_of = [&](const BitVector& p, int l) { return p.slice(static_cast<size_t>(l) * A, A); };

    // x holds the permuted target components: h for target pairing, v for
    // remainder pairing. x[u][l] belongs to base node targets[perms[l][u]]
    // inside instance l.
    std::vector<std::vector<BitVector>> x(r, std::vector<BitVector>(r));
    for (int u : conn) x[u][u] = row_of(*target_payload[u], u);
    for (size_t ai = 0; ai < conn.size(); ++ai)
        for (size_t bi = ai + 1; bi < conn.size(); ++bi) {
            int a = conn[ai], b = conn[bi];
            BitVector sum = row_of(*target_payload[b], a);
            BitVector box = row_of(*target_payload[a], b);
            auto [xa, xb] = unpair_sum_box(sum, box, N);
            x[a][b] = std::move(xa);
            x[b][a] = std::move(xb);
        }

    std::vector<Codeword> inst(r);
    std::vector<bool> done(r, false);
    auto complete = [&](int l) {
        std::vector<Shard> sh = conn_rem;
        for (size_t i = 0; i < sh.size(); ++i) sh[i].payload = row_of(conn_rem[i].payload, l);
        for (int u : conn) sh.push_back({targets[cfg.perms[l][u]], x[u][l]});
        inst[l] = complete_instance(l, sh);
        done[l] = true;
    };
    for (int l : conn) complete(l);

    for (int l = 0; l < r; ++l) {
        if (done[l]) continue;
        for (int u : conn) {
            BitVector combo = row_of(*target_payload[u], l);
            const BitVector& partner = inst[u].payload[targets[cfg.perms[u][l]]];  // x_l^{(u)}
            x[u][l] = cancel_partner(partner, combo,
                                     u < l ? ComboKind::a_box_b : ComboKind::a_plus_b, N);
        }
        complete(l);
    }

    if (cfg.variant == PairingVariant::PairTargets) {
        std::vector<BitVector> msgs;
        msgs.reserve(r);
        for (int l = 0; l < r; ++l) {
            std::vector<BitVector> sys(inst[l].payload.begin(), inst[l].payload.begin() + k);
            msgs.push_back(BitVector::concat(sys));
        }
        return BitVector::concat(msgs);
    }

    // Remainder pairing: the completed instances carry the re-encoded
    // payloads. Recover each original instance from the untouched remainder
    // nodes plus the recombined target payloads.
    auto v_of = [&](int t, int l) { return inst[l].payload[targets[cfg.perms[l][t]]]; };
    std::vector<BitVector> msgs;
    msgs.reserve(r);
    for (int l = 0; l < r; ++l) {
        std::vector<Shard> sh;
        for (int o : others) sh.push_back({o, inst[l].payload[o]});
        for (int u = 0; u < r; ++u) {
            BitVector h;
            if (u == l) h = v_of(u, l);
            else if (u > l) h = v_of(u, l) ^ v_of(l, u);
            else h = boxplus(v_of(u, l), v_of(l, u), N);
            sh.push_back({targets[cfg.perms[l][u]], std::move(h)});
        }
        msgs.push_back(base.reconstruct(sh));
    }
    return BitVector::concat(msgs);
}

TransformedCode::RepairResult TransformedCode::repair_target(int node_id, const Codeword& cw) const {
    int j = target_index(node_id);
    require(j >= 0, errc::not_target, "repair_target: node is not a target");
    const int A = base.alpha;
    const size_t N = cfg.N;

    std::vector<Shard> sh;
    sh.reserve(k);
    for (int v : remainders) sh.push_back({v, cw.payload[v].slice(static_cast<size_t>(j) * A, A)});
    Codeword inst_j = complete_instance(j, sh);

    std::vector<BitVector> x_here(r);  // x_s^{(j)} for every target index s
    for (int s = 0; s < r; ++s) x_here[s] = inst_j.payload[targets[cfg.perms[j][s]]];

    std::vector<BitVector> x_mine(r);  // x_j^{(l)} recovered from the other targets
    x_mine[j] = x_here[j];
    for (int l = 0; l < r; ++l) {
        if (l == j) continue;
        BitVector combo = cw.payload[targets[l]].slice(static_cast<size_t>(j) * A, A);
        if (l > j) x_mine[l] = combo ^ x_here[l];
        else x_mine[l] = cancel_partner(x_here[l], combo, ComboKind::b_box_a, N);
    }

    RepairResult res;
    res.payload = BitVector(alpha_out);
    for (int l = 0; l < r; ++l) {
        BitVector rowv;
        if (l == j) rowv = x_mine[j];
        else if (j > l) rowv = x_mine[l] ^ x_here[l];
        else rowv = boxplus(x_mine[l], x_here[l], N);
        res.payload.paste(static_cast<size_t>(l) * A, rowv);
    }

    res.report.failed = node_id;
    res.report.alpha = alpha_out;
    res.report.r = r;
    std::vector<uint32_t> rows(A);
    std::iota(rows.begin(), rows.end(), static_cast<uint32_t>(j) * A);
    for (int v = 0; v < n; ++v) {
        if (v == node_id) continue;
        res.report.survivors.push_back(SurvivorUsage{v, rows, A});
    }
    return res;
}

BitMatrix TransformedCode::square_mask(int failed, int helper) const {
    const RepairStrategy& st = base.repair[failed];
    if (const auto* rs = std::get_if<RowSelect>(&st))
        return BitMatrix::diag_selector(rs->rows, base.alpha);
    const auto& mats = std::get<PerHelper>(st).mats;
    auto it = mats.find(helper);
    require(it != mats.end(), errc::strategy, "no repair matrix for helper");
    require(it->second.rows() == static_cast<size_t>(base.alpha), errc::r1_violation,
            "structural repair needs square repair matrices");
    return it->second;
}

TransformedCode::RepairResult TransformedCode::naive_repair(int node_id, const Codeword& cw) const {
    std::vector<int> ids;
    std::vector<BitVector> data;
    for (int v = 0; v < n && static_cast<int>(ids.size()) < k; ++v) {
        if (v == node_id) continue;
        ids.push_back(v);
        data.push_back(cw.payload[v]);
    }
    BitVector info = oracle_decode_op(ids) * BitVector::concat(data);
    RepairResult res;
    res.payload = node_gen[node_id] * info;
    res.report.failed = node_id;
    res.report.alpha = alpha_out;
    res.report.r = r;
    std::vector<uint32_t> all(alpha_out);
    std::iota(all.begin(), all.end(), 0u);
    for (int v = 0; v < n; ++v) {
        if (v == node_id) continue;
        bool used = std::find(ids.begin(), ids.end(), v) != ids.end();
        res.report.survivors.push_back(SurvivorUsage{
            v, used ? all : std::vector<uint32_t>{}, used ? static_cast<long>(alpha_out) : 0});
    }
    return res;
}

bool TransformedCode::remainder_structural_ok(int node_id) const {
    if (is_target(node_id)) return false;
    if (is_naive(base.repair[node_id])) return false;
    if (!check_R1(base, node_id, cfg.N, cfg.delta).ok) return false;
    return check_R2(base, cfg, node_id).ok;
}

TransformedCode::RepairResult TransformedCode::repair_remainder(int node_id,
                                                                const Codeword& cw) const {
    require(node_id >= 0 && node_id < n, errc::value, "node id out of range");
    require(!is_target(node_id), errc::value, "repair_remainder: node is a target");
    if (is_naive(base.repair[node_id])) return naive_repair(node_id, cw);

    auto r1 = check_R1(base, node_id, cfg.N, cfg.delta);
    if (!r1.ok)
        fail(errc::r1_violation,
             "repair matrices of node " + std::to_string(node_id) +
                 " lack the paired block shape (helper " + std::to_string(r1.bad_helper) + ")");
    auto r2 = check_R2(base, cfg, node_id);
    if (!r2.ok)
        fail(errc::r2_violation,
             "permutations are not symmetric and node " + std::to_string(node_id) +
                 " downloads unequal masks from the targets");

    const int A = base.alpha;
    const size_t N = cfg.N;
    RepairPlan plan = base.repair_plan(node_id);
    std::map<int, int> hidx;
    for (size_t i = 0; i < plan.helpers.size(); ++i) hidx[plan.helpers[i]] = static_cast<int>(i);

    // Masks applied to target rows: row l of target u carries components of
    // base node targets[perms[l][u]], so it is filtered with that node's mask.
    auto mask_for = [&](int u, int l) { return square_mask(node_id, targets[cfg.perms[l][u]]); };

    std::vector<std::vector<BitVector>> z(r, std::vector<BitVector>(r));
    for (int u = 0; u < r; ++u)
        for (int l = 0; l < r; ++l)
            z[u][l] = mask_for(u, l) * cw.payload[targets[u]].slice(static_cast<size_t>(l) * A, A);

    // Unpair the masked combinations; valid because paired-block masks
    // commute with the half-mixing map.
    std::vector<std::vector<BitVector>> mx(r, std::vector<BitVector>(r));
    for (int u = 0; u < r; ++u) mx[u][u] = std::move(z[u][u]);
    for (int a = 0; a < r; ++a)
        for (int b = a + 1; b < r; ++b) {
            auto [xa, xb] = unpair_sum_box(z[b][a], z[a][b], N);
            mx[a][b] = std::move(xa);
            mx[b][a] = std::move(xb);
        }

    std::vector<std::vector<int>> inv_perm(r);
    for (int l = 0; l < r; ++l) inv_perm[l] = inverse_perm(cfg.perms[l]);

    // Reduce a square-masked payload to the rows the plan actually ships.
    auto to_plan = [&](int helper, const BitVector& sq) {
        if (const auto* rs = std::get_if<RowSelect>(&base.repair[node_id])) {
            BitVector out(rs->rows.size());
            for (size_t t = 0; t < rs->rows.size(); ++t) out.set(t, sq.get(rs->rows[t]));
            return out;
        }
        (void)helper;
        return sq;
    };

    RepairResult res;
    res.payload = BitVector(alpha_out);
    for (int l = 0; l < r; ++l) {
        std::vector<BitVector> masked;
        masked.reserve(plan.helpers.size());
        for (int v : plan.helpers) {
            int u = target_index(v);
            if (u < 0) {
                BitVector sq =
                    square_mask(node_id, v) * cw.payload[v].slice(static_cast<size_t>(l) * A, A);
                masked.push_back(to_plan(v, sq));
            } else {
                masked.push_back(to_plan(v, mx[inv_perm[l][u]][l]));
            }
        }
        res.payload.paste(static_cast<size_t>(l) * A, plan.apply(masked));
    }

    res.report.failed = node_id;
    res.report.alpha = alpha_out;
    res.report.r = r;
    for (int v = 0; v < n; ++v) {
        if (v == node_id) continue;
        SurvivorUsage use;
        use.node = v;
        int u = target_index(v);
        if (u < 0) {
            const auto& rows = plan.accessed_rows[hidx[v]];
            for (int l = 0; l < r; ++l)
                for (uint32_t row : rows) use.accessed_rows.push_back(row + l * A);
            use.downloaded = static_cast<long>(r) * plan.downloaded[hidx[v]];
        } else {
            for (int l = 0; l < r; ++l) {
                BitMatrix m = mask_for(u, l);
                use.downloaded += static_cast<long>(mat_rank(m));
                for (size_t c = 0; c < m.cols(); ++c)
                    for (size_t row = 0; row < m.rows(); ++row)
                        if (m.get(row, c)) {
                            use.accessed_rows.push_back(static_cast<uint32_t>(c + l * A));
                            break;
                        }
            }
        }
        std::sort(use.accessed_rows.begin(), use.accessed_rows.end());
        res.report.survivors.push_back(std::move(use));
    }
    return res;
}

TransformedCode::RepairResult TransformedCode::repair_node(int node_id, const Codeword& cw) const {
    if (is_target(node_id)) return repair_target(node_id, cw);
    return repair_remainder(node_id, cw);
}

std::optional<std::vector<int>> TransformedCode::verify_mds() const {
    return verify_mds_generators(node_gen, n, k);
}

std::vector<RepairStrategy> TransformedCode::derived_strategies() const {
    std::vector<RepairStrategy> out;
    out.reserve(n);
    const int A = base.alpha;
    for (int v = 0; v < n; ++v) {
        int j = target_index(v);
        if (j >= 0) {
            std::vector<uint32_t> rows(A);
            std::iota(rows.begin(), rows.end(), static_cast<uint32_t>(j) * A);
            out.push_back(RowSelect{std::move(rows)});
            continue;
        }
        const RepairStrategy& st = base.repair[v];
        if (is_naive(st) || !remainder_structural_ok(v)) {
            out.push_back(Naive{});
        } else if (const auto* rs = std::get_if<RowSelect>(&st)) {
            RowSelect wide;
            for (int l = 0; l < r; ++l)
                for (uint32_t row : rs->rows) wide.rows.push_back(row + l * A);
            std::sort(wide.rows.begin(), wide.rows.end());
            out.push_back(std::move(wide));
        } else {
            PerHelper wide;
            for (const auto& [h, m] : std::get<PerHelper>(st).mats)
                wide.mats[h] = BitMatrix::block_diag(m, r);
            out.push_back(std::move(wide));
        }
    }
    return out;
}

CodeSpec TransformedCode::to_spec_rebased() const {
    std::vector<BitMatrix> first;
    for (int v = 0; v < k; ++v) first.push_back(node_gen[v]);
    auto inv = invert(BitMatrix::vstack(first));
    if (!inv) fail(errc::mds, "transformed code: first k nodes do not determine the information");
    CodeSpec out;
    out.n = n;
    out.k = k;
    out.alpha = alpha_out;
    out.name = base.name + "+t";
    out.A.assign(r, std::vector<BitMatrix>());
    for (int i = 0; i < r; ++i) {
        BitMatrix p = node_gen[k + i] * *inv;
        for (int j = 0; j < k; ++j)
            out.A[i].push_back(
                p.block(0, static_cast<size_t>(j) * alpha_out, alpha_out, alpha_out));
    }
    out.repair = derived_strategies();
    out.validate();
    return out;
}

CodeSpec TransformedCode::to_systematic_spec() const {
    const size_t base_cols = static_cast<size_t>(k) * base.alpha;
    for (int j = 0; j < k; ++j) {
        BitMatrix raw(alpha_out, info_len());
        for (int l = 0; l < r; ++l)
            for (int t = 0; t < base.alpha; ++t)
                raw.set(static_cast<size_t>(l) * base.alpha + t,
                        static_cast<size_t>(l) * base_cols + static_cast<size_t>(j) * base.alpha + t,
                        true);
        require(node_gen[j] == raw, errc::value,
                "transformed code is not in systematic form (node " + std::to_string(j) +
                    " does not store raw message rows)");
    }
    return to_spec_rebased();
}

std::optional<std::vector<int>> verify_mds_generators(const std::vector<BitMatrix>& node_gen,
                                                      int n, int k) {
    require(static_cast<int>(node_gen.size()) == n, errc::shape, "one generator per node expected");
    const size_t full = node_gen.empty() ? 0 : node_gen[0].cols();
    std::vector<int> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
        std::vector<BitMatrix> gens;
        gens.reserve(k);
        for (int v : subset) gens.push_back(node_gen[v]);
        if (mat_rank(BitMatrix::vstack(gens)) != full) return subset;
        int i = k - 1;
        while (i >= 0 && subset[i] == n - k + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    return std::nullopt;
}

}  // namespace repairforge
