#include <doctest.h>

#include <numeric>

#include "repairforge/harness.hpp"
#include "repairforge/pipelines.hpp"
#include "test_util.hpp"

using namespace repairforge;
using rf_test::parity_row;
using rf_test::parse_combo;
using rf_test::random_vec;

namespace {

void check_parity_tables(const CodeSpec& spec, const std::vector<std::string>& pn0,
                         const std::vector<std::string>& pn1) {
    REQUIRE(spec.r() == 2);
    REQUIRE(static_cast<int>(pn0.size()) == spec.alpha);
    for (int row = 0; row < spec.alpha; ++row) {
        INFO("row ", row);
        CHECK(parity_row(spec, 0, row) == parse_combo(pn0[row], spec.k, spec.alpha));
        CHECK(parity_row(spec, 1, row) == parse_combo(pn1[row], spec.k, spec.alpha));
    }
}

// Second-round output of the walk on the (5,3) array code.
const std::vector<std::string> kQ2Pn0 = {
    "a0+a2+a3+b0+b1+b4+b5+c0+c1",
    "a1+a2+b0+b4+c0",
    "a2+a3+b1+b2+b6+b7+c2+c3",
    "a2+b0+b1+b3+b6+c2",
    "a4+a6+a7+b5+c0+c4",
    "a5+a6+b4+b5+c1+c5",
    "a6+a7+b4+b6+b7+c0+c1+c3+c6",
    "a6+b5+b6+c0+c2+c3+c7",
};
const std::vector<std::string> kQ2Pn1 = {
    "a0+a2+b0+b5+c1",
    "a1+a3+b1+b4+b5+c0+c1",
    "a2+a3+b1+b3+b7+c3",
    "a2+b0+b1+b2+b3+b6+b7+c2+c3",
    "a4+a6+b4+b5+c1+c4+c5",
    "a5+a7+b4+c0+c1+c4",
    "a6+a7+b4+b6+c0+c1+c2+c3+c6+c7",
    "a6+b5+b7+c0+c2+c6",
};

// Final-round output; multi-line cells are written as the xor of their lines.
const std::vector<std::string> kQ3Pn0 = {
    "a0+a2+a3+b0+b1+b4+b5+c0+c1",
    "a1+a2+b0+b4+c0",
    "a2+a3+b1+b2+b6+b7+c2+c3",
    "a2+b0+b1+b3+b6+c2",
    "a4+a6+a7+b5+c0+c4",
    "a5+a6+b4+b5+c1+c5",
    "a6+a7+b4+b6+b7+c0+c1+c3+c6",
    "a6+b5+b6+c0+c2+c3+c7",
    "a8+a10+a11+b8+b9+b12+b13+c8+c9+a0+a2+b0+b5+c1+a1+a3+b1+b4+b5+c0+c1",
    "a9+a10+b8+b12+c8+a0+a2+b0+b5+c1",
    "a10+a11+b9+b10+b14+b15+c10+c11+a2+a3+b1+b3+b7+c3+a2+b0+b1+b2+b3+b6+b7+c2+c3",
    "a10+b8+b9+b11+b14+c10+a2+a3+b1+b3+b7+c3",
    "a12+a14+a15+b13+c8+c12+a4+a6+b4+b5+c1+c4+c5+a5+a7+b4+c0+c1+c4",
    "a13+a14+b12+b13+c9+c13+a4+a6+b4+b5+c1+c4+c5",
    "a14+a15+b12+b14+b15+c8+c9+c11+c14+a6+a7+b4+b6+c0+c1+c2+c3+c6+c7+a6+b5+b7+c0+c2+c6",
    "a14+b13+b14+c8+c10+c11+c15+a6+a7+b4+b6+c0+c1+c2+c3+c6+c7",
};
const std::vector<std::string> kQ3Pn1 = {
    "a0+a2+b0+b5+c1+a8+a10+a11+b8+b9+b12+b13+c8+c9",
    "a1+a3+b1+b4+b5+c0+c1+a9+a10+b8+b12+c8",
    "a2+a3+b1+b3+b7+c3+a10+a11+b9+b10+b14+b15+c10+c11",
    "a2+b0+b1+b2+b3+b6+b7+c2+c3+a10+b8+b9+b11+b14+c10",
    "a4+a6+b4+b5+c1+c4+c5+a12+a14+a15+b13+c8+c12",
    "a5+a7+b4+c0+c1+c4+a13+a14+b12+b13+c9+c13",
    "a6+a7+b4+b6+c0+c1+c2+c3+c6+c7+a14+a15+b12+b14+b15+c8+c9+c11+c14",
    "a6+b5+b7+c0+c2+c6+a14+b13+b14+c8+c10+c11+c15",
    "a8+a10+b8+b13+c9",
    "a9+a11+b9+b12+b13+c8+c9",
    "a10+a11+b9+b11+b15+c11",
    "a10+b8+b9+b10+b11+b14+b15+c10+c11",
    "a12+a14+b12+b13+c9+c12+c13",
    "a13+a15+b12+c8+c9+c12",
    "a14+a15+b12+b14+c8+c9+c10+c11+c14+c15",
    "a14+b13+b15+c8+c10+c14",
};

}  // namespace

TEST_CASE("multi-round walk on the (5,3) array code hits all three tables") {
    Algorithm1Result res = algorithm1(evenodd(3));
    REQUIRE(res.rounds.size() == 3);
    CHECK(res.N == 2);
    CHECK_FALSE(res.auto_space_shared);

    CHECK(res.rounds[0].plan.targets == std::vector<int>{0, 1});
    CHECK(res.rounds[1].plan.targets == std::vector<int>{1, 2});
    CHECK(res.rounds[2].plan.targets == std::vector<int>{3, 4});
    CHECK(res.rounds[0].plan.variant == PairingVariant::PairRemainders);
    CHECK(res.rounds[1].plan.variant == PairingVariant::PairRemainders);
    CHECK(res.rounds[2].plan.variant == PairingVariant::PairTargets);
    for (const auto& round : res.rounds)
        for (size_t l = 0; l < round.plan.perms.size(); ++l)
            for (size_t j = 0; j < round.plan.perms[l].size(); ++j)
                CHECK(round.plan.perms[l][j] == static_cast<int>(j));  // identity throughout

    check_parity_tables(res.rounds[0].output,
                        {"a0+a2+a3+b0+b1+c0", "a1+a2+b0+c1", "a2+a3+b1+b2+c2", "a2+b0+b1+b3+c3"},
                        {"a0+a2+b0+c0+c1", "a1+a3+b1+c0", "a2+a3+b1+b3+c2+c3", "a2+b0+b1+b2+b3+c2"});
    check_parity_tables(res.rounds[1].output, kQ2Pn0, kQ2Pn1);
    check_parity_tables(res.rounds[2].output, kQ3Pn0, kQ3Pn1);

    CHECK(res.final_spec.alpha == 16);
    CHECK_FALSE(res.final_spec.verify_mds().has_value());
}

TEST_CASE("final strategies are digit selectors with the published row sets") {
    Algorithm1Result res = algorithm1(evenodd(3));
    auto sel = algorithm1_expected_selectors(5, 3);
    CHECK(sel[0].digit == 0);
    CHECK(sel[0].value == 0);
    CHECK(sel[1].digit == 1);  // retargeted by the second round
    CHECK(sel[1].value == 0);
    CHECK(sel[2].digit == 1);
    CHECK(sel[2].value == 1);
    CHECK(sel[3].digit == 2);
    CHECK(sel[3].value == 0);
    CHECK(sel[4].digit == 2);
    CHECK(sel[4].value == 1);

    const std::vector<std::vector<uint32_t>> published = {
        {0, 1, 4, 5, 8, 9, 12, 13},    // rows 1,2,5,6,9,10,13,14
        {0, 1, 2, 3, 8, 9, 10, 11},    // rows 1,2,3,4,9,10,11,12
        {4, 5, 6, 7, 12, 13, 14, 15},  // rows 5,6,7,8,13,14,15,16
        {0, 1, 2, 3, 4, 5, 6, 7},      // rows 1..8
        {8, 9, 10, 11, 12, 13, 14, 15},
    };
    for (int v = 0; v < 5; ++v) {
        const auto& st = res.final_spec.repair[v];
        REQUIRE(std::holds_alternative<RowSelect>(st));
        CHECK(std::get<RowSelect>(st).rows == published[v]);
        CHECK(digit_row_set(sel[v].digit, sel[v].value, 2, 3, 2) == published[v]);
    }

    // Both the strategy table and the structural path deliver those rows.
    SimulationTable flat = simulate_repair_all(res.final_spec, 3, 7);
    SimulationTable structural = simulate_repair_all(res.rounds.back().tc, 3, 7);
    for (const SimulationTable* t : {&flat, &structural}) {
        CHECK(t->all_optimal_access());
        CHECK(t->all_optimal_bandwidth());
        for (int v = 0; v < 5; ++v)
            for (const auto& s : t->nodes[v].survivors) {
                CHECK(s.accessed_rows == published[v]);
                CHECK(s.downloaded == 8);
            }
    }
}

TEST_CASE("round artifacts stay decodable against the oracle") {
    Algorithm1Result res = algorithm1(evenodd(3));
    std::mt19937_64 rng(61);
    for (const auto& round : res.rounds) {
        const TransformedCode& tc = round.tc;
        BitVector info = random_vec(tc.info_len(), rng);
        Codeword cw = tc.encode(info);
        std::vector<int> ids{0, 2, 3};  // mixed subset
        std::vector<Shard> shards;
        for (int id : ids) shards.push_back({id, cw.payload[id]});
        CHECK(tc.structural_decode(shards) == info);
        CHECK(tc.oracle_decode(shards) == info);
    }
}

TEST_CASE("narrow code (k < r) still obeys the growth law") {
    Algorithm1Result res = algorithm1(cauchy_binary_mds(5, 2, 4));
    CHECK(res.N == 4);
    CHECK(res.rounds.size() == 2);
    CHECK(res.final_spec.alpha == 9 * 4);  // r^ceil(n/r) * N = 3^2 * 4
    CHECK_FALSE(res.final_spec.verify_mds().has_value());
    SimulationTable t = simulate_repair_all(res.final_spec, 2, 8);
    CHECK(t.all_optimal_access());
    CHECK(t.all_optimal_bandwidth());
}

TEST_CASE("odd sub-packetization is space-shared before the walk") {
    Algorithm1Result res = algorithm1(cauchy_binary_mds(4, 2, 3));  // alpha = 3
    CHECK(res.auto_space_shared);
    CHECK(res.N == 6);
    CHECK(res.final_spec.alpha == 4 * 6);  // 2^2 * 6
    CHECK_FALSE(res.final_spec.verify_mds().has_value());
}

TEST_CASE("parity upgrade without space sharing doubles alpha") {
    Algorithm2Result res = algorithm2(mdr1_6_4(), false);
    CHECK(res.input_r1_ok);
    CHECK_FALSE(res.space_shared);
    CHECK(res.final_spec.alpha == 16);  // 2 * alpha'
    CHECK_FALSE(res.final_spec.verify_mds().has_value());
    SimulationTable t = simulate_repair_all(res.final_spec, 2, 9);
    CHECK(t.all_optimal_access());
    CHECK(t.all_optimal_bandwidth());
}

TEST_CASE("forced space sharing reproduces the published four-instance layout") {
    CodeSpec mdr = mdr1_6_4();
    Algorithm2Result res = algorithm2(mdr, true);
    CHECK(res.input_r1_ok);  // the check passed; sharing was forced anyway
    CHECK(res.space_shared);
    CHECK(res.final_spec.alpha == 32);  // 4 * alpha'
    CHECK_FALSE(res.final_spec.verify_mds().has_value());

    // The two parities of the output, written over the four stacked
    // instances g_i^(l) of the original code:
    //   PN0 = (g0(0); g0(1); g0(2)+g1(0)+g1(1); g0(3)+g1(0))
    //   PN1 = (g1(0)+g0(2); g1(1)+g0(3); g1(2); g1(3))
    const TransformedCode& tc = res.tc;
    const int A = 8;  // original sub-packetization
    // Generator of original-instance l's node v inside the output info space.
    auto place = [&](int v, int l) {
        BitMatrix g(A, tc.info_len());
        BitMatrix gen = mdr.node_generator(v);
        int L = l / 2, inner = l % 2;
        for (int j = 0; j < 4; ++j)
            g.paste(0, static_cast<size_t>(L) * 64 + static_cast<size_t>(j) * 16 + inner * 8,
                    gen.block(0, static_cast<size_t>(j) * A, A, A));
        return g;
    };
    auto block_of = [&](int node, int row) {
        return tc.node_gen[node].block(static_cast<size_t>(row) * A, 0, A, tc.info_len());
    };
    CHECK(block_of(4, 0) == place(4, 0));
    CHECK(block_of(4, 1) == place(4, 1));
    CHECK(block_of(4, 2) == (place(4, 2) ^ place(5, 0) ^ place(5, 1)));
    CHECK(block_of(4, 3) == (place(4, 3) ^ place(5, 0)));
    CHECK(block_of(5, 0) == (place(5, 0) ^ place(4, 2)));
    CHECK(block_of(5, 1) == (place(5, 1) ^ place(4, 3)));
    CHECK(block_of(5, 2) == place(5, 2));
    CHECK(block_of(5, 3) == place(5, 3));

    // Repair row sets over 5-bit indices: the four data nodes keep their
    // index-bit predicates, the parities read one half each.
    SimulationTable t = simulate_repair_all(res.final_spec, 2, 10);
    CHECK(t.all_optimal_access());
    CHECK(t.all_optimal_bandwidth());
    std::vector<uint32_t> j4(16), j5(16);
    std::iota(j4.begin(), j4.end(), 0u);
    std::iota(j5.begin(), j5.end(), 16u);
    for (int v = 0; v < 6; ++v) {
        std::vector<uint32_t> want = v < 4 ? mdr_row_set(v, 5) : (v == 4 ? j4 : j5);
        for (const auto& s : t.nodes[v].survivors) {
            CHECK(s.accessed_rows == want);
            CHECK(s.downloaded == 16);
        }
    }

    // Structural repairs on the conversion itself give the same rows.
    SimulationTable ts = simulate_repair_all(tc, 2, 10);
    for (int v = 0; v < 6; ++v) {
        std::vector<uint32_t> want = v < 4 ? mdr_row_set(v, 5) : (v == 4 ? j4 : j5);
        for (const auto& s : ts.nodes[v].survivors) CHECK(s.accessed_rows == want);
    }
}

TEST_CASE("parity upgrade validates its input") {
    CodeSpec bad = evenodd(3);  // naive systematic nodes
    CHECK_THROWS_AS(algorithm2(bad, false), Error);

    CodeSpec broken = mdr1_6_4();
    broken.repair[0] = RowSelect{{0, 1}};  // too little data to repair
    CHECK_THROWS_AS(algorithm2(broken, false), Error);
}

TEST_CASE("wider walk obeys the growth law") {
    Algorithm1Result res = algorithm1(cauchy_binary_mds(7, 4, 4));
    CHECK(res.rounds.size() == 3);
    CHECK(res.final_spec.alpha == 27 * 4);
    CHECK(res.rounds[0].plan.targets == std::vector<int>{0, 1, 2});
    CHECK(res.rounds[1].plan.targets == std::vector<int>{1, 2, 3});
    CHECK(res.rounds[2].plan.targets == std::vector<int>{4, 5, 6});
    SimulationTable t = simulate_repair_all(res.final_spec, 1, 11);
    CHECK(t.all_optimal_access());
    CHECK(t.all_optimal_bandwidth());
}

TEST_CASE("each round leaves the already-walked prefix optimal") {
    Algorithm1Result res = algorithm1(evenodd(3));
    std::vector<int> expect_optimal = {2, 3, 5};  // nodes with exact repair after each round
    for (size_t t = 0; t < res.rounds.size(); ++t) {
        SimulationTable table = simulate_repair_all(res.rounds[t].output, 2, 13 + t);
        for (int v = 0; v < expect_optimal[t]; ++v) {
            CHECK(table.nodes[v].optimal_access());
            CHECK(table.nodes[v].optimal_bandwidth());
        }
    }
}
