#include <gtest/gtest.h>

#include <bit>
#include <set>

#include "oracles.hpp"
#include "tiqflash/codes.hpp"
#include "tiqflash/error.hpp"

using namespace tiqflash;

namespace {

OneHotCode one_hot(std::size_t m, int index) {
    OneHotCode a{std::vector<bool>(m, false)};
    if (index >= 0) a.bits[static_cast<std::size_t>(index)] = true;
    return a;
}

ThermometerCode thermo(std::size_t m, std::size_t ones) {
    ThermometerCode t{std::vector<bool>(m, false)};
    for (std::size_t i = 0; i < ones; ++i) t.bits[i] = true;
    return t;
}

std::size_t leaves_of(int n) { return (std::size_t{1} << n) - 1; }

/// Leaves reachable from `node`, in left-to-right order.
void collect_leaves(const GateNetlist& net, std::size_t node, std::vector<std::size_t>& out) {
    if (node < net.leaf_count) {
        out.push_back(node);
        return;
    }
    for (auto in : net.gates[node - net.leaf_count].inputs) collect_leaves(net, in, out);
}

}  // namespace

// 3-bit truth table: one-hot leaf a_i encodes i + 1; all-clear encodes 0.
TEST(TruthTable, ThreeBitColumns) {
    const auto net = build_fat_tree(3);
    const std::uint32_t expected[7] = {0b001, 0b010, 0b011, 0b100, 0b101, 0b110, 0b111};
    EXPECT_EQ(eval_netlist(net, one_hot(7, -1)).value, 0u);
    EXPECT_EQ(rom_encoder_oracle(one_hot(7, -1), 3).value, 0u);
    for (int i = 0; i < 7; ++i) {
        EXPECT_EQ(eval_netlist(net, one_hot(7, i)).value, expected[i]) << "a" << i;
        EXPECT_EQ(rom_encoder_oracle(one_hot(7, i), 3).value, expected[i]) << "a" << i;
    }
}

TEST(Thermometer, ThreeBitConversions) {
    const auto all = one_hot_from_thermometer(thermo(7, 7));
    EXPECT_EQ(all, one_hot(7, 6));
    EXPECT_EQ(one_hot_from_thermometer(thermo(7, 0)), one_hot(7, -1));
    EXPECT_EQ(one_hot_from_thermometer(thermo(7, 2)), one_hot(7, 1));
}

TEST(Thermometer, WellFormedAndPopcount) {
    EXPECT_TRUE(thermo(7, 3).well_formed());
    EXPECT_EQ(thermo(7, 3).popcount(), 3u);
    ThermometerCode bad{{true, false, true}};
    EXPECT_FALSE(bad.well_formed());
}

TEST(OneHot, Validity) {
    EXPECT_TRUE(one_hot(7, -1).valid());
    EXPECT_TRUE(one_hot(7, 4).valid());
    OneHotCode two{{true, false, true}};
    EXPECT_FALSE(two.valid());
    try {
        rom_encoder_oracle(two, 2);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_one_hot);
    }
}

TEST(FatTree, ThreeBitGrouping) {
    const auto net = build_fat_tree(3);
    ASSERT_EQ(net.outputs.size(), 3u);
    const std::vector<std::vector<std::size_t>> want{{6, 4, 2, 0}, {6, 5, 2, 1}, {6, 5, 4, 3}};
    for (int k = 0; k < 3; ++k) {
        std::vector<std::size_t> got;
        collect_leaves(net, net.outputs[static_cast<std::size_t>(k)], got);
        EXPECT_EQ(got, want[static_cast<std::size_t>(k)]) << "bit " << k;
    }
    // Bit_2 = (a6 + a5) + (a4 + a3)
    const auto& root = net.gates[net.outputs[2] - net.leaf_count];
    const auto& left = net.gates[root.inputs[0] - net.leaf_count];
    const auto& right = net.gates[root.inputs[1] - net.leaf_count];
    EXPECT_EQ(left.inputs, (std::vector<std::size_t>{6, 5}));
    EXPECT_EQ(right.inputs, (std::vector<std::size_t>{4, 3}));
}

TEST(FatTree, TwoBitSingleGates) {
    const auto net = build_fat_tree(2);
    ASSERT_EQ(net.gates.size(), 2u);
    std::vector<std::size_t> b1, b0;
    collect_leaves(net, net.outputs[1], b1);
    collect_leaves(net, net.outputs[0], b0);
    EXPECT_EQ(b1, (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(b0, (std::vector<std::size_t>{2, 0}));
}

TEST(FatTree, RejectsDegenerateResolution) {
    EXPECT_THROW(build_fat_tree(1), Error);
}

TEST(FatTree, OracleEquivalenceExhaustive) {
    for (int n = 2; n <= 8; ++n) {
        const auto net = build_fat_tree(n);
        EXPECT_NO_THROW(net.validate());
        const auto m = leaves_of(n);
        for (int i = -1; i < static_cast<int>(m); ++i) {
            const auto a = one_hot(m, i);
            ASSERT_EQ(eval_netlist(net, a), rom_encoder_oracle(a, n)) << "n=" << n << " i=" << i;
        }
    }
}

TEST(FatTree, PipelineIdentityExhaustive) {
    for (int n = 2; n <= 8; ++n) {
        const auto net = build_fat_tree(n);
        const auto fused = build_fat_tree(n, LeafKind::thermometer);
        const auto m = leaves_of(n);
        for (std::size_t ones = 0; ones <= m; ++ones) {
            const auto t = thermo(m, ones);
            ASSERT_EQ(eval_netlist(net, one_hot_from_thermometer(t)).value, ones);
            ASSERT_EQ(eval_netlist(fused, t).value, ones);
        }
    }
}

TEST(FatTree, DepthLaw) {
    for (int n = 2; n <= 10; ++n) {
        const auto s = netlist_stats(build_fat_tree(n));
        const std::size_t per_bit = (std::size_t{1} << (n - 1)) - 1;
        EXPECT_EQ(s.or_count, per_bit * static_cast<std::size_t>(n));
        EXPECT_EQ(s.leaf_stage_depth, 0u);
        for (int k = 0; k < n; ++k) {
            EXPECT_EQ(s.or_depth_per_output[static_cast<std::size_t>(k)], static_cast<std::size_t>(n - 1));
            EXPECT_EQ(s.or_gates_per_output[static_cast<std::size_t>(k)], per_bit);
        }
    }
    const auto six = netlist_stats(build_fat_tree(6));
    EXPECT_EQ(six.or_gates_per_output[0], 31u);
    EXPECT_EQ(six.or_depth_per_output[5], 5u);
}

TEST(FatTree, FusedStageStats) {
    const auto s = netlist_stats(build_fat_tree(3, LeafKind::thermometer));
    EXPECT_EQ(s.leaf_stage_depth, 1u);
    EXPECT_GT(s.and_count, 0u);
    EXPECT_EQ(s.or_depth_per_output, (std::vector<std::size_t>{2, 2, 2}));
}

TEST(FatTree, GatesAreTwoInputOrsInTopologicalOrder) {
    for (int n = 2; n <= 10; ++n) {
        const auto net = build_fat_tree(n);
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < net.leaf_count; ++i) seen.insert(i);
        for (const auto& g : net.gates) {
            EXPECT_EQ(g.kind, GateKind::or2);
            ASSERT_EQ(g.inputs.size(), 2u);
            for (auto in : g.inputs) EXPECT_TRUE(seen.count(in));
            seen.insert(g.id);
        }
    }
}

TEST(Bubbles, EveryNonMonotoneVectorRejectedAtFirstViolation) {
    for (std::size_t m : {3u, 7u, 15u}) {
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            ThermometerCode t{std::vector<bool>(m)};
            for (std::size_t i = 0; i < m; ++i) t.bits[i] = (mask >> i) & 1u;
            const bool monotone = std::has_single_bit(mask + 1u);
            EXPECT_EQ(t.well_formed(), monotone);
            if (monotone) {
                EXPECT_NO_THROW(one_hot_from_thermometer(t));
                continue;
            }
            std::size_t first = 0;
            for (std::size_t i = 1; i < m; ++i) {
                if (t.bits[i] && !t.bits[i - 1]) {
                    first = i;
                    break;
                }
            }
            try {
                one_hot_from_thermometer(t);
                ADD_FAILURE() << "mask " << mask;
            } catch (const BubbleError& e) {
                EXPECT_EQ(e.index(), first) << "mask " << mask;
            }
        }
    }
}

TEST(Eval, ArityMismatchRejected) {
    const auto net = build_fat_tree(3);
    EXPECT_THROW(eval_netlist(net, one_hot(5, 1)), Error);
}
