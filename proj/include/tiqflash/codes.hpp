#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tiqflash {

/// Comparator outputs, bit 0 = lowest threshold. Well formed when no set bit
/// sits above a clear one.
struct ThermometerCode {
    std::vector<bool> bits;

    std::size_t popcount() const noexcept;
    bool well_formed() const noexcept;

    friend bool operator==(const ThermometerCode&, const ThermometerCode&) = default;
};

/// 1-out-of-m code; all-clear encodes "every comparator low".
struct OneHotCode {
    std::vector<bool> bits;

    bool valid() const noexcept;

    friend bool operator==(const OneHotCode&, const OneHotCode&) = default;
};

struct BinaryCode {
    std::uint32_t value = 0;
    int n_bits = 0;

    friend bool operator==(const BinaryCode&, const BinaryCode&) = default;
};

enum class GateKind { or2, and2, not1 };

const char* to_string(GateKind kind) noexcept;

/// Node ids: leaves are 0..leaf_count-1, gate g (in list order) is leaf_count + g.
struct Gate {
    std::size_t id;
    GateKind kind;
    std::vector<std::size_t> inputs;

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// What the leaves of a netlist carry.
enum class LeafKind {
    one_hot,      // leaves are a_0..a_{m-1}
    thermometer,  // leaves are t_0..t_{m-1}; an AND/NOT stage forms the one-hot code
};

struct GateNetlist {
    int n_bits = 0;
    LeafKind leaf_kind = LeafKind::one_hot;
    std::size_t leaf_count = 0;
    std::vector<Gate> gates;
    /// outputs[k] is the node driving Bit_k.
    std::vector<std::size_t> outputs;

    /// Checks ids, arity, topological order and output reachability.
    void validate() const;

    friend bool operator==(const GateNetlist&, const GateNetlist&) = default;
};

/// a[i] = t[i] AND NOT t[i+1] with t[m] = 0. Throws BubbleError on a
/// non-monotone input.
OneHotCode one_hot_from_thermometer(const ThermometerCode& t);

/// Balanced OR trees, one per output bit. Bit k ORs every a[j-1] whose code j
/// has bit k set, pairing leaves in descending index order. With
/// LeafKind::thermometer the AND/NOT one-hot stage is prepended.
GateNetlist build_fat_tree(int n_bits, LeafKind leaves = LeafKind::one_hot);

/// Evaluates a netlist in gate order on raw leaf values.
BinaryCode eval_netlist(const GateNetlist& net, const std::vector<bool>& leaves);
BinaryCode eval_netlist(const GateNetlist& net, const OneHotCode& a);
BinaryCode eval_netlist(const GateNetlist& net, const ThermometerCode& t);

/// ROM-style reference: a[i] set -> i + 1, all clear -> 0.
BinaryCode rom_encoder_oracle(const OneHotCode& a, int n_bits);

struct NetlistStats {
    std::size_t gate_count = 0;
    std::size_t or_count = 0;
    std::size_t and_count = 0;
    std::size_t not_count = 0;
    /// OR levels between the one-hot signals and each output, indexed by bit.
    std::vector<std::size_t> or_depth_per_output;
    std::vector<std::size_t> or_gates_per_output;
    /// 1 when the AND/NOT stage is part of the netlist.
    std::size_t leaf_stage_depth = 0;
};

NetlistStats netlist_stats(const GateNetlist& net);

}  // namespace tiqflash
