#include "tiqflash/codes.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "tiqflash/error.hpp"
#include "tiqflash/synthesis.hpp"

namespace tiqflash {

std::size_t ThermometerCode::popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

bool ThermometerCode::well_formed() const noexcept {
    for (std::size_t i = 1; i < bits.size(); ++i) {
        if (bits[i] && !bits[i - 1]) return false;
    }
    return true;
}

bool OneHotCode::valid() const noexcept {
    return std::count(bits.begin(), bits.end(), true) <= 1;
}

const char* to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::or2: return "OR2";
    case GateKind::and2: return "AND2";
    case GateKind::not1: return "NOT";
    }
    return "?";
}

OneHotCode one_hot_from_thermometer(const ThermometerCode& t) {
    const auto& b = t.bits;
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i] && !b[i - 1]) {
            throw BubbleError(i, fmt::format("thermometer bubble: bit {} set above clear bit {}", i, i - 1));
        }
    }
    OneHotCode a;
    a.bits.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const bool next = (i + 1 < b.size()) ? b[i + 1] : false;
        a.bits[i] = b[i] && !next;
    }
    return a;
}

void GateNetlist::validate() const {
    if (n_bits < 2) throw Error(ErrorCode::degenerate_resolution, "netlist resolution must be >= 2");
    if (leaf_count == 0) throw Error(ErrorCode::parse_error, "netlist has no leaves");
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const auto& gate = gates[g];
        const std::size_t expected_id = leaf_count + g;
        if (gate.id != expected_id) {
            throw Error(ErrorCode::parse_error,
                        fmt::format("gate {} has id {}, expected {}", g, gate.id, expected_id));
        }
        const std::size_t arity = gate.kind == GateKind::not1 ? 1 : 2;
        if (gate.inputs.size() != arity) {
            throw Error(ErrorCode::parse_error,
                        fmt::format("gate {} ({}) has {} inputs", gate.id, to_string(gate.kind),
                                    gate.inputs.size()));
        }
        for (auto in : gate.inputs) {
            if (in >= gate.id) {
                throw Error(ErrorCode::parse_error,
                            fmt::format("gate {} reads node {} which does not precede it", gate.id, in));
            }
        }
    }
    if (outputs.size() != static_cast<std::size_t>(n_bits)) {
        throw Error(ErrorCode::parse_error,
                    fmt::format("netlist has {} outputs, expected {}", outputs.size(), n_bits));
    }
    for (auto out : outputs) {
        if (out >= leaf_count + gates.size()) {
            throw Error(ErrorCode::parse_error, fmt::format("output refers to unknown node {}", out));
        }
    }
}

GateNetlist build_fat_tree(int n_bits, LeafKind leaves) {
    const std::size_t m = rung_count(n_bits);
    GateNetlist net;
    net.n_bits = n_bits;
    net.leaf_kind = leaves;
    net.leaf_count = m;

    auto add_gate = [&](GateKind kind, std::vector<std::size_t> inputs) {
        const std::size_t id = net.leaf_count + net.gates.size();
        net.gates.push_back({id, kind, std::move(inputs)});
        return id;
    };

    // Node carrying a[i].
    std::vector<std::size_t> one_hot(m);
    for (std::size_t i = 0; i < m; ++i) one_hot[i] = i;
    if (leaves == LeafKind::thermometer) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const std::size_t inv = add_gate(GateKind::not1, {i + 1});
            one_hot[i] = add_gate(GateKind::and2, {i, inv});
        }
    }

    net.outputs.assign(static_cast<std::size_t>(n_bits), 0);
    for (int k = n_bits - 1; k >= 0; --k) {
        std::vector<std::size_t> level;
        for (std::size_t j = m; j >= 1; --j) {
            if ((j >> k) & 1u) level.push_back(one_hot[j - 1]);
        }
        // 2^(n-1) leaves per bit: every level pairs up evenly.
        if (level.size() != (std::size_t{1} << (n_bits - 1))) {
            throw Error(ErrorCode::arity_mismatch, "fat tree leaf count is not 2^(n-1)");
        }
        while (level.size() > 1) {
            std::vector<std::size_t> next;
            next.reserve(level.size() / 2);
            for (std::size_t i = 0; i < level.size(); i += 2) {
                next.push_back(add_gate(GateKind::or2, {level[i], level[i + 1]}));
            }
            level = std::move(next);
        }
        net.outputs[static_cast<std::size_t>(k)] = level.front();
    }
    return net;
}

BinaryCode eval_netlist(const GateNetlist& net, const std::vector<bool>& leaves) {
    if (leaves.size() != net.leaf_count) {
        throw Error(ErrorCode::arity_mismatch,
                    fmt::format("netlist expects {} leaves, got {}", net.leaf_count, leaves.size()));
    }
    std::vector<bool> value(net.leaf_count + net.gates.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) value[i] = leaves[i];
    for (const auto& g : net.gates) {
        switch (g.kind) {
        case GateKind::or2: value[g.id] = value[g.inputs[0]] || value[g.inputs[1]]; break;
        case GateKind::and2: value[g.id] = value[g.inputs[0]] && value[g.inputs[1]]; break;
        case GateKind::not1: value[g.id] = !value[g.inputs[0]]; break;
        }
    }
    BinaryCode out{0, net.n_bits};
    for (std::size_t k = 0; k < net.outputs.size(); ++k) {
        if (value[net.outputs[k]]) out.value |= (std::uint32_t{1} << k);
    }
    return out;
}

BinaryCode eval_netlist(const GateNetlist& net, const OneHotCode& a) {
    if (net.leaf_kind != LeafKind::one_hot) {
        throw Error(ErrorCode::arity_mismatch, "netlist leaves are thermometer bits, not a one-hot code");
    }
    return eval_netlist(net, a.bits);
}

BinaryCode eval_netlist(const GateNetlist& net, const ThermometerCode& t) {
    if (net.leaf_kind == LeafKind::thermometer) return eval_netlist(net, t.bits);
    return eval_netlist(net, one_hot_from_thermometer(t));
}

BinaryCode rom_encoder_oracle(const OneHotCode& a, int n_bits) {
    const std::size_t m = rung_count(n_bits);
    if (a.bits.size() != m) {
        throw Error(ErrorCode::arity_mismatch,
                    fmt::format("one-hot code has {} bits, expected {}", a.bits.size(), m));
    }
    BinaryCode out{0, n_bits};
    bool seen = false;
    for (std::size_t i = 0; i < m; ++i) {
        if (!a.bits[i]) continue;
        if (seen) throw Error(ErrorCode::invalid_one_hot, "more than one bit set in one-hot code");
        seen = true;
        out.value = static_cast<std::uint32_t>(i + 1);
    }
    return out;
}

NetlistStats netlist_stats(const GateNetlist& net) {
    NetlistStats s;
    s.gate_count = net.gates.size();
    const std::size_t nodes = net.leaf_count + net.gates.size();
    std::vector<std::size_t> depth(nodes, 0);
    std::vector<std::size_t> cone(nodes, 0);
    for (const auto& g : net.gates) {
        std::size_t d = 0;
        std::size_t c = 0;
        for (auto in : g.inputs) {
            d = std::max(d, depth[in]);
            c += cone[in];
        }
        switch (g.kind) {
        case GateKind::or2:
            ++s.or_count;
            depth[g.id] = d + 1;
            cone[g.id] = c + 1;
            break;
        case GateKind::and2:
            ++s.and_count;
            s.leaf_stage_depth = 1;
            break;
        case GateKind::not1: ++s.not_count; break;
        }
    }
    for (auto out : net.outputs) {
        s.or_depth_per_output.push_back(depth[out]);
        s.or_gates_per_output.push_back(cone[out]);
    }
    return s;
}

}  // namespace tiqflash
