#include "tiqflash/netlist_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "tiqflash/error.hpp"

namespace tiqflash {

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (unsigned char c : s) {
        if (!std::isalnum(c) && c != '_') return false;
    }
    return true;
}

class SpiceWriter {
public:
    explicit SpiceWriter(const SpiceEmitOptions& opts) : opts_(opts) {}

    void line(const std::string& text) {
        out_ += text;
        out_ += '\n';
    }

    void mos(int& k, const std::string& d, const std::string& g, const std::string& s, bool pmos,
             const TransistorGeom& geom) {
        line(fmt::format("M{} {} {} {} {} {} W={:.4f}u L={:.4f}u", k++, d, g, s, s,
                         pmos ? opts_.model_name_p : opts_.model_name_n, geom.w, geom.l));
    }

    void inverter(int& k, const std::string& in, const std::string& out, const TransistorGeom& p,
                  const TransistorGeom& n) {
        mos(k, out, in, "VDD", true, p);
        mos(k, out, in, "VSS", false, n);
    }

    std::string take() { return std::move(out_); }

private:
    const SpiceEmitOptions& opts_;
    std::string out_;
};

void emit_logic_cells(SpiceWriter& w, const SpiceEmitOptions& opts) {
    const auto& p = opts.logic_p;
    const auto& n = opts.logic_n;
    int k = 1;
    w.line(".SUBCKT INV A Y VDD VSS");
    w.inverter(k, "A", "Y", p, n);
    w.line(".ENDS INV");

    k = 1;
    w.line(".SUBCKT NAND2 A B Y VDD VSS");
    w.line(fmt::format("M{} Y A VDD VDD {} W={:.4f}u L={:.4f}u", k++, opts.model_name_p, p.w, p.l));
    w.line(fmt::format("M{} Y B VDD VDD {} W={:.4f}u L={:.4f}u", k++, opts.model_name_p, p.w, p.l));
    w.line(fmt::format("M{} Y A NS VSS {} W={:.4f}u L={:.4f}u", k++, opts.model_name_n, n.w, n.l));
    w.line(fmt::format("M{} NS B VSS VSS {} W={:.4f}u L={:.4f}u", k++, opts.model_name_n, n.w, n.l));
    w.line(".ENDS NAND2");

    if (opts.gate_style == GateStyle::nand_mapped) return;

    k = 1;
    w.line(".SUBCKT OR2 A B Y VDD VSS");
    w.line(fmt::format("M{} NP A VDD VDD {} W={:.4f}u L={:.4f}u", k++, opts.model_name_p, p.w, p.l));
    w.line(fmt::format("M{} NY B NP VDD {} W={:.4f}u L={:.4f}u", k++, opts.model_name_p, p.w, p.l));
    w.line(fmt::format("M{} NY A VSS VSS {} W={:.4f}u L={:.4f}u", k++, opts.model_name_n, n.w, n.l));
    w.line(fmt::format("M{} NY B VSS VSS {} W={:.4f}u L={:.4f}u", k++, opts.model_name_n, n.w, n.l));
    w.inverter(k, "NY", "Y", p, n);
    w.line(".ENDS OR2");

    w.line(".SUBCKT AND2 A B Y VDD VSS");
    w.line("X1 A B NY VDD VSS NAND2");
    w.line("X2 NY Y VDD VSS INV");
    w.line(".ENDS AND2");
}

void emit_encoder_instances(SpiceWriter& w, const GateNetlist& net, GateStyle style) {
    std::vector<std::string> names(net.leaf_count + net.gates.size());
    for (std::size_t i = 0; i < net.leaf_count; ++i) names[i] = fmt::format("T{}", i);
    for (const auto& g : net.gates) names[g.id] = fmt::format("E{}", g.id);
    for (std::size_t k = 0; k < net.outputs.size(); ++k) names[net.outputs[k]] = fmt::format("BIT{}", k);

    for (const auto& g : net.gates) {
        const auto& y = names[g.id];
        if (g.kind == GateKind::not1) {
            w.line(fmt::format("XG{} {} {} VDD VSS INV", g.id, names[g.inputs[0]], y));
            continue;
        }
        const auto& a = names[g.inputs[0]];
        const auto& b = names[g.inputs[1]];
        if (style == GateStyle::or2) {
            w.line(fmt::format("XG{} {} {} {} VDD VSS {}", g.id, a, b, y,
                               g.kind == GateKind::or2 ? "OR2" : "AND2"));
        } else if (g.kind == GateKind::or2) {
            // a + b = NAND(NOT a, NOT b)
            w.line(fmt::format("XG{}A {} E{}_NA VDD VSS INV", g.id, a, g.id));
            w.line(fmt::format("XG{}B {} E{}_NB VDD VSS INV", g.id, b, g.id));
            w.line(fmt::format("XG{} E{}_NA E{}_NB {} VDD VSS NAND2", g.id, g.id, g.id, y));
        } else {
            w.line(fmt::format("XG{} {} {} E{}_N VDD VSS NAND2", g.id, a, b, g.id));
            w.line(fmt::format("XG{}I E{}_N {} VDD VSS INV", g.id, g.id, y));
        }
    }
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::parse_error, fmt::format("design: {} at {}", what, path.empty() ? "/" : path));
}

void check_keys(const nlohmann::json& obj, const std::string& path,
                std::initializer_list<const char*> keys) {
    if (!obj.is_object()) schema_error(path, "expected an object");
    for (const char* key : keys) {
        if (!obj.contains(key)) schema_error(path + "/" + key, "missing key");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : keys) known = known || key == k;
        if (!known) schema_error(path + "/" + key, "unknown key");
    }
}

double number_at(const nlohmann::json& obj, const std::string& path, const char* key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) schema_error(path + "/" + key, "expected a number");
    return v.get<double>();
}

}  // namespace

void SpiceEmitOptions::validate() const {
    if (!is_identifier(model_name_n) || !is_identifier(model_name_p)) {
        throw Error(ErrorCode::invalid_params, "SPICE model names must be non-empty [A-Za-z0-9_]");
    }
    for (const auto* g : {&booster_p, &booster_n, &logic_p, &logic_n}) {
        if (!(g->w > 0.0) || !(g->l > 0.0)) {
            throw Error(ErrorCode::invalid_geometry, "SPICE cell geometries must be > 0");
        }
    }
    if (model_card) model_card->validate();
}

std::string emit_spice(const ComparatorBank& bank, const SpiceEmitOptions& opts) {
    bank.validate();
    opts.validate();
    SpiceWriter w(opts);

    w.line(fmt::format("* TIQ flash ADC comparator bank: {} bits, {} comparators, VDD={:.4f}",
                       bank.n_bits, bank.designs.size(), bank.vdd));
    w.line(fmt::format("* boosters: {}", opts.include_boosters ? "yes" : "no"));

    if (opts.model_card) {
        const auto& p = *opts.model_card;
        const double cox = std::sqrt((p.kprime_n / p.mu_n) * (p.kprime_p / p.mu_p));
        w.line(fmt::format(".MODEL {} NMOS (LEVEL=1 VTO={:.6g} KP={:.6g} LAMBDA={:.6g} UO={:.6g})",
                           opts.model_name_n, p.vtn, cox * p.mu_n * 1e-6, p.lambda_n, p.mu_n));
        w.line(fmt::format(".MODEL {} PMOS (LEVEL=1 VTO={:.6g} KP={:.6g} LAMBDA={:.6g} UO={:.6g})",
                           opts.model_name_p, -p.vtp_mag, cox * p.mu_p * 1e-6, p.lambda_p, p.mu_p));
    }

    for (std::size_t i = 0; i < bank.designs.size(); ++i) {
        const auto& d = bank.designs[i];
        const TransistorGeom p{d.wp, d.l};
        const TransistorGeom n{d.wn, d.l};
        const auto mid = fmt::format("N{}_MID", i);
        int k = 1;
        w.line(fmt::format(".SUBCKT TIQ_COMP_{} IN OUT VDD VSS", i));
        w.line(fmt::format("* V_ref = {:.9f} V (ideal {:.9f} V)", d.v_ref_achieved, d.v_ref_ideal));
        w.inverter(k, "IN", mid, p, n);
        if (opts.include_boosters) {
            const auto cmp = fmt::format("N{}_CMP", i);
            const auto bst = fmt::format("N{}_BST", i);
            w.inverter(k, mid, cmp, p, n);
            w.inverter(k, cmp, bst, opts.booster_p, opts.booster_n);
            w.inverter(k, bst, "OUT", opts.booster_p, opts.booster_n);
        } else {
            w.inverter(k, mid, "OUT", p, n);
        }
        w.line(fmt::format(".ENDS TIQ_COMP_{}", i));
    }

    GateNetlist encoder;
    if (opts.include_encoder) {
        encoder = build_fat_tree(bank.n_bits, LeafKind::thermometer);
        emit_logic_cells(w, opts);
    }

    w.line("* top level");
    for (std::size_t i = 0; i < bank.designs.size(); ++i) {
        w.line(fmt::format("XCMP{} VIN T{} VDD VSS TIQ_COMP_{}", i, i, i));
    }
    if (opts.include_encoder) emit_encoder_instances(w, encoder, opts.gate_style);
    w.line(".END");
    return w.take();
}

nlohmann::json save_design(const ComparatorBank& bank) {
    bank.validate();
    nlohmann::json designs = nlohmann::json::array();
    for (const auto& d : bank.designs) {
        designs.push_back({{"wp", d.wp},
                           {"wn", d.wn},
                           {"l", d.l},
                           {"v_ref_achieved", d.v_ref_achieved},
                           {"v_ref_ideal", d.v_ref_ideal}});
    }
    return {{"n_bits", bank.n_bits},
            {"vdd", bank.vdd},
            {"ladder",
             {{"v_low", bank.ladder.v_low}, {"v_high", bank.ladder.v_high}, {"v_lsb", bank.ladder.v_lsb}}},
            {"designs", designs}};
}

ComparatorBank load_design(const nlohmann::json& doc) {
    check_keys(doc, "", {"n_bits", "vdd", "ladder", "designs"});
    if (!doc["n_bits"].is_number_integer()) schema_error("/n_bits", "expected an integer");

    ComparatorBank bank;
    bank.n_bits = doc["n_bits"].get<int>();
    if (bank.n_bits < 2 || bank.n_bits > 16) schema_error("/n_bits", "resolution must be in [2, 16]");
    bank.vdd = number_at(doc, "", "vdd");

    const auto& ladder = doc["ladder"];
    check_keys(ladder, "/ladder", {"v_low", "v_high", "v_lsb"});
    bank.ladder.n_bits = bank.n_bits;
    bank.ladder.vdd = bank.vdd;
    bank.ladder.v_low = number_at(ladder, "/ladder", "v_low");
    bank.ladder.v_high = number_at(ladder, "/ladder", "v_high");
    bank.ladder.v_lsb = number_at(ladder, "/ladder", "v_lsb");

    const auto& designs = doc["designs"];
    if (!designs.is_array()) schema_error("/designs", "expected an array");
    const std::size_t expected = rung_count(bank.n_bits);
    if (designs.size() != expected) {
        schema_error("/designs", fmt::format("expected {} entries, found {}", expected, designs.size()));
    }
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto path = fmt::format("/designs/{}", i);
        const auto& e = designs[i];
        check_keys(e, path, {"wp", "wn", "l", "v_ref_achieved", "v_ref_ideal"});
        ComparatorDesign d;
        d.wp = number_at(e, path, "wp");
        d.wn = number_at(e, path, "wn");
        d.l = number_at(e, path, "l");
        d.v_ref_achieved = number_at(e, path, "v_ref_achieved");
        d.v_ref_ideal = number_at(e, path, "v_ref_ideal");
        d.abs_error = std::abs(d.v_ref_achieved - d.v_ref_ideal);
        if (!(d.wp > 0.0) || !(d.wn > 0.0) || !(d.l > 0.0)) schema_error(path, "sizes must be > 0");
        if (i > 0 && !(d.v_ref_achieved > bank.designs.back().v_ref_achieved)) {
            schema_error(path + "/v_ref_achieved", "thresholds must be strictly increasing");
        }
        bank.designs.push_back(d);
        bank.ladder.ideal_refs.push_back(d.v_ref_ideal);
    }
    bank.validate();
    return bank;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, fmt::format("cannot write {}", path.string()));
    out << text;
    if (!out) throw Error(ErrorCode::io_error, fmt::format("failed writing {}", path.string()));
}

void write_design_file(const std::filesystem::path& path, const ComparatorBank& bank) {
    write_text_file(path, save_design(bank).dump(2) + "\n");
}

ComparatorBank read_design_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, fmt::format("cannot open design file {}", path.string()));
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, fmt::format("{}: {}", path.string(), e.what()));
    }
    return load_design(doc);
}

std::string write_gate_netlist(const GateNetlist& net) {
    net.validate();
    std::string out = fmt::format("# fnet n_bits={} leaves={}\n", net.n_bits,
                                  net.leaf_kind == LeafKind::one_hot ? "one-hot" : "thermometer");
    for (std::size_t i = 0; i < net.leaf_count; ++i) out += fmt::format("I{}\n", i);
    for (const auto& g : net.gates) {
        out += fmt::format("G{} {}", g.id, to_string(g.kind));
        for (auto in : g.inputs) out += fmt::format(" {}", in);
        out += '\n';
    }
    for (std::size_t k = net.outputs.size(); k-- > 0;) {
        out += fmt::format("O{} {}\n", k, net.outputs[k]);
    }
    return out;
}

GateNetlist read_gate_netlist(std::istream& in) {
    GateNetlist net;
    net.leaf_kind = LeafKind::one_hot;
    std::map<std::size_t, std::size_t> outputs;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) -> void {
        throw Error(ErrorCode::parse_error, fmt::format("gate netlist line {}: {}", line_no, what));
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head == "#") {
            std::string tag, token;
            fields >> tag;
            while (tag == "fnet" && fields >> token) {
                if (token == "leaves=thermometer") net.leaf_kind = LeafKind::thermometer;
            }
            continue;
        }
        if (head.size() < 2) fail("unrecognised record '" + line + "'");
        std::size_t index = 0;
        try {
            index = std::stoul(head.substr(1));
        } catch (const std::exception&) {
            fail("bad record id '" + head + "'");
        }
        switch (head[0]) {
        case 'I':
            if (!net.gates.empty() || !outputs.empty() || index != net.leaf_count) {
                fail("leaves must be declared first and in order");
            }
            ++net.leaf_count;
            break;
        case 'G': {
            if (!outputs.empty()) fail("gate declared after outputs");
            std::string kind;
            fields >> kind;
            Gate g{index, GateKind::or2, {}};
            if (kind == "OR2") {
                g.kind = GateKind::or2;
            } else if (kind == "AND2") {
                g.kind = GateKind::and2;
            } else if (kind == "NOT") {
                g.kind = GateKind::not1;
            } else {
                fail("unknown gate kind '" + kind + "'");
            }
            std::size_t input = 0;
            while (fields >> input) g.inputs.push_back(input);
            if (!fields.eof()) fail("bad gate input list");
            net.gates.push_back(std::move(g));
            break;
        }
        case 'O': {
            std::size_t node = 0;
            if (!(fields >> node)) fail("output without a node id");
            if (!outputs.emplace(index, node).second) fail("duplicate output bit");
            break;
        }
        default:
            fail("unrecognised record '" + line + "'");
        }
    }
    net.n_bits = static_cast<int>(outputs.size());
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        auto it = outputs.find(k);
        if (it == outputs.end()) {
            throw Error(ErrorCode::parse_error, fmt::format("gate netlist: output bit {} missing", k));
        }
        net.outputs.push_back(it->second);
    }
    net.validate();
    return net;
}

}  // namespace tiqflash
