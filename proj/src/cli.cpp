#include "tiqflash/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json_config.hpp"
#include "tiqflash/codes.hpp"
#include "tiqflash/devices.hpp"
#include "tiqflash/error.hpp"
#include "tiqflash/metrics.hpp"
#include "tiqflash/netlist_io.hpp"
#include "tiqflash/plot.hpp"
#include "tiqflash/simulator.hpp"
#include "tiqflash/synthesis.hpp"

namespace tiqflash::cli {

namespace {

struct SizeArgs {
    int bits = 0;
    double vdd = 2.5;
    double gain = 0.0;
    std::string preset{kGenericPresetName};
    std::vector<double> grid;
    double length = 0.25;
    std::optional<double> center;
    std::string tie_break = "area";
    std::string output;
};

struct EncodeArgs {
    int bits = 0;
    std::string output;
    bool stats = false;
    bool fused = false;
};

struct SimulateArgs {
    std::string design;
    std::vector<double> sine;
    bool ramp = false;
    double rate = 0.0;
    double duration = 0.0;
    bool analog = false;
    std::string preset{kGenericPresetName};
    std::string output;
};

struct AnalyzeArgs {
    std::string design;
    bool dnl = false;
    std::vector<double> drift;
    std::string preset{kGenericPresetName};
    std::string output;
};

struct NetlistArgs {
    std::string design;
    bool boosters = false;
    std::string model_card;
    bool encoder = false;
    std::string gate_style = "or2";
    std::string output;
};

struct PlotArgs {
    std::string input;
    std::string kind;
    std::string output;
};

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorCode::invalid_params, what); }

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, fmt::format("cannot open {}", path));
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, fmt::format("{}: {}", path, e.what()));
    }
}

int cmd_size(const SizeArgs& a, std::ostream& out) {
    const auto params = find_preset(a.preset);
    WidthGrid grid;
    if (!a.grid.empty()) {
        if (a.grid.size() != 3) bad_input("--grid expects wmin,wmax,step");
        grid.w_min = a.grid[0];
        grid.w_max = a.grid[1];
        grid.w_step = a.grid[2];
    }
    grid.l_fixed = a.length;
    TieBreak tie = TieBreak::smaller_area;
    if (a.tie_break == "wp") tie = TieBreak::smaller_wp;

    const auto ladder = compute_ladder(LadderSpec{a.bits, a.vdd, a.gain, a.center}, params);
    const auto candidates = enumerate_candidates(grid, params, a.vdd);
    const auto bank = size_comparators(ladder, candidates, tie);
    write_design_file(a.output, bank);

    const auto r = bank_report(bank);
    out << fmt::format("sized {} comparators from {} candidates\n", r.rows, candidates.size());
    out << fmt::format("ladder {:.6f} .. {:.6f} V, V_LSB = {:.6f} mV\n", ladder.v_low, ladder.v_high,
                       ladder.v_lsb * 1e3);
    out << fmt::format("achieved {:.6f} .. {:.6f} V, max error {:.6f} mV, total width {:.4f} um\n",
                       r.v_min, r.v_max, r.max_abs_error * 1e3, r.total_width);
    out << fmt::format("wrote {}\n", a.output);
    return kExitOk;
}

int cmd_encode(const EncodeArgs& a, std::ostream& out) {
    const auto net = build_fat_tree(a.bits, a.fused ? LeafKind::thermometer : LeafKind::one_hot);
    const auto text = write_gate_netlist(net);
    if (!a.output.empty()) {
        write_text_file(a.output, text);
        out << fmt::format("wrote {}\n", a.output);
    } else if (!a.stats) {
        out << text;
    }
    if (a.stats) {
        const auto s = netlist_stats(net);
        const auto latency = encoder_latency_bound(a.bits);
        out << fmt::format("bits: {}\n", a.bits);
        out << fmt::format("leaves: {} ({})\n", net.leaf_count, a.fused ? "thermometer" : "one-hot");
        out << fmt::format("gates: {} (OR2 {}, AND2 {}, NOT {})\n", s.gate_count, s.or_count, s.and_count,
                           s.not_count);
        std::size_t depth = 0;
        for (auto d : s.or_depth_per_output) depth = std::max(depth, d);
        out << fmt::format("or depth: {}\n", depth);
        for (std::size_t k = s.or_depth_per_output.size(); k-- > 0;) {
            out << fmt::format("Bit_{}: {} OR gates, depth {}\n", k, s.or_gates_per_output[k],
                               s.or_depth_per_output[k]);
        }
        out << fmt::format("latency bound: {} + {} gate levels\n", latency.leaf_stage, latency.or_levels);
    }
    return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const auto bank = read_design_file(a.design);
    Stimulus stimulus;
    if (!a.sine.empty()) {
        if (a.sine.size() != 3) bad_input("--sine expects freq,amplitude,offset");
        stimulus.kind = SineWave{a.sine[1], a.sine[2], a.sine[0]};
    } else {
        stimulus.kind = Ramp{0.0, bank.vdd};
    }
    stimulus.sample_rate = a.rate;
    stimulus.duration = a.duration;

    ComparatorMode mode = IdealComparators{};
    if (a.analog) mode = default_analog_mode(find_preset(a.preset), bank.vdd);

    const auto trace = simulate(bank, build_fat_tree(bank.n_bits), stimulus, mode);
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_text_file(a.output, csv.str());

    std::uint32_t lo = ~0u;
    std::uint32_t hi = 0;
    for (const auto& r : trace.records) {
        lo = std::min(lo, r.code.value);
        hi = std::max(hi, r.code.value);
    }
    out << fmt::format("{} samples, codes {} .. {}\nwrote {}\n", trace.records.size(), lo, hi, a.output);
    return kExitOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const auto bank = read_design_file(a.design);
    std::optional<LinearityReport> lin;
    std::optional<DriftReport> drift;
    if (a.dnl) lin = linearity(bank);
    if (!a.drift.empty()) drift = temperature_drift(bank, find_preset(a.preset), a.drift);

    if (ends_with(a.output, ".csv")) {
        if (lin.has_value() == drift.has_value()) {
            bad_input("CSV reports need exactly one of --dnl or --drift");
        }
        std::ostringstream csv;
        if (lin) {
            write_linearity_csv(csv, bank, *lin);
        } else {
            write_drift_csv(csv, *drift);
        }
        write_text_file(a.output, csv.str());
    } else {
        const auto latency = encoder_latency_bound(bank.n_bits);
        nlohmann::json report = {
            {"n_bits", bank.n_bits},
            {"vdd", bank.vdd},
            {"summary", to_json(bank_report(bank))},
            {"full_scale", to_json(full_scale(bank))},
            {"latency",
             {{"leaf_stage", latency.leaf_stage}, {"or_levels", latency.or_levels}, {"total", latency.total()}}},
        };
        if (lin) report["linearity"] = to_json(*lin);
        if (drift) report["drift"] = to_json(*drift);
        write_text_file(a.output, report.dump(2) + "\n");
    }

    const auto fs = full_scale(bank);
    out << fmt::format("full scale {:.6f} .. {:.6f} V\n", fs.v_low, fs.v_high);
    if (lin) {
        out << fmt::format("max |DNL| {:.4f} LSB, max |INL| {:.4f} LSB\n", lin->max_abs_dnl, lin->max_abs_inl);
    }
    if (drift) {
        for (const auto& e : drift->entries) {
            out << fmt::format("T = {:g} degC: max shift {:.4f} mV\n", e.t_c, e.max_ref_shift * 1e3);
        }
    }
    out << fmt::format("wrote {}\n", a.output);
    return kExitOk;
}

int cmd_netlist(const NetlistArgs& a, std::ostream& out) {
    const auto bank = read_design_file(a.design);
    SpiceEmitOptions opts;
    opts.include_boosters = a.boosters;
    opts.include_encoder = a.encoder;
    opts.gate_style = a.gate_style == "nand" ? GateStyle::nand_mapped : GateStyle::or2;
    if (!a.model_card.empty()) {
        opts.model_card = a.model_card == "generic" ? generic_025u() : find_preset(a.model_card);
    }
    write_text_file(a.output, emit_spice(bank, opts));
    out << fmt::format("wrote {}\n", a.output);
    return kExitOk;
}

DriftReport drift_from_json(const nlohmann::json& j) {
    DriftReport r;
    try {
        r.t_ref_c = j.at("t_ref_c").get<double>();
        for (const auto& e : j.at("entries")) {
            r.entries.push_back({e.at("t_c").get<double>(), e.at("v_low").get<double>(),
                                 e.at("v_high").get<double>(), e.at("max_ref_shift").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, fmt::format("report drift section: {}", e.what()));
    }
    return r;
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
    std::string svg;
    if (a.kind == "staircase") {
        std::ifstream in(a.input);
        if (!in) throw Error(ErrorCode::io_error, fmt::format("cannot open {}", a.input));
        svg = staircase_svg(read_trace_csv(in));
    } else {
        const auto report = read_json_file(a.input);
        if (a.kind == "dnl") {
            if (!report.contains("linearity")) {
                throw Error(ErrorCode::parse_error, "report has no linearity section (run analyze --dnl)");
            }
            svg = dnl_svg(report["linearity"].at("dnl").get<std::vector<double>>());
        } else {
            if (!report.contains("drift")) {
                throw Error(ErrorCode::parse_error, "report has no drift section (run analyze --drift)");
            }
            svg = drift_svg(drift_from_json(report["drift"]));
        }
    }
    write_text_file(a.output, svg);
    out << fmt::format("wrote {}\n", a.output);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Design and behavioural simulation of threshold-inverter-quantization flash ADCs",
                 "tiqflash"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file of flag values, one object per subcommand");
    app.require_subcommand(1);

    SizeArgs size_args;
    auto* size = app.add_subcommand("size", "Size a comparator bank and write the design JSON");
    size->add_option("-n,--bits", size_args.bits, "Resolution in bits (>= 2)")->required();
    size->add_option("--vdd", size_args.vdd, "Supply voltage in V")->capture_default_str();
    size->add_option("--gain", size_args.gain, "Inverter gain magnitude |A_v| setting the full scale")
        ->required();
    size->add_option("--preset", size_args.preset, "Device parameter preset")->capture_default_str();
    size->add_option("--grid", size_args.grid, "Width grid wmin,wmax,step in um (default 0.5,20,0.05)")
        ->delimiter(',');
    size->add_option("--length", size_args.length, "Channel length in um")->capture_default_str();
    size->add_option("--center", size_args.center, "Ladder centre in V (default: r = 1 threshold)");
    size->add_option("--tie-break", size_args.tie_break, "Equidistant candidates: area or wp")
        ->check(CLI::IsMember({"area", "wp"}))
        ->capture_default_str();
    size->add_option("-o,--output", size_args.output, "Design JSON to write")->required();

    EncodeArgs encode_args;
    auto* encode = app.add_subcommand("encode", "Build the fat-tree encoder gate netlist");
    encode->add_option("-n,--bits", encode_args.bits, "Resolution in bits (>= 2)")->required();
    encode->add_option("-o,--output", encode_args.output, "Gate netlist (.fnet) to write");
    encode->add_flag("--stats", encode_args.stats, "Print gate counts and depths");
    encode->add_flag("--fused", encode_args.fused, "Include the AND/NOT one-hot stage (thermometer leaves)");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Run a behavioural conversion and write the trace CSV");
    sim->add_option("-d,--design", sim_args.design, "Design JSON")->required();
    auto* sine = sim->add_option("--sine", sim_args.sine, "Sine stimulus freq,amplitude,offset (Hz,V,V)")
                     ->delimiter(',');
    auto* ramp = sim->add_flag("--ramp", sim_args.ramp, "Ramp stimulus from 0 to V_DD (default)");
    sine->excludes(ramp);
    sim->add_option("--rate", sim_args.rate, "Sample rate in Hz")->required();
    sim->add_option("--duration", sim_args.duration, "Duration in s")->required();
    sim->add_flag("--analog", sim_args.analog, "Use the inverter-chain comparator model");
    sim->add_option("--preset", sim_args.preset, "Device preset for --analog")->capture_default_str();
    sim->add_option("-o,--output", sim_args.output, "Trace CSV to write")->required();

    AnalyzeArgs an_args;
    auto* analyze = app.add_subcommand("analyze", "Report full scale, linearity and temperature drift");
    analyze->add_option("-d,--design", an_args.design, "Design JSON")->required();
    analyze->add_flag("--dnl", an_args.dnl, "Include DNL/INL");
    analyze->add_option("--drift", an_args.drift, "Temperatures in degC, comma separated")->delimiter(',');
    analyze->add_option("--preset", an_args.preset, "Device preset for --drift")->capture_default_str();
    analyze->add_option("-o,--output", an_args.output, "Report to write (.json or .csv)")->required();

    NetlistArgs net_args;
    auto* netlist = app.add_subcommand("netlist", "Emit a SPICE netlist of the comparator bank");
    netlist->add_option("-d,--design", net_args.design, "Design JSON")->required();
    netlist->add_flag("--boosters", net_args.boosters, "Append a two-inverter gain booster per comparator");
    netlist->add_option("--model-card", net_args.model_card, "Emit .MODEL cards: 'generic' or a preset name");
    netlist->add_flag("--encoder", net_args.encoder, "Append the one-hot stage and fat-tree encoder");
    netlist->add_option("--gate-style", net_args.gate_style, "Encoder cells: or2 or nand")
        ->check(CLI::IsMember({"or2", "nand"}))
        ->capture_default_str();
    netlist->add_option("-o,--output", net_args.output, "SPICE file (.cir) to write")->required();

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render a trace or report as SVG");
    plot->add_option("-i,--input", plot_args.input, "trace.csv (staircase) or report.json (dnl, drift)")
        ->required();
    plot->add_option("--kind", plot_args.kind, "staircase, dnl or drift")
        ->check(CLI::IsMember({"staircase", "dnl", "drift"}))
        ->required();
    plot->add_option("-o,--output", plot_args.output, "SVG file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (size->parsed()) return cmd_size(size_args, out);
        if (encode->parsed()) return cmd_encode(encode_args, out);
        if (sim->parsed()) return cmd_simulate(sim_args, out);
        if (analyze->parsed()) return cmd_analyze(an_args, out);
        if (netlist->parsed()) return cmd_netlist(net_args, out);
        if (plot->parsed()) return cmd_plot(plot_args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e.code()) ? kExitValidation : kExitComputation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    err << "error: no subcommand given\n";
    return kExitValidation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tiqflash");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tiqflash::cli
