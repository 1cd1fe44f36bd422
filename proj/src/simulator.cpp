#include "tiqflash/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "tiqflash/error.hpp"

namespace tiqflash {

namespace {

void check_rails(double v, double vdd, const char* what) {
    if (!std::isfinite(v) || v < 0.0 || v > vdd) {
        throw Error(ErrorCode::invalid_stimulus,
                    fmt::format("{} {:.9g} V outside the supply rails [0, {:.9g}] V", what, v, vdd));
    }
}

std::size_t sample_count(const Stimulus& s) {
    if (!std::isfinite(s.duration) || !(s.duration > 0.0)) {
        throw Error(ErrorCode::invalid_stimulus, "stimulus duration must be > 0");
    }
    const double n = std::floor(s.duration * s.sample_rate + 1e-9);
    if (n > 1e8) throw Error(ErrorCode::invalid_stimulus, "stimulus has more than 1e8 samples");
    return static_cast<std::size_t>(n) + 1;
}

using Chain = std::array<InverterSpec, 4>;

std::vector<Chain> analog_chains(const ComparatorBank& bank, const AnalogComparators& mode) {
    if (!(mode.digitize_at > 0.0) || !(mode.digitize_at < bank.vdd)) {
        throw Error(ErrorCode::invalid_params, "digitize_at must lie strictly inside (0, V_DD)");
    }
    mode.params.validate();
    InverterSpec booster = mode.booster;
    booster.vdd = bank.vdd;
    booster.validate(mode.params);
    std::vector<Chain> chains;
    chains.reserve(bank.designs.size());
    for (const auto& d : bank.designs) {
        const auto stage = make_inverter(d.wp, d.wn, d.l, bank.vdd);
        stage.validate(mode.params);
        chains.push_back({stage, stage, booster, booster});
    }
    return chains;
}

ThermometerCode quantize_analog(double v_in, const std::vector<Chain>& chains,
                                const AnalogComparators& mode) {
    ThermometerCode t;
    t.bits.resize(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i) {
        t.bits[i] = chain_response(chains[i], mode.params, v_in) > mode.digitize_at;
    }
    return t;
}

ThermometerCode quantize_ideal(double v_in, const ComparatorBank& bank) {
    ThermometerCode t;
    t.bits.resize(bank.designs.size());
    for (std::size_t i = 0; i < bank.designs.size(); ++i) {
        t.bits[i] = v_in > bank.designs[i].v_ref_achieved;
    }
    return t;
}

}  // namespace

std::vector<StimulusSample> generate_stimulus(const Stimulus& s, double vdd) {
    if (!std::isfinite(s.sample_rate) || !(s.sample_rate > 0.0)) {
        throw Error(ErrorCode::invalid_stimulus, "sample rate must be > 0");
    }
    std::vector<StimulusSample> out;
    auto time_at = [&](std::size_t i) { return static_cast<double>(i) / s.sample_rate; };

    if (const auto* sine = std::get_if<SineWave>(&s.kind)) {
        if (!(sine->amplitude >= 0.0) || !(sine->freq_hz >= 0.0)) {
            throw Error(ErrorCode::invalid_stimulus, "sine amplitude and frequency must be >= 0");
        }
        check_rails(sine->offset - sine->amplitude, vdd, "sine minimum");
        check_rails(sine->offset + sine->amplitude, vdd, "sine maximum");
        const std::size_t n = sample_count(s);
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = time_at(i);
            const double v =
                sine->offset + sine->amplitude * std::sin(2.0 * std::numbers::pi * sine->freq_hz * t);
            out.push_back({t, std::clamp(v, 0.0, vdd)});
        }
    } else if (const auto* ramp = std::get_if<Ramp>(&s.kind)) {
        check_rails(ramp->v_start, vdd, "ramp start");
        check_rails(ramp->v_end, vdd, "ramp end");
        const std::size_t n = sample_count(s);
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = ramp->v_start;
            if (n > 1) {
                v = (i + 1 == n) ? ramp->v_end
                                 : ramp->v_start + (ramp->v_end - ramp->v_start) *
                                                       static_cast<double>(i) /
                                                       static_cast<double>(n - 1);
            }
            out.push_back({time_at(i), v});
        }
    } else {
        const auto& values = std::get<ExplicitSamples>(s.kind).values;
        if (values.empty()) throw Error(ErrorCode::invalid_stimulus, "explicit stimulus is empty");
        out.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            check_rails(values[i], vdd, "sample");
            out.push_back({time_at(i), values[i]});
        }
    }
    return out;
}

AnalogComparators default_analog_mode(const DeviceParams& params, double vdd) {
    return AnalogComparators{params, make_inverter(0.5, 0.5, 0.25, vdd), 0.5 * vdd};
}

ThermometerCode quantize(double v_in, const ComparatorBank& bank, const ComparatorMode& mode) {
    if (const auto* analog = std::get_if<AnalogComparators>(&mode)) {
        return quantize_analog(v_in, analog_chains(bank, *analog), *analog);
    }
    return quantize_ideal(v_in, bank);
}

SimTrace simulate(const ComparatorBank& bank, const GateNetlist& encoder, const Stimulus& stimulus,
                  const ComparatorMode& mode) {
    bank.validate();
    encoder.validate();
    if (encoder.leaf_count != bank.designs.size() || encoder.n_bits != bank.n_bits) {
        throw Error(ErrorCode::arity_mismatch,
                    fmt::format("encoder has {} leaves for {} bits; bank has {} comparators for {} bits",
                                encoder.leaf_count, encoder.n_bits, bank.designs.size(), bank.n_bits));
    }
    const auto samples = generate_stimulus(stimulus, bank.vdd);

    const auto* analog = std::get_if<AnalogComparators>(&mode);
    std::vector<Chain> chains;
    if (analog != nullptr) chains = analog_chains(bank, *analog);

    SimTrace trace;
    trace.records.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        auto thermo = analog != nullptr ? quantize_analog(s.v_in, chains, *analog)
                                        : quantize_ideal(s.v_in, bank);
        OneHotCode one_hot;
        try {
            one_hot = one_hot_from_thermometer(thermo);
        } catch (const BubbleError& e) {
            throw BubbleError(e.index(),
                              fmt::format("sample {} (t = {:.9g} s, v_in = {:.9g} V): {}", i, s.t,
                                          s.v_in, e.what()),
                              static_cast<std::ptrdiff_t>(i));
        }
        const auto code = encoder.leaf_kind == LeafKind::thermometer ? eval_netlist(encoder, thermo)
                                                                     : eval_netlist(encoder, one_hot);
        trace.records.push_back({s.t, s.v_in, std::move(thermo), code});
    }
    return trace;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
    out << "t_s,v_in_V,code\n";
    for (const auto& r : trace.records) {
        out << fmt::format("{:.9g},{:.9g},{}\n", r.t, r.v_in, r.code.value);
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "t_s,v_in_V,code") {
        throw Error(ErrorCode::parse_error, "trace CSV: expected header 't_s,v_in_V,code'");
    }
    std::vector<TraceRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string t, v, code;
        if (!std::getline(fields, t, ',') || !std::getline(fields, v, ',') ||
            !std::getline(fields, code)) {
            throw Error(ErrorCode::parse_error, fmt::format("trace CSV line {}: expected 3 fields", line_no));
        }
        try {
            rows.push_back({std::stod(t), std::stod(v), static_cast<std::uint32_t>(std::stoul(code))});
        } catch (const std::exception&) {
            throw Error(ErrorCode::parse_error, fmt::format("trace CSV line {}: bad number", line_no));
        }
    }
    return rows;
}

}  // namespace tiqflash
