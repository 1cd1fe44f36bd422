#pragma once

#include <cstddef>
#include <iosfwd>
#include <variant>
#include <vector>

#include "tiqflash/codes.hpp"
#include "tiqflash/devices.hpp"
#include "tiqflash/synthesis.hpp"

namespace tiqflash {

struct SineWave {
    double amplitude = 0.0;
    double offset = 0.0;
    double freq_hz = 0.0;
};

struct Ramp {
    double v_start = 0.0;
    double v_end = 0.0;
};

/// Explicit input voltages, one per sample; `duration` is ignored.
struct ExplicitSamples {
    std::vector<double> values;
};

struct Stimulus {
    std::variant<SineWave, Ramp, ExplicitSamples> kind;
    double sample_rate = 0.0;
    double duration = 0.0;
};

struct StimulusSample {
    double t;
    double v_in;
};

/// floor(duration * sample_rate) + 1 samples at t = i / sample_rate.
/// Voltages must stay inside [0, vdd].
std::vector<StimulusSample> generate_stimulus(const Stimulus& s, double vdd);

struct IdealComparators {};

/// Each comparator is its two sized inverters followed by two booster
/// inverters; the bit is set when the chain output exceeds `digitize_at`.
struct AnalogComparators {
    DeviceParams params;
    InverterSpec booster;
    double digitize_at = 0.0;
};

using ComparatorMode = std::variant<IdealComparators, AnalogComparators>;

/// Booster of minimum, equal-sized devices (0.5 um / 0.25 um) and a V_DD/2 decision level.
AnalogComparators default_analog_mode(const DeviceParams& params, double vdd);

/// Ideal mode sets bit i when v_in > threshold i (strictly).
ThermometerCode quantize(double v_in, const ComparatorBank& bank, const ComparatorMode& mode);

struct TraceRecord {
    double t;
    double v_in;
    ThermometerCode thermometer;
    BinaryCode code;
};

struct SimTrace {
    std::vector<TraceRecord> records;
};

/// Stimulus -> comparator bank -> one-hot -> fat tree, per sample.
/// Throws BubbleError carrying the sample index if a comparator output is not
/// a thermometer code (possible in analog mode only).
SimTrace simulate(const ComparatorBank& bank, const GateNetlist& encoder, const Stimulus& stimulus,
                  const ComparatorMode& mode);

/// `t_s,v_in_V,code` rows, times and voltages with 9 significant digits.
void write_trace_csv(std::ostream& out, const SimTrace& trace);

struct TraceRow {
    double t;
    double v_in;
    std::uint32_t code;
};

std::vector<TraceRow> read_trace_csv(std::istream& in);

}  // namespace tiqflash
