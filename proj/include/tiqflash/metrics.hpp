#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "tiqflash/devices.hpp"
#include "tiqflash/synthesis.hpp"

namespace tiqflash {

/// Endpoint-fit linearity of the comparator thresholds, in LSB.
struct LinearityReport {
    std::vector<double> dnl;  // 2^n - 2 values
    std::vector<double> inl;  // 2^n - 1 values, inl[0] = 0
    double max_abs_dnl = 0.0;
    double max_abs_inl = 0.0;
    double v_lsb_used = 0.0;
};

/// DNL_i = (V_{i+1} - V_i) / V_LSB - 1 with V_LSB = (V_last - V_first) / (2^n - 2);
/// INL is the running sum of DNL.
LinearityReport linearity(const ComparatorBank& bank);

struct FullScale {
    double v_low;
    double v_high;
};

FullScale full_scale(const ComparatorBank& bank);

struct DriftEntry {
    double t_c;
    double v_low;
    double v_high;
    double max_ref_shift;  // V, against the reference temperature
};

struct DriftReport {
    double t_ref_c = 0.0;
    std::vector<DriftEntry> entries;
};

/// Thresholds of the bank's fixed geometries re-evaluated at each temperature.
DriftReport temperature_drift(const ComparatorBank& bank, const DeviceParams& params,
                              const std::vector<double>& temperatures);

/// Sizes a bank at the reference temperature, then evaluates its drift.
DriftReport temperature_drift(const LadderSpec& ladder, const WidthGrid& grid,
                              const DeviceParams& params, const std::vector<double>& temperatures);

/// Unit-delay latency of the thermometer-to-binary path.
struct LatencyBound {
    std::size_t leaf_stage = 1;  // AND/NOT one-hot stage
    std::size_t or_levels = 0;

    std::size_t total() const noexcept { return leaf_stage + or_levels; }
};

LatencyBound encoder_latency_bound(int n_bits);

nlohmann::json to_json(const LinearityReport& report);
nlohmann::json to_json(const DriftReport& report);
nlohmann::json to_json(const FullScale& fs);
nlohmann::json to_json(const BankReport& report);

/// One row per code transition: index,v_ref_V,dnl_lsb,inl_lsb (dnl empty on the last row).
void write_linearity_csv(std::ostream& out, const ComparatorBank& bank, const LinearityReport& report);
/// One row per temperature: t_c,v_low_V,v_high_V,max_ref_shift_V.
void write_drift_csv(std::ostream& out, const DriftReport& report);

}  // namespace tiqflash
