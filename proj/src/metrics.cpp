#include "tiqflash/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "tiqflash/error.hpp"

namespace tiqflash {

LinearityReport linearity(const ComparatorBank& bank) {
    bank.validate();
    const auto v = bank.thresholds();
    const std::size_t steps = v.size() - 1;

    LinearityReport r;
    r.v_lsb_used = (v.back() - v.front()) / static_cast<double>(steps);
    r.dnl.resize(steps);
    r.inl.resize(v.size());
    r.inl[0] = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        r.dnl[i] = (v[i + 1] - v[i]) / r.v_lsb_used - 1.0;
        r.inl[i + 1] = r.inl[i] + r.dnl[i];
        r.max_abs_dnl = std::max(r.max_abs_dnl, std::abs(r.dnl[i]));
        r.max_abs_inl = std::max(r.max_abs_inl, std::abs(r.inl[i + 1]));
    }
    return r;
}

FullScale full_scale(const ComparatorBank& bank) {
    bank.validate();
    return {bank.designs.front().v_ref_achieved, bank.designs.back().v_ref_achieved};
}

DriftReport temperature_drift(const ComparatorBank& bank, const DeviceParams& params,
                              const std::vector<double>& temperatures) {
    bank.validate();
    params.validate();

    auto thresholds_at = [&](const DeviceParams& p) {
        std::vector<double> out;
        out.reserve(bank.designs.size());
        for (const auto& d : bank.designs) {
            out.push_back(inverter_threshold(make_inverter(d.wp, d.wn, d.l, bank.vdd), p));
        }
        return out;
    };
    const auto reference = thresholds_at(params);

    DriftReport report;
    report.t_ref_c = params.t_ref_c;
    report.entries.reserve(temperatures.size());
    for (double t : temperatures) {
        const auto shifted = thresholds_at(apply_temperature(params, t));
        DriftEntry e{t, shifted.front(), shifted.back(), 0.0};
        for (std::size_t i = 0; i < shifted.size(); ++i) {
            e.max_ref_shift = std::max(e.max_ref_shift, std::abs(shifted[i] - reference[i]));
        }
        report.entries.push_back(e);
    }
    return report;
}

DriftReport temperature_drift(const LadderSpec& ladder, const WidthGrid& grid,
                              const DeviceParams& params, const std::vector<double>& temperatures) {
    const auto refs = compute_ladder(ladder, params);
    const auto bank = size_comparators(refs, enumerate_candidates(grid, params, ladder.vdd));
    return temperature_drift(bank, params, temperatures);
}

LatencyBound encoder_latency_bound(int n_bits) {
    if (n_bits < 2) throw Error(ErrorCode::degenerate_resolution, "resolution must be >= 2");
    return LatencyBound{1, static_cast<std::size_t>(n_bits - 1)};
}

nlohmann::json to_json(const LinearityReport& report) {
    return {{"dnl", report.dnl},
            {"inl", report.inl},
            {"max_abs_dnl", report.max_abs_dnl},
            {"max_abs_inl", report.max_abs_inl},
            {"v_lsb_used", report.v_lsb_used}};
}

nlohmann::json to_json(const DriftReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"t_c", e.t_c},
                           {"v_low", e.v_low},
                           {"v_high", e.v_high},
                           {"max_ref_shift", e.max_ref_shift}});
    }
    return {{"t_ref_c", report.t_ref_c}, {"entries", entries}};
}

nlohmann::json to_json(const FullScale& fs) {
    return {{"v_low", fs.v_low}, {"v_high", fs.v_high}, {"span", fs.v_high - fs.v_low}};
}

nlohmann::json to_json(const BankReport& report) {
    return {{"rows", report.rows},
            {"v_min", report.v_min},
            {"v_max", report.v_max},
            {"max_abs_error", report.max_abs_error},
            {"monotone", report.monotone},
            {"total_width", report.total_width}};
}

void write_linearity_csv(std::ostream& out, const ComparatorBank& bank, const LinearityReport& report) {
    out << "index,v_ref_V,dnl_lsb,inl_lsb\n";
    for (std::size_t i = 0; i < bank.designs.size(); ++i) {
        const std::string dnl = i < report.dnl.size() ? fmt::format("{:.9g}", report.dnl[i]) : "";
        out << fmt::format("{},{:.9g},{},{:.9g}\n", i, bank.designs[i].v_ref_achieved, dnl,
                           report.inl[i]);
    }
}

void write_drift_csv(std::ostream& out, const DriftReport& report) {
    out << "t_c,v_low_V,v_high_V,max_ref_shift_V\n";
    for (const auto& e : report.entries) {
        out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g}\n", e.t_c, e.v_low, e.v_high, e.max_ref_shift);
    }
}

}  // namespace tiqflash
