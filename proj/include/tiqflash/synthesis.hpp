#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tiqflash/devices.hpp"

namespace tiqflash {

/// Number of comparators (and ladder rungs) of an n-bit flash converter.
std::size_t rung_count(int n_bits);

struct LadderSpec {
    int n_bits = 6;
    double vdd = 2.5;
    double av_mag = 10.0;
    /// Nominal centre threshold; the balanced-inverter (r = 1) threshold when unset.
    std::optional<double> v_center;
};

struct ReferenceLadder {
    int n_bits = 0;
    double vdd = 0.0;
    double v_low = 0.0;
    double v_high = 0.0;
    double v_lsb = 0.0;
    std::vector<double> ideal_refs;

    friend bool operator==(const ReferenceLadder&, const ReferenceLadder&) = default;
};

/// Threshold of an inverter with r = 1: (V_DD - |V_Tp| + V_Tn) / 2.
double balanced_threshold(const DeviceParams& params, double vdd);

/// Builds the ideal ladder: V_L,H = V_ref -+ V_DD / (2 |A_v|), V_LSB = (V_H - V_L) / (2^n - 2).
/// Throws degenerate_resolution for n < 2 and infeasible_ladder when the
/// ladder leaves the attainable band (V_Tn, V_DD - |V_Tp|).
ReferenceLadder compute_ladder(const LadderSpec& spec, const DeviceParams& params);

struct WidthGrid {
    double w_min = 0.5;
    double w_max = 20.0;
    double w_step = 0.05;
    double l_fixed = 0.25;

    void validate() const;
    /// Grid values w_min, w_min + w_step, ... <= w_max.
    std::vector<double> widths() const;
};

struct Candidate {
    double wp;
    double wn;
    double l;
    double v_ref;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Every (wp, wn) pair of the grid with its closed-form threshold, sorted by
/// threshold, then by wp + wn, then by wp.
std::vector<Candidate> enumerate_candidates(const WidthGrid& grid, const DeviceParams& params,
                                            double vdd);

/// Preference among candidates that are equally far from a rung.
enum class TieBreak {
    smaller_area,  // smaller wp + wn, then smaller wp
    smaller_wp,    // smaller wp, then smaller wn
};

struct ComparatorDesign {
    double wp = 0.0;
    double wn = 0.0;
    double l = 0.0;
    double v_ref_achieved = 0.0;
    double v_ref_ideal = 0.0;
    double abs_error = 0.0;

    friend bool operator==(const ComparatorDesign&, const ComparatorDesign&) = default;
};

struct ComparatorBank {
    int n_bits = 0;
    double vdd = 0.0;
    ReferenceLadder ladder;
    std::vector<ComparatorDesign> designs;

    /// Throws when the rung count, threshold order or error bookkeeping is off.
    void validate() const;
    std::vector<double> thresholds() const;

    friend bool operator==(const ComparatorBank&, const ComparatorBank&) = default;
};

/// Assigns one candidate to every rung, lowest rung first. Each rung takes
/// the nearest candidate whose threshold is strictly above the previous
/// rung's pick, so achieved thresholds are strictly increasing.
ComparatorBank size_comparators(const ReferenceLadder& ladder, std::span<const Candidate> candidates,
                                TieBreak tie_break = TieBreak::smaller_area);

struct BankReport {
    std::size_t rows = 0;
    double v_min = 0.0;
    double v_max = 0.0;
    double max_abs_error = 0.0;
    bool monotone = false;
    double total_width = 0.0;
};

BankReport bank_report(const ComparatorBank& bank);

}  // namespace tiqflash
