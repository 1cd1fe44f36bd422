#include "tiqflash/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "tiqflash/error.hpp"

namespace tiqflash {

namespace {

constexpr int kMaxBits = 16;

// Snaps a computed grid value onto the decimal it stands for (1e-6 um).
double snap_width(double w) { return std::round(w * 1e6) / 1e6; }

auto tie_key(const Candidate& c, TieBreak tie_break) {
    if (tie_break == TieBreak::smaller_wp) return std::make_tuple(c.wp, c.wn);
    return std::make_tuple(c.wp + c.wn, c.wp);
}

}  // namespace

std::size_t rung_count(int n_bits) {
    if (n_bits < 2) {
        throw Error(ErrorCode::degenerate_resolution, "resolution must be >= 2");
    }
    if (n_bits > kMaxBits) {
        throw Error(ErrorCode::degenerate_resolution,
                    fmt::format("resolution must be <= {}", kMaxBits));
    }
    return (std::size_t{1} << n_bits) - 1;
}

double balanced_threshold(const DeviceParams& params, double vdd) {
    return 0.5 * (vdd - params.vtp_mag + params.vtn);
}

ReferenceLadder compute_ladder(const LadderSpec& spec, const DeviceParams& params) {
    const std::size_t rungs = rung_count(spec.n_bits);
    params.validate();
    if (!std::isfinite(spec.vdd) || spec.vdd <= 0.0) {
        throw Error(ErrorCode::infeasible_ladder, "supply voltage must be > 0");
    }
    if (!std::isfinite(spec.av_mag) || spec.av_mag <= 0.0) {
        throw Error(ErrorCode::infeasible_ladder, "gain magnitude must be > 0");
    }
    const double center = spec.v_center.value_or(balanced_threshold(params, spec.vdd));
    const double half_span = spec.vdd / (2.0 * spec.av_mag);

    ReferenceLadder ladder;
    ladder.n_bits = spec.n_bits;
    ladder.vdd = spec.vdd;
    ladder.v_low = center - half_span;
    ladder.v_high = center + half_span;
    const double band_low = params.vtn;
    const double band_high = spec.vdd - params.vtp_mag;
    if (!(ladder.v_low > band_low) || !(ladder.v_high < band_high)) {
        throw Error(ErrorCode::infeasible_ladder,
                    fmt::format("ladder [{:.6f}, {:.6f}] V leaves the attainable threshold band "
                                "({:.6f}, {:.6f}) V",
                                ladder.v_low, ladder.v_high, band_low, band_high));
    }
    ladder.v_lsb = (ladder.v_high - ladder.v_low) / static_cast<double>(rungs - 1);
    ladder.ideal_refs.resize(rungs);
    for (std::size_t i = 0; i + 1 < rungs; ++i) {
        ladder.ideal_refs[i] = ladder.v_low + ladder.v_lsb * static_cast<double>(i);
    }
    ladder.ideal_refs.back() = ladder.v_high;
    return ladder;
}

void WidthGrid::validate() const {
    if (!std::isfinite(w_min) || !std::isfinite(w_max) || !std::isfinite(w_step) ||
        !std::isfinite(l_fixed)) {
        throw Error(ErrorCode::invalid_grid, "width grid must be finite");
    }
    if (!(w_min > 0.0) || w_max < w_min) {
        throw Error(ErrorCode::invalid_grid, "width grid needs 0 < w_min <= w_max");
    }
    if (!(w_step > 0.0)) throw Error(ErrorCode::invalid_grid, "width step must be > 0");
    if (!(l_fixed > 0.0)) throw Error(ErrorCode::invalid_grid, "channel length must be > 0");
    if ((w_max - w_min) / w_step > 1e6) {
        throw Error(ErrorCode::invalid_grid, "width grid has more than 1e6 points per axis");
    }
}

std::vector<double> WidthGrid::widths() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((w_max - w_min) / w_step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(snap_width(w_min + w_step * static_cast<double>(i)));
    }
    return out;
}

std::vector<Candidate> enumerate_candidates(const WidthGrid& grid, const DeviceParams& params,
                                            double vdd) {
    const auto widths = grid.widths();
    if (widths.empty()) throw Error(ErrorCode::invalid_grid, "width grid is empty");
    params.validate();

    std::vector<Candidate> out;
    out.reserve(widths.size() * widths.size());
    for (double wp : widths) {
        for (double wn : widths) {
            const auto spec = make_inverter(wp, wn, grid.l_fixed, vdd);
            out.push_back({wp, wn, grid.l_fixed, inverter_threshold(spec, params)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        return std::make_tuple(a.v_ref, a.wp + a.wn, a.wp) <
               std::make_tuple(b.v_ref, b.wp + b.wn, b.wp);
    });
    return out;
}

void ComparatorBank::validate() const {
    const std::size_t rungs = rung_count(n_bits);
    if (designs.size() != rungs) {
        throw Error(ErrorCode::arity_mismatch,
                    fmt::format("bank has {} designs, expected {}", designs.size(), rungs));
    }
    if (ladder.ideal_refs.size() != rungs) {
        throw Error(ErrorCode::arity_mismatch, "ladder rung count does not match resolution");
    }
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const auto& d = designs[i];
        if (!(d.wp > 0.0) || !(d.wn > 0.0) || !(d.l > 0.0)) {
            throw Error(ErrorCode::invalid_geometry, fmt::format("design {} has a non-positive size", i));
        }
        if (i > 0 && !(d.v_ref_achieved > designs[i - 1].v_ref_achieved)) {
            throw Error(ErrorCode::parse_error,
                        fmt::format("achieved thresholds not strictly increasing at design {}", i));
        }
    }
}

std::vector<double> ComparatorBank::thresholds() const {
    std::vector<double> out;
    out.reserve(designs.size());
    for (const auto& d : designs) out.push_back(d.v_ref_achieved);
    return out;
}

ComparatorBank size_comparators(const ReferenceLadder& ladder, std::span<const Candidate> candidates,
                                TieBreak tie_break) {
    const std::size_t rungs = rung_count(ladder.n_bits);
    if (ladder.ideal_refs.size() != rungs) {
        throw Error(ErrorCode::arity_mismatch, "ladder rung count does not match resolution");
    }

    std::vector<Candidate> sorted(candidates.begin(), candidates.end());
    std::sort(sorted.begin(), sorted.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.v_ref != b.v_ref) return a.v_ref < b.v_ref;
        return tie_key(a, tie_break) < tie_key(b, tie_break);
    });

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i].v_ref != sorted[i - 1].v_ref) ++distinct;
    }
    if (distinct < rungs) {
        throw Error(ErrorCode::insufficient_resolution,
                    fmt::format("{} distinct candidate thresholds for {} rungs", distinct, rungs));
    }

    const double span_low = sorted.front().v_ref;
    const double span_high = sorted.back().v_ref;
    std::vector<std::size_t> uncovered;
    for (std::size_t i = 0; i < rungs; ++i) {
        const double t = ladder.ideal_refs[i];
        if (t < span_low || t > span_high) uncovered.push_back(i);
    }
    if (!uncovered.empty()) {
        throw CoverageError(uncovered,
                            fmt::format("candidate thresholds [{:.6f}, {:.6f}] V leave {} rung(s) "
                                        "uncovered (first: rung {})",
                                        span_low, span_high, uncovered.size(), uncovered.front()));
    }

    auto by_vref = [](const Candidate& c, double v) { return c.v_ref < v; };
    auto first_of_group = [&](std::size_t lo, std::size_t idx) {
        auto it = std::lower_bound(sorted.begin() + static_cast<std::ptrdiff_t>(lo),
                                   sorted.begin() + static_cast<std::ptrdiff_t>(idx),
                                   sorted[idx].v_ref, by_vref);
        return static_cast<std::size_t>(it - sorted.begin());
    };

    ComparatorBank bank;
    bank.n_bits = ladder.n_bits;
    bank.vdd = ladder.vdd;
    bank.ladder = ladder;
    bank.designs.reserve(rungs);

    std::size_t lo = 0;  // first candidate above the previous pick
    for (std::size_t rung = 0; rung < rungs; ++rung) {
        if (lo >= sorted.size()) {
            throw Error(ErrorCode::insufficient_resolution,
                        fmt::format("no unused candidate left for rung {}", rung));
        }
        const double target = ladder.ideal_refs[rung];
        auto it = std::lower_bound(sorted.begin() + static_cast<std::ptrdiff_t>(lo), sorted.end(),
                                   target, by_vref);
        const auto above = static_cast<std::size_t>(it - sorted.begin());

        std::size_t pick;
        if (above == sorted.size()) {
            pick = first_of_group(lo, above - 1);
        } else if (above == lo) {
            pick = above;
        } else {
            const std::size_t below = first_of_group(lo, above - 1);
            const double d_above = sorted[above].v_ref - target;
            const double d_below = target - sorted[below].v_ref;
            if (d_below < d_above) {
                pick = below;
            } else if (d_above < d_below) {
                pick = above;
            } else {
                pick = tie_key(sorted[below], tie_break) <= tie_key(sorted[above], tie_break) ? below
                                                                                              : above;
            }
        }

        const auto& c = sorted[pick];
        bank.designs.push_back({c.wp, c.wn, c.l, c.v_ref, target, std::abs(c.v_ref - target)});
        lo = static_cast<std::size_t>(
            std::upper_bound(sorted.begin() + static_cast<std::ptrdiff_t>(pick), sorted.end(), c.v_ref,
                             [](double v, const Candidate& x) { return v < x.v_ref; }) -
            sorted.begin());
    }
    return bank;
}

BankReport bank_report(const ComparatorBank& bank) {
    BankReport r;
    r.rows = bank.designs.size();
    r.monotone = true;
    for (std::size_t i = 0; i < bank.designs.size(); ++i) {
        const auto& d = bank.designs[i];
        r.max_abs_error = std::max(r.max_abs_error, d.abs_error);
        r.total_width += d.wp + d.wn;
        if (i > 0 && !(d.v_ref_achieved > bank.designs[i - 1].v_ref_achieved)) r.monotone = false;
    }
    if (!bank.designs.empty()) {
        r.v_min = bank.designs.front().v_ref_achieved;
        r.v_max = bank.designs.back().v_ref_achieved;
    }
    return r;
}

}  // namespace tiqflash
