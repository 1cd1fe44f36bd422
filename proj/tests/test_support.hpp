#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "tiqflash/synthesis.hpp"

namespace testing_support {

inline constexpr double kSixBitGain = 38.7;

/// Default-parameter bank at the 64.6 mV full-scale gain, sized once per resolution.
inline const tiqflash::ComparatorBank& default_bank(int n_bits = 6) {
    static std::map<int, tiqflash::ComparatorBank> cache;
    auto it = cache.find(n_bits);
    if (it == cache.end()) {
        const auto params = tiqflash::generic_025u();
        tiqflash::LadderSpec spec;
        spec.n_bits = n_bits;
        spec.av_mag = kSixBitGain;
        const auto ladder = tiqflash::compute_ladder(spec, params);
        const auto cands = tiqflash::enumerate_candidates(tiqflash::WidthGrid{}, params, spec.vdd);
        it = cache.emplace(n_bits, tiqflash::size_comparators(ladder, cands)).first;
    }
    return it->second;
}

/// Bank whose thresholds are exactly the given values (widths are placeholders).
inline tiqflash::ComparatorBank bank_from_thresholds(const std::vector<double>& v, int n_bits, double vdd = 2.5) {
    tiqflash::ComparatorBank bank;
    bank.n_bits = n_bits;
    bank.vdd = vdd;
    bank.ladder.n_bits = n_bits;
    bank.ladder.vdd = vdd;
    bank.ladder.v_low = v.front();
    bank.ladder.v_high = v.back();
    bank.ladder.v_lsb = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    bank.ladder.ideal_refs = v;
    for (double x : v) bank.designs.push_back({1.0, 1.0, 0.25, x, x, 0.0});
    return bank;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("tiqflash_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_support
