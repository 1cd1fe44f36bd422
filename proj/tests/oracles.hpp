#pragma once

// Test-only reference computations. Nothing here calls into the library's
// solvers; each routine is a separate coding of the same physics or logic.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Closed-form square-law switching threshold, written out in one expression.
inline double eq1_threshold(double mu_n, double mu_p, double vtn, double vtp_mag, double vdd, double wp,
                            double wn) {
    const double r = std::sqrt(mu_p * wp / (mu_n * wn));
    return (r * (vdd - vtp_mag) + vtn) / (1.0 + r);
}

/// Level-1 drain current with lambda applied in both regions.
inline double drain_current(double strength, double vgs_eff, double vds, double lambda) {
    if (vgs_eff <= 0.0) return 0.0;
    double core;
    if (vds >= vgs_eff) {
        core = strength * vgs_eff * vgs_eff / 2.0;
    } else {
        core = strength * (2.0 * vgs_eff * vds - vds * vds) / 2.0;
    }
    return core * (1.0 + lambda * vds);
}

struct Inverter {
    double mu_n, mu_p, vtn, vtp_mag, lambda_n, lambda_p, vdd, wp, wn, lp, ln;
};

/// Output voltage by bisection on the current balance (1e-13 V).
inline double vtc_out(const Inverter& x, double v_in) {
    const double sn = x.mu_n * x.wn / x.ln;
    const double sp = x.mu_p * x.wp / x.lp;
    double lo = 0.0;
    double hi = x.vdd;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double pull_down = drain_current(sn, v_in - x.vtn, mid, x.lambda_n);
        const double pull_up = drain_current(sp, x.vdd - v_in - x.vtp_mag, x.vdd - mid, x.lambda_p);
        if (pull_down > pull_up) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Input voltage where the oracle VTC crosses v_out = v_in.
inline double self_crossing(const Inverter& x) {
    double lo = 0.0;
    double hi = x.vdd;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (vtc_out(x, mid) > mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Number of thresholds strictly below v.
inline std::size_t count_below(const std::vector<double>& thresholds, double v) {
    std::size_t n = 0;
    for (double t : thresholds) n += v > t ? 1 : 0;
    return n;
}

/// Integral non-linearity computed directly from the endpoints.
inline std::vector<double> direct_inl(const std::vector<double>& v) {
    const double lsb = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back((v[i] - v.front()) / lsb - static_cast<double>(i));
    }
    return out;
}

inline std::mt19937_64 rng(std::uint64_t seed = 0x5eed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
