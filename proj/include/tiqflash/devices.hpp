#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tiqflash {

/// Process constants for a matched NMOS/PMOS pair.
///
/// Threshold magnitudes are stored positive; `vtp_mag` is |V_Tp|.
/// Mobilities are cm^2/(V s), process transconductances uA/V^2,
/// channel-length modulation 1/V, temperatures degC, `kappa_vt` V/K.
struct DeviceParams {
    double mu_n = 0.0;
    double mu_p = 0.0;
    double vtn = 0.0;
    double vtp_mag = 0.0;
    double lambda_n = 0.0;
    double lambda_p = 0.0;
    double kprime_n = 0.0;
    double kprime_p = 0.0;
    double t_ref_c = 25.0;
    double kappa_vt = 0.0;
    double m_mu = 0.0;

    /// Throws Error(invalid_params) when an invariant is violated.
    void validate() const;

    friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

inline constexpr std::string_view kGenericPresetName = "generic-0.25u";

/// Representative long-channel 0.25 um values (not foundry data).
DeviceParams generic_025u();

/// Strict reader: every field must be present and unknown keys are rejected.
DeviceParams params_from_json(const nlohmann::json& doc);
nlohmann::json params_to_json(const DeviceParams& params);
DeviceParams load_params_file(const std::filesystem::path& path);

/// Resolves a preset by name. The built-in "generic-0.25u" always exists;
/// other names are looked up as `<name>.json` under $TIQFLASH_PRESET_DIR.
DeviceParams find_preset(std::string_view name);

/// Width and drawn length in um.
struct TransistorGeom {
    double w = 0.0;
    double l = 0.0;

    friend bool operator==(const TransistorGeom&, const TransistorGeom&) = default;
};

struct InverterSpec {
    TransistorGeom pmos;
    TransistorGeom nmos;
    double vdd = 0.0;

    void validate(const DeviceParams& params) const;

    friend bool operator==(const InverterSpec&, const InverterSpec&) = default;
};

InverterSpec make_inverter(double wp, double wn, double length, double vdd);

struct VtcPoint {
    double v_in;
    double v_out;
};

struct VtcCurve {
    std::vector<VtcPoint> samples;
};

/// sqrt((mu_p wp) / (mu_n wn)). Widths may equally be W/L aspect ratios.
double beta_ratio(const DeviceParams& params, double wp, double wn);

/// Closed-form switching threshold of a square-law inverter:
///   V_ref = (r (V_DD - |V_Tp|) + V_Tn) / (1 + r)
/// with r taken from the W/L aspect ratios of the two devices.
double inverter_threshold(const InverterSpec& spec, const DeviceParams& params);

/// Static output voltage for one input voltage. Solves the NMOS/PMOS
/// drain-current balance by bisection (1e-9 V, at most 200 steps).
double vtc_output(const InverterSpec& spec, const DeviceParams& params, double v_in);

/// Samples the transfer curve on a uniform grid over [0, vdd].
VtcCurve vtc(const InverterSpec& spec, const DeviceParams& params, std::size_t grid_points);

/// Input voltage at which v_out == v_in, including channel-length modulation.
double switching_point(const InverterSpec& spec, const DeviceParams& params);

/// Small-signal gain dV_out/dV_in at the switching point:
///   A_v = -(g_mn + g_mp) / (g_dsn + g_dsp)
/// Requires lambda_n + lambda_p > 0.
double gain_at_threshold(const InverterSpec& spec, const DeviceParams& params);

/// First-order temperature scaling of thresholds and mobilities.
DeviceParams apply_temperature(const DeviceParams& params, double t_c);

/// Output of `second` driven by the output of `first`.
double comparator_dc_response(const InverterSpec& first, const InverterSpec& second,
                              const DeviceParams& params, double v_in);

/// DC response of an arbitrary chain of inverters, first stage first.
double chain_response(std::span<const InverterSpec> stages, const DeviceParams& params,
                      double v_in);

namespace detail {

/// Square-law drain current in uA for a device with strength `beta` (uA/V^2),
/// overdrive `v_ov` and drain-source voltage `v_ds` (both >= 0 for conduction).
double square_law_current(double beta, double v_ov, double v_ds, double lambda) noexcept;

/// Device strengths (uA/V^2) of the pull-down and pull-up transistors.
struct Strengths {
    double beta_n;
    double beta_p;
};
Strengths device_strengths(const InverterSpec& spec, const DeviceParams& params) noexcept;

}  // namespace detail

}  // namespace tiqflash
