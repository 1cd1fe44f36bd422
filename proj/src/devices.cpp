#include "tiqflash/devices.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "tiqflash/error.hpp"

namespace tiqflash {

namespace {

constexpr double kKelvinOffset = 273.15;
constexpr double kVtcTolerance = 1e-9;
constexpr int kVtcMaxIterations = 200;
constexpr double kCrossingTolerance = 1e-12;

struct ParamField {
    const char* name;
    double DeviceParams::*member;
};

constexpr ParamField kParamFields[] = {
    {"mu_n", &DeviceParams::mu_n},         {"mu_p", &DeviceParams::mu_p},
    {"vtn", &DeviceParams::vtn},           {"vtp_mag", &DeviceParams::vtp_mag},
    {"lambda_n", &DeviceParams::lambda_n}, {"lambda_p", &DeviceParams::lambda_p},
    {"kprime_n", &DeviceParams::kprime_n}, {"kprime_p", &DeviceParams::kprime_p},
    {"t_ref_c", &DeviceParams::t_ref_c},   {"kappa_vt", &DeviceParams::kappa_vt},
    {"m_mu", &DeviceParams::m_mu},
};

[[noreturn]] void invalid(ErrorCode code, const std::string& what) { throw Error(code, what); }

bool finite_all(std::initializer_list<double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace

void DeviceParams::validate() const {
    if (!finite_all({mu_n, mu_p, vtn, vtp_mag, lambda_n, lambda_p, kprime_n, kprime_p, t_ref_c,
                     kappa_vt, m_mu})) {
        invalid(ErrorCode::invalid_params, "device parameters must be finite");
    }
    if (mu_n <= 0.0 || mu_p <= 0.0) invalid(ErrorCode::invalid_params, "mobilities must be > 0");
    if (kprime_n <= 0.0 || kprime_p <= 0.0) {
        invalid(ErrorCode::invalid_params, "process transconductances must be > 0");
    }
    if (vtn <= 0.0 || vtp_mag <= 0.0) {
        invalid(ErrorCode::invalid_params, "threshold magnitudes must be > 0");
    }
    if (lambda_n < 0.0 || lambda_p < 0.0) invalid(ErrorCode::invalid_params, "lambda must be >= 0");
    if (t_ref_c <= -kKelvinOffset) {
        invalid(ErrorCode::invalid_params, "reference temperature below absolute zero");
    }
}

DeviceParams generic_025u() {
    DeviceParams p;
    p.mu_n = 400.0;
    p.mu_p = 150.0;
    p.vtn = 0.43;
    p.vtp_mag = 0.40;
    p.lambda_n = 0.06;
    p.lambda_p = 0.06;
    p.kprime_n = 110.0;
    p.kprime_p = 45.0;
    p.t_ref_c = 25.0;
    p.kappa_vt = 1e-3;
    p.m_mu = 1.5;
    return p;
}

DeviceParams params_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) invalid(ErrorCode::parse_error, "device parameters: expected a JSON object at /");
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const auto& f : kParamFields) known = known || key == f.name;
        if (!known) invalid(ErrorCode::parse_error, fmt::format("device parameters: unknown key at /{}", key));
    }
    DeviceParams p;
    for (const auto& f : kParamFields) {
        auto it = doc.find(f.name);
        if (it == doc.end()) {
            invalid(ErrorCode::parse_error, fmt::format("device parameters: missing key at /{}", f.name));
        }
        if (!it->is_number()) {
            invalid(ErrorCode::parse_error, fmt::format("device parameters: expected a number at /{}", f.name));
        }
        p.*(f.member) = it->get<double>();
    }
    p.validate();
    return p;
}

nlohmann::json params_to_json(const DeviceParams& params) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& f : kParamFields) doc[f.name] = params.*(f.member);
    return doc;
}

DeviceParams load_params_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) invalid(ErrorCode::io_error, fmt::format("cannot open parameter file {}", path.string()));
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        invalid(ErrorCode::parse_error, fmt::format("{}: {}", path.string(), e.what()));
    }
    return params_from_json(doc);
}

DeviceParams find_preset(std::string_view name) {
    if (name == kGenericPresetName) return generic_025u();
    if (const char* dir = std::getenv("TIQFLASH_PRESET_DIR"); dir != nullptr && *dir != '\0') {
        auto path = std::filesystem::path(dir) / (std::string(name) + ".json");
        if (std::filesystem::exists(path)) return load_params_file(path);
    }
    invalid(ErrorCode::invalid_params, fmt::format("unknown device preset '{}'", name));
}

void InverterSpec::validate(const DeviceParams& params) const {
    if (!finite_all({pmos.w, pmos.l, nmos.w, nmos.l, vdd})) {
        invalid(ErrorCode::invalid_geometry, "inverter geometry must be finite");
    }
    if (pmos.w <= 0.0 || nmos.w <= 0.0) invalid(ErrorCode::invalid_geometry, "widths must be > 0");
    if (pmos.l <= 0.0 || nmos.l <= 0.0) invalid(ErrorCode::invalid_geometry, "lengths must be > 0");
    if (vdd <= 0.0) invalid(ErrorCode::invalid_geometry, "supply voltage must be > 0");
    if (vdd <= params.vtn + params.vtp_mag) {
        invalid(ErrorCode::invalid_geometry,
                fmt::format("supply {} V does not exceed V_Tn + |V_Tp| = {} V", vdd,
                            params.vtn + params.vtp_mag));
    }
}

InverterSpec make_inverter(double wp, double wn, double length, double vdd) {
    return InverterSpec{TransistorGeom{wp, length}, TransistorGeom{wn, length}, vdd};
}

double beta_ratio(const DeviceParams& params, double wp, double wn) {
    if (!(wp > 0.0) || !(wn > 0.0)) {
        invalid(ErrorCode::invalid_geometry, fmt::format("widths must be > 0 (wp={}, wn={})", wp, wn));
    }
    // The width ratio is formed first so equal ratios give bit-identical r.
    return std::sqrt((params.mu_p / params.mu_n) * (wp / wn));
}

double inverter_threshold(const InverterSpec& spec, const DeviceParams& params) {
    spec.validate(params);
    double wp = spec.pmos.w;
    double wn = spec.nmos.w;
    if (spec.pmos.l != spec.nmos.l) {
        wp /= spec.pmos.l;
        wn /= spec.nmos.l;
    }
    const double r = beta_ratio(params, wp, wn);
    return (r * (spec.vdd - params.vtp_mag) + params.vtn) / (1.0 + r);
}

namespace detail {

double square_law_current(double beta, double v_ov, double v_ds, double lambda) noexcept {
    if (v_ov <= 0.0) return 0.0;
    const double clm = 1.0 + lambda * v_ds;
    if (v_ds < v_ov) return beta * (v_ov * v_ds - 0.5 * v_ds * v_ds) * clm;
    return 0.5 * beta * v_ov * v_ov * clm;
}

Strengths device_strengths(const InverterSpec& spec, const DeviceParams& params) noexcept {
    // One oxide capacitance for both devices; relative strength follows mobility.
    const double cox = std::sqrt((params.kprime_n / params.mu_n) * (params.kprime_p / params.mu_p));
    return {cox * params.mu_n * spec.nmos.w / spec.nmos.l,
            cox * params.mu_p * spec.pmos.w / spec.pmos.l};
}

}  // namespace detail

namespace {

double solve_output(const InverterSpec& spec, const DeviceParams& params,
                    const detail::Strengths& k, double v_in) {
    if (!std::isfinite(v_in)) throw NumericalFailure(v_in, "non-finite input voltage");
    if (v_in <= params.vtn) return spec.vdd;
    if (v_in >= spec.vdd - params.vtp_mag) return 0.0;

    const double v_ov_n = v_in - params.vtn;
    const double v_ov_p = spec.vdd - v_in - params.vtp_mag;
    // Pull-down minus pull-up current; non-decreasing in v_out.
    auto residual = [&](double v_out) {
        return detail::square_law_current(k.beta_n, v_ov_n, v_out, params.lambda_n) -
               detail::square_law_current(k.beta_p, v_ov_p, spec.vdd - v_out, params.lambda_p);
    };

    double lo = 0.0;
    double hi = spec.vdd;
    for (int it = 0; it < kVtcMaxIterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = residual(mid);
        if (!std::isfinite(f)) break;
        if (f < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= kVtcTolerance) return 0.5 * (lo + hi);
    }
    throw NumericalFailure(v_in, fmt::format("VTC bisection did not converge at v_in = {:.9g} V", v_in));
}

}  // namespace

double vtc_output(const InverterSpec& spec, const DeviceParams& params, double v_in) {
    spec.validate(params);
    return solve_output(spec, params, detail::device_strengths(spec, params), v_in);
}

VtcCurve vtc(const InverterSpec& spec, const DeviceParams& params, std::size_t grid_points) {
    if (grid_points < 3) invalid(ErrorCode::invalid_grid, "VTC needs at least 3 grid points");
    spec.validate(params);
    const auto k = detail::device_strengths(spec, params);
    VtcCurve curve;
    curve.samples.reserve(grid_points);
    const double step = spec.vdd / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double v_in = (i + 1 == grid_points) ? spec.vdd : step * static_cast<double>(i);
        curve.samples.push_back({v_in, solve_output(spec, params, k, v_in)});
    }
    return curve;
}

double switching_point(const InverterSpec& spec, const DeviceParams& params) {
    spec.validate(params);
    const auto k = detail::device_strengths(spec, params);
    double lo = params.vtn;
    double hi = spec.vdd - params.vtp_mag;
    while (hi - lo > kCrossingTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (solve_output(spec, params, k, mid) > mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double gain_at_threshold(const InverterSpec& spec, const DeviceParams& params) {
    spec.validate(params);
    if (params.lambda_n + params.lambda_p <= 0.0) {
        throw Error(ErrorCode::ideal_device, "gain is unbounded with lambda_n + lambda_p = 0");
    }
    const double vm = switching_point(spec, params);
    const auto k = detail::device_strengths(spec, params);
    // Both devices are saturated at the self-crossing (V_DS = V_GS > V_ov).
    const double ov_n = vm - params.vtn;
    const double ov_p = spec.vdd - vm - params.vtp_mag;
    const double gm_n = k.beta_n * ov_n * (1.0 + params.lambda_n * vm);
    const double gm_p = k.beta_p * ov_p * (1.0 + params.lambda_p * (spec.vdd - vm));
    const double gds_n = 0.5 * params.lambda_n * k.beta_n * ov_n * ov_n;
    const double gds_p = 0.5 * params.lambda_p * k.beta_p * ov_p * ov_p;
    return -(gm_n + gm_p) / (gds_n + gds_p);
}

DeviceParams apply_temperature(const DeviceParams& params, double t_c) {
    if (t_c == params.t_ref_c) return params;
    if (!std::isfinite(t_c) || t_c <= -kKelvinOffset) {
        throw Error(ErrorCode::out_of_model_range, fmt::format("temperature {} degC out of range", t_c));
    }
    const double dt = t_c - params.t_ref_c;
    const double mu_scale =
        std::pow((t_c + kKelvinOffset) / (params.t_ref_c + kKelvinOffset), -params.m_mu);

    DeviceParams out = params;
    out.vtn = params.vtn - params.kappa_vt * dt;
    out.vtp_mag = params.vtp_mag - params.kappa_vt * dt;
    out.mu_n = params.mu_n * mu_scale;
    out.mu_p = params.mu_p * mu_scale;
    out.kprime_n = params.kprime_n * mu_scale;
    out.kprime_p = params.kprime_p * mu_scale;
    if (out.vtn <= 0.0 || out.vtp_mag <= 0.0) {
        throw Error(ErrorCode::out_of_model_range,
                    fmt::format("threshold voltage not positive at {} degC", t_c));
    }
    return out;
}

double comparator_dc_response(const InverterSpec& first, const InverterSpec& second,
                              const DeviceParams& params, double v_in) {
    return vtc_output(second, params, vtc_output(first, params, v_in));
}

double chain_response(std::span<const InverterSpec> stages, const DeviceParams& params,
                      double v_in) {
    double v = v_in;
    for (const auto& stage : stages) v = vtc_output(stage, params, v);
    return v;
}

}  // namespace tiqflash
