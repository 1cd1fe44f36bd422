#include "tiqflash/error.hpp"

namespace tiqflash {

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_geometry:
    case ErrorCode::invalid_params:
    case ErrorCode::degenerate_resolution:
    case ErrorCode::infeasible_ladder:
    case ErrorCode::invalid_grid:
    case ErrorCode::invalid_stimulus:
    case ErrorCode::invalid_one_hot:
    case ErrorCode::arity_mismatch:
    case ErrorCode::parse_error:
    case ErrorCode::io_error:
        return true;
    default:
        return false;
    }
}

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_geometry: return "invalid-geometry";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::degenerate_resolution: return "degenerate-resolution";
    case ErrorCode::infeasible_ladder: return "infeasible-ladder";
    case ErrorCode::invalid_grid: return "invalid-grid";
    case ErrorCode::invalid_stimulus: return "invalid-stimulus";
    case ErrorCode::invalid_one_hot: return "invalid-one-hot";
    case ErrorCode::arity_mismatch: return "arity-mismatch";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::ideal_device: return "ideal-device";
    case ErrorCode::out_of_model_range: return "out-of-model-range";
    case ErrorCode::coverage: return "coverage";
    case ErrorCode::insufficient_resolution: return "insufficient-resolution";
    case ErrorCode::bubble: return "bubble";
    }
    return "unknown";
}

}  // namespace tiqflash
