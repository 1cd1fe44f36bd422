#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiqflash {

enum class ErrorCode {
    // input/contract violations
    invalid_geometry,
    invalid_params,
    degenerate_resolution,
    infeasible_ladder,
    invalid_grid,
    invalid_stimulus,
    invalid_one_hot,
    arity_mismatch,
    parse_error,
    io_error,
    // failures raised while computing on valid inputs
    numerical_failure,
    ideal_device,
    out_of_model_range,
    coverage,
    insufficient_resolution,
    bubble,
};

/// True for codes that describe bad input rather than a failed computation.
bool is_validation_error(ErrorCode code) noexcept;

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// VTC solver did not converge at the given input voltage.
class NumericalFailure : public Error {
public:
    NumericalFailure(double v_in, const std::string& message)
        : Error(ErrorCode::numerical_failure, message), v_in_(v_in) {}

    double v_in() const noexcept { return v_in_; }

private:
    double v_in_;
};

/// Thermometer code with a 1 above a 0. `index` is the lowest set bit whose
/// predecessor is clear; `sample` is set when raised from a simulation.
class BubbleError : public Error {
public:
    BubbleError(std::size_t index, const std::string& message,
                std::ptrdiff_t sample = -1)
        : Error(ErrorCode::bubble, message), index_(index), sample_(sample) {}

    std::size_t index() const noexcept { return index_; }
    std::ptrdiff_t sample() const noexcept { return sample_; }

private:
    std::size_t index_;
    std::ptrdiff_t sample_;
};

/// Ladder rungs that fall outside the span of the candidate thresholds.
class CoverageError : public Error {
public:
    CoverageError(std::vector<std::size_t> rungs, const std::string& message)
        : Error(ErrorCode::coverage, message), rungs_(std::move(rungs)) {}

    const std::vector<std::size_t>& uncovered_rungs() const noexcept { return rungs_; }

private:
    std::vector<std::size_t> rungs_;
};

}  // namespace tiqflash
