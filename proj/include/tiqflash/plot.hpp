#pragma once

#include <string>
#include <vector>

#include "tiqflash/metrics.hpp"
#include "tiqflash/simulator.hpp"

namespace tiqflash {

/// Output code against input voltage, drawn as steps.
std::string staircase_svg(const std::vector<TraceRow>& rows);

/// One bar per code transition.
std::string dnl_svg(const std::vector<double>& dnl);

/// Largest threshold shift (mV) against temperature.
std::string drift_svg(const DriftReport& report);

}  // namespace tiqflash
