#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "tiqflash/codes.hpp"
#include "tiqflash/devices.hpp"
#include "tiqflash/synthesis.hpp"

namespace tiqflash {

enum class GateStyle {
    or2,         // OR2/AND2/INV cells
    nand_mapped  // everything built from NAND2 and INV cells
};

struct SpiceEmitOptions {
    std::string model_name_n = "NMOS_TIQ";
    std::string model_name_p = "PMOS_TIQ";
    bool include_boosters = false;
    TransistorGeom booster_p{0.5, 0.25};
    TransistorGeom booster_n{0.5, 0.25};
    /// Appends the thermometer-to-binary encoder as gate subcircuits.
    bool include_encoder = false;
    GateStyle gate_style = GateStyle::or2;
    TransistorGeom logic_p{1.0, 0.25};
    TransistorGeom logic_n{0.5, 0.25};
    /// Emits a level-1 .MODEL pair from these parameters when set.
    std::optional<DeviceParams> model_card;

    void validate() const;
};

/// One `.SUBCKT TIQ_COMP_<i> IN OUT VDD VSS` per comparator (4 devices, 8
/// with boosters), a top level instancing them, and a closing `.END`.
std::string emit_spice(const ComparatorBank& bank, const SpiceEmitOptions& opts = {});

nlohmann::json save_design(const ComparatorBank& bank);
/// Throws Error(parse_error) naming the JSON path of the first violation.
ComparatorBank load_design(const nlohmann::json& doc);

void write_design_file(const std::filesystem::path& path, const ComparatorBank& bank);
ComparatorBank read_design_file(const std::filesystem::path& path);

/// Gate-netlist text: a `# fnet` header, `I<index>` leaves, `G<id> <KIND> <in...>`
/// gates, then `O<bit> <id>` from the most significant bit down.
std::string write_gate_netlist(const GateNetlist& net);
GateNetlist read_gate_netlist(std::istream& in);

/// Writes `text` to `path`, throwing Error(io_error) on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tiqflash
