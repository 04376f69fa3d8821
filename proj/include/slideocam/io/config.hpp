#pragma once

// Run configuration: one JSON file, strictly parsed (unknown keys and wrong
// types are rejected). Physical quantities use mm, N, N*mm, MPa; angles in
// the file are degrees where the key says so (`*_deg`), rad otherwise.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "slideocam/optimizer.hpp"
#include "slideocam/sensitivity.hpp"

namespace slideocam::io {

/// Malformed configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FormatSet {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

/// "csv", "json", "svg" or "all".
FormatSet parse_format(std::string_view name);

struct SensitivitySettings {
    std::size_t samples = 513;
    std::size_t rms_nodes = kMinRmsNodes;
    bool include_torque = false;
};

struct ContourSettings {
    ContourRequest request;
    bool swap_line_styles = false;  // presentation only
};

struct RunConfig {
    TransmissionSpec spec;  // profile, metrics and sensitivity commands
    LoadCase load;
    std::string cam_material{kDefaultMaterial};
    std::string roller_material{kDefaultMaterial};
    std::optional<std::string> catalog_path;
    std::vector<Material> catalog = builtin_materials();
    DesignSpace space;  // pareto and contour commands
    std::size_t profile_resolution = kDefaultProfileResolution;
    SensitivitySettings sensitivity;
    ContourSettings contour;
    std::string output_dir = "out";
    FormatSet formats;
    unsigned threads = 0;
    std::optional<std::int64_t> seed;

    RunConfig();

    const Material& cam() const { return find_material(catalog, cam_material); }
    const Material& roller() const { return find_material(catalog, roller_material); }

    /// Re-resolves the design space materials and load after edits.
    void sync_space();
};

/// Parses a configuration document. Relative catalog paths are resolved
/// against base_dir. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration, including the selected material data.
nlohmann::json to_json(const RunConfig& config);

nlohmann::json to_json(const Material& material);
nlohmann::json to_json(const DesignSpace& space);
nlohmann::json to_json(const TransmissionSpec& spec);

/// Material catalog: {"materials": [{"name", "young_modulus_mpa",
/// "poisson_ratio", "static_pressure_mpa", "allowable_pressure_mpa"}]}.
/// Pressures are a number or a [lo, hi] pair; a missing allowable pressure
/// defaults to the fatigue fraction of the static one.
std::vector<Material> parse_material_catalog(const nlohmann::json& doc);
std::vector<Material> load_material_catalog(const std::filesystem::path& path);

/// Hex SHA-1 of the text as a git blob object, used to tag outputs.
std::string content_hash(std::string_view text);

}  // namespace slideocam::io
