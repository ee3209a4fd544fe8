#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpo/mission_controller.hpp"

namespace rpo {

inline constexpr int kSchemaVersion = 1;

/// Every schema violation found in a configuration document.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    [[nodiscard]] const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Scenario configuration in file units: km, degrees, days, SI.

struct TargetConfig {
    double a_km = 6925.68;
    double e = 0.0019;
    double i_deg = 35.008;
    double raan_deg = 3.006;
    double argp_deg = 0.0;
    double ta_deg = 0.0;
};

struct OffsetConfig {
    double da_km = 0.0;
    double de = 0.0;
    double di_deg = 0.0;
    double draan_deg = 0.0;
    double du_deg = 0.0;
};

struct SeparationConfig {
    double delta_v_mps = 2.0;
    std::array<double, 3> direction_rsw{0.6875, 0.726, 0.0};
    std::optional<OffsetConfig> offset;
};

struct SpacecraftConfig {
    double wet_mass_kg = 4.0;
    double thrust_n = 6.0e-3;
    double isp_s = 100.0;
    double total_impulse_ns = 270.0;
    double max_firing_s = 900.0;
};

struct DragConfig {
    bool enabled = false;
    double cd = 2.2;
    double area_m2 = 0.03;
    double rho0_kg_m3 = 2.0e-13;
    double h0_km = 550.0;
    double scale_height_km = 60.0;
};

struct SrpConfig {
    bool enabled = false;
    double cr = 1.3;
    double area_m2 = 0.03;
    double p0_n_m2 = 4.56e-6;
    bool shadow = true;
    double sun_longitude_deg = 0.0;
};

struct ForceConfig {
    bool j2 = true;
    DragConfig drag;
    SrpConfig srp;
};

struct DesiredConfig {
    double de = 0.001;
    double di_deg = 0.02;
};

struct ThresholdConfig {
    double da_km = 0.5;
    double draan_deg = 0.02;
    double du_deg = 0.1;
    double di_deg = 0.002;
    double de = 1.0e-4;
    double approach_km = 50.0;
    double reserved_offset_km = 30.0;
    double center_tolerance_km = 3.0;
};

struct BlockConfig {
    int max_firings = 5;
    double preferred_coast_days = 20.0;
    double max_coast_days = 60.0;
};

struct PhaseLimitConfig {
    double raan_days = 120.0;
    double approach_days = 40.0;
    double ellipse_setup_days = 30.0;
};

struct NavConfig {
    double period_min = 175.0;
    double jitter_min = 0.0;
    std::uint64_t seed = 1;
};

struct IntegratorConfig {
    double step_s = 30.0;
    double output_interval_s = 600.0;
};

struct ScenarioConfig {
    int schema_version = kSchemaVersion;
    TargetConfig target;
    SeparationConfig separation;
    double commissioning_days = 30.0;
    SpacecraftConfig spacecraft;
    ForceConfig force_model;
    DesiredConfig desired;
    ThresholdConfig thresholds;
    BlockConfig raan_block{5, 20.0, 60.0};
    BlockConfig approach_block{5, 5.0, 10.0};
    PhaseLimitConfig phase_limits;
    NavConfig nav;
    IntegratorConfig integrator;
    double circumnavigation_days = 30.0;
    std::optional<std::string> output_dir;
};

/// Validates and converts a JSON document. Missing keys take defaults;
/// unknown keys and invalid values are collected into one ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc);
nlohmann::json serialize_config(const ScenarioConfig& config);

/// Reads a config file. Throws IoError when unreadable, ConfigError when invalid.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Internal-unit mission description.
MissionConfig mission_config(const ScenarioConfig& config);

}  // namespace rpo
