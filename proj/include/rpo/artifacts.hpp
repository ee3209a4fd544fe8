#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rpo/mission_controller.hpp"
#include "rpo/scenario.hpp"

namespace rpo {

/// Number as written to every artifact: 12 significant digits.
std::string format_number(double value);

/// RFC 4180 field: quoted when it holds a comma, quote, or line break.
std::string csv_escape(std::string_view field);

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void row(std::span<const std::string> fields);
    void row(std::initializer_list<std::string> fields) { row(std::span<const std::string>(fields.begin(), fields.size())); }

private:
    std::ostream& out_;
};

std::vector<std::string> states_columns();
std::vector<std::string> elements_columns();
std::vector<std::string> schedule_columns();

/// states.csv rows for paired samples.
void write_states(std::ostream& out, std::span<const EciState> target, std::span<const EciState> chaser,
                  std::span<const std::string> labels);
/// elements.csv rows: osculating and mean elements of both spacecraft and
/// the mean relative elements. Angles in degrees.
void write_elements(std::ostream& out, std::span<const EciState> target, std::span<const EciState> chaser,
                    std::span<const std::string> labels, const GravityConstants& g);
void write_schedule(std::ostream& out, std::span<const ExecutedBlock> blocks);

nlohmann::json report_json(const MissionReport& report, const MissionConfig& config);

/// Writes states.csv, elements.csv, schedule.csv, and report.json into `dir`.
void write_mission_artifacts(const MissionReport& report, const MissionConfig& config,
                             const std::filesystem::path& dir);

}  // namespace rpo
