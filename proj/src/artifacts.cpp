#include "rpo/artifacts.hpp"

#include <cstdio>
#include <fstream>

namespace rpo {

using nlohmann::json;

namespace {

void append_vector(std::vector<std::string>& row, const Vec3& v) {
    for (int k = 0; k < 3; ++k) row.push_back(format_number(v(k)));
}

void append_elements(std::vector<std::string>& row, const OrbitalElements& oe) {
    row.push_back(format_number(oe.a));
    row.push_back(format_number(oe.e));
    row.push_back(format_number(rad2deg(oe.i)));
    row.push_back(format_number(rad2deg(oe.raan)));
    row.push_back(format_number(rad2deg(oe.argp)));
    row.push_back(format_number(rad2deg(oe.ta)));
    row.push_back(format_number(rad2deg(oe.arglat())));
}

void element_columns(std::vector<std::string>& cols, const std::string& prefix) {
    for (const char* name : {"a_km", "e", "i_deg", "raan_deg", "argp_deg", "ta_deg", "u_deg"}) {
        cols.push_back(prefix + name);
    }
}

json relative_json(const RelativeElements& d) {
    return {{"da_km", d.da},
            {"de", d.de},
            {"di_deg", rad2deg(d.di)},
            {"draan_deg", rad2deg(d.draan)},
            {"du_deg", rad2deg(d.du)}};
}

json geometry_json(const EllipseGeometry& g) {
    return {{"radial_km", g.radial_extent},
            {"alongtrack_km", g.alongtrack_extent},
            {"crosstrack_km", g.crosstrack_extent},
            {"center_y_km", g.center_y},
            {"drift_km_per_period", g.center_drift_rate}};
}

std::ofstream open_file(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void check(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::row(std::span<const std::string> fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k > 0) out_ << ',';
        out_ << csv_escape(fields[k]);
    }
    out_ << "\r\n";
}

std::vector<std::string> states_columns() {
    std::vector<std::string> cols{"t_s"};
    for (const char* who : {"target", "chaser"}) {
        for (const char* name : {"x_km", "y_km", "z_km", "vx_kmps", "vy_kmps", "vz_kmps"}) {
            cols.push_back(std::string(who) + "_" + name);
        }
    }
    for (const char* name : {"rel_x_km", "rel_y_km", "rel_z_km", "chaser_mass_kg", "phase"}) cols.push_back(name);
    return cols;
}

std::vector<std::string> elements_columns() {
    std::vector<std::string> cols{"t_s"};
    element_columns(cols, "target_osc_");
    element_columns(cols, "target_mean_");
    element_columns(cols, "chaser_osc_");
    element_columns(cols, "chaser_mean_");
    for (const char* name : {"d_a_km", "d_e", "d_i_deg", "d_raan_deg", "d_u_deg", "phase"}) cols.push_back(name);
    return cols;
}

std::vector<std::string> schedule_columns() {
    return {"block", "phase", "label", "segment", "t_start_s", "t_end_s", "duration_s", "axis", "thrust_n", "planned_at_s"};
}

void write_states(std::ostream& out, std::span<const EciState> target, std::span<const EciState> chaser,
                  std::span<const std::string> labels) {
    CsvWriter csv(out);
    csv.row(states_columns());
    for (std::size_t k = 0; k < target.size(); ++k) {
        std::vector<std::string> row{format_number(target[k].epoch)};
        append_vector(row, target[k].r);
        append_vector(row, target[k].v);
        append_vector(row, chaser[k].r);
        append_vector(row, chaser[k].v);
        append_vector(row, eci_to_relative(target[k], chaser[k]).position);
        row.push_back(format_number(chaser[k].mass));
        row.push_back(k < labels.size() ? labels[k] : std::string());
        csv.row(row);
    }
}

void write_elements(std::ostream& out, std::span<const EciState> target, std::span<const EciState> chaser,
                    std::span<const std::string> labels, const GravityConstants& g) {
    CsvWriter csv(out);
    csv.row(elements_columns());
    for (std::size_t k = 0; k < target.size(); ++k) {
        const OrbitalElements t_osc = cart_to_elements(target[k], g);
        const OrbitalElements c_osc = cart_to_elements(chaser[k], g);
        const OrbitalElements t_mean = osc_to_mean(t_osc, g);
        const OrbitalElements c_mean = osc_to_mean(c_osc, g);
        const RelativeElements d = relative_elements(c_mean, t_mean);
        std::vector<std::string> row{format_number(target[k].epoch)};
        append_elements(row, t_osc);
        append_elements(row, t_mean);
        append_elements(row, c_osc);
        append_elements(row, c_mean);
        row.push_back(format_number(d.da));
        row.push_back(format_number(d.de));
        row.push_back(format_number(rad2deg(d.di)));
        row.push_back(format_number(rad2deg(d.draan)));
        row.push_back(format_number(rad2deg(d.du)));
        row.push_back(k < labels.size() ? labels[k] : std::string());
        csv.row(row);
    }
}

void write_schedule(std::ostream& out, std::span<const ExecutedBlock> blocks) {
    CsvWriter csv(out);
    csv.row(schedule_columns());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const FiringSchedule& fs = blocks[b].schedule;
        for (std::size_t s = 0; s < fs.segments.size(); ++s) {
            const ThrustSegment& seg = fs.segments[s];
            csv.row({std::to_string(b), std::string(to_string(blocks[b].phase)), std::string(to_string(fs.label)),
                     std::to_string(s), format_number(seg.t_start), format_number(seg.t_end),
                     format_number(seg.duration()), std::string(to_string(seg.direction)), format_number(seg.thrust),
                     format_number(fs.planned_at)});
        }
    }
}

json report_json(const MissionReport& report, const MissionConfig& config) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["status"] = report.completed ? "completed" : (report.truncated ? "truncated" : "aborted");
    doc["abort_reason"] = report.abort_reason;
    doc["end_time_days"] = report.end_time / kSecondsPerDay;

    json boundaries = json::array();
    for (const PhaseRecord& p : report.phases) {
        if (p.phase == Phase::done) continue;
        json entry = {{"phase", to_string(p.phase)},
                      {"start_days", p.start / kSecondsPerDay},
                      {"end_days", p.end / kSecondsPerDay},
                      {"exit_elements", relative_json(p.exit_elements)}};
        if (p.phase == Phase::commissioning) doc["commissioning"] = entry;
        else boundaries.push_back(entry);
    }
    doc["phase_boundaries"] = boundaries;

    json by_phase = json::array();
    for (const PhaseDeltaV& entry : delta_v_ledger(report)) {
        by_phase.push_back({{"phase", to_string(entry.phase)}, {"delta_v_mps", entry.delta_v}});
    }
    doc["delta_v"] = {{"total_mps", report.delta_v_used},
                      {"by_phase", by_phase},
                      {"rocket_equation_mps", rocket_equation_delta_v(report, config.spacecraft)},
                      {"capacity_mps", config.spacecraft.delta_v_capacity()},
                      {"impulse_ns", report.impulse_used},
                      {"final_mass_kg", report.final_mass}};

    doc["final_elements"] = relative_json(report.final_elements);
    doc["max_abs_du_setup_deg"] = rad2deg(report.max_abs_du_setup);
    if (!report.circumnavigation.empty()) {
        doc["geometry"] = {
            {"nominal", geometry_json(report.nominal_geometry)},
            {"final", geometry_json(report.final_geometry)},
            {"mapped", geometry_json(relative_elements_to_geometry(report.nominal_elements, report.nominal_target))}};
    }
    doc["blocks"] = report.blocks.size();
    doc["firings"] = report.firings.size();

    json events = json::array();
    for (const MissionEvent& e : report.events) {
        events.push_back({{"t_days", e.time / kSecondsPerDay},
                          {"nav_epoch_days", e.nav_epoch / kSecondsPerDay},
                          {"phase", to_string(e.phase)},
                          {"text", e.text}});
    }
    doc["events"] = events;
    doc["files"] = {{"states", "states.csv"},
                    {"elements", "elements.csv"},
                    {"schedule", "schedule.csv"}};
    return doc;
}

void write_mission_artifacts(const MissionReport& report, const MissionConfig& config,
                             const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<std::string> labels;
    for (Phase p : report.sample_phase) labels.emplace_back(to_string(p));

    {
        const auto path = dir / "states.csv";
        auto out = open_file(path);
        write_states(out, report.target, report.chaser, labels);
        check(out, path);
    }
    {
        const auto path = dir / "elements.csv";
        auto out = open_file(path);
        write_elements(out, report.target, report.chaser, labels, config.forces.gravity);
        check(out, path);
    }
    {
        const auto path = dir / "schedule.csv";
        auto out = open_file(path);
        write_schedule(out, report.blocks);
        check(out, path);
    }
    {
        const auto path = dir / "report.json";
        auto out = open_file(path);
        out << report_json(report, config).dump(2) << '\n';
        check(out, path);
    }
}

}  // namespace rpo
