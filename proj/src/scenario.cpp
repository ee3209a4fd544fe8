#include "rpo/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace rpo {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& lines) {
    std::string out = "invalid configuration:";
    for (const auto& l : lines) out += "\n  " + l;
    return out;
}

// Walks one JSON object, recording every key it consumes.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<std::string>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {}

    ~Reader() {
        if (!obj_.is_object()) return;
        for (const auto& item : obj_.items()) {
            if (!seen_.count(item.key())) errors_.push_back(key(item.key()) + ": unknown key");
        }
    }

    [[nodiscard]] std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    void number(const std::string& k, double& out, std::function<bool(double)> ok = {}, const char* rule = "") {
        const json* v = find(k);
        if (v == nullptr) return;
        if (!v->is_number()) {
            errors_.push_back(key(k) + ": expected a number");
            return;
        }
        const double x = v->get<double>();
        if (!std::isfinite(x) || (ok && !ok(x))) {
            errors_.push_back(key(k) + ": " + rule);
            return;
        }
        out = x;
    }

    void positive(const std::string& k, double& out) {
        number(k, out, [](double x) { return x > 0.0; }, "must be positive");
    }
    void non_negative(const std::string& k, double& out) {
        number(k, out, [](double x) { return x >= 0.0; }, "must be non-negative");
    }

    void integer(const std::string& k, int& out, int min_value) {
        const json* v = find(k);
        if (v == nullptr) return;
        if (!v->is_number_integer() || v->get<long long>() < min_value) {
            errors_.push_back(key(k) + ": expected an integer >= " + std::to_string(min_value));
            return;
        }
        out = v->get<int>();
    }

    void unsigned_integer(const std::string& k, std::uint64_t& out) {
        const json* v = find(k);
        if (v == nullptr) return;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
            errors_.push_back(key(k) + ": expected a non-negative integer");
            return;
        }
        out = v->get<std::uint64_t>();
    }

    void boolean(const std::string& k, bool& out) {
        const json* v = find(k);
        if (v == nullptr) return;
        if (!v->is_boolean()) {
            errors_.push_back(key(k) + ": expected true or false");
            return;
        }
        out = v->get<bool>();
    }

    void string(const std::string& k, std::optional<std::string>& out) {
        const json* v = find(k);
        if (v == nullptr) return;
        if (!v->is_string() || v->get<std::string>().empty()) {
            errors_.push_back(key(k) + ": expected a non-empty string");
            return;
        }
        out = v->get<std::string>();
    }

    void vector3(const std::string& k, std::array<double, 3>& out) {
        const json* v = find(k);
        if (v == nullptr) return;
        if (!v->is_array() || v->size() != 3 || !std::all_of(v->begin(), v->end(), [](const json& x) { return x.is_number(); })) {
            errors_.push_back(key(k) + ": expected an array of three numbers");
            return;
        }
        for (std::size_t n = 0; n < 3; ++n) out[n] = (*v)[n].get<double>();
    }

    // Calls `body` with a Reader for a nested object.
    template <typename Body>
    bool object(const std::string& k, Body&& body) {
        const json* v = find(k);
        if (v == nullptr) return false;
        if (!v->is_object()) {
            errors_.push_back(key(k) + ": expected an object");
            return false;
        }
        Reader nested(*v, key(k), errors_);
        body(nested);
        return true;
    }

    std::vector<std::string>& errors() { return errors_; }

private:
    const json* find(const std::string& k) {
        seen_.insert(k);
        if (!obj_.is_object()) return nullptr;
        const auto it = obj_.find(k);
        return it == obj_.end() ? nullptr : &*it;
    }

    const json& obj_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

void read_block(Reader& r, BlockConfig& b) {
    r.integer("max_firings", b.max_firings, 0);
    r.non_negative("preferred_coast_days", b.preferred_coast_days);
    r.non_negative("max_coast_days", b.max_coast_days);
    if (b.max_coast_days < b.preferred_coast_days) {
        r.errors().push_back(r.key("max_coast_days") + ": must not be shorter than preferred_coast_days");
    }
}

json block_json(const BlockConfig& b) {
    return {{"max_firings", b.max_firings},
            {"preferred_coast_days", b.preferred_coast_days},
            {"max_coast_days", b.max_coast_days}};
}

AltitudeBlockOptions block_options(const BlockConfig& b) {
    return {b.max_firings, b.preferred_coast_days * kSecondsPerDay, b.max_coast_days * kSecondsPerDay};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

ScenarioConfig parse_config(const json& doc) {
    std::vector<std::string> errors;
    ScenarioConfig c;
    if (!doc.is_object()) throw ConfigError({"(root): expected a JSON object"});
    {
        Reader r(doc, "", errors);
        if (!doc.contains("schema_version")) {
            errors.push_back("schema_version: required");
        } else {
            r.integer("schema_version", c.schema_version, 0);
            if (c.schema_version != kSchemaVersion) {
                errors.push_back("schema_version: unsupported version " + doc["schema_version"].dump() +
                                 " (expected " + std::to_string(kSchemaVersion) + ")");
            }
        }
        r.object("target", [&](Reader& t) {
            t.positive("a_km", c.target.a_km);
            t.number("e", c.target.e, [](double x) { return x >= 0.0 && x < 1.0; }, "must be in [0, 1)");
            t.number("i_deg", c.target.i_deg, [](double x) { return x >= 0.0 && x <= 180.0; }, "must be in [0, 180]");
            t.number("raan_deg", c.target.raan_deg);
            t.number("argp_deg", c.target.argp_deg);
            t.number("ta_deg", c.target.ta_deg);
        });
        if (c.target.a_km * (1.0 - c.target.e) <= GravityConstants{}.re) {
            errors.push_back("target: perigee below the Earth surface");
        }
        r.object("separation", [&](Reader& s) {
            s.non_negative("delta_v_mps", c.separation.delta_v_mps);
            s.vector3("direction_rsw", c.separation.direction_rsw);
            const auto& d = c.separation.direction_rsw;
            if (std::hypot(d[0], d[1], d[2]) == 0.0) errors.push_back(s.key("direction_rsw") + ": must be non-zero");
            s.object("offset", [&](Reader& o) {
                OffsetConfig off;
                o.number("da_km", off.da_km);
                o.number("de", off.de);
                o.number("di_deg", off.di_deg);
                o.number("draan_deg", off.draan_deg);
                o.number("du_deg", off.du_deg);
                c.separation.offset = off;
            });
        });
        r.non_negative("commissioning_days", c.commissioning_days);
        r.object("spacecraft", [&](Reader& s) {
            s.positive("wet_mass_kg", c.spacecraft.wet_mass_kg);
            s.positive("thrust_n", c.spacecraft.thrust_n);
            s.positive("isp_s", c.spacecraft.isp_s);
            s.positive("total_impulse_ns", c.spacecraft.total_impulse_ns);
            s.positive("max_firing_s", c.spacecraft.max_firing_s);
        });
        const double propellant = c.spacecraft.total_impulse_ns / (c.spacecraft.isp_s * kG0);
        if (propellant >= c.spacecraft.wet_mass_kg) {
            errors.push_back("spacecraft.total_impulse_ns: needs more propellant than the wet mass");
        }
        r.object("force_model", [&](Reader& f) {
            f.boolean("j2", c.force_model.j2);
            f.object("drag", [&](Reader& d) {
                d.boolean("enabled", c.force_model.drag.enabled);
                d.positive("cd", c.force_model.drag.cd);
                d.positive("area_m2", c.force_model.drag.area_m2);
                d.non_negative("rho0_kg_m3", c.force_model.drag.rho0_kg_m3);
                d.number("h0_km", c.force_model.drag.h0_km);
                d.positive("scale_height_km", c.force_model.drag.scale_height_km);
            });
            f.object("srp", [&](Reader& s) {
                s.boolean("enabled", c.force_model.srp.enabled);
                s.non_negative("cr", c.force_model.srp.cr);
                s.positive("area_m2", c.force_model.srp.area_m2);
                s.non_negative("p0_n_m2", c.force_model.srp.p0_n_m2);
                s.boolean("shadow", c.force_model.srp.shadow);
                s.number("sun_longitude_deg", c.force_model.srp.sun_longitude_deg);
            });
        });
        r.object("desired", [&](Reader& d) {
            d.positive("de", c.desired.de);
            d.positive("di_deg", c.desired.di_deg);
        });
        r.object("thresholds", [&](Reader& t) {
            t.positive("da_km", c.thresholds.da_km);
            t.positive("draan_deg", c.thresholds.draan_deg);
            t.positive("du_deg", c.thresholds.du_deg);
            t.positive("di_deg", c.thresholds.di_deg);
            t.positive("de", c.thresholds.de);
            t.positive("approach_km", c.thresholds.approach_km);
            t.non_negative("reserved_offset_km", c.thresholds.reserved_offset_km);
            t.positive("center_tolerance_km", c.thresholds.center_tolerance_km);
        });
        if (c.thresholds.reserved_offset_km >= c.thresholds.approach_km) {
            errors.push_back("thresholds.reserved_offset_km: must be smaller than approach_km");
        }
        r.object("blocks", [&](Reader& b) {
            b.object("raan", [&](Reader& x) { read_block(x, c.raan_block); });
            b.object("approach", [&](Reader& x) { read_block(x, c.approach_block); });
        });
        r.object("phase_limits", [&](Reader& p) {
            p.positive("raan_days", c.phase_limits.raan_days);
            p.positive("approach_days", c.phase_limits.approach_days);
            p.positive("ellipse_setup_days", c.phase_limits.ellipse_setup_days);
        });
        r.object("nav", [&](Reader& n) {
            n.positive("period_min", c.nav.period_min);
            n.non_negative("jitter_min", c.nav.jitter_min);
            n.unsigned_integer("seed", c.nav.seed);
        });
        if (c.nav.jitter_min >= c.nav.period_min) errors.push_back("nav.jitter_min: must be smaller than period_min");
        r.object("integrator", [&](Reader& i) {
            i.positive("step_s", c.integrator.step_s);
            i.positive("output_interval_s", c.integrator.output_interval_s);
        });
        r.non_negative("circumnavigation_days", c.circumnavigation_days);
        r.string("output_dir", c.output_dir);
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

json serialize_config(const ScenarioConfig& c) {
    json sep = {{"delta_v_mps", c.separation.delta_v_mps}, {"direction_rsw", c.separation.direction_rsw}};
    if (c.separation.offset) {
        const OffsetConfig& o = *c.separation.offset;
        sep["offset"] = {{"da_km", o.da_km},
                         {"de", o.de},
                         {"di_deg", o.di_deg},
                         {"draan_deg", o.draan_deg},
                         {"du_deg", o.du_deg}};
    }
    const DragConfig& d = c.force_model.drag;
    const SrpConfig& s = c.force_model.srp;
    json doc = {
        {"schema_version", c.schema_version},
        {"target",
         {{"a_km", c.target.a_km},
          {"e", c.target.e},
          {"i_deg", c.target.i_deg},
          {"raan_deg", c.target.raan_deg},
          {"argp_deg", c.target.argp_deg},
          {"ta_deg", c.target.ta_deg}}},
        {"separation", sep},
        {"commissioning_days", c.commissioning_days},
        {"spacecraft",
         {{"wet_mass_kg", c.spacecraft.wet_mass_kg},
          {"thrust_n", c.spacecraft.thrust_n},
          {"isp_s", c.spacecraft.isp_s},
          {"total_impulse_ns", c.spacecraft.total_impulse_ns},
          {"max_firing_s", c.spacecraft.max_firing_s}}},
        {"force_model",
         {{"j2", c.force_model.j2},
          {"drag",
           {{"enabled", d.enabled},
            {"cd", d.cd},
            {"area_m2", d.area_m2},
            {"rho0_kg_m3", d.rho0_kg_m3},
            {"h0_km", d.h0_km},
            {"scale_height_km", d.scale_height_km}}},
          {"srp",
           {{"enabled", s.enabled},
            {"cr", s.cr},
            {"area_m2", s.area_m2},
            {"p0_n_m2", s.p0_n_m2},
            {"shadow", s.shadow},
            {"sun_longitude_deg", s.sun_longitude_deg}}}}},
        {"desired", {{"de", c.desired.de}, {"di_deg", c.desired.di_deg}}},
        {"thresholds",
         {{"da_km", c.thresholds.da_km},
          {"draan_deg", c.thresholds.draan_deg},
          {"du_deg", c.thresholds.du_deg},
          {"di_deg", c.thresholds.di_deg},
          {"de", c.thresholds.de},
          {"approach_km", c.thresholds.approach_km},
          {"reserved_offset_km", c.thresholds.reserved_offset_km},
          {"center_tolerance_km", c.thresholds.center_tolerance_km}}},
        {"blocks", {{"raan", block_json(c.raan_block)}, {"approach", block_json(c.approach_block)}}},
        {"phase_limits",
         {{"raan_days", c.phase_limits.raan_days},
          {"approach_days", c.phase_limits.approach_days},
          {"ellipse_setup_days", c.phase_limits.ellipse_setup_days}}},
        {"nav", {{"period_min", c.nav.period_min}, {"jitter_min", c.nav.jitter_min}, {"seed", c.nav.seed}}},
        {"integrator", {{"step_s", c.integrator.step_s}, {"output_interval_s", c.integrator.output_interval_s}}},
        {"circumnavigation_days", c.circumnavigation_days},
    };
    if (c.output_dir) doc["output_dir"] = *c.output_dir;
    return doc;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({"(root): malformed JSON in '" + path.string() + "': " + e.what()});
    }
    return parse_config(doc);
}

MissionConfig mission_config(const ScenarioConfig& c) {
    MissionConfig m;
    m.target.a = c.target.a_km;
    m.target.e = c.target.e;
    m.target.i = deg2rad(c.target.i_deg);
    m.target.raan = wrap_two_pi(deg2rad(c.target.raan_deg));
    m.target.argp = wrap_two_pi(deg2rad(c.target.argp_deg));
    m.target.ta = wrap_two_pi(deg2rad(c.target.ta_deg));

    const auto& d = c.separation.direction_rsw;
    m.separation_dv = Vec3(d[0], d[1], d[2]).normalized() * c.separation.delta_v_mps;
    if (c.separation.offset) {
        const OffsetConfig& o = *c.separation.offset;
        m.separation_offset = RelativeElements{o.da_km, o.de, deg2rad(o.di_deg), deg2rad(o.draan_deg), deg2rad(o.du_deg)};
    }
    m.commissioning = c.commissioning_days * kSecondsPerDay;
    m.circumnavigation = c.circumnavigation_days * kSecondsPerDay;

    m.spacecraft.wet_mass = c.spacecraft.wet_mass_kg;
    m.spacecraft.thrust = c.spacecraft.thrust_n;
    m.spacecraft.isp = c.spacecraft.isp_s;
    m.spacecraft.total_impulse = c.spacecraft.total_impulse_ns;
    m.spacecraft.max_firing_duration = c.spacecraft.max_firing_s;

    m.forces.j2_enabled = c.force_model.j2;
    if (!c.force_model.j2) m.forces.gravity = m.forces.gravity.without_j2();
    if (c.force_model.drag.enabled) {
        const DragConfig& dc = c.force_model.drag;
        m.forces.drag = DragModel{dc.cd, dc.area_m2, dc.rho0_kg_m3, dc.h0_km, dc.scale_height_km};
    }
    if (c.force_model.srp.enabled) {
        const SrpConfig& sc = c.force_model.srp;
        m.forces.srp = SrpModel{sc.cr, sc.area_m2, sc.p0_n_m2, sc.shadow, deg2rad(sc.sun_longitude_deg)};
    }

    m.desired.de = c.desired.de;
    m.desired.di = deg2rad(c.desired.di_deg);
    m.deadbands = {c.thresholds.da_km, deg2rad(c.thresholds.draan_deg), deg2rad(c.thresholds.du_deg),
                   deg2rad(c.thresholds.di_deg), c.thresholds.de};
    m.approach_threshold = c.thresholds.approach_km;
    m.reserved_offset = c.thresholds.reserved_offset_km;
    m.center_tolerance = c.thresholds.center_tolerance_km;
    m.raan_options = block_options(c.raan_block);
    m.approach_options = block_options(c.approach_block);
    m.limits = {c.phase_limits.raan_days * kSecondsPerDay, c.phase_limits.approach_days * kSecondsPerDay,
                c.phase_limits.ellipse_setup_days * kSecondsPerDay};
    m.nav = {c.nav.period_min * 60.0, c.nav.jitter_min * 60.0, c.nav.seed};
    m.step = c.integrator.step_s;
    m.output_interval = c.integrator.output_interval_s;
    return m;
}

}  // namespace rpo
