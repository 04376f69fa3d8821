#include "slideocam/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "slideocam/error.hpp"

namespace slideocam::io {

using nlohmann::json;

namespace {

void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
}

void reject_unknown(const json& j, const std::string& where, std::set<std::string> allowed) {
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) fail(where, "unknown key '" + item.key() + "'");
    }
}

std::string key_path(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "expected a finite number");
    return v;
}

double positive(const json& j, const std::string& where) {
    const double v = number(j, where);
    if (!(v > 0.0)) fail(where, "must be positive");
    return v;
}

std::int64_t integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<std::int64_t>();
}

std::size_t count(const json& j, const std::string& where, std::size_t minimum) {
    const auto v = integer(j, where);
    if (v < static_cast<std::int64_t>(minimum))
        fail(where, "must be >= " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
}

bool boolean(const json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected true or false");
    return j.get<bool>();
}

std::string string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

Interval interval(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected [lo, hi]");
    Interval out{number(j[0], where + "[0]"), number(j[1], where + "[1]")};
    if (!(out.hi > out.lo)) fail(where, "requires lo < hi");
    return out;
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// Single value or [lo, hi].
std::pair<double, double> pressure_range(const json& j, const std::string& where) {
    if (j.is_array()) {
        if (j.size() != 2) fail(where, "expected a number or [lo, hi]");
        const double lo = number(j[0], where + "[0]");
        const double hi = number(j[1], where + "[1]");
        if (!(lo > 0.0 && hi >= lo)) fail(where, "requires 0 < lo <= hi");
        return {lo, hi};
    }
    const double v = positive(j, where);
    return {v, v};
}

template <typename F>
void with(const json& obj, const std::string& where, const char* key, F&& f) {
    if (auto it = obj.find(key); it != obj.end()) f(*it, key_path(where, key));
}

void parse_spec(const json& j, RunConfig& c) {
    const std::string w = "spec";
    require_object(j, w);
    reject_unknown(j, w,
                   {"pitch_mm", "eta", "camshaft_diameter_mm", "roller_radius_mm", "lobes", "cams",
                    "contact_width_mm"});
    if (j.contains("eta") && j.contains("camshaft_diameter_mm"))
        fail(w, "give either eta or camshaft_diameter_mm, not both");
    auto& s = c.spec;
    with(j, w, "pitch_mm", [&](const json& v, const std::string& p) { s.pitch = positive(v, p); });
    with(j, w, "roller_radius_mm",
         [&](const json& v, const std::string& p) { s.roller_radius = positive(v, p); });
    with(j, w, "contact_width_mm",
         [&](const json& v, const std::string& p) { s.contact_width = positive(v, p); });
    with(j, w, "lobes", [&](const json& v, const std::string& p) {
        s.lobes = static_cast<int>(count(v, p, 1));
    });
    // m = 1 parses; the model rejects it as an infeasible cam count.
    with(j, w, "cams", [&](const json& v, const std::string& p) {
        s.cams = static_cast<int>(count(v, p, 1));
    });
    with(j, w, "eta", [&](const json& v, const std::string& p) { s.eta = number(v, p); });
    with(j, w, "camshaft_diameter_mm", [&](const json& v, const std::string& p) {
        const double d = number(v, p);
        if (d < 0.0) fail(p, "must be non-negative");
        s = TransmissionSpec::from_design(s.pitch, d, s.roller_radius, s.contact_width, s.cams,
                                          s.lobes);
    });
}

void parse_load(const json& j, RunConfig& c) {
    const std::string w = "load";
    require_object(j, w);
    reject_unknown(j, w, {"torque_nmm", "speed_rpm"});
    with(j, w, "torque_nmm",
         [&](const json& v, const std::string& p) { c.load.torque = positive(v, p); });
    with(j, w, "speed_rpm", [&](const json& v, const std::string& p) {
        const double rpm = number(v, p);
        if (rpm < 0.0) fail(p, "must be non-negative");
        c.load.speed_rpm = rpm;
    });
}

void parse_materials(const json& j, RunConfig& c, const std::filesystem::path& base_dir) {
    const std::string w = "materials";
    require_object(j, w);
    reject_unknown(j, w, {"cam", "roller", "catalog"});
    with(j, w, "catalog", [&](const json& v, const std::string& p) {
        std::filesystem::path path = string(v, p);
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        c.catalog_path = path.string();
        c.catalog = load_material_catalog(path);
    });
    with(j, w, "cam", [&](const json& v, const std::string& p) { c.cam_material = string(v, p); });
    with(j, w, "roller",
         [&](const json& v, const std::string& p) { c.roller_material = string(v, p); });
}

void parse_space(const json& j, RunConfig& c) {
    const std::string w = "space";
    require_object(j, w);
    reject_unknown(j, w,
                   {"pitch_mm", "lobes", "camshaft_diameter_mm", "roller_radius_mm", "min_width_mm",
                    "cams", "resolution", "mu_cap_deg", "pressure_cap_mpa", "size_cap_mm"});
    auto& s = c.space;
    with(j, w, "pitch_mm", [&](const json& v, const std::string& p) { s.pitch = positive(v, p); });
    with(j, w, "lobes", [&](const json& v, const std::string& p) {
        s.lobes = static_cast<int>(count(v, p, 1));
    });
    with(j, w, "camshaft_diameter_mm", [&](const json& v, const std::string& p) {
        s.camshaft_diameter = interval(v, p);
        if (s.camshaft_diameter.lo < 0.0) fail(p, "lower bound must be non-negative");
    });
    with(j, w, "roller_radius_mm", [&](const json& v, const std::string& p) {
        s.roller_radius = interval(v, p);
        if (!(s.roller_radius.lo > 0.0)) fail(p, "lower bound must be positive");
    });
    with(j, w, "min_width_mm",
         [&](const json& v, const std::string& p) { s.min_width = positive(v, p); });
    with(j, w, "cams", [&](const json& v, const std::string& p) {
        if (!v.is_array() || v.empty()) fail(p, "expected a non-empty array of cam counts");
        s.cam_counts.clear();
        for (std::size_t i = 0; i < v.size(); ++i)
            s.cam_counts.push_back(
                static_cast<int>(count(v[i], p + "[" + std::to_string(i) + "]", 2)));
        std::sort(s.cam_counts.begin(), s.cam_counts.end());
        s.cam_counts.erase(std::unique(s.cam_counts.begin(), s.cam_counts.end()),
                           s.cam_counts.end());
    });
    with(j, w, "resolution",
         [&](const json& v, const std::string& p) { s.resolution = count(v, p, 16); });
    with(j, w, "mu_cap_deg", [&](const json& v, const std::string& p) {
        const double deg = positive(v, p);
        if (deg >= 90.0) fail(p, "must be below 90");
        s.caps.pressure_angle = deg * kDegree;
    });
    with(j, w, "pressure_cap_mpa",
         [&](const json& v, const std::string& p) { s.caps.pressure = positive(v, p); });
    with(j, w, "size_cap_mm",
         [&](const json& v, const std::string& p) { s.caps.size = positive(v, p); });
}

void parse_contour(const json& j, RunConfig& c) {
    const std::string w = "contour";
    require_object(j, w);
    reject_unknown(j, w,
                   {"cams", "size_mm", "resolution", "camshaft_diameter_mm", "roller_radius_mm",
                    "mu_levels_deg", "pressure_levels_mpa", "swap_line_styles"});
    auto& r = c.contour.request;
    with(j, w, "cams", [&](const json& v, const std::string& p) {
        r.cams = static_cast<int>(count(v, p, 2));
    });
    with(j, w, "size_mm", [&](const json& v, const std::string& p) { r.size = positive(v, p); });
    with(j, w, "resolution",
         [&](const json& v, const std::string& p) { r.resolution = count(v, p, 4); });
    with(j, w, "camshaft_diameter_mm", [&](const json& v, const std::string& p) {
        r.camshaft_diameter = interval(v, p);
        if (r.camshaft_diameter->lo < 0.0) fail(p, "lower bound must be non-negative");
    });
    with(j, w, "roller_radius_mm", [&](const json& v, const std::string& p) {
        r.roller_radius = interval(v, p);
        if (!(r.roller_radius->lo > 0.0)) fail(p, "lower bound must be positive");
    });
    with(j, w, "mu_levels_deg", [&](const json& v, const std::string& p) {
        r.mu_levels.clear();
        for (double deg : number_list(v, p)) r.mu_levels.push_back(deg * kDegree);
    });
    with(j, w, "pressure_levels_mpa",
         [&](const json& v, const std::string& p) { r.pressure_levels = number_list(v, p); });
    with(j, w, "swap_line_styles",
         [&](const json& v, const std::string& p) { c.contour.swap_line_styles = boolean(v, p); });
}

std::string hex(const unsigned char* data, unsigned len) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += digits[data[i] >> 4];
        out += digits[data[i] & 0xf];
    }
    return out;
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

}  // namespace

FormatSet parse_format(std::string_view name) {
    if (name == "all") return {true, true, true};
    if (name == "csv") return {true, false, false};
    if (name == "json") return {false, true, false};
    if (name == "svg") return {false, false, true};
    throw ConfigError("format: expected csv, json, svg or all, got '" + std::string(name) + "'");
}

RunConfig::RunConfig() {
    contour.request.mu_levels = {5 * kDegree, 10 * kDegree, 15 * kDegree,
                                 20 * kDegree, 25 * kDegree, 30 * kDegree};
    contour.request.pressure_levels = {500, 550, 600, 650, 700, 750, 800};
    contour.request.camshaft_diameter = Interval{0.0, 6.0};
}

void RunConfig::sync_space() {
    space.load = load;
    space.cam = cam();
    space.roller = roller();
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig c;
    require_object(doc, "config");
    reject_unknown(doc, "config",
                   {"spec", "load", "materials", "space", "profile", "sensitivity", "contour",
                    "output", "run"});
    // Materials first: the catalog must exist before names are resolved.
    if (doc.contains("materials")) parse_materials(doc["materials"], c, base_dir);
    if (doc.contains("spec")) parse_spec(doc["spec"], c);
    if (doc.contains("load")) parse_load(doc["load"], c);
    if (doc.contains("space")) parse_space(doc["space"], c);
    if (doc.contains("contour")) parse_contour(doc["contour"], c);
    if (auto it = doc.find("profile"); it != doc.end()) {
        require_object(*it, "profile");
        reject_unknown(*it, "profile", {"resolution"});
        with(*it, "profile", "resolution", [&](const json& v, const std::string& p) {
            c.profile_resolution = count(v, p, kMinProfileResolution);
        });
    }
    if (auto it = doc.find("sensitivity"); it != doc.end()) {
        const std::string w = "sensitivity";
        require_object(*it, w);
        reject_unknown(*it, w, {"samples", "rms_nodes", "include_torque"});
        with(*it, w, "samples", [&](const json& v, const std::string& p) {
            c.sensitivity.samples = count(v, p, kMinSensitivitySamples);
        });
        with(*it, w, "rms_nodes", [&](const json& v, const std::string& p) {
            c.sensitivity.rms_nodes = count(v, p, kMinRmsNodes);
            if (c.sensitivity.rms_nodes % 2 == 0) fail(p, "must be odd");
        });
        with(*it, w, "include_torque", [&](const json& v, const std::string& p) {
            c.sensitivity.include_torque = boolean(v, p);
        });
    }
    if (auto it = doc.find("output"); it != doc.end()) {
        require_object(*it, "output");
        reject_unknown(*it, "output", {"dir", "format"});
        with(*it, "output", "dir",
             [&](const json& v, const std::string& p) { c.output_dir = string(v, p); });
        with(*it, "output", "format", [&](const json& v, const std::string& p) {
            c.formats = parse_format(string(v, p));
        });
    }
    if (auto it = doc.find("run"); it != doc.end()) {
        require_object(*it, "run");
        reject_unknown(*it, "run", {"threads", "seed"});
        with(*it, "run", "threads", [&](const json& v, const std::string& p) {
            c.threads = static_cast<unsigned>(count(v, p, 0));
        });
        with(*it, "run", "seed",
             [&](const json& v, const std::string& p) { c.seed = integer(v, p); });
    }
    try {
        c.sync_space();
    } catch (const Error& e) {
        throw ConfigError(std::string("materials: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

json to_json(const Material& m) {
    return {{"name", m.name},
            {"young_modulus_mpa", m.young_modulus},
            {"poisson_ratio", m.poisson_ratio},
            {"static_pressure_mpa", json::array({m.static_pressure_lo, m.static_pressure_hi})},
            {"allowable_pressure_mpa",
             json::array({m.allowable_pressure_lo, m.allowable_pressure_hi})}};
}

json to_json(const TransmissionSpec& s) {
    return {{"pitch_mm", s.pitch},
            {"eta", s.eta},
            {"eccentricity_mm", s.eccentricity()},
            {"camshaft_diameter_mm", s.camshaft_diameter()},
            {"roller_radius_mm", s.roller_radius},
            {"lobes", s.lobes},
            {"cams", s.cams},
            {"contact_width_mm", s.contact_width}};
}

json to_json(const DesignSpace& s) {
    json cams = json::array();
    json widths = json::object();
    for (int m : s.cam_counts) {
        cams.push_back(m);
        widths[std::to_string(m)] = interval_json(s.width_range(m));
    }
    json load = {{"torque_nmm", s.load.torque}};
    if (s.load.speed_rpm) load["speed_rpm"] = *s.load.speed_rpm;
    return {{"pitch_mm", s.pitch},
            {"lobes", s.lobes},
            {"camshaft_diameter_mm", interval_json(s.camshaft_diameter)},
            {"roller_radius_mm", interval_json(s.roller_radius)},
            {"min_width_mm", s.min_width},
            {"contact_width_mm_by_cams", widths},
            {"cams", cams},
            {"resolution", s.resolution},
            {"mu_cap_deg", s.caps.pressure_angle / kDegree},
            {"pressure_cap_mpa", s.caps.pressure},
            {"size_cap_mm", s.caps.size},
            {"load", load},
            {"cam_material", to_json(s.cam)},
            {"roller_material", to_json(s.roller)}};
}

json to_json(const RunConfig& c) {
    json load = {{"torque_nmm", c.load.torque}};
    if (c.load.speed_rpm) load["speed_rpm"] = *c.load.speed_rpm;
    json materials = {{"cam", to_json(c.cam())}, {"roller", to_json(c.roller())}};
    if (c.catalog_path) materials["catalog"] = *c.catalog_path;

    const auto& r = c.contour.request;
    json mu_levels = json::array();
    for (double v : r.mu_levels) mu_levels.push_back(v / kDegree);
    json contour = {{"cams", r.cams},
                    {"size_mm", r.size},
                    {"resolution", r.resolution},
                    {"mu_levels_deg", mu_levels},
                    {"pressure_levels_mpa", r.pressure_levels},
                    {"swap_line_styles", c.contour.swap_line_styles}};
    if (r.camshaft_diameter) contour["camshaft_diameter_mm"] = interval_json(*r.camshaft_diameter);
    if (r.roller_radius) contour["roller_radius_mm"] = interval_json(*r.roller_radius);

    std::string format = "all";
    if (!(c.formats.csv && c.formats.json && c.formats.svg))
        format = c.formats.csv ? "csv" : c.formats.json ? "json" : "svg";
    json run = {{"threads", c.threads}};
    if (c.seed) run["seed"] = *c.seed;

    return {{"spec", to_json(c.spec)},
            {"load", load},
            {"materials", materials},
            {"space", to_json(c.space)},
            {"profile", {{"resolution", c.profile_resolution}}},
            {"sensitivity",
             {{"samples", c.sensitivity.samples},
              {"rms_nodes", c.sensitivity.rms_nodes},
              {"include_torque", c.sensitivity.include_torque}}},
            {"contour", contour},
            {"output", {{"dir", c.output_dir}, {"format", format}}},
            {"run", run}};
}

std::vector<Material> parse_material_catalog(const json& doc) {
    require_object(doc, "catalog");
    reject_unknown(doc, "catalog", {"materials"});
    if (!doc.contains("materials") || !doc["materials"].is_array() || doc["materials"].empty())
        fail("catalog", "expected a non-empty 'materials' array");
    std::vector<Material> out;
    const auto& list = doc["materials"];
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string w = "catalog.materials[" + std::to_string(i) + "]";
        const auto& j = list[i];
        require_object(j, w);
        reject_unknown(j, w,
                       {"name", "young_modulus_mpa", "poisson_ratio", "static_pressure_mpa",
                        "allowable_pressure_mpa"});
        for (const char* key : {"name", "young_modulus_mpa", "poisson_ratio", "static_pressure_mpa"})
            if (!j.contains(key)) fail(w, std::string("missing '") + key + "'");
        Material m;
        m.name = string(j["name"], w + ".name");
        m.young_modulus = positive(j["young_modulus_mpa"], w + ".young_modulus_mpa");
        m.poisson_ratio = number(j["poisson_ratio"], w + ".poisson_ratio");
        std::tie(m.static_pressure_lo, m.static_pressure_hi) =
            pressure_range(j["static_pressure_mpa"], w + ".static_pressure_mpa");
        if (j.contains("allowable_pressure_mpa")) {
            std::tie(m.allowable_pressure_lo, m.allowable_pressure_hi) =
                pressure_range(j["allowable_pressure_mpa"], w + ".allowable_pressure_mpa");
        } else {
            m.allowable_pressure_lo = kFatigueFraction * m.static_pressure_lo;
            m.allowable_pressure_hi = kFatigueFraction * m.static_pressure_hi;
        }
        try {
            m.validate();
        } catch (const Error& e) {
            fail(w, e.what());
        }
        for (const auto& other : out)
            if (other.name == m.name) fail(w, "duplicate material '" + m.name + "'");
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Material> load_material_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open material catalog '" + path.string() + "'");
    try {
        return parse_material_catalog(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("material catalog '" + path.string() + "' is not valid JSON: " +
                          e.what());
    }
}

std::string content_hash(std::string_view text) {
    const std::string head = "blob " + std::to_string(text.size()) + '\0';
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("cannot allocate digest context");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, head.data(), head.size()) == 1 &&
                    EVP_DigestUpdate(ctx, text.data(), text.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, digest, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("SHA-1 digest failed");
    return hex(digest, len);
}

}  // namespace slideocam::io
