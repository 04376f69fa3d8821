#include "slideocam/io/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "slideocam/error.hpp"
#include "slideocam/io/csv.hpp"
#include "slideocam/io/svg.hpp"
#include "slideocam/sensitivity.hpp"

namespace slideocam::io {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kRad2Deg = 180.0 / kPi;

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool v) { return v ? "true" : "false"; }

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

class OutputSink {
public:
    OutputSink(fs::path dir, FormatSet formats) : dir_(std::move(dir)), formats_(formats) {}

    void csv(const std::string& name, const CsvWriter& table) {
        if (formats_.csv) write(name, table.str());
    }
    void json_doc(const std::string& name, const json& doc) {
        if (formats_.json) write(name, doc.dump(2) + "\n");
    }
    void svg(const std::string& name, const SvgPlot& plot) {
        if (formats_.svg) write(name, plot.render());
    }
    std::vector<fs::path> files() const { return files_; }

private:
    void write(const std::string& name, const std::string& content) {
        fs::create_directories(dir_);
        const fs::path path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        f << content;
        if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
        files_.push_back(path);
    }

    fs::path dir_;
    FormatSet formats_;
    std::vector<fs::path> files_;
};

json envelope(const std::string& command, const RunConfig& config) {
    const json resolved = to_json(config);
    return {{"command", command},
            {"config", resolved},
            {"config_sha1", content_hash(resolved.dump())}};
}

CsvWriter meta_table() { return CsvWriter({"key", "value", "unit"}); }

void print_report(std::ostream& err, const FeasibilityReport& r) {
    err << "infeasible geometry: " << r.message << "\n"
        << "  eta_valid = " << flag(r.eta_valid) << ", profile_feasible = "
        << flag(r.profile_feasible) << ", fully_convex = " << flag(r.fully_convex)
        << ", blocking = " << flag(r.blocking) << "\n";
    if (r.eta_valid && r.delta != 0.0)
        err << "  delta = " << num(r.delta) << " rad, min rho_c = " << num(r.minimum.rho_c)
            << " mm at psi = " << num(r.minimum.psi) << " rad\n";
}

json report_json(const FeasibilityReport& r) {
    return {{"eta_valid", r.eta_valid},
            {"profile_feasible", r.profile_feasible},
            {"fully_convex", r.fully_convex},
            {"blocking", r.blocking},
            {"delta_rad", r.delta},
            {"min_rho_c_mm", r.minimum.rho_c},
            {"psi_min_rho_c_rad", r.minimum.psi},
            {"message", r.message}};
}

bool geometry_ok(const FeasibilityReport& r) { return r.eta_valid && r.profile_feasible; }

std::vector<double> sample_segment(const ActiveSegment& s, std::size_t count) {
    return linspace({s.start, s.end}, count);
}

void finish(std::ostream& out, const OutputSink& sink) {
    for (const auto& f : sink.files()) out << "wrote " << f.string() << "\n";
}

// ---------------------------------------------------------------- pareto ---

std::vector<std::string> candidate_header() {
    return {"cams",           "camshaft_diameter_mm", "roller_radius_mm", "contact_width_mm",
            "eta",            "mu_max_rad",           "mu_max_deg",       "p_max_mpa",
            "size_mm",        "psi_mu_rad",           "psi_p_rad",        "convex_profile"};
}

std::vector<std::string> candidate_row(const DesignCandidate& c) {
    return {num(c.x.cams),
            num(c.x.camshaft_diameter),
            num(c.x.roller_radius),
            num(c.x.contact_width),
            num(c.eta),
            num(c.objectives.pressure_angle),
            num(c.objectives.pressure_angle * kRad2Deg),
            num(c.objectives.pressure),
            num(c.objectives.size),
            num(c.psi_mu),
            num(c.psi_pressure),
            flag(c.convex_profile)};
}

CsvWriter candidate_table(const std::vector<DesignCandidate>& list) {
    CsvWriter t(candidate_header());
    for (const auto& c : list) t.row(candidate_row(c));
    return t;
}

json candidate_json(const DesignCandidate& c) {
    return {{"cams", c.x.cams},
            {"camshaft_diameter_mm", c.x.camshaft_diameter},
            {"roller_radius_mm", c.x.roller_radius},
            {"contact_width_mm", c.x.contact_width},
            {"eta", c.eta},
            {"mu_max_deg", c.objectives.pressure_angle * kRad2Deg},
            {"p_max_mpa", c.objectives.pressure},
            {"size_mm", c.objectives.size},
            {"convex_profile", c.convex_profile}};
}

// Isometric view of the (mu, S_M, P) cloud, each axis scaled to [0, 1].
SvgPlot isometric_front(const std::map<int, std::vector<DesignCandidate>>& fronts) {
    double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
    auto coords = [](const DesignCandidate& c) {
        return std::array<double, 3>{c.objectives.pressure_angle * kRad2Deg, c.objectives.size,
                                     c.objectives.pressure};
    };
    for (const auto& [m, front] : fronts)
        for (const auto& c : front) {
            const auto v = coords(c);
            for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], v[k]), hi[k] = std::max(hi[k], v[k]);
        }
    const double c30 = std::cos(kPi / 6), s30 = std::sin(kPi / 6);
    auto project = [&](double a, double b, double h) {
        return XY{(a - b) * c30, h + (a + b) * s30};
    };
    auto scaled = [&](double v, int k) { return hi[k] > lo[k] ? (v - lo[k]) / (hi[k] - lo[k]) : 0.5; };

    SvgPlot plot("Pareto front (isometric)", "", "", 640, 560);
    plot.set_axes(false);
    plot.set_equal_aspect(true);
    Style axis{"#555555", 1.0, "", "none"};
    const XY o = project(0, 0, 0);
    plot.segment(o, project(1, 0, 0), axis);
    plot.segment(o, project(0, 1, 0), axis);
    plot.segment(o, project(0, 0, 1), axis);
    auto range = [&](int k) { return " [" + label(lo[k]) + ", " + label(hi[k]) + "]"; };
    plot.text(project(1.05, 0, 0), "mu_max, deg" + range(0));
    plot.text(project(0, 1.35, 0), "S_M, mm" + range(1));
    plot.text(project(0, 0, 1.08), "P_max, MPa" + range(2));
    std::size_t series = 0;
    for (const auto& [m, front] : fronts) {
        std::vector<XY> pts;
        for (const auto& c : front) {
            const auto v = coords(c);
            pts.push_back(project(scaled(v[0], 0), scaled(v[1], 1), scaled(v[2], 2)));
        }
        const auto colour = palette(series++);
        plot.markers(std::move(pts), 1.6, {colour, 0.5, "", colour}, "m = " + std::to_string(m));
    }
    return plot;
}

SvgPlot projection(const std::map<int, std::vector<DesignCandidate>>& fronts,
                   const std::string& title, const std::string& xl, const std::string& yl,
                   double (*fx)(const DesignCandidate&), double (*fy)(const DesignCandidate&)) {
    SvgPlot plot(title, xl, yl);
    std::size_t series = 0;
    for (const auto& [m, front] : fronts) {
        std::vector<XY> pts;
        for (const auto& c : front) pts.push_back({fx(c), fy(c)});
        const auto colour = palette(series++);
        plot.markers(std::move(pts), 1.6, {colour, 0.5, "", colour}, "m = " + std::to_string(m));
    }
    return plot;
}

double mu_deg(const DesignCandidate& c) { return c.objectives.pressure_angle * kRad2Deg; }
double p_max(const DesignCandidate& c) { return c.objectives.pressure; }
double s_m(const DesignCandidate& c) { return c.objectives.size; }

}  // namespace

void apply_overrides(RunConfig& config, const CliOverrides& flags, const std::string& command) {
    if (flags.out) config.output_dir = *flags.out;
    if (flags.format) config.formats = parse_format(*flags.format);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.material) {
        try {
            config.cam_material = find_material(config.catalog, *flags.material).name;
        } catch (const Error& e) {
            throw ConfigError(std::string("--material: ") + e.what());
        }
        config.roller_material = config.cam_material;
        config.sync_space();
    }
    if (flags.resolution) {
        const std::size_t k = *flags.resolution;
        auto check = [&](std::size_t minimum) {
            if (k < minimum)
                throw ConfigError("--resolution must be >= " + std::to_string(minimum) + " for " +
                                  command);
        };
        if (command == "profile") {
            check(kMinProfileResolution);
            config.profile_resolution = k;
        } else if (command == "sensitivity") {
            check(kMinSensitivitySamples);
            config.sensitivity.samples = k;
        } else if (command == "pareto") {
            check(16);
            config.space.resolution = k;
        } else if (command == "contour") {
            check(4);
            config.contour.request.resolution = k;
        }
    }
}

CommandOutput cmd_profile(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto& spec = config.spec;
    const auto report = feasibility_check(spec);
    if (!geometry_ok(report)) {
        print_report(err, report);
        return {kExitInfeasible, {}};
    }
    const auto profile = sample_profile(spec, config.profile_resolution);
    OutputSink sink(config.output_dir, config.formats);

    CsvWriter table({"psi_rad", "u_c_mm", "v_c_mm", "u_p_mm", "v_p_mm", "kappa_p_per_mm",
                     "rho_c_mm"});
    for (const auto& s : profile.samples())
        table.row({num(s.psi), num(s.u_c), num(s.v_c), num(s.u_p), num(s.v_p), num(s.kappa_p),
                   num(s.rho_c)});
    sink.csv("profile.csv", table);

    auto meta = meta_table();
    meta.row({"delta", num(profile.delta()), "rad"})
        .row({"closing_angle", num(kTwoPi - profile.delta()), "rad"})
        .row({"resolution", num(profile.resolution()), "samples"})
        .row({"eccentricity", num(spec.eccentricity()), "mm"})
        .row({"camshaft_diameter", num(spec.camshaft_diameter()), "mm"})
        .row({"min_rho_c", num(report.minimum.rho_c), "mm"})
        .row({"psi_min_rho_c", num(report.minimum.psi), "rad"})
        .row({"fully_convex", flag(report.fully_convex), "bool"});
    sink.csv("profile_meta.csv", meta);

    auto doc = envelope("profile", config);
    doc["results"] = {{"delta_rad", profile.delta()},
                      {"closing_angle_rad", kTwoPi - profile.delta()},
                      {"resolution", profile.resolution()},
                      {"feasibility", report_json(report)}};
    sink.json_doc("profile.json", doc);

    SvgPlot plot("Cam profile and pitch curve", "u [mm]", "v [mm]", 640, 600);
    plot.set_equal_aspect(true);
    std::vector<XY> cam, pitch;
    for (const auto& s : profile.samples()) {
        cam.push_back({s.u_c, s.v_c});
        pitch.push_back({s.u_p, s.v_p});
    }
    plot.polyline(cam, {"#1f77b4", 1.6, "", "none"}, "cam profile");
    plot.polyline(pitch, {"#d62728", 1.0, "6 4", "none"}, "pitch curve");
    const std::size_t rollers = 9;
    const auto& samples = profile.samples();
    for (std::size_t k = 0; k < rollers; ++k) {
        const auto& s = samples[k * (samples.size() - 1) / (rollers - 1)];
        plot.circle({s.u_p, s.v_p}, spec.roller_radius, {"#888888", 0.8, "", "none"});
    }
    if (spec.camshaft_diameter() > 0.0)
        plot.circle({0.0, 0.0}, 0.5 * spec.camshaft_diameter(), {"#2ca02c", 0.8, "2 2", "none"});
    sink.svg("profile.svg", plot);

    SvgPlot radius("Radius of curvature of the cam profile", "psi [rad]", "rho_c [mm]");
    std::vector<XY> rho;
    for (const auto& s : samples)
        if (std::abs(s.rho_c) < 20.0 * spec.pitch) rho.push_back({s.psi, s.rho_c});
    radius.polyline(std::move(rho), {"#1f77b4", 1.4, "", "none"}, "rho_c");
    sink.svg("profile_curvature.svg", radius);

    out << "delta = " << num(profile.delta()) << " rad, min rho_c = " << num(report.minimum.rho_c)
        << " mm, fully convex: " << flag(report.fully_convex) << "\n";
    finish(out, sink);
    return {kExitSuccess, sink.files()};
}

CommandOutput cmd_metrics(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto& spec = config.spec;
    const auto report = feasibility_check(spec);
    if (!geometry_ok(report)) {
        print_report(err, report);
        return {kExitInfeasible, {}};
    }
    config.load.validate();
    const auto& cam = config.cam();
    const auto& roller = config.roller();
    const auto segment = active_segment(spec, report.delta);
    const auto mu = max_pressure_angle(spec);
    const auto pressure = max_hertz_pressure(spec, config.load, cam, roller);
    const double size = mechanism_size(spec.cams, spec.contact_width);
    const auto allowable = check_allowable(pressure.value, cam, roller);
    const bool fast = high_speed(config.load);
    const bool advisory = fast && mu.value > 30.0 * kDegree;
    std::string advice;
    if (advisory) advice = "cam speed above 50 rpm: keep the pressure angle below 30 deg";

    OutputSink sink(config.output_dir, config.formats);
    auto meta = meta_table();
    meta.row({"delta", num(report.delta), "rad"})
        .row({"segment_start", num(segment.start), "rad"})
        .row({"segment_end", num(segment.end), "rad"})
        .row({"mu_max", num(mu.value), "rad"})
        .row({"mu_max_deg", num(mu.value * kRad2Deg), "deg"})
        .row({"psi_mu_max", num(mu.psi), "rad"})
        .row({"p_max", num(pressure.value), "MPa"})
        .row({"psi_p_max", num(pressure.psi), "rad"})
        .row({"size", num(size), "mm"})
        .row({"profile_feasible", flag(report.profile_feasible), "bool"})
        .row({"fully_convex", flag(report.fully_convex), "bool"})
        .row({"allowable_pressure", num(allowable.limit), "MPa"})
        .row({"within_allowable", flag(allowable.passes), "bool"})
        .row({"high_speed_advisory", flag(advisory), "bool"});
    sink.csv("metrics.csv", meta);

    auto doc = envelope("metrics", config);
    doc["results"] = {{"segment_rad", json::array({segment.start, segment.end})},
                      {"mu_max_rad", mu.value},
                      {"mu_max_deg", mu.value * kRad2Deg},
                      {"psi_mu_max_rad", mu.psi},
                      {"p_max_mpa", pressure.value},
                      {"psi_p_max_rad", pressure.psi},
                      {"size_mm", size},
                      {"feasibility", report_json(report)},
                      {"allowable",
                       {{"limit_mpa", allowable.limit},
                        {"cam", cam.name},
                        {"roller", roller.name},
                        {"passes", allowable.passes}}},
                      {"high_speed", fast},
                      {"advisory", advice}};
    sink.json_doc("metrics.json", doc);

    SvgPlot plot("Hertz pressure over the active segment", "psi [rad]", "P [MPa]");
    std::vector<XY> curve;
    for (double psi : sample_segment(segment, 512))
        curve.push_back({psi, hertz_pressure_at(psi, spec, config.load, cam, roller)});
    plot.polyline(std::move(curve), {"#1f77b4", 1.4, "", "none"}, "P");
    plot.segment({segment.start, allowable.limit}, {segment.end, allowable.limit},
                 {"#d62728", 1.0, "6 4", "none"});
    sink.svg("metrics.svg", plot);

    out << "mu_max = " << num(mu.value * kRad2Deg) << " deg at psi = " << num(mu.psi) << " rad\n"
        << "P_max = " << num(pressure.value) << " MPa at psi = " << num(pressure.psi) << " rad\n"
        << "S_M = " << num(size) << " mm\n"
        << "fully convex: " << flag(report.fully_convex) << ", within allowable ("
        << num(allowable.limit) << " MPa): " << flag(allowable.passes) << "\n";
    if (advisory) out << "advisory: " << advice << "\n";
    finish(out, sink);
    return {kExitSuccess, sink.files()};
}

CommandOutput cmd_sensitivity(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto report = feasibility_check(config.spec);
    if (!geometry_ok(report)) {
        print_report(err, report);
        return {kExitInfeasible, {}};
    }
    config.load.validate();
    const SensitivityInput in{config.spec, config.load, config.cam(), config.roller()};
    const auto& s = config.sensitivity;
    const auto result = analyze_sensitivity(in, s.samples, s.include_torque, s.rms_nodes);
    const double psi_peak = peak_pressure_angle(config.spec, report.delta);

    OutputSink sink(config.output_dir, config.formats);
    std::vector<std::string> header = {"psi_rad"};
    for (auto q : kParameters) header.push_back("dP_d" + std::string(to_string(q)) + "_x_" +
                                                std::string(to_string(q)) + "_mpa");
    if (s.include_torque) header.push_back("dP_dCt_x_Ct_mpa");
    CsvWriter table(header);
    for (const auto& pt : result.pointwise) {
        std::vector<std::string> row = {num(pt.psi)};
        for (double v : pt.normalized) row.push_back(num(v));
        if (pt.torque) row.push_back(num(*pt.torque));
        table.row(row);
    }
    sink.csv("sensitivity.csv", table);

    CsvWriter tables({"table", "parameter", "value_mpa", "rank"});
    auto add_table = [&](const std::string& name, const Ranking& r) {
        for (auto q : kParameters) {
            const auto pos = std::find(r.order.begin(), r.order.end(), q) - r.order.begin();
            tables.row({name, std::string(to_string(q)), num(r.values[static_cast<std::size_t>(q)]),
                        num(static_cast<int>(pos) + 1)});
        }
    };
    add_table("at_max", result.at_max);
    add_table("rms", result.rms);
    sink.csv("sensitivity_tables.csv", tables);

    auto meta = meta_table();
    meta.row({"delta", num(report.delta), "rad"})
        .row({"segment_start", num(result.segment.start), "rad"})
        .row({"segment_end", num(result.segment.end), "rad"})
        .row({"psi_peak", num(psi_peak), "rad"})
        .row({"samples", num(s.samples), "count"})
        .row({"rms_nodes", num(s.rms_nodes), "count"})
        .row({"relative_step", num(kRelativeStep), "1"});
    sink.csv("sensitivity_meta.csv", meta);

    auto ranking_json = [](const Ranking& r) {
        json values = json::object(), order = json::array();
        for (auto q : kParameters)
            values[std::string(to_string(q))] = r.values[static_cast<std::size_t>(q)];
        for (auto q : r.order) order.push_back(std::string(to_string(q)));
        return json{{"values_mpa", values}, {"order", order}};
    };
    auto doc = envelope("sensitivity", config);
    doc["results"] = {{"delta_rad", report.delta},
                      {"segment_rad", json::array({result.segment.start, result.segment.end})},
                      {"psi_peak_rad", psi_peak},
                      {"at_max", ranking_json(result.at_max)},
                      {"rms", ranking_json(result.rms)}};
    sink.json_doc("sensitivity.json", doc);

    SvgPlot plot("Normalized sensitivity of the Hertz pressure", "psi [rad]",
                 "(dP/dq) q0 [MPa]");
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<XY> curve;
        for (const auto& pt : result.pointwise) curve.push_back({pt.psi, pt.normalized[k]});
        plot.polyline(std::move(curve), {palette(k), 1.4, "", "none"},
                      std::string(to_string(kParameters[k])));
    }
    sink.svg("sensitivity.svg", plot);

    auto order_text = [](const Ranking& r) {
        std::string s;
        for (auto q : r.order) s += (s.empty() ? "" : ", ") + std::string(to_string(q));
        return s;
    };
    out << "ranking at max: " << order_text(result.at_max) << "\n"
        << "ranking rms:    " << order_text(result.rms) << "\n";
    finish(out, sink);
    return {kExitSuccess, sink.files()};
}

CommandOutput cmd_pareto(const RunConfig& config, std::ostream& out, std::ostream&) {
    const auto& space = config.space;
    space.validate();
    const auto result = sweep(space, config.threads);
    const double hv = hypervolume(result.front, caps_as_reference(space.caps));

    OutputSink sink(config.output_dir, config.formats);
    sink.csv("front.csv", candidate_table(result.front));
    for (const auto& [m, front] : result.per_cam_fronts)
        sink.csv("front_m" + std::to_string(m) + ".csv", candidate_table(front));

    std::size_t feasible = 0;
    for (const auto& c : result.candidates) feasible += c.feasible ? 1 : 0;
    auto doc = envelope("pareto", config);
    json per_m = json::object();
    for (const auto& [m, front] : result.per_cam_fronts) {
        per_m[std::to_string(m)] = {
            {"size", front.size()},
            {"hypervolume", hypervolume(front, caps_as_reference(space.caps))}};
    }
    json rows = json::array();
    for (const auto& c : result.front) rows.push_back(candidate_json(c));
    doc["design_space"] = to_json(space);
    doc["results"] = {{"candidates", result.candidates.size()},
                      {"feasible", feasible},
                      {"front_size", result.front.size()},
                      {"hypervolume", hv},
                      {"hypervolume_units", "deg * MPa * mm"},
                      {"per_cam", per_m},
                      {"front", rows}};
    sink.json_doc("pareto.json", doc);

    std::map<int, std::vector<DesignCandidate>> fronts(result.per_cam_fronts.begin(),
                                                       result.per_cam_fronts.end());
    auto mu_p = projection(fronts, "Pareto front: P_max vs mu_max", "mu_max [deg]",
                           "P_max [MPa]", mu_deg, p_max);
    std::size_t series = 0;
    for (const auto& [m, front] : fronts) {
        std::vector<XY> stair;
        for (const auto& c : pareto_front_2d(front)) stair.push_back({mu_deg(c), p_max(c)});
        mu_p.polyline(std::move(stair), {palette(series++), 1.2, "", "none"},
                      "m = " + std::to_string(m) + " (2D front)");
    }
    sink.svg("pareto_mu_p.svg", mu_p);
    sink.svg("pareto_mu_size.svg", projection(fronts, "Pareto front: S_M vs mu_max",
                                              "mu_max [deg]", "S_M [mm]", mu_deg, s_m));
    sink.svg("pareto_p_size.svg", projection(fronts, "Pareto front: S_M vs P_max", "P_max [MPa]",
                                             "S_M [mm]", p_max, s_m));
    sink.svg("pareto_3d.svg", isometric_front(fronts));

    out << result.candidates.size() << " candidates, " << feasible << " feasible, front size "
        << result.front.size() << ", hypervolume " << num(hv) << "\n";
    for (const auto& [m, front] : result.per_cam_fronts)
        out << "  m = " << m << ": " << front.size() << " nondominated\n";
    finish(out, sink);
    return {kExitSuccess, sink.files()};
}

CommandOutput cmd_contour(const RunConfig& config, std::ostream& out, std::ostream&) {
    const auto& request = config.contour.request;
    const auto slice = contour_slice(request, config.space, config.threads);

    OutputSink sink(config.output_dir, config.formats);
    CsvWriter grid({"camshaft_diameter_mm", "roller_radius_mm", "eta", "mu_max_deg", "p_max_mpa",
                    "feasible", "violations"});
    for (const auto& c : slice.cells)
        grid.row({num(c.x.camshaft_diameter), num(c.x.roller_radius), num(c.eta),
                  num(c.objectives.pressure_angle * kRad2Deg), num(c.objectives.pressure),
                  flag(c.feasible), describe_violations(c.violations)});
    sink.csv("contour_grid.csv", grid);
    sink.csv("contour_locus.csv", candidate_table(slice.locus));

    CsvWriter lines({"quantity", "level", "d0_mm", "r0_mm", "d1_mm", "r1_mm"});
    for (const auto& iso : slice.mu_isolines)
        for (const auto& s : iso.segments)
            lines.row({"mu_max_deg", num(iso.level * kRad2Deg), num(s.x0), num(s.y0), num(s.x1),
                       num(s.y1)});
    for (const auto& iso : slice.pressure_isolines)
        for (const auto& s : iso.segments)
            lines.row({"p_max_mpa", num(iso.level), num(s.x0), num(s.y0), num(s.x1), num(s.y1)});
    sink.csv("contour_isolines.csv", lines);

    std::size_t feasible = 0;
    for (const auto& c : slice.cells) feasible += c.feasible ? 1 : 0;
    json locus = json::array();
    for (const auto& c : slice.locus) locus.push_back(candidate_json(c));
    auto doc = envelope("contour", config);
    doc["results"] = {{"cams", request.cams},
                      {"size_mm", request.size},
                      {"contact_width_mm", slice.contact_width},
                      {"grid_points", slice.cells.size()},
                      {"feasible", feasible},
                      {"locus_size", slice.locus.size()},
                      {"locus", locus}};
    sink.json_doc("contour.json", doc);

    const Style solid{"#1f77b4", 1.0, "", "none"};
    const Style dashed{"#d62728", 1.0, "6 4", "none"};
    const Style mu_style = config.contour.swap_line_styles ? Style{"#1f77b4", 1.0, "6 4", "none"}
                                                           : solid;
    const Style p_style = config.contour.swap_line_styles ? Style{"#d62728", 1.0, "", "none"}
                                                          : dashed;
    SvgPlot plot("Contours of mu_max and P_max, m = " + std::to_string(request.cams) +
                     ", S_M = " + num(request.size) + " mm",
                 "d_cs [mm]", "r [mm]");
    const auto& xs = slice.mu_max.xs;
    const auto& ys = slice.mu_max.ys;
    plot.set_bounds(xs.front(), xs.back(), ys.front(), ys.back());
    auto draw = [&](const std::vector<Isoline>& isolines, const Style& style, double scale,
                    const std::string& name) {
        bool labelled = false;
        for (const auto& iso : isolines) {
            for (const auto& s : iso.segments) {
                plot.polyline({{s.x0, s.y0}, {s.x1, s.y1}}, style, labelled ? "" : name);
                labelled = true;
            }
            if (!iso.segments.empty()) {
                const auto& s = iso.segments[iso.segments.size() / 2];
                plot.text({s.x0, s.y0}, label(iso.level * scale), 9);
            }
        }
    };
    draw(slice.mu_isolines, mu_style, kRad2Deg, "mu_max [deg]");
    draw(slice.pressure_isolines, p_style, 1.0, "P_max [MPa]");
    std::vector<XY> locus_pts;
    for (const auto& c : slice.locus) locus_pts.push_back({c.x.camshaft_diameter, c.x.roller_radius});
    plot.markers(std::move(locus_pts), 2.2, {"#000000", 0.5, "", "#000000"}, "optimal locus");
    sink.svg("contour.svg", plot);

    out << slice.cells.size() << " grid points, " << feasible << " feasible, locus of "
        << slice.locus.size() << " points\n";
    finish(out, sink);
    return {kExitSuccess, sink.files()};
}

CommandOutput run_command(const std::string& command, const RunConfig& config, std::ostream& out,
                          std::ostream& err) {
    try {
        if (command == "profile") return cmd_profile(config, out, err);
        if (command == "metrics") return cmd_metrics(config, out, err);
        if (command == "sensitivity") return cmd_sensitivity(config, out, err);
        if (command == "pareto") return cmd_pareto(config, out, err);
        if (command == "contour") return cmd_contour(config, out, err);
        err << "unknown command '" << command << "'\n";
        return {kExitConfigError, {}};
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return {kExitConfigError, {}};
    } catch (const Error& e) {
        err << e.what() << "\n";
        return {e.kind() == ErrorKind::InvalidArgument ? kExitConfigError : kExitInfeasible, {}};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return {kExitConfigError, {}};
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Slide-o-Cam design tool: cam profiles, metrics, sensitivity, Pareto search"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides flags;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", flags.out, "output directory");
    app.add_option("--resolution", flags.resolution, "sampling or grid resolution");
    app.add_option("--format", flags.format, "csv|json|svg|all")
        ->check(CLI::IsMember({"csv", "json", "svg", "all"}));
    app.add_option("--material", flags.material, "material for cam and roller");
    app.add_option("--seed", flags.seed, "seed for randomized harnesses");

    app.add_subcommand("profile", "cam profile, pitch curve and curvature");
    app.add_subcommand("metrics", "pressure angle, Hertz pressure and size of one design");
    app.add_subcommand("sensitivity", "sensitivity of the Hertz pressure to r, eta, p, L");
    app.add_subcommand("pareto", "grid sweep and Pareto front");
    app.add_subcommand("contour", "mu_max and P_max contours at fixed S_M and m");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        apply_overrides(config, flags, command);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return run_command(command, config, out, err).exit_code;
}

}  // namespace slideocam::io
