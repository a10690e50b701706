#include "rrr/cli/config.hpp"

#include <fstream>
#include <set>

namespace rrr::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number()) throw ValidationError(where + ": expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
    return j.get<int>();
}

std::array<double, 2> range(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2) throw ValidationError(where + ": expected [lo, hi]");
    return {number(j[0], where), number(j[1], where)};
}

std::array<double, 3> triple_deg(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 3) throw ValidationError(where + ": expected 3 angles");
    return {deg2rad(number(j[0], where)), deg2rad(number(j[1], where)), deg2rad(number(j[2], where))};
}

} // namespace

json read_json_file(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(file.string() + ": " + e.what());
    }
}

Geometry parse_geometry(const json& j)
{
    reject_unknown(j, {"l", "m", "r", "s", "base_phase_deg", "platform_phase_deg"}, "geometry");
    Geometry g;
    if (j.contains("l")) g.l = number(j["l"], "geometry.l");
    if (j.contains("m")) g.m = number(j["m"], "geometry.m");
    if (j.contains("r")) g.r = number(j["r"], "geometry.r");
    if (j.contains("s")) g.s = number(j["s"], "geometry.s");
    if (j.contains("base_phase_deg")) g.basePhase = triple_deg(j["base_phase_deg"], "geometry.base_phase_deg");
    if (j.contains("platform_phase_deg"))
        g.platformPhase = triple_deg(j["platform_phase_deg"], "geometry.platform_phase_deg");
    g.validate();
    return g;
}

json geometry_to_json(const Geometry& g)
{
    auto deg = [](const std::array<double, 3>& a) {
        return json::array({rad2deg(a[0]), rad2deg(a[1]), rad2deg(a[2])});
    };
    return {{"l", g.l}, {"m", g.m}, {"r", g.r}, {"s", g.s},
            {"base_phase_deg", deg(g.basePhase)}, {"platform_phase_deg", deg(g.platformPhase)}};
}

void RunConfig::validate() const
{
    geometry.validate();
    box.validate();
    if (depth < 1 || depth > 12) throw ValidationError("depth must lie in [1, 12]");
    if (jointDepth < 0 || jointDepth > 12) throw ValidationError("joint_depth must lie in [0, 12]");
    if (!(eps > 0.0)) throw ValidationError("eps_sing must be positive");
    if (samples < 2) throw ValidationError("samples must be at least 2");
    if (fkSamples < 16) throw ValidationError("fk_samples must be at least 16");
}

RunConfig parse_config(const json& j, const std::filesystem::path& baseDir)
{
    reject_unknown(j, {"geometry", "box", "depth", "joint_depth", "eps_sing", "samples", "fk_samples", "out", "seed"},
                   "config");
    RunConfig c;
    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        if (g.is_string()) {
            std::filesystem::path p = g.get<std::string>();
            if (p.is_relative()) p = baseDir / p;
            c.geometry = parse_geometry(read_json_file(p));
        } else {
            c.geometry = parse_geometry(g);
        }
    }
    if (j.contains("box")) {
        const auto& b = j["box"];
        reject_unknown(b, {"x", "y", "theta_deg"}, "box");
        const char* keys[] = {"x", "y", "theta_deg"};
        for (int axis = 0; axis < 3; ++axis) {
            if (!b.contains(keys[axis])) continue;
            auto v = range(b[keys[axis]], std::string("box.") + keys[axis]);
            if (axis == 2) v = {deg2rad(v[0]), deg2rad(v[1])};
            c.box.lo[std::size_t(axis)] = v[0];
            c.box.hi[std::size_t(axis)] = v[1];
        }
    }
    if (j.contains("depth")) c.depth = integer(j["depth"], "depth");
    if (j.contains("joint_depth")) c.jointDepth = integer(j["joint_depth"], "joint_depth");
    if (j.contains("eps_sing")) c.eps = number(j["eps_sing"], "eps_sing");
    if (j.contains("samples")) c.samples = integer(j["samples"], "samples");
    if (j.contains("fk_samples")) c.fkSamples = integer(j["fk_samples"], "fk_samples");
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw ValidationError("out: expected a string");
        c.out = j["out"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ValidationError("seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& file)
{
    return parse_config(read_json_file(file), file.parent_path());
}

PathFile load_path_file(const std::filesystem::path& file)
{
    const json j = read_json_file(file);
    reject_unknown(j, {"mode", "samples_per_segment", "waypoints"}, "path");
    PathFile p;
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) throw ValidationError("path.mode: expected a string");
        p.mode = WorkingMode::parse(j["mode"].get<std::string>());
        if (!p.mode) throw ValidationError("path.mode: cannot parse '" + j["mode"].get<std::string>() + "'");
    }
    if (j.contains("samples_per_segment"))
        p.samplesPerSegment = integer(j["samples_per_segment"], "path.samples_per_segment");
    if (!j.contains("waypoints") || !j["waypoints"].is_array()) throw ValidationError("path.waypoints: expected an array");
    for (const auto& w : j["waypoints"]) {
        reject_unknown(w, {"x", "y", "theta_deg"}, "path.waypoints[]");
        if (!w.contains("x") || !w.contains("y") || !w.contains("theta_deg"))
            throw ValidationError("path.waypoints[]: x, y and theta_deg are required");
        p.waypoints.push_back(Posed::from_degrees(number(w["x"], "x"), number(w["y"], "y"),
                                                  number(w["theta_deg"], "theta_deg")));
    }
    if (p.waypoints.size() < 2) throw ValidationError("path: at least 2 waypoints are required");
    return p;
}

} // namespace rrr::cli
