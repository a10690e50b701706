#ifndef RRR_CLI_CONFIG_HPP
#define RRR_CLI_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrr/kinematics.hpp"
#include "rrr/octree.hpp"

namespace rrr::cli {

/// Run configuration. In JSON all angles are degrees; they are converted to
/// radians here and nowhere else.
///
/// {
///   "geometry": {"l", "m", "r", "s", "base_phase_deg": [3], "platform_phase_deg": [3]} | "<file>",
///   "box": {"x": [lo, hi], "y": [lo, hi], "theta_deg": [lo, hi]},
///   "depth", "joint_depth", "eps_sing", "samples", "fk_samples", "out", "seed"
/// }
///
/// Every key is optional; unknown keys are rejected.
struct RunConfig {
    Geometry geometry;
    Box3 box = Box3::workspace();
    int depth = 8;
    int jointDepth = 6;
    double eps = kDefaultEpsSing<double>;
    int samples = 500;
    int fkSamples = 2048;
    std::string out;
    std::uint64_t seed = 1;

    void validate() const;
};

Geometry parse_geometry(const nlohmann::json& j);
nlohmann::json geometry_to_json(const Geometry& g);

// Relative geometry file paths resolve against `baseDir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& baseDir = {});
RunConfig load_config(const std::filesystem::path& file);

struct PathFile {
    std::vector<Posed> waypoints;
    std::optional<WorkingMode> mode;
    std::optional<int> samplesPerSegment;
};

/// {"mode": "NNP", "samples_per_segment": n, "waypoints": [{"x", "y", "theta_deg"}, ...]}
PathFile load_path_file(const std::filesystem::path& file);

nlohmann::json read_json_file(const std::filesystem::path& file);

} // namespace rrr::cli

#endif // RRR_CLI_CONFIG_HPP
