#ifndef RRR_TRAJECTORY_HPP
#define RRR_TRAJECTORY_HPP

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rrr/aspects.hpp"
#include "rrr/kinematics.hpp"

namespace rrr {

struct PathSpec {
    std::vector<Posed> waypoints;
    int samplesPerSegment = 500;
    WorkingMode mode;

    void validate() const;
    int segments() const { return int(waypoints.size()) - 1; }
    int sample_count() const { return segments() * (samplesPerSegment - 1) + 1; }
};

/// Pose at path parameter t in [0, 1]: x, y linear per segment, theta along
/// the shortest arc. Segment boundaries return the waypoints themselves.
Posed pose_at(const PathSpec& spec, double t);

/// Parameter of sample k; segments share their end samples.
double sample_parameter(const PathSpec& spec, int k);

std::vector<Posed> interpolate(const PathSpec& spec);

struct SampleRecord {
    double t = 0.0;
    Posed pose;
    std::array<double, 3> alpha{};
    double detA = 0.0;
    std::array<double, 3> b{};
    // Divided by the maximum absolute value over the whole path.
    double detA_n = 0.0;
    std::array<double, 3> b_n{};
    double parallelMarginScaled = 0.0;
    std::array<double, 3> serialMarginScaled{};
};

enum class PathVerdict { NonSingular, Singular };

struct MonitorResult {
    std::vector<SampleRecord> records;
    PathVerdict verdict = PathVerdict::NonSingular;
    // Located singular parameter when the verdict is Singular.
    std::optional<double> singularT;
    std::string reason;
    double minParallelMargin = 0.0;
    std::array<double, 3> minSerialMargin{};
};

/// Samples the path and evaluates detA and B_ii at each sample in spec.mode.
/// NonSingular iff every index keeps its sign and every scaled margin
/// stays above eps. Throws KinematicError(UnreachableSample) with the
/// offending t when a sample has no inverse kinematics.
MonitorResult monitor(const Geometry& geom, const PathSpec& spec, double eps = kDefaultEpsSing<double>);

/// Divides each index by its maximum absolute value over the records.
void normalize_records(std::vector<SampleRecord>& records);

enum class ChangeVerdict { ChangeDemonstrated, NotDemonstrated };

struct AssemblyModeChangeReport {
    ChangeVerdict verdict = ChangeVerdict::NotDemonstrated;
    std::array<double, 3> alphaA{};
    std::array<double, 3> alphaB{};
    double alphaGap = 0.0;
    bool sharedAlpha = false;
    bool sameAspect = false;
    std::string aspectNote;
    MonitorResult path;
};

/// Checks that poseA and poseB are distinct assembly modes of the same
/// actuated input (alpha within 1e-4), lie in the same aspect, and are joined
/// by a non-singular linear path A -> via -> B in `mode`.
AssemblyModeChangeReport verify_assembly_mode_change(const Geometry& geom, const AspectAtlas& atlas, const Posed& poseA,
                                                     const Posed& poseB, const std::optional<Posed>& via,
                                                     const WorkingMode& mode, int samplesPerSegment = 500);

void write_profile_csv(std::ostream& out, const std::vector<SampleRecord>& records);

const char* to_string(PathVerdict v);
const char* to_string(ChangeVerdict v);

} // namespace rrr

#endif // RRR_TRAJECTORY_HPP
