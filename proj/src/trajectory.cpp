#include "rrr/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace rrr {

namespace {

Posed segment_pose(const PathSpec& spec, int seg, double u)
{
    const Posed& a = spec.waypoints[std::size_t(seg)];
    const Posed& b = spec.waypoints[std::size_t(seg) + 1];
    if (u <= 0.0) return a;
    if (u >= 1.0) return b;
    return Posed(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y), a.theta + u * shortest_arc(a.theta, b.theta));
}

SampleRecord evaluate(const Geometry& geom, const WorkingMode& mode, double t, const Posed& pose, double eps)
{
    FullConfiguration<double> cfg;
    try {
        cfg = inverse_kinematics(geom, pose, mode, eps);
    } catch (const KinematicError& e) {
        if (e.kind() != KinematicErrorKind::OnSerialBoundary)
            throw KinematicError(KinematicErrorKind::UnreachableSample,
                                 "path sample at t=" + std::to_string(t) + " is unreachable: " + e.what(), e.leg(), t);
        // Stretched or folded leg: reachable, reported through its zero margin.
        cfg = inverse_kinematics(geom, pose, mode, 0.0);
    }
    const auto jp = jacobians(geom, cfg);
    const auto rep = singularity_report(jp, eps);
    SampleRecord r;
    r.t = t;
    r.pose = pose;
    r.alpha = cfg.alpha;
    r.detA = jp.detA;
    r.b = jp.bDiag;
    r.parallelMarginScaled = rep.parallelMarginScaled;
    for (int i = 0; i < 3; ++i) r.serialMarginScaled[i] = std::abs(jp.bDiag[i]) / jp.legScale;
    return r;
}

// Index 0 is detA, 1..3 are B_11..B_33.
double index_value(const SampleRecord& r, int k) { return k == 0 ? r.detA : r.b[std::size_t(k - 1)]; }
double index_margin(const SampleRecord& r, int k)
{
    return k == 0 ? r.parallelMarginScaled : r.serialMarginScaled[std::size_t(k - 1)];
}
const char* index_name(int k)
{
    static const char* names[] = {"detA", "B11", "B22", "B33"};
    return names[k];
}

} // namespace

void PathSpec::validate() const
{
    if (waypoints.size() < 2) throw ValidationError("path needs at least 2 waypoints");
    if (samplesPerSegment < 2) throw ValidationError("path needs at least 2 samples per segment");
}

double sample_parameter(const PathSpec& spec, int k)
{
    const int per = spec.samplesPerSegment - 1;
    const int seg = k / per;
    if (seg >= spec.segments()) return 1.0;
    return (double(seg) + double(k % per) / double(per)) / double(spec.segments());
}

Posed pose_at(const PathSpec& spec, double t)
{
    spec.validate();
    const int n = spec.segments();
    if (t <= 0.0) return spec.waypoints.front();
    if (t >= 1.0) return spec.waypoints.back();
    const double s = t * double(n);
    const int seg = std::min(int(std::floor(s)), n - 1);
    return segment_pose(spec, seg, s - double(seg));
}

std::vector<Posed> interpolate(const PathSpec& spec)
{
    spec.validate();
    const int per = spec.samplesPerSegment - 1;
    std::vector<Posed> out;
    out.reserve(std::size_t(spec.sample_count()));
    for (int seg = 0; seg < spec.segments(); ++seg)
        for (int j = 0; j < per; ++j) out.push_back(segment_pose(spec, seg, double(j) / double(per)));
    out.push_back(spec.waypoints.back());
    return out;
}

void normalize_records(std::vector<SampleRecord>& records)
{
    std::array<double, 4> peak{};
    for (const auto& r : records)
        for (int k = 0; k < 4; ++k) peak[std::size_t(k)] = std::max(peak[std::size_t(k)], std::abs(index_value(r, k)));
    for (auto& r : records) {
        r.detA_n = peak[0] > 0.0 ? r.detA / peak[0] : 0.0;
        for (int i = 0; i < 3; ++i) r.b_n[std::size_t(i)] = peak[std::size_t(i) + 1] > 0.0 ? r.b[std::size_t(i)] / peak[std::size_t(i) + 1] : 0.0;
    }
}

MonitorResult monitor(const Geometry& geom, const PathSpec& spec, double eps)
{
    spec.validate();
    geom.validate();
    const auto poses = interpolate(spec);
    MonitorResult res;
    res.records.reserve(poses.size());
    for (std::size_t k = 0; k < poses.size(); ++k)
        res.records.push_back(evaluate(geom, spec.mode, sample_parameter(spec, int(k)), poses[k], eps));
    normalize_records(res.records);

    res.minParallelMargin = std::numeric_limits<double>::infinity();
    res.minSerialMargin.fill(std::numeric_limits<double>::infinity());
    for (const auto& r : res.records) {
        res.minParallelMargin = std::min(res.minParallelMargin, r.parallelMarginScaled);
        for (int i = 0; i < 3; ++i)
            res.minSerialMargin[std::size_t(i)] = std::min(res.minSerialMargin[std::size_t(i)], r.serialMarginScaled[std::size_t(i)]);
    }

    const auto& first = res.records.front();
    for (std::size_t n = 0; n < res.records.size() && res.verdict == PathVerdict::NonSingular; ++n) {
        const auto& r = res.records[n];
        for (int k = 0; k < 4; ++k) {
            if (index_margin(r, k) <= eps) {
                res.verdict = PathVerdict::Singular;
                res.singularT = r.t;
                res.reason = std::string(index_name(k)) + " margin below eps";
                break;
            }
            if (std::signbit(index_value(r, k)) != std::signbit(index_value(first, k))) {
                // Bisect between the last agreeing sample and this one.
                double lo = res.records[n - 1].t;
                double hi = r.t;
                const bool loSign = std::signbit(index_value(first, k));
                for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const auto s = evaluate(geom, spec.mode, mid, pose_at(spec, mid), eps);
                    (std::signbit(index_value(s, k)) == loSign ? lo : hi) = mid;
                }
                res.verdict = PathVerdict::Singular;
                res.singularT = 0.5 * (lo + hi);
                res.reason = std::string(index_name(k)) + " changes sign";
                break;
            }
        }
    }
    return res;
}

AssemblyModeChangeReport verify_assembly_mode_change(const Geometry& geom, const AspectAtlas& atlas, const Posed& poseA,
                                                     const Posed& poseB, const std::optional<Posed>& via,
                                                     const WorkingMode& mode, int samplesPerSegment)
{
    if (pose_distance(poseA, poseB) <= 1e-12)
        throw ValidationError("assembly-mode change needs two distinct poses");
    const double eps = atlas.options().eps;
    AssemblyModeChangeReport rep;
    const auto cfgA = inverse_kinematics(geom, poseA, mode, eps);
    const auto cfgB = inverse_kinematics(geom, poseB, mode, eps);
    rep.alphaA = cfgA.alpha;
    rep.alphaB = cfgB.alpha;
    for (int i = 0; i < 3; ++i)
        rep.alphaGap = std::max(rep.alphaGap, std::abs(normalize_angle(cfgA.alpha[std::size_t(i)] - cfgB.alpha[std::size_t(i)])));
    rep.sharedAlpha = rep.alphaGap <= 1e-4;

    try {
        rep.sameAspect = same_aspect(atlas, cfgA, cfgB);
        if (!rep.sameAspect) rep.aspectNote = "poses lie in different components";
    } catch (const KinematicError& e) {
        if (e.kind() != KinematicErrorKind::ModeMismatch && e.kind() != KinematicErrorKind::SerialSingular) throw;
        rep.sameAspect = false;
        rep.aspectNote = e.what();
    }

    PathSpec spec;
    spec.waypoints.push_back(poseA);
    if (via) spec.waypoints.push_back(*via);
    spec.waypoints.push_back(poseB);
    spec.samplesPerSegment = samplesPerSegment;
    spec.mode = mode;
    rep.path = monitor(geom, spec, eps);

    if (rep.sharedAlpha && rep.sameAspect && rep.path.verdict == PathVerdict::NonSingular)
        rep.verdict = ChangeVerdict::ChangeDemonstrated;
    return rep;
}

void write_profile_csv(std::ostream& out, const std::vector<SampleRecord>& records)
{
    out << "t,x,y,theta_deg,alpha1,alpha2,alpha3,detA,B11,B22,B33,detA_n,B11_n,B22_n,B33_n\n";
    char buf[32];
    auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        out << buf << (last ? '\n' : ',');
    };
    for (const auto& r : records) {
        put(r.t);
        put(r.pose.x);
        put(r.pose.y);
        put(r.pose.theta_deg());
        for (double a : r.alpha) put(a);
        put(r.detA);
        for (double b : r.b) put(b);
        put(r.detA_n);
        put(r.b_n[0]);
        put(r.b_n[1]);
        put(r.b_n[2], true);
    }
}

const char* to_string(PathVerdict v) { return v == PathVerdict::NonSingular ? "NonSingular" : "Singular"; }

const char* to_string(ChangeVerdict v)
{
    return v == ChangeVerdict::ChangeDemonstrated ? "ChangeDemonstrated" : "NotDemonstrated";
}

} // namespace rrr
