#include "rrr/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rrr/aspects.hpp"
#include "rrr/cli/config.hpp"
#include "rrr/trajectory.hpp"

namespace rrr::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(const char* pattern, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

struct Globals {
    std::string configPath;
    std::string out;
    int depth = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    CLI::Option* depthOpt = nullptr;
    CLI::Option* epsOpt = nullptr;
    CLI::Option* seedOpt = nullptr;
    CLI::Option* outOpt = nullptr;
};

RunConfig resolve_config(const Globals& g)
{
    RunConfig c = g.configPath.empty() ? RunConfig{} : load_config(g.configPath);
    if (g.depthOpt->count()) c.depth = g.depth;
    if (g.epsOpt->count()) c.eps = g.eps;
    if (g.seedOpt->count()) c.seed = g.seed;
    if (g.outOpt->count()) c.out = g.out;
    c.validate();
    return c;
}

// Single writer for everything a command emits; disabled without --out.
class OutputDir {
public:
    explicit OutputDir(std::string dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }

    void write(const std::string& name, const std::string& content) const
    {
        if (!enabled()) return;
        fs::create_directories(dir_);
        std::ofstream f(fs::path(dir_) / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (fs::path(dir_) / name).string());
        f << content;
    }

    void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }

private:
    std::string dir_;
};

WorkingMode parse_mode(const std::string& text)
{
    const auto m = WorkingMode::parse(text);
    if (!m) throw ValidationError("cannot parse working mode '" + text + "'");
    return *m;
}

Sign parse_sign(const std::string& text)
{
    if (text == "+" || text == "pos" || text == "positive" || text == "P") return Sign::Positive;
    if (text == "-" || text == "neg" || text == "negative" || text == "N") return Sign::Negative;
    throw ValidationError("cannot parse detA sign '" + text + "' (use + or -)");
}

const char* sign_text(Sign s) { return s == Sign::Positive ? "+" : "-"; }

AtlasOptions atlas_options(const RunConfig& c, bool joint)
{
    AtlasOptions o;
    o.workspaceBox = c.box;
    o.jointDepth = joint ? c.jointDepth : 0;
    o.fkSamples = c.fkSamples;
    o.eps = c.eps;
    return o;
}

json pose_json(const Posed& p) { return {{"x", p.x}, {"y", p.y}, {"theta_deg", p.theta_deg()}}; }

struct IndexRow {
    double detA = 0.0;
    std::array<double, 3> b{};
    std::string mode = "-";
    bool singular = false;
};

IndexRow index_row(const Geometry& geom, const FullConfiguration<double>& cfg, double eps)
{
    const auto jp = jacobians(geom, cfg);
    const auto rep = singularity_report(jp, eps);
    IndexRow r;
    r.detA = jp.detA;
    r.b = jp.bDiag;
    r.singular = rep.isSerialSingular || rep.isParallelSingular;
    if (!rep.isSerialSingular) {
        const WorkingMode w = working_mode_of(jp, eps);
        r.mode = std::string(1, w.label()) + " " + w.sign_string();
    }
    return r;
}

// ---------------------------------------------------------------- fk

json fk_table(std::ostream& out, const RunConfig& c, const std::array<double, 3>& alpha)
{
    FkOptions<double> opt;
    opt.samples = c.fkSamples;
    const auto sols = forward_kinematics(c.geometry, alpha, opt);
    out << fmt("alpha (rad): %.6f %.6f %.6f  solutions: %zu\n", alpha[0], alpha[1], alpha[2], sols.size());
    if (!sols.empty())
        out << fmt("%3s %10s %10s %10s %12s %10s %10s %10s %6s %10s\n", "n", "x", "y", "theta_deg", "detA", "B11",
                   "B22", "B33", "mode", "residual");
    json rows = json::array();
    for (std::size_t k = 0; k < sols.size(); ++k) {
        const auto& p = sols[k];
        const auto cfg = make_configuration(c.geometry, p, alpha, 1e-7);
        const auto r = index_row(c.geometry, cfg, c.eps);
        const double res = fk_residual(c.geometry, alpha, p);
        out << fmt("%3zu %10.5f %10.5f %10.4f %12.4f %10.4f %10.4f %10.4f %6s %10.2e\n", k + 1, p.x, p.y,
                   p.theta_deg(), r.detA, r.b[0], r.b[1], r.b[2], r.mode.c_str(), res);
        rows.push_back({{"pose", pose_json(p)},
                        {"detA", r.detA},
                        {"B", r.b},
                        {"mode", r.mode},
                        {"residual", res}});
    }
    return {{"alpha", alpha}, {"solutions", rows}};
}

int cmd_fk(std::ostream& out, const RunConfig& c, const std::vector<double>& alphaIn, bool degrees, int random)
{
    const OutputDir dir(c.out);
    json doc;
    if (random > 0) {
        std::mt19937_64 rng(c.seed);
        doc["seed"] = c.seed;
        doc["samples"] = json::array();
        for (int n = 0; n < random; ++n) {
            std::array<double, 3> a{};
            // 53-bit uniform in [0, 2pi) without relying on library-specific distributions.
            for (auto& v : a) v = kTwoPi<double> * double(rng() >> 11) * 0x1.0p-53;
            doc["samples"].push_back(fk_table(out, c, a));
        }
    } else {
        if (alphaIn.size() != 3) throw ValidationError("fk: expected 3 actuated angles or --random N");
        std::array<double, 3> a{alphaIn[0], alphaIn[1], alphaIn[2]};
        if (degrees)
            for (auto& v : a) v = deg2rad(v);
        doc = fk_table(out, c, a);
    }
    dir.write_json("fk.json", doc);
    return kExitOk;
}

// ---------------------------------------------------------------- ik / jac

Posed pose_arg(const std::vector<double>& v, const char* cmd)
{
    if (v.size() != 3) throw ValidationError(std::string(cmd) + ": expected x y theta_deg");
    return Posed::from_degrees(v[0], v[1], v[2]);
}

int cmd_ik(std::ostream& out, const RunConfig& c, const std::vector<double>& poseIn, const std::string& modeText)
{
    const OutputDir dir(c.out);
    const Posed pose = pose_arg(poseIn, "ik");
    std::vector<IkSolution<double>> sols;
    if (!modeText.empty()) {
        IkSolution<double> s;
        s.mode = parse_mode(modeText);
        s.config = inverse_kinematics(c.geometry, pose, s.mode, c.eps);
        sols.push_back(s);
    } else {
        sols = inverse_kinematics_all(c.geometry, pose, c.eps);
    }
    out << fmt("pose: x=%.6f y=%.6f theta_deg=%.4f  solutions: %zu\n", pose.x, pose.y, pose.theta_deg(), sols.size());
    if (!sols.empty())
        out << fmt("%6s %10s %10s %10s %12s %10s %10s %10s\n", "mode", "alpha1", "alpha2", "alpha3", "detA", "B11",
                   "B22", "B33");
    json rows = json::array();
    for (const auto& s : sols) {
        const auto r = index_row(c.geometry, s.config, c.eps);
        const std::string label = std::string(1, s.mode.label()) + " " + s.mode.sign_string();
        out << fmt("%6s %10.6f %10.6f %10.6f %12.4f %10.4f %10.4f %10.4f\n", label.c_str(), s.config.alpha[0],
                   s.config.alpha[1], s.config.alpha[2], r.detA, r.b[0], r.b[1], r.b[2]);
        rows.push_back({{"mode", label}, {"alpha", s.config.alpha}, {"detA", r.detA}, {"B", r.b}});
    }
    dir.write_json("ik.json", {{"pose", pose_json(pose)}, {"solutions", rows}});
    return kExitOk;
}

int cmd_jac(std::ostream& out, const RunConfig& c, const std::vector<double>& poseIn, const std::string& modeText)
{
    const OutputDir dir(c.out);
    const Posed pose = pose_arg(poseIn, "jac");
    const WorkingMode mode = parse_mode(modeText);
    const auto cfg = inverse_kinematics(c.geometry, pose, mode, c.eps);
    const auto jp = jacobians(c.geometry, cfg);
    const auto rep = singularity_report(jp, c.eps);
    out << fmt("pose: x=%.6f y=%.6f theta_deg=%.4f  mode: %c %s\n", pose.x, pose.y, pose.theta_deg(), mode.label(),
               mode.sign_string().c_str());
    out << fmt("alpha: %.6f %.6f %.6f\n", cfg.alpha[0], cfg.alpha[1], cfg.alpha[2]);
    out << "A:\n";
    json rowsA = json::array();
    for (int i = 0; i < 3; ++i) {
        out << fmt("  %12.6f %12.6f %12.6f\n", jp.A(i, 0), jp.A(i, 1), jp.A(i, 2));
        rowsA.push_back({jp.A(i, 0), jp.A(i, 1), jp.A(i, 2)});
    }
    out << fmt("B: diag(%.6f, %.6f, %.6f)\n", jp.bDiag[0], jp.bDiag[1], jp.bDiag[2]);
    out << fmt("detA: %.6f  parallel margin: %.3e  serial margin: %.3e\n", jp.detA, rep.parallelMarginScaled,
               rep.serialMarginScaled);
    out << "serial singular: " << (rep.isSerialSingular ? "yes" : "no")
        << "  parallel singular: " << (rep.isParallelSingular ? "yes" : "no") << "\n";
    dir.write_json("jac.json", {{"pose", pose_json(pose)},
                                {"mode", mode.sign_string()},
                                {"alpha", cfg.alpha},
                                {"A", rowsA},
                                {"B", jp.bDiag},
                                {"detA", jp.detA},
                                {"parallel_margin", rep.parallelMarginScaled},
                                {"serial_margin", rep.serialMarginScaled},
                                {"serial_singular", rep.isSerialSingular},
                                {"parallel_singular", rep.isParallelSingular}});
    return kExitOk;
}

// ---------------------------------------------------------------- octrees

void print_entry(std::ostream& out, const AspectEntry& e)
{
    out << fmt("%4c %5s %5s %10d %12zu\n", e.mode.label(), e.mode.sign_string().c_str(), sign_text(e.sign),
               e.component_count(), e.workspace.size());
}

int cmd_workspace(std::ostream& out, const RunConfig& c, const std::string& modeText, const std::string& signText)
{
    const OutputDir dir(c.out);
    const WorkingMode mode = parse_mode(modeText);
    const Sign sign = parse_sign(signText);
    const auto atlas = build_aspects(c.geometry, c.depth, {std::pair{mode, sign}}, atlas_options(c, false));
    const auto& e = atlas.entry(mode, sign);
    out << fmt("%4s %5s %5s %10s %12s\n", "mode", "signs", "sigma", "components", "leaves");
    print_entry(out, e);
    for (int k = 0; k < e.component_count(); ++k)
        out << fmt("  component %d: %zu cells, volume %.6f\n", k, e.componentLeaves[std::size_t(k)],
                   e.componentVolumes[std::size_t(k)]);
    dir.write(octree_file_name(mode, sign, SpaceKind::Workspace), e.workspace.dump_string());
    dir.write_json("workspace.json", atlas_manifest(atlas));
    return kExitOk;
}

int cmd_aspects(std::ostream& out, const RunConfig& c)
{
    const OutputDir dir(c.out);
    const auto atlas = enumerate_aspects(c.geometry, c.depth, atlas_options(c, true));
    const auto res = atlas.entries().front().workspace.resolution();
    out << fmt("depth %d: cell %.5f x %.5f x %.5f deg\n", c.depth, res[0], res[1], rad2deg(res[2]));
    out << fmt("%4s %5s %5s %10s %12s %8s\n", "mode", "signs", "sigma", "components", "leaves", "major");
    for (const auto& e : atlas.entries()) {
        out << fmt("%4c %5s %5s %10d %12zu %8d\n", e.mode.label(), e.mode.sign_string().c_str(), sign_text(e.sign),
                   e.component_count(), e.workspace.size(), e.major_component_count(0.01));
        dir.write(octree_file_name(e.mode, e.sign, SpaceKind::Workspace), e.workspace.dump_string());
        if (e.joint.size() > 0) dir.write(octree_file_name(e.mode, e.sign, SpaceKind::JointSpace), e.joint.dump_string());
    }
    out << "total aspects (σ=+): " << atlas.total(Sign::Positive) << "\n";
    out << "total aspects (σ=-): " << atlas.total(Sign::Negative) << "\n";
    out << "grand total: " << atlas.total() << "\n";
    dir.write_json("manifest.json", atlas_manifest(atlas));
    return kExitOk;
}

// ---------------------------------------------------------------- trajectory

int cmd_trajectory(std::ostream& out, const RunConfig& c, const std::string& pathFile, const std::string& modeText,
                   int samples)
{
    const OutputDir dir(c.out);
    const PathFile path = load_path_file(pathFile);
    const WorkingMode mode = !modeText.empty() ? parse_mode(modeText)
                             : path.mode      ? *path.mode
                                              : throw ValidationError("trajectory: no working mode given");
    const int per = samples > 0 ? samples : path.samplesPerSegment.value_or(c.samples);

    json report;
    report["mode"] = mode.sign_string();
    report["samples_per_segment"] = per;
    MonitorResult mon;
    if (path.waypoints.size() <= 3) {
        const auto cfgA = inverse_kinematics(c.geometry, path.waypoints.front(), mode, c.eps);
        const Sign sigma = sign_of(jacobians(c.geometry, cfgA).detA);
        const auto atlas = build_aspects(c.geometry, c.depth, {std::pair{mode, sigma}}, atlas_options(c, false));
        std::optional<Posed> via;
        if (path.waypoints.size() == 3) via = path.waypoints[1];
        const auto rep =
            verify_assembly_mode_change(c.geometry, atlas, path.waypoints.front(), path.waypoints.back(), via, mode, per);
        mon = rep.path;
        out << fmt("alpha at start: %.6f %.6f %.6f\n", rep.alphaA[0], rep.alphaA[1], rep.alphaA[2]);
        out << fmt("alpha at end:   %.6f %.6f %.6f\n", rep.alphaB[0], rep.alphaB[1], rep.alphaB[2]);
        out << fmt("shared alpha: %s (gap %.3e)\n", rep.sharedAlpha ? "yes" : "no", rep.alphaGap);
        out << "same aspect: " << (rep.sameAspect ? "yes" : "no");
        if (!rep.aspectNote.empty()) out << " (" << rep.aspectNote << ")";
        out << "\n";
        report["shared_alpha"] = rep.sharedAlpha;
        report["alpha_gap"] = rep.alphaGap;
        report["same_aspect"] = rep.sameAspect;
        report["verdict"] = to_string(rep.verdict);
        out << fmt("path: %s\n", to_string(mon.verdict));
        out << "verdict: " << to_string(rep.verdict) << "\n";
    } else {
        PathSpec spec{path.waypoints, per, mode};
        mon = monitor(c.geometry, spec, c.eps);
        out << fmt("path: %s\n", to_string(mon.verdict));
    }
    if (mon.singularT) out << fmt("singular at t=%.9f (%s)\n", *mon.singularT, mon.reason.c_str());
    out << fmt("min margins: detA %.4e  B11 %.4e  B22 %.4e  B33 %.4e\n", mon.minParallelMargin, mon.minSerialMargin[0],
               mon.minSerialMargin[1], mon.minSerialMargin[2]);
    report["path_verdict"] = to_string(mon.verdict);
    report["singular_t"] = mon.singularT ? json(*mon.singularT) : json(nullptr);
    report["min_parallel_margin"] = mon.minParallelMargin;
    report["min_serial_margin"] = mon.minSerialMargin;
    report["samples"] = mon.records.size();
    std::ostringstream csv;
    write_profile_csv(csv, mon.records);
    dir.write("profile.csv", csv.str());
    dir.write_json("trajectory.json", report);
    return kExitOk;
}

// ---------------------------------------------------------------- charsurf

int cmd_charsurf(std::ostream& out, const RunConfig& c, const std::string& modeText, const std::string& signText,
                 int component, const std::vector<double>& poseIn)
{
    const OutputDir dir(c.out);
    const WorkingMode mode = parse_mode(modeText);
    const Sign sign = parse_sign(signText);
    const auto atlas = build_aspects(c.geometry, c.depth, {std::pair{mode, sign}}, atlas_options(c, false));
    if (!poseIn.empty()) {
        component = aspect_component(atlas, mode, sign, pose_arg(poseIn, "charsurf"));
        if (component < 0) throw ValidationError("charsurf: the pose is not inside the aspect");
    }
    if (component < 0) component = 0;
    const auto cs = characteristic_surface(c.geometry, atlas, mode, sign, component);
    const Octree& tree = atlas.entry(mode, sign).workspace;

    std::vector<OctreeLeaf> leaves = tree.leaves();
    for (auto& l : leaves) {
        l.in = false;
        l.component = -1;
    }
    for (std::size_t i : cs.marked) leaves[i].in = true;
    const Octree marked = Octree::from_leaves(tree.box(), tree.max_depth(), std::move(leaves));

    double volume = 0.0;
    for (std::size_t i : cs.marked) volume += tree.leaf_volume(i);
    out << fmt("aspect %c %s %s component %d\n", mode.label(), mode.sign_string().c_str(), sign_text(sign), component);
    out << fmt("boundary cells: %zu\n", cs.boundaryCells.size());
    out << fmt("marked cells: %zu (volume %.6f)\n", cs.marked.size(), volume);
    dir.write("charsurf.oct", marked.dump_string());
    json cells = json::array();
    for (std::size_t i : cs.marked) cells.push_back(pose_json(Posed(tree.leaf_center(i)[0], tree.leaf_center(i)[1],
                                                                    tree.leaf_center(i)[2])));
    dir.write_json("charsurf.json", {{"mode", mode.sign_string()},
                                     {"sign", sign_text(sign)},
                                     {"component", component},
                                     {"boundary_cells", cs.boundaryCells.size()},
                                     {"marked_cells", cs.marked.size()},
                                     {"marked_volume", volume},
                                     {"marked_centers", cells}});
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Kinematic analysis of the symmetrical planar 3-RRR parallel manipulator", "rrr"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.configPath, "JSON run configuration")->check(CLI::ExistingFile);
    g.outOpt = app.add_option("--out", g.out, "Output directory");
    g.depthOpt = app.add_option("--depth", g.depth, "Workspace octree depth");
    g.epsOpt = app.add_option("--eps", g.eps, "Singularity threshold");
    g.seedOpt = app.add_option("--seed", g.seed, "Random seed");

    std::vector<double> fkAlpha;
    bool fkDeg = false;
    int fkRandom = 0;
    auto* fk = app.add_subcommand("fk", "Direct kinematics of actuated angles (radians)");
    fk->add_option("alpha", fkAlpha, "alpha1 alpha2 alpha3")->expected(0, 3);
    fk->add_flag("--deg", fkDeg, "Angles are in degrees");
    fk->add_option("--random", fkRandom, "Solve N random inputs drawn from --seed")->check(CLI::NonNegativeNumber);

    std::vector<double> pose;
    std::string mode;
    std::string sign;
    int component = -1;
    int samples = 0;
    std::string pathFile;

    auto* ik = app.add_subcommand("ik", "Inverse kinematics of a pose");
    ik->add_option("pose", pose, "x y theta_deg")->expected(3)->required();
    ik->add_option("--mode", mode, "Working mode letter or sign triple");

    auto* jac = app.add_subcommand("jac", "Jacobians and singularity margins");
    jac->add_option("pose", pose, "x y theta_deg")->expected(3)->required();
    jac->add_option("--mode", mode, "Working mode letter or sign triple")->required();

    auto* ws = app.add_subcommand("workspace", "Workspace octree of one (mode, sign)");
    ws->add_option("--mode", mode)->required();
    ws->add_option("--sign", sign, "+ or -")->required();

    auto* asp = app.add_subcommand("aspects", "All aspects with component counts");

    auto* traj = app.add_subcommand("trajectory", "Singularity monitoring along a waypoint path");
    traj->add_option("path", pathFile, "Waypoint JSON file")->required()->check(CLI::ExistingFile);
    traj->add_option("--mode", mode, "Overrides the file's mode");
    traj->add_option("--samples", samples, "Samples per segment")->check(CLI::PositiveNumber);

    auto* cs = app.add_subcommand("charsurf", "Characteristic surface inside one aspect");
    cs->add_option("--mode", mode)->required();
    cs->add_option("--sign", sign, "+ or -")->required();
    cs->add_option("--component", component, "Component id");
    cs->add_option("--pose", pose, "Pick the component containing x y theta_deg")->expected(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        const RunConfig c = resolve_config(g);
        if (fk->parsed()) return cmd_fk(out, c, fkAlpha, fkDeg, fkRandom);
        if (ik->parsed()) return cmd_ik(out, c, pose, mode);
        if (jac->parsed()) return cmd_jac(out, c, pose, mode);
        if (ws->parsed()) return cmd_workspace(out, c, mode, sign);
        if (asp->parsed()) return cmd_aspects(out, c);
        if (traj->parsed()) return cmd_trajectory(out, c, pathFile, mode, samples);
        if (cs->parsed()) return cmd_charsurf(out, c, mode, sign, component, pose);
    } catch (const KinematicError& e) {
        err << "kinematic error: " << e.what() << "\n";
        return kExitKinematic;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const OutOfBox& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace rrr::cli
