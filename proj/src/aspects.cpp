#include "rrr/aspects.hpp"

#include <algorithm>
#include <stdexcept>

namespace rrr {

namespace {

void summarize(AspectEntry& e)
{
    const int n = e.workspace.label_components();
    e.componentLeaves.assign(std::size_t(n), 0);
    e.componentVolumes.assign(std::size_t(n), 0.0);
    for (std::size_t i = 0; i < e.workspace.size(); ++i) {
        const int c = e.workspace.leaves()[i].component;
        if (c < 0) continue;
        e.componentLeaves[std::size_t(c)] += std::size_t(1) << (3 * (e.workspace.max_depth() - e.workspace.leaves()[i].depth));
        e.componentVolumes[std::size_t(c)] += e.workspace.leaf_volume(i);
    }
    if (e.joint.size() > 0) e.joint.label_components();
}

} // namespace

int AspectEntry::major_component_count(double fraction) const
{
    double total = 0.0;
    for (double v : componentVolumes) total += v;
    return int(std::count_if(componentVolumes.begin(), componentVolumes.end(),
                             [&](double v) { return v >= fraction * total; }));
}

AspectAtlas::AspectAtlas(Geometry geom, int depth, AtlasOptions options, std::vector<AspectEntry> entries)
    : geom_(geom), depth_(depth), options_(options), entries_(std::move(entries))
{
}

bool AspectAtlas::has_entry(const WorkingMode& mode, Sign sign) const
{
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const AspectEntry& e) { return e.mode == mode && e.sign == sign; });
}

const AspectEntry& AspectAtlas::entry(const WorkingMode& mode, Sign sign) const
{
    for (const auto& e : entries_)
        if (e.mode == mode && e.sign == sign) return e;
    throw std::out_of_range("atlas has no entry for mode " + mode.sign_string());
}

int AspectAtlas::total(Sign sign) const
{
    int n = 0;
    for (const auto& e : entries_)
        if (e.sign == sign) n += e.component_count();
    return n;
}

AspectAtlas build_aspects(const Geometry& geom, int depth, const std::vector<std::pair<WorkingMode, Sign>>& pairs,
                          const AtlasOptions& options)
{
    if (depth < 1 || depth > 12) throw ValidationError("aspects: depth must lie in [1, 12]");
    if (pairs.empty()) throw ValidationError("aspects: no (mode, sign) pair requested");
    geom.validate();
    const WorkspaceClassifier wc(geom, options.eps);

    // C_i - P only depends on the theta index of a cell.
    const Box3& wbox = options.workspaceBox;
    const std::uint32_t cells = std::uint32_t{1} << depth;
    std::vector<Points3<double>> offsets(cells);
    for (std::uint32_t k = 0; k < cells; ++k) {
        const double theta = wbox.lo[2] + wbox.extent(2) * (double(k) + 0.5) / double(cells);
        for (int i = 0; i < 3; ++i) offsets[k][i] = geom.platform_offset(i, theta);
    }
    const bool singleMode = std::all_of(pairs.begin(), pairs.end(), [&](const auto& pr) { return pr.first == pairs.front().first; });
    std::vector<int> bits;
    for (const auto& [mode, sign] : pairs) bits.push_back(mask_bit(mode, sign));
    std::vector<int> signBits;
    for (const auto& pr : pairs) signBits.push_back(pr.second == Sign::Negative ? 1 : 0);

    auto pick = [&](std::uint32_t full) {
        std::uint32_t out = 0;
        for (std::size_t k = 0; k < bits.size(); ++k) out |= ((full >> bits[k]) & 1u) << k;
        return out;
    };
    auto wtrees = build_octree_family(
        wbox, depth, int(pairs.size()),
        [&](const Eigen::Vector3d& c, const std::array<std::uint32_t, 3>& idx) {
            const Vector2<double> p(c[0], c[1]);
            if (!singleMode) return pick(wc.classify(p, offsets[idx[2]]));
            const std::uint32_t two = wc.classify_mode(p, offsets[idx[2]], pairs.front().first);
            std::uint32_t out = 0;
            for (std::size_t k = 0; k < signBits.size(); ++k) out |= ((two >> signBits[k]) & 1u) << k;
            return out;
        });

    std::vector<Octree> jtrees;
    if (options.jointDepth > 0) {
        const JointClassifier jc(geom, options.eps, options.fkSamples);
        jtrees = build_octree_family(options.jointBox, options.jointDepth, int(pairs.size()),
                                     [&](const Eigen::Vector3d& c, const std::array<std::uint32_t, 3>&) {
                                         return pick(jc.classify({c[0], c[1], c[2]}));
                                     });
    }

    std::vector<AspectEntry> entries;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        AspectEntry e;
        e.mode = pairs[k].first;
        e.sign = pairs[k].second;
        e.workspace = std::move(wtrees[k]);
        if (!jtrees.empty()) e.joint = std::move(jtrees[k]);
        summarize(e);
        entries.push_back(std::move(e));
    }
    return AspectAtlas(geom, depth, options, std::move(entries));
}

AspectAtlas enumerate_aspects(const Geometry& geom, int depth, const AtlasOptions& options)
{
    std::vector<std::pair<WorkingMode, Sign>> pairs;
    for (const auto& mode : all_working_modes())
        for (Sign s : {Sign::Positive, Sign::Negative}) pairs.emplace_back(mode, s);
    return build_aspects(geom, depth, pairs, options);
}

int aspect_component(const AspectAtlas& atlas, const WorkingMode& mode, Sign sign, const Posed& pose)
{
    const auto& tree = atlas.entry(mode, sign).workspace;
    const std::size_t i = tree.locate(pose.vector());
    return tree.leaves()[i].in ? tree.leaves()[i].component : -1;
}

bool same_aspect(const AspectAtlas& atlas, const FullConfiguration<double>& first,
                 const FullConfiguration<double>& second)
{
    const Geometry& geom = atlas.geometry();
    const double eps = atlas.options().eps;
    const auto j1 = jacobians(geom, first);
    const auto j2 = jacobians(geom, second);
    const WorkingMode w1 = working_mode_of(j1, eps);
    const WorkingMode w2 = working_mode_of(j2, eps);
    if (!(w1 == w2) || sign_of(j1.detA) != sign_of(j2.detA))
        throw KinematicError(KinematicErrorKind::ModeMismatch,
                             "configurations differ in working mode or detA sign (" + w1.sign_string() + " vs " +
                                 w2.sign_string() + ")");
    const Sign s = sign_of(j1.detA);
    const int c1 = aspect_component(atlas, w1, s, first.pose);
    const int c2 = aspect_component(atlas, w1, s, second.pose);
    return c1 >= 0 && c1 == c2;
}

CharacteristicSurface characteristic_surface(const Geometry& geom, const AspectAtlas& atlas, const WorkingMode& mode,
                                             Sign sign, int componentId)
{
    const AspectEntry& e = atlas.entry(mode, sign);
    if (componentId < 0 || componentId >= e.component_count())
        throw ValidationError("characteristic surface: component " + std::to_string(componentId) + " does not exist");
    const Octree& tree = e.workspace;
    const double eps = atlas.options().eps;
    const auto& leaves = tree.leaves();

    auto failsOnlyOnSign = [&](std::size_t j) {
        const Eigen::Vector3d x = tree.leaf_center(j);
        try {
            const auto cfg = inverse_kinematics(geom, Posed(x[0], x[1], x[2]), mode, eps);
            const auto jp = jacobians(geom, cfg);
            working_mode_of(jp, eps);
            return true;
        } catch (const KinematicError&) {
            return false;
        }
    };

    CharacteristicSurface out;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (!leaves[i].in || leaves[i].component != componentId) continue;
        for (std::size_t j : tree.face_neighbors(i)) {
            if (!leaves[j].in && failsOnlyOnSign(j)) {
                out.boundaryCells.push_back(i);
                break;
            }
        }
    }

    FkOptions<double> fk;
    fk.samples = atlas.options().fkSamples;
    for (std::size_t i : out.boundaryCells) {
        const Eigen::Vector3d xs = tree.leaf_center(i);
        const Posed poseS(xs[0], xs[1], xs[2]);
        FullConfiguration<double> cfgS;
        try {
            cfgS = inverse_kinematics(geom, poseS, mode, eps);
        } catch (const KinematicError&) {
            continue;
        }
        std::vector<Posed> images;
        try {
            images = forward_kinematics(geom, cfgS.alpha, fk);
        } catch (const KinematicError&) {
            continue;
        }
        for (const auto& img : images) {
            if (pose_distance(img, poseS) <= 1e-6) continue;
            const auto cfg = make_configuration(geom, img, cfgS.alpha, 1e-7);
            const auto jp = jacobians(geom, cfg);
            const auto rep = singularity_report(jp, eps);
            if (rep.isSerialSingular || rep.isParallelSingular) continue;
            if (!(working_mode_of(jp, eps) == mode) || sign_of(jp.detA) != sign) continue;
            std::size_t leaf = 0;
            try {
                leaf = tree.locate(img.vector());
            } catch (const OutOfBox&) {
                continue;
            }
            if (leaves[leaf].in && leaves[leaf].component == componentId) out.marked.push_back(leaf);
        }
    }
    std::sort(out.marked.begin(), out.marked.end());
    out.marked.erase(std::unique(out.marked.begin(), out.marked.end()), out.marked.end());
    return out;
}

std::string octree_file_name(const WorkingMode& mode, Sign sign, SpaceKind space)
{
    return std::string(space == SpaceKind::Workspace ? "workspace_" : "joint_") + mode.label() + '_' +
           mode.sign_string() + (sign == Sign::Positive ? "_pos" : "_neg") + ".oct";
}

nlohmann::json atlas_manifest(const AspectAtlas& atlas)
{
    nlohmann::json j;
    j["depth"] = atlas.depth();
    j["joint_depth"] = atlas.options().jointDepth;
    j["eps_sing"] = atlas.options().eps;
    const auto res = atlas.entries().empty() ? std::array<double, 3>{} : atlas.entries().front().workspace.resolution();
    j["resolution"] = {{"x", res[0]}, {"y", res[1]}, {"theta_deg", rad2deg(res[2])}};
    j["total_positive"] = atlas.total(Sign::Positive);
    j["total_negative"] = atlas.total(Sign::Negative);
    j["total"] = atlas.total();
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : atlas.entries()) {
        nlohmann::json je;
        je["mode"] = std::string(1, e.mode.label());
        je["signs"] = e.mode.sign_string();
        je["sign"] = e.sign == Sign::Positive ? "+" : "-";
        je["components"] = e.component_count();
        nlohmann::json comps = nlohmann::json::array();
        for (int c = 0; c < e.component_count(); ++c)
            comps.push_back({{"id", c},
                             {"leaf_count", e.componentLeaves[std::size_t(c)]},
                             {"volume", e.componentVolumes[std::size_t(c)]}});
        je["component_list"] = comps;
        je["workspace_dump"] = octree_file_name(e.mode, e.sign, SpaceKind::Workspace);
        if (e.joint.size() > 0) {
            je["joint_components"] = e.joint.component_count();
            je["joint_dump"] = octree_file_name(e.mode, e.sign, SpaceKind::JointSpace);
        }
        entries.push_back(je);
    }
    j["entries"] = entries;
    return j;
}

} // namespace rrr
