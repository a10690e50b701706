#ifndef RRR_ASPECTS_HPP
#define RRR_ASPECTS_HPP

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrr/kinematics.hpp"
#include "rrr/octree.hpp"
#include "rrr/predicates.hpp"

namespace rrr {

struct AtlasOptions {
    Box3 workspaceBox = Box3::workspace();
    Box3 jointBox = Box3::joint_space();
    // Depth of the joint-space octrees; 0 skips them.
    int jointDepth = 6;
    int fkSamples = 2048;
    double eps = kDefaultEpsSing<double>;
};

/// Workspace and joint-space octrees of one (working mode, detA sign) pair,
/// with their connected components.
struct AspectEntry {
    WorkingMode mode;
    Sign sign = Sign::Positive;
    Octree workspace;
    Octree joint;
    std::vector<std::size_t> componentLeaves;
    std::vector<double> componentVolumes;

    int component_count() const { return int(componentLeaves.size()); }
    // Number of components holding at least `fraction` of this entry's IN volume.
    int major_component_count(double fraction) const;
};

class AspectAtlas {
public:
    AspectAtlas() = default;
    AspectAtlas(Geometry geom, int depth, AtlasOptions options, std::vector<AspectEntry> entries);

    const Geometry& geometry() const { return geom_; }
    int depth() const { return depth_; }
    const AtlasOptions& options() const { return options_; }
    const std::vector<AspectEntry>& entries() const { return entries_; }

    // Throws std::out_of_range when the pair was not built.
    const AspectEntry& entry(const WorkingMode& mode, Sign sign) const;
    bool has_entry(const WorkingMode& mode, Sign sign) const;

    int total(Sign sign) const;
    int total() const { return total(Sign::Positive) + total(Sign::Negative); }

private:
    Geometry geom_;
    int depth_ = 0;
    AtlasOptions options_;
    std::vector<AspectEntry> entries_;
};

/// All 8 x 2 (mode, sign) entries. Workspace cells are IN when the inverse
/// kinematics in mode w exists at the center on a strict branch and detA has
/// sign s there; the aspect count for a sign is the sum of component counts.
AspectAtlas enumerate_aspects(const Geometry& geom, int depth, const AtlasOptions& options = {});

/// Atlas holding only the requested pairs; used when a single aspect is needed.
AspectAtlas build_aspects(const Geometry& geom, int depth, const std::vector<std::pair<WorkingMode, Sign>>& pairs,
                          const AtlasOptions& options = {});

/// Component of `pose` in the (mode, sign) workspace octree, -1 when the pose
/// falls in an OUT leaf. Throws OutOfBox.
int aspect_component(const AspectAtlas& atlas, const WorkingMode& mode, Sign sign, const Posed& pose);

/// True iff both configurations lie in the same connected component of their
/// shared (mode, sign) workspace octree. Throws KinematicError(ModeMismatch)
/// when mode or detA sign differ.
bool same_aspect(const AspectAtlas& atlas, const FullConfiguration<double>& first,
                 const FullConfiguration<double>& second);

struct CharacteristicSurface {
    // Leaves of the component adjacent to a detA-sign failure.
    std::vector<std::size_t> boundaryCells;
    // Leaves hit by other assembly modes of the boundary cells' joint values.
    std::vector<std::size_t> marked;
};

/// Image, inside one aspect, of the aspect's singular boundary under direct
/// kinematics: for each boundary cell center X_s, every other assembly mode
/// X' of IK(X_s, mode) with the same mode and sign whose leaf belongs to
/// the component is marked.
CharacteristicSurface characteristic_surface(const Geometry& geom, const AspectAtlas& atlas, const WorkingMode& mode,
                                             Sign sign, int componentId);

std::string octree_file_name(const WorkingMode& mode, Sign sign, SpaceKind space);

/// Manifest describing every entry: counts, per-component leaf counts and
/// volumes, dump file names.
nlohmann::json atlas_manifest(const AspectAtlas& atlas);

} // namespace rrr

#endif // RRR_ASPECTS_HPP
