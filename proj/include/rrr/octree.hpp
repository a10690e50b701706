#ifndef RRR_OCTREE_HPP
#define RRR_OCTREE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rrr/errors.hpp"

namespace rrr {

class BoxMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Axis-aligned box over (x, y, theta) or (alpha_1, alpha_2, alpha_3).
/// Periodic axes have period 2 pi and wrap when the box spans a full period.
struct Box3 {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
    std::array<bool, 3> periodic{};

    static Box3 workspace(double halfWidth = 12.0);
    static Box3 joint_space();

    double extent(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const { return extent(0) * extent(1) * extent(2); }
    bool wraps(int axis) const;
    void validate() const;

    // Maps periodic coordinates into [lo, lo + period); throws OutOfBox if the
    // point is outside afterwards.
    Eigen::Vector3d normalize(const Eigen::Vector3d& point) const;

    friend bool operator==(const Box3&, const Box3&) = default;
};

namespace morton {

// Bit 3k holds bit k of the x index, 3k+1 of y, 3k+2 of theta.
std::uint64_t encode(std::uint32_t ix, std::uint32_t iy, std::uint32_t it);
std::array<std::uint32_t, 3> decode(std::uint64_t code);

} // namespace morton

struct OctreeLeaf {
    std::uint64_t code = 0;  // Morton code at `depth`
    int depth = 0;
    bool in = false;
    int component = -1;  // -1 for OUT leaves or before labelling
};

/// Canonical 2^3-tree with leaves stored in Morton order.
///
/// Siblings with identical labels are always merged, so two trees with the
/// same labelled region have identical leaf lists.
class Octree {
public:
    Octree() = default;

    /// Canonicalises an arbitrary tiling. Throws ValidationError if `leaves`
    /// do not tile the root box exactly or are not in Morton order.
    static Octree from_leaves(const Box3& box, int maxDepth, std::vector<OctreeLeaf> leaves);

    static Octree parse(std::istream& in);

    const Box3& box() const { return box_; }
    int max_depth() const { return maxDepth_; }
    const std::vector<OctreeLeaf>& leaves() const { return leaves_; }
    std::size_t size() const { return leaves_.size(); }

    // First key covered by leaf i at maxDepth resolution; leaf spans
    // [key, key + 8^(maxDepth - depth)).
    std::uint64_t key(std::size_t i) const;
    std::uint64_t span(std::size_t i) const;

    Box3 leaf_box(std::size_t i) const;
    double leaf_volume(std::size_t i) const;
    Eigen::Vector3d leaf_center(std::size_t i) const;

    // Leaf edge lengths at maximum depth.
    std::array<double, 3> resolution() const;

    double volume_in() const;
    double volume_total() const;
    std::size_t count_in() const;

    /// Index of the unique leaf containing `point`; throws OutOfBox.
    std::size_t locate(const Eigen::Vector3d& point) const;

    /// Leaves sharing a face of positive area with leaf i, any depth.
    std::vector<std::size_t> face_neighbors(std::size_t i) const;

    /// Face-connected components of IN leaves; periodic axes wrap. Ids are
    /// 0-based in order of first Morton appearance. Returns the count.
    int label_components();
    int component_count() const { return componentCount_; }

    void dump(std::ostream& out) const;
    std::string dump_string() const;

    friend Octree unite(const Octree&, const Octree&);
    friend Octree intersect(const Octree&, const Octree&);
    friend Octree subtract(const Octree&, const Octree&);

private:
    Octree(const Box3& box, int maxDepth, std::vector<OctreeLeaf> leaves)
        : box_(box), maxDepth_(maxDepth), leaves_(std::move(leaves)) {}

    // Same-depth cell next to leaf i along `axis` in direction `dir`, as a
    // (code, depth) pair; false when it leaves a non-wrapping box.
    bool adjacent_cell(std::size_t i, int axis, int dir, std::uint64_t& code) const;
    std::size_t leaf_at_key(std::uint64_t key) const;

    friend class OctreeBuilder;
    static Octree combine(const Octree& a, const Octree& b, bool (*op)(bool, bool));

    Box3 box_;
    int maxDepth_ = 0;
    std::vector<OctreeLeaf> leaves_;
    int componentCount_ = -1;
};

/// Accepts finest-level labels in Morton order and merges equal siblings on
/// the fly, so memory stays proportional to the number of leaves.
class OctreeBuilder {
public:
    OctreeBuilder(const Box3& box, int maxDepth);

    void push(bool in);
    Octree finish();

    std::uint64_t pushed() const { return next_; }

private:
    friend class Octree;
    void push_leaf(OctreeLeaf leaf);

    Box3 box_;
    int maxDepth_;
    std::uint64_t next_ = 0;
    std::vector<OctreeLeaf> stack_;
};

/// Predicate over a cell center, true means IN.
using CellFunction = std::function<bool(const Eigen::Vector3d&)>;

/// Labels every depth-maxDepth cell by its center and merges bottom-up.
/// maxDepth must lie in [1, 12].
Octree build_octree(const Box3& box, int maxDepth, const CellFunction& pred);

/// Builds `count` trees at once from a multi-bit label per cell: bit k of
/// `mask(center, cellIndex)` is the label of tree k. Cell evaluation runs on
/// all hardware threads; results do not depend on scheduling.
std::vector<Octree> build_octree_family(const Box3& box, int maxDepth, int count,
                                        const std::function<std::uint32_t(const Eigen::Vector3d&,
                                                                          const std::array<std::uint32_t, 3>&)>& mask);

Octree unite(const Octree& a, const Octree& b);
Octree intersect(const Octree& a, const Octree& b);
Octree subtract(const Octree& a, const Octree& b);

} // namespace rrr

#endif // RRR_OCTREE_HPP
