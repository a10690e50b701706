#ifndef RRR_PREDICATES_HPP
#define RRR_PREDICATES_HPP

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "rrr/kinematics.hpp"

namespace rrr {

enum class SpaceKind { Workspace, JointSpace };

// Bit of (mode, sign) in the 16-bit masks produced by the classifiers.
constexpr int mask_bit(const WorkingMode& mode, Sign sign)
{
    return mode.index() * 2 + (sign == Sign::Negative ? 1 : 0);
}

/// Classifies a platform pose against all 8 working modes x 2 detA signs.
///
/// Bit mask_bit(w, s) is set iff the inverse kinematics exists in mode w with
/// every leg strictly inside its reach (|B_ii| / lm >= eps), and detA has sign
/// s with |detA| / prod ||row_i(A)|| >= eps.
class WorkspaceClassifier {
public:
    explicit WorkspaceClassifier(const Geometry& geom, double eps = kDefaultEpsSing<double>);

    std::uint32_t classify(const Posed& pose) const;

    // Same, with C_i - P precomputed for the pose's orientation.
    std::uint32_t classify(const Vector2<double>& p, const Points3<double>& offsets) const;

    // Only `mode`: bit 0 for detA > 0, bit 1 for detA < 0.
    std::uint32_t classify_mode(const Vector2<double>& p, const Points3<double>& offsets,
                                const WorkingMode& mode) const;

    const Geometry& geometry() const { return geom_; }

private:
    Geometry geom_;
    Points3<double> a_;
    double eps_;
};

/// Classifies actuated angles: bit mask_bit(w, s) is set iff some direct
/// kinematic solution is non-singular with working mode w and detA sign s.
class JointClassifier {
public:
    explicit JointClassifier(const Geometry& geom, double eps = kDefaultEpsSing<double>, int fkSamples = 2048);

    std::uint32_t classify(const std::array<double, 3>& alpha) const;

private:
    Geometry geom_;
    double eps_;
    FkOptions<double> fk_;
};

/// Predicate labelling one octree: the cell center is classified in the
/// requested space and tested for (mode, sign).
struct CellPredicate {
    WorkingMode mode;
    Sign sign = Sign::Positive;
    SpaceKind space = SpaceKind::Workspace;
    Geometry geom;
    double eps = kDefaultEpsSing<double>;

    bool operator()(const Eigen::Vector3d& center) const;
};

} // namespace rrr

#endif // RRR_PREDICATES_HPP
