#include "rrr/predicates.hpp"

namespace rrr {

WorkspaceClassifier::WorkspaceClassifier(const Geometry& geom, double eps)
    : geom_(geom), a_(geom.base_points()), eps_(eps)
{
    geom_.validate();
}

std::uint32_t WorkspaceClassifier::classify(const Posed& pose) const
{
    Points3<double> offsets;
    for (int i = 0; i < 3; ++i) offsets[i] = geom_.platform_offset(i, pose.theta);
    return classify(pose.position(), offsets);
}

std::uint32_t WorkspaceClassifier::classify(const Vector2<double>& p, const Points3<double>& offsets) const
{
    const double l = geom_.l;
    const double m = geom_.m;
    const double reachMax = l + m;
    const double reachMin = std::abs(l - m);
    const double band = eps_ * reachMax;
    const double lm = l * m;

    // rows[i][branch]: A row for leg i on the P (0) or N (1) branch.
    std::array<std::array<Eigen::Vector3d, 2>, 3> rows;
    for (int i = 0; i < 3; ++i) {
        const Vector2<double> c = p + offsets[i];
        const Vector2<double> d = c - a_[i];
        const double dist = d.norm();
        if (std::abs(dist - reachMax) <= band || std::abs(dist - reachMin) <= band) return 0;
        if (dist > reachMax || dist < reachMin) return 0;
        const Vector2<double> dir = d / dist;
        const double along = (l * l - m * m + dist * dist) / (2.0 * dist);
        const double h = std::sqrt(std::max(0.0, l * l - along * along));
        if (h * dist < eps_ * lm) return 0;
        const Vector2<double> normal(-dir.y(), dir.x());
        const Vector2<double> arm = offsets[i];  // c - p
        for (int br = 0; br < 2; ++br) {
            const double k = br == 0 ? 1.0 : -1.0;
            const Vector2<double> b = a_[i] + along * dir + k * h * normal;
            const Vector2<double> distal = c - b;
            // -(c - b)^T E (p - c) = (c - b)^T E (c - p) = cross(c - p, c - b)
            rows[i][br] = Eigen::Vector3d(distal.x(), distal.y(), arm.x() * distal.y() - arm.y() * distal.x());
        }
    }
    std::uint32_t mask = 0;
    for (const auto& mode : all_working_modes()) {
        Matrix3<double> A;
        double scale = 1.0;
        for (int i = 0; i < 3; ++i) {
            const auto& row = rows[i][mode.sign(i) == Sign::Positive ? 0 : 1];
            A.row(i) = row.transpose();
            scale *= row.norm();
        }
        const double det = det3(A);
        if (!(scale > 0.0) || std::abs(det) < eps_ * scale) continue;
        mask |= 1u << mask_bit(mode, sign_of(det));
    }
    return mask;
}

std::uint32_t WorkspaceClassifier::classify_mode(const Vector2<double>& p, const Points3<double>& offsets,
                                                 const WorkingMode& mode) const
{
    const double l = geom_.l;
    const double m = geom_.m;
    const double reachMax = l + m;
    const double reachMin = std::abs(l - m);
    const double band = eps_ * reachMax;
    Matrix3<double> A;
    double scale = 1.0;
    for (int i = 0; i < 3; ++i) {
        const Vector2<double> c = p + offsets[i];
        const Vector2<double> d = c - a_[i];
        const double dist = d.norm();
        if (std::abs(dist - reachMax) <= band || std::abs(dist - reachMin) <= band) return 0;
        if (dist > reachMax || dist < reachMin) return 0;
        const Vector2<double> dir = d / dist;
        const double along = (l * l - m * m + dist * dist) / (2.0 * dist);
        const double h = std::sqrt(std::max(0.0, l * l - along * along));
        if (h * dist < eps_ * l * m) return 0;
        const double k = double(to_int(mode.sign(i)));
        const Vector2<double> b = a_[i] + along * dir + k * h * Vector2<double>(-dir.y(), dir.x());
        const Vector2<double> distal = c - b;
        const Vector2<double>& arm = offsets[i];
        A.row(i) << distal.x(), distal.y(), arm.x() * distal.y() - arm.y() * distal.x();
        scale *= A.row(i).norm();
    }
    const double det = det3(A);
    if (!(scale > 0.0) || std::abs(det) < eps_ * scale) return 0;
    return det > 0.0 ? 1u : 2u;
}

JointClassifier::JointClassifier(const Geometry& geom, double eps, int fkSamples) : geom_(geom), eps_(eps)
{
    geom_.validate();
    fk_.samples = fkSamples;
}

std::uint32_t JointClassifier::classify(const std::array<double, 3>& alpha) const
{
    std::uint32_t mask = 0;
    std::vector<Posed> poses;
    try {
        poses = forward_kinematics(geom_, alpha, fk_);
    } catch (const KinematicError&) {
        return 0;
    }
    for (const auto& pose : poses) {
        const auto cfg = make_configuration(geom_, pose, alpha, 1e-7);
        const auto jp = jacobians(geom_, cfg);
        const auto rep = singularity_report(jp, eps_);
        if (rep.isSerialSingular || rep.isParallelSingular) continue;
        mask |= 1u << mask_bit(working_mode_of(jp, eps_), sign_of(jp.detA));
    }
    return mask;
}

bool CellPredicate::operator()(const Eigen::Vector3d& center) const
{
    const int bit = mask_bit(mode, sign);
    if (space == SpaceKind::Workspace) {
        const WorkspaceClassifier wc(geom, eps);
        return (wc.classify(Posed(center[0], center[1], center[2])) >> bit) & 1u;
    }
    const JointClassifier jc(geom, eps);
    return (jc.classify({center[0], center[1], center[2]}) >> bit) & 1u;
}

} // namespace rrr
