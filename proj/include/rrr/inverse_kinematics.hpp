#ifndef RRR_INVERSE_KINEMATICS_HPP
#define RRR_INVERSE_KINEMATICS_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rrr/geometry.hpp"
#include "rrr/working_mode.hpp"

namespace rrr {

template <typename Scalar>
inline constexpr Scalar kDefaultEpsSing = Scalar(1e-8);

/// Pose plus every joint of the mechanism.
///
/// alpha_i is the actuated angle of A_iB_i, beta_i the absolute orientation of
/// the distal link B_iC_i. The points are cached so downstream code never has
/// to recompute them.
template <typename Scalar>
struct FullConfiguration {
    Pose<Scalar> pose;
    std::array<Scalar, 3> alpha{};
    std::array<Scalar, 3> beta{};
    Points3<Scalar> a;
    Points3<Scalar> b;
    Points3<Scalar> c;

    Vector2<Scalar> p() const { return pose.position(); }
    Vector3<Scalar> alpha_vector() const { return Vector3<Scalar>(alpha[0], alpha[1], alpha[2]); }
};

/// Builds the configuration reached by actuating `alpha` with the platform at
/// `pose`. Throws ValidationError when some |c_i - b_i| differs from m by more
/// than `closureTol`.
template <typename Scalar>
FullConfiguration<Scalar> make_configuration(const GeometryConfig<Scalar>& geom, const Pose<Scalar>& pose,
                                             const std::array<Scalar, 3>& alpha,
                                             Scalar closureTol = Scalar(1e-9))
{
    FullConfiguration<Scalar> cfg;
    cfg.pose = pose;
    const auto pts = platform_points(geom, pose);
    for (int i = 0; i < 3; ++i) {
        cfg.alpha[i] = wrap_two_pi(alpha[i]);
        cfg.a[i] = geom.base_point(i);
        cfg.c[i] = pts.c[i];
        cfg.b[i] = cfg.a[i] + geom.l * unit(cfg.alpha[i]);
        const Vector2<Scalar> distal = cfg.c[i] - cfg.b[i];
        if (std::abs(distal.norm() - geom.m) > closureTol)
            throw ValidationError("configuration: leg " + std::to_string(i + 1) + " does not close");
        cfg.beta[i] = wrap_two_pi(std::atan2(distal.y(), distal.x()));
    }
    return cfg;
}

/// Elbow position of one leg reaching from `a` to `c` on the requested branch.
///
/// The branch sign equals the sign of (b - a)^T E (c - b), i.e. of the
/// corresponding diagonal entry of the inverse-kinematics matrix.
template <typename Scalar>
Vector2<Scalar> solve_leg(const Vector2<Scalar>& a, const Vector2<Scalar>& c, Scalar l, Scalar m, Sign branch,
                          int leg, Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    const Vector2<Scalar> d = c - a;
    const Scalar dist = d.norm();
    const Scalar reachMax = l + m;
    const Scalar reachMin = std::abs(l - m);
    const Scalar band = epsSing * reachMax;
    if (std::abs(dist - reachMax) <= band || std::abs(dist - reachMin) <= band)
        throw KinematicError(KinematicErrorKind::OnSerialBoundary,
                             "leg " + std::to_string(leg + 1) + " is on its serial boundary", leg + 1);
    if (dist > reachMax || dist < reachMin)
        throw KinematicError(KinematicErrorKind::Unreachable,
                             "leg " + std::to_string(leg + 1) + " cannot reach the platform joint", leg + 1);
    const Vector2<Scalar> dir = d / dist;
    const Scalar along = (l * l - m * m + dist * dist) / (Scalar(2) * dist);
    const Scalar h = std::sqrt(std::max(Scalar(0), l * l - along * along));
    const Vector2<Scalar> normal(-dir.y(), dir.x());
    return a + along * dir + Scalar(to_int(branch)) * h * normal;
}

template <typename Scalar>
FullConfiguration<Scalar> inverse_kinematics(const GeometryConfig<Scalar>& geom, const Pose<Scalar>& pose,
                                             const WorkingMode& mode,
                                             Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    FullConfiguration<Scalar> cfg;
    cfg.pose = pose;
    const auto pts = platform_points(geom, pose);
    for (int i = 0; i < 3; ++i) {
        cfg.a[i] = geom.base_point(i);
        cfg.c[i] = pts.c[i];
        cfg.b[i] = solve_leg(cfg.a[i], cfg.c[i], geom.l, geom.m, mode.sign(i), i, epsSing);
        const Vector2<Scalar> proximal = cfg.b[i] - cfg.a[i];
        const Vector2<Scalar> distal = cfg.c[i] - cfg.b[i];
        cfg.alpha[i] = wrap_two_pi(std::atan2(proximal.y(), proximal.x()));
        cfg.beta[i] = wrap_two_pi(std::atan2(distal.y(), distal.x()));
        // b is rebuilt from alpha so the derived-field invariant holds exactly.
        cfg.b[i] = cfg.a[i] + geom.l * unit(cfg.alpha[i]);
    }
    return cfg;
}

/// Result of inverse_kinematics_all: the mode key and which legs sit on a
/// serial boundary (their two branches coincide, so only the P branch is
/// listed).
template <typename Scalar>
struct IkSolution {
    WorkingMode mode;
    std::array<bool, 3> onBoundary{};
    FullConfiguration<Scalar> config;
};

/// Every inverse-kinematic solution of `pose`, ordered by mode letter.
/// Empty when some leg cannot reach; a leg on its serial boundary halves the
/// count since both of its branches give the same configuration.
template <typename Scalar>
std::vector<IkSolution<Scalar>> inverse_kinematics_all(const GeometryConfig<Scalar>& geom,
                                                       const Pose<Scalar>& pose,
                                                       Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    std::vector<IkSolution<Scalar>> out;
    const auto pts = platform_points(geom, pose);
    std::array<bool, 3> boundary{};
    for (int i = 0; i < 3; ++i) {
        const Scalar dist = (pts.c[i] - geom.base_point(i)).norm();
        const Scalar reachMax = geom.l + geom.m;
        const Scalar reachMin = std::abs(geom.l - geom.m);
        const Scalar band = epsSing * reachMax;
        boundary[i] = std::abs(dist - reachMax) <= band || std::abs(dist - reachMin) <= band;
        if (!boundary[i] && (dist > reachMax || dist < reachMin)) return out;
        // A folded leg with l == m leaves alpha undetermined.
        if (boundary[i] && dist <= band) return out;
    }
    for (const auto& mode : all_working_modes()) {
        bool skip = false;
        for (int i = 0; i < 3; ++i) skip = skip || (boundary[i] && mode.sign(i) == Sign::Negative);
        if (skip) continue;
        IkSolution<Scalar> sol;
        sol.mode = mode;
        sol.onBoundary = boundary;
        sol.config.pose = pose;
        for (int i = 0; i < 3; ++i) {
            auto& cfg = sol.config;
            cfg.a[i] = geom.base_point(i);
            cfg.c[i] = pts.c[i];
            if (boundary[i]) {
                const Vector2<Scalar> d = cfg.c[i] - cfg.a[i];
                const Scalar dist = d.norm();
                // Stretched: B_i along d at distance l. Folded: B_i beyond along d.
                const Scalar along = dist > std::abs(geom.l - geom.m) + Scalar(2) * epsSing * (geom.l + geom.m)
                                         ? geom.l
                                         : (geom.l >= geom.m ? geom.l : -geom.l);
                cfg.b[i] = cfg.a[i] + along * d / dist;
            } else {
                cfg.b[i] = solve_leg(cfg.a[i], cfg.c[i], geom.l, geom.m, mode.sign(i), i, epsSing);
            }
            const Vector2<Scalar> proximal = cfg.b[i] - cfg.a[i];
            cfg.alpha[i] = wrap_two_pi(std::atan2(proximal.y(), proximal.x()));
            cfg.b[i] = cfg.a[i] + geom.l * unit(cfg.alpha[i]);
            const Vector2<Scalar> distal = cfg.c[i] - cfg.b[i];
            cfg.beta[i] = wrap_two_pi(std::atan2(distal.y(), distal.x()));
        }
        out.push_back(std::move(sol));
    }
    return out;
}

} // namespace rrr

#endif // RRR_INVERSE_KINEMATICS_HPP
