#ifndef RRR_GEOMETRY_HPP
#define RRR_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "rrr/angles.hpp"
#include "rrr/errors.hpp"

namespace rrr {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
using Points3 = std::array<Vector2<Scalar>, 3>;

// Rotation by +90 degrees.
template <typename Scalar>
Matrix2<Scalar> rot90()
{
    Matrix2<Scalar> e;
    e << Scalar(0), Scalar(-1), Scalar(1), Scalar(0);
    return e;
}

template <typename Scalar>
Vector2<Scalar> unit(Scalar angle)
{
    return Vector2<Scalar>(std::cos(angle), std::sin(angle));
}

// 2D cross product u x v.
template <typename Scalar>
Scalar cross2(const Vector2<Scalar>& u, const Vector2<Scalar>& v)
{
    return u.x() * v.y() - u.y() * v.x();
}

/// Link lengths and triangle placement of a 3-RRR planar manipulator.
///
/// Base joint A_i sits at r * (cos basePhase_i, sin basePhase_i) around the
/// origin O; platform joint C_i sits at P + s * (cos(theta + platformPhase_i),
/// sin(theta + platformPhase_i)). Leg i is A_i -> B_i (length l) -> C_i
/// (length m).
///
/// The default phases {210, 330, 90} degrees (leg 1 at 210 degrees) are the
/// placement under which the reference joint inputs
/// (5.862610, 1.277470, 5.213885) have direct kinematic solutions at
/// (1.102, 1.956, 57.50 deg), (0.705, 2.751, 46.85 deg),
/// (4.638, -5.413, 32.35 deg) and (-0.357, 2.720, 26.51 deg).
template <typename Scalar>
struct GeometryConfig {
    Scalar l = Scalar(6);
    Scalar m = Scalar(6);
    Scalar r = Scalar(10);
    Scalar s = Scalar(5);
    std::array<Scalar, 3> basePhase = default_phases();
    std::array<Scalar, 3> platformPhase = default_phases();

    static std::array<Scalar, 3> default_phases()
    {
        return {deg2rad(Scalar(210)), deg2rad(Scalar(330)), deg2rad(Scalar(90))};
    }

    Vector2<Scalar> base_point(int i) const { return r * unit(basePhase[i]); }

    Points3<Scalar> base_points() const { return {base_point(0), base_point(1), base_point(2)}; }

    // Offset C_i - P at orientation theta.
    Vector2<Scalar> platform_offset(int i, Scalar theta) const
    {
        return s * unit(theta + platformPhase[i]);
    }

    void validate() const
    {
        if (!(l > 0) || !(m > 0) || !(r > 0) || !(s > 0))
            throw ValidationError("geometry: l, m, r, s must be strictly positive");
        auto distinct = [](const std::array<Scalar, 3>& p, const char* name) {
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (std::abs(normalize_angle(p[i] - p[j])) < Scalar(1e-12))
                        throw ValidationError(std::string("geometry: ") + name +
                                              " phases must be pairwise distinct mod 2pi");
        };
        distinct(basePhase, "base");
        distinct(platformPhase, "platform");
    }

    template <typename Other>
    GeometryConfig<Other> cast() const
    {
        GeometryConfig<Other> g;
        g.l = Other(l);
        g.m = Other(m);
        g.r = Other(r);
        g.s = Other(s);
        for (int i = 0; i < 3; ++i) {
            g.basePhase[i] = Other(basePhase[i]);
            g.platformPhase[i] = Other(platformPhase[i]);
        }
        return g;
    }
};

/// Platform pose: operation point P = (x, y) and orientation theta.
template <typename Scalar>
struct Pose {
    Scalar x = Scalar(0);
    Scalar y = Scalar(0);
    Scalar theta = Scalar(0);

    Pose() = default;
    Pose(Scalar x_, Scalar y_, Scalar theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

    static Pose from_degrees(Scalar x_, Scalar y_, Scalar thetaDeg)
    {
        return Pose(x_, y_, deg2rad(thetaDeg));
    }

    Vector2<Scalar> position() const { return Vector2<Scalar>(x, y); }
    Vector3<Scalar> vector() const { return Vector3<Scalar>(x, y, theta); }
    Scalar theta_deg() const { return rad2deg(theta); }
};

// Distance in (x, y, theta) with theta taken along the shortest arc.
template <typename Scalar>
Scalar pose_distance(const Pose<Scalar>& a, const Pose<Scalar>& b)
{
    const Scalar dx = a.x - b.x;
    const Scalar dy = a.y - b.y;
    const Scalar dt = shortest_arc(a.theta, b.theta);
    return std::sqrt(dx * dx + dy * dy + dt * dt);
}

template <typename Scalar>
struct PlatformPoints {
    Vector2<Scalar> p;
    Points3<Scalar> c;
};

template <typename Scalar>
PlatformPoints<Scalar> platform_points(const GeometryConfig<Scalar>& geom, const Pose<Scalar>& pose)
{
    PlatformPoints<Scalar> out;
    out.p = pose.position();
    for (int i = 0; i < 3; ++i) out.c[i] = out.p + geom.platform_offset(i, pose.theta);
    return out;
}

using Geometry = GeometryConfig<double>;
using Posed = Pose<double>;

} // namespace rrr

#endif // RRR_GEOMETRY_HPP
