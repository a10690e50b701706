#ifndef RRR_JACOBIAN_HPP
#define RRR_JACOBIAN_HPP

#include <array>
#include <cmath>
#include <string>

#include "rrr/inverse_kinematics.hpp"

namespace rrr {

/// Direct-kinematics matrix A and diagonal inverse-kinematics matrix B.
///
/// Row i of A is [(c_i - b_i)^T, -(c_i - b_i)^T E (p - c_i)] and
/// B_ii = (b_i - a_i)^T E (c_i - b_i). With twist t = (xdot, ydot, thetadot)
/// and actuated rates qdot the velocity relation reads A t + B qdot = 0.
template <typename Scalar>
struct JacobianPair {
    Matrix3<Scalar> A = Matrix3<Scalar>::Zero();
    Matrix3<Scalar> B = Matrix3<Scalar>::Zero();
    Scalar detA = Scalar(0);
    std::array<Scalar, 3> bDiag{};
    // l * m, the largest possible |B_ii|; used to make serial margins dimensionless.
    Scalar legScale = Scalar(1);

    // Product of row norms of A; |detA| / scale is in [0, 1].
    Scalar parallel_scale() const
    {
        return A.row(0).norm() * A.row(1).norm() * A.row(2).norm();
    }
};

template <typename Scalar>
Scalar det3(const Matrix3<Scalar>& m)
{
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

template <typename Scalar>
JacobianPair<Scalar> jacobians(const GeometryConfig<Scalar>& geom, const FullConfiguration<Scalar>& cfg)
{
    const Matrix2<Scalar> E = rot90<Scalar>();
    const Vector2<Scalar> p = cfg.p();
    JacobianPair<Scalar> jp;
    for (int i = 0; i < 3; ++i) {
        const Vector2<Scalar> distal = cfg.c[i] - cfg.b[i];
        const Vector2<Scalar> proximal = cfg.b[i] - cfg.a[i];
        jp.A(i, 0) = distal.x();
        jp.A(i, 1) = distal.y();
        jp.A(i, 2) = -distal.dot(E * (p - cfg.c[i]));
        jp.bDiag[i] = proximal.dot(E * distal);
        jp.B(i, i) = jp.bDiag[i];
    }
    jp.detA = det3(jp.A);
    jp.legScale = geom.l * geom.m;
    return jp;
}

template <typename Scalar>
WorkingMode working_mode_of(const JacobianPair<Scalar>& jp, Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    std::array<Sign, 3> s{};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(jp.bDiag[i]) < epsSing * jp.legScale)
            throw KinematicError(KinematicErrorKind::SerialSingular,
                                 "leg " + std::to_string(i + 1) + " is serial singular", i + 1);
        s[i] = sign_of(jp.bDiag[i]);
    }
    return WorkingMode(s);
}

template <typename Scalar>
struct SingularityReport {
    std::array<Scalar, 3> serialMargins{};
    Scalar parallelMargin = Scalar(0);
    // |detA| / product of row norms.
    Scalar parallelMarginScaled = Scalar(0);
    // min_i |B_ii| / (l m).
    Scalar serialMarginScaled = Scalar(0);
    bool isSerialSingular = false;
    bool isParallelSingular = false;
};

template <typename Scalar>
SingularityReport<Scalar> singularity_report(const JacobianPair<Scalar>& jp,
                                             Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    SingularityReport<Scalar> rep;
    rep.serialMargins = jp.bDiag;
    rep.parallelMargin = jp.detA;
    Scalar minB = std::abs(jp.bDiag[0]);
    for (int i = 1; i < 3; ++i) minB = std::min(minB, std::abs(jp.bDiag[i]));
    rep.serialMarginScaled = minB / jp.legScale;
    const Scalar scale = jp.parallel_scale();
    rep.parallelMarginScaled = scale > Scalar(0) ? std::abs(jp.detA) / scale : Scalar(0);
    rep.isSerialSingular = rep.serialMarginScaled < epsSing;
    rep.isParallelSingular = rep.parallelMarginScaled < epsSing;
    return rep;
}

/// Platform twist produced by actuated rates: t = -A^{-1} B qdot.
template <typename Scalar>
Vector3<Scalar> forward_velocity(const JacobianPair<Scalar>& jp, const Vector3<Scalar>& alphaDot,
                                 Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    if (singularity_report(jp, epsSing).isParallelSingular)
        throw KinematicError(KinematicErrorKind::ParallelSingular, "forward velocity at a parallel singularity");
    const Vector3<Scalar> rhs = -(jp.B * alphaDot);
    return jp.A.partialPivLu().solve(rhs);
}

/// Actuated rates needed for a platform twist: qdot = -B^{-1} A t.
template <typename Scalar>
Vector3<Scalar> inverse_velocity(const JacobianPair<Scalar>& jp, const Vector3<Scalar>& twist,
                                 Scalar epsSing = kDefaultEpsSing<Scalar>)
{
    const auto rep = singularity_report(jp, epsSing);
    if (rep.isSerialSingular)
        throw KinematicError(KinematicErrorKind::SerialSingular, "inverse velocity at a serial singularity");
    const Vector3<Scalar> at = jp.A * twist;
    Vector3<Scalar> out;
    for (int i = 0; i < 3; ++i) out[i] = -at[i] / jp.bDiag[i];
    return out;
}

template <typename Scalar>
Scalar velocity_residual(const JacobianPair<Scalar>& jp, const Vector3<Scalar>& twist,
                         const Vector3<Scalar>& alphaDot)
{
    return (jp.A * twist + jp.B * alphaDot).norm();
}

} // namespace rrr

#endif // RRR_JACOBIAN_HPP
