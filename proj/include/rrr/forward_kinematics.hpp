#ifndef RRR_FORWARD_KINEMATICS_HPP
#define RRR_FORWARD_KINEMATICS_HPP

#include <algorithm>
#include <limits>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rrr/inverse_kinematics.hpp"

namespace rrr {

template <typename Scalar>
struct FkOptions {
    int samples = 2048;
    // Loop-closure residual | |c_i - b_i| - m | every returned pose must meet.
    Scalar closureTol = Scalar(1e-9);
    // Normalised 2x2 determinant below which the elimination is treated as singular.
    Scalar singularDet = Scalar(1e-7);
    // Consecutive singular samples that count as a singular interval.
    int degenerateRun = 8;
};

namespace detail {

// Elimination of x^2 + y^2 at fixed theta: constraints 2 and 3 minus
// constraint 1 give M p = rhs.
template <typename Scalar>
struct Elimination {
    Matrix2<Scalar> M;
    Vector2<Scalar> rhs;
    std::array<Vector2<Scalar>, 3> d;  // v_i(theta) - b_i
    Scalar det;
    Scalar detScale;

    Scalar normalized_det() const { return detScale > Scalar(0) ? std::abs(det) / detScale : Scalar(0); }
};

template <typename Scalar>
Elimination<Scalar> eliminate(const GeometryConfig<Scalar>& geom, const Points3<Scalar>& b, Scalar theta)
{
    Elimination<Scalar> e;
    for (int i = 0; i < 3; ++i) e.d[i] = geom.platform_offset(i, theta) - b[i];
    for (int j = 0; j < 2; ++j) {
        e.M.row(j) = Scalar(2) * (e.d[j + 1] - e.d[0]).transpose();
        e.rhs[j] = e.d[0].squaredNorm() - e.d[j + 1].squaredNorm();
    }
    e.det = e.M(0, 0) * e.M(1, 1) - e.M(0, 1) * e.M(1, 0);
    e.detScale = e.M.row(0).norm() * e.M.row(1).norm();
    return e;
}

// det(M)^2 * (|p(theta) + d_1|^2 - m^2): the constraint-1 residual with the
// 2x2 denominator cleared, continuous in theta.
template <typename Scalar>
Scalar cleared_residual(const GeometryConfig<Scalar>& geom, const Points3<Scalar>& b, Scalar theta)
{
    const auto e = eliminate(geom, b, theta);
    const Vector2<Scalar> adjRhs(e.M(1, 1) * e.rhs[0] - e.M(0, 1) * e.rhs[1],
                                 -e.M(1, 0) * e.rhs[0] + e.M(0, 0) * e.rhs[1]);
    return (adjRhs + e.det * e.d[0]).squaredNorm() - geom.m * geom.m * e.det * e.det;
}

template <typename Scalar>
Vector3<Scalar> closure_residual(const GeometryConfig<Scalar>& geom, const Points3<Scalar>& b,
                                 const Vector3<Scalar>& x)
{
    Vector3<Scalar> f;
    for (int i = 0; i < 3; ++i) {
        const Vector2<Scalar> w = Vector2<Scalar>(x[0], x[1]) + geom.platform_offset(i, x[2]) - b[i];
        f[i] = w.squaredNorm() - geom.m * geom.m;
    }
    return f;
}

// Newton on the three loop-closure equations in (x, y, theta).
template <typename Scalar>
Vector3<Scalar> polish(const GeometryConfig<Scalar>& geom, const Points3<Scalar>& b, Vector3<Scalar> x)
{
    const Matrix2<Scalar> E = rot90<Scalar>();
    for (int it = 0; it < 40; ++it) {
        Matrix3<Scalar> J;
        Vector3<Scalar> f;
        for (int i = 0; i < 3; ++i) {
            const Vector2<Scalar> v = geom.platform_offset(i, x[2]);
            const Vector2<Scalar> w = Vector2<Scalar>(x[0], x[1]) + v - b[i];
            f[i] = w.squaredNorm() - geom.m * geom.m;
            J(i, 0) = Scalar(2) * w.x();
            J(i, 1) = Scalar(2) * w.y();
            J(i, 2) = Scalar(2) * w.dot(E * v);
        }
        if (f.cwiseAbs().maxCoeff() < Scalar(1e-15) * geom.m * geom.m) break;
        const auto lu = J.fullPivLu();
        if (!lu.isInvertible()) break;
        const Vector3<Scalar> step = lu.solve(f);
        x -= step;
        if (step.cwiseAbs().maxCoeff() < Scalar(1e-15)) break;
    }
    return x;
}

template <typename Scalar>
Scalar closure_error(const GeometryConfig<Scalar>& geom, const Points3<Scalar>& b, const Pose<Scalar>& pose)
{
    Scalar worst = Scalar(0);
    for (int i = 0; i < 3; ++i) {
        const Vector2<Scalar> c = pose.position() + geom.platform_offset(i, pose.theta);
        worst = std::max(worst, std::abs((c - b[i]).norm() - geom.m));
    }
    return worst;
}

// Candidate positions at a root theta: the linear solve, or the line of
// least-squares solutions intersected with constraint 1 when M is singular.
template <typename Scalar>
std::vector<Vector2<Scalar>> positions_at(const GeometryConfig<Scalar>& geom, const Points3<Scalar>& b,
                                          Scalar theta, const FkOptions<Scalar>& opt)
{
    const auto e = eliminate(geom, b, theta);
    if (e.normalized_det() > opt.singularDet) return {e.M.partialPivLu().solve(e.rhs)};
    std::vector<Vector2<Scalar>> out;
    Eigen::JacobiSVD<Matrix2<Scalar>> svd(e.M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector2<Scalar> n = svd.matrixV().col(1);
    const Scalar s0 = svd.singularValues()[0];
    if (!(s0 > Scalar(0))) return out;
    const Vector2<Scalar> p0 = svd.matrixV().col(0) * (svd.matrixU().col(0).dot(e.rhs) / s0);
    // |p0 + t n + d1|^2 = m^2 with |n| = 1.
    const Vector2<Scalar> q = p0 + e.d[0];
    const Scalar bq = q.dot(n);
    const Scalar disc = bq * bq - (q.squaredNorm() - geom.m * geom.m);
    if (disc < Scalar(0)) return out;
    const Scalar root = std::sqrt(disc);
    out.push_back(p0 + (-bq + root) * n);
    if (root > Scalar(0)) out.push_back(p0 + (-bq - root) * n);
    return out;
}

} // namespace detail

/// All real assembly modes for actuated angles `alpha`, sorted by theta then x.
///
/// With the elbows B_i fixed, the three loop closures |c_i - b_i| = m are
/// reduced to one scalar equation in theta by eliminating x^2 + y^2 between
/// leg pairs (1,2) and (1,3). Roots are bracketed on a dense periodic scan,
/// bisected, then polished with Newton on the full system. Each sample-level
/// minimum of |residual| is refined to pick up tangential roots and root
/// pairs closer than one scan step.
///
/// Throws KinematicError(DegenerateLinearSystem) when the elimination stays
/// singular over an interval of theta (architecture-singular input).
template <typename Scalar>
std::vector<Pose<Scalar>> forward_kinematics(const GeometryConfig<Scalar>& geom, const std::array<Scalar, 3>& alpha,
                                             const FkOptions<Scalar>& opt = {})
{
    Points3<Scalar> b;
    for (int i = 0; i < 3; ++i) b[i] = geom.base_point(i) + geom.l * unit(alpha[i]);

    const int n = std::max(opt.samples, 16);
    const Scalar step = kTwoPi<Scalar> / Scalar(n);
    std::vector<Scalar> g(n);
    int run = 0;
    int runStart = 0;
    Scalar gScale = Scalar(0);
    for (int k = 0; k < n; ++k) {
        const Scalar th = step * Scalar(k);
        const auto e = detail::eliminate(geom, b, th);
        if (e.normalized_det() < opt.singularDet) {
            if (run++ == 0) runStart = k;
            if (run >= opt.degenerateRun)
                throw KinematicError(KinematicErrorKind::DegenerateLinearSystem,
                                     "direct kinematics: elimination singular on theta interval starting at " +
                                         std::to_string(step * Scalar(runStart)),
                                     0, step * Scalar(runStart));
        } else {
            run = 0;
        }
        g[k] = detail::cleared_residual(geom, b, th);
        gScale = std::max(gScale, std::abs(g[k]));
    }

    std::vector<Scalar> rootThetas;
    auto residual = [&](Scalar th) { return detail::cleared_residual(geom, b, th); };
    auto bisect = [&](Scalar lo, Scalar hi, Scalar glo) {
        for (int it = 0; it < 200 && hi - lo > Scalar(4) * std::numeric_limits<Scalar>::epsilon() * kTwoPi<Scalar>;
             ++it) {
            const Scalar mid = Scalar(0.5) * (lo + hi);
            const Scalar gm = residual(mid);
            if (gm == Scalar(0)) return mid;
            if ((gm < Scalar(0)) == (glo < Scalar(0))) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        return Scalar(0.5) * (lo + hi);
    };
    // Extremum of the residual towards zero on [a0, c0], whose ends share sign `sgn`.
    auto graze = [&](Scalar a0, Scalar c0, Scalar sgn) {
        Scalar a = a0, c = c0;
        const Scalar phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
        for (int it = 0; it < 80; ++it) {
            const Scalar x1 = c - phi * (c - a);
            const Scalar x2 = a + phi * (c - a);
            if (sgn * residual(x1) < sgn * residual(x2))
                c = x2;
            else
                a = x1;
        }
        const Scalar tm = Scalar(0.5) * (a + c);
        const Scalar gm = residual(tm);
        if (sgn * gm < Scalar(0)) {
            rootThetas.push_back(bisect(a0, tm, residual(a0)));
            rootThetas.push_back(bisect(tm, c0, gm));
        } else {
            rootThetas.push_back(tm);
        }
    };
    // Near a parallel singularity up to three roots crowd into a couple of
    // scan steps; windows around minima of |g| are resampled recursively.
    std::function<void(Scalar, Scalar, int)> refine = [&](Scalar lo, Scalar hi, int depth) {
        constexpr int m = 32;
        std::array<Scalar, m + 1> x{}, v{};
        for (int j = 0; j <= m; ++j) {
            x[j] = lo + (hi - lo) * Scalar(j) / Scalar(m);
            v[j] = residual(x[j]);
        }
        for (int j = 0; j < m; ++j)
            if ((v[j] < Scalar(0)) != (v[j + 1] < Scalar(0))) rootThetas.push_back(bisect(x[j], x[j + 1], v[j]));
        for (int j = 1; j < m; ++j) {
            const Scalar aj = std::abs(v[j]);
            if (aj > std::abs(v[j - 1]) || aj > std::abs(v[j + 1])) continue;
            if (depth > 0) {
                refine(x[j - 1], x[j + 1], depth - 1);
            } else if ((v[j - 1] < Scalar(0)) == (v[j] < Scalar(0)) && (v[j + 1] < Scalar(0)) == (v[j] < Scalar(0))) {
                graze(x[j - 1], x[j + 1], v[j] < Scalar(0) ? Scalar(-1) : Scalar(1));
            }
        }
    };
    for (int k = 0; k < n; ++k) {
        const int k1 = (k + 1) % n;
        const int km = (k + n - 1) % n;
        const Scalar lo = step * Scalar(k);
        if (g[k] == Scalar(0)) rootThetas.push_back(lo);
        if ((g[k] < Scalar(0)) != (g[k1] < Scalar(0))) rootThetas.push_back(bisect(lo, lo + step, g[k]));
        const Scalar ak = std::abs(g[k]);
        if (ak <= std::abs(g[km]) && ak <= std::abs(g[k1])) refine(lo - step, lo + step, 3);
    }

    std::vector<Pose<Scalar>> poses;
    for (const Scalar th : rootThetas) {
        for (const auto& p : detail::positions_at(geom, b, th, opt)) {
            const Vector3<Scalar> x = detail::polish(geom, b, Vector3<Scalar>(p.x(), p.y(), th));
            const Pose<Scalar> pose(x[0], x[1], x[2]);
            if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2])) continue;
            if (detail::closure_error(geom, b, pose) >= opt.closureTol) continue;
            const Scalar err = detail::closure_error(geom, b, pose);
            const auto dup = std::find_if(poses.begin(), poses.end(), [&](const Pose<Scalar>& q) {
                return pose_distance(q, pose) < Scalar(1e-7);
            });
            if (dup == poses.end())
                poses.push_back(pose);
            else if (err < detail::closure_error(geom, b, *dup))
                *dup = pose;
        }
    }
    std::sort(poses.begin(), poses.end(), [](const Pose<Scalar>& u, const Pose<Scalar>& v) {
        if (u.theta != v.theta) return u.theta < v.theta;
        return u.x < v.x;
    });
    return poses;
}

/// Largest loop-closure error of `pose` against the elbows reached by `alpha`.
template <typename Scalar>
Scalar fk_residual(const GeometryConfig<Scalar>& geom, const std::array<Scalar, 3>& alpha, const Pose<Scalar>& pose)
{
    Points3<Scalar> b;
    for (int i = 0; i < 3; ++i) b[i] = geom.base_point(i) + geom.l * unit(alpha[i]);
    return detail::closure_error(geom, b, pose);
}

} // namespace rrr

#endif // RRR_FORWARD_KINEMATICS_HPP
