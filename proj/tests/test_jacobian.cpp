#include <doctest.h>

#include <random>

#include "rrr/kinematics.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace rrr;
using namespace rrr::testing;

namespace {

const std::array<double, 3> kReferenceAlpha{5.862610, 1.277470, 5.213885};

// Platform at the origin rotated by acos(185/220): B_i at radius 11 on the
// ray through C_i is l from A_i and m from C_i, so every distal link is
// radial and all three lines meet at the origin.
FullConfiguration<double> concurrent_configuration(const Geometry& g)
{
    const double theta = std::acos(185.0 / 220.0);
    const Posed pose(0, 0, theta);
    const auto pts = platform_points(g, pose);
    std::array<double, 3> alpha{};
    for (int i = 0; i < 3; ++i) {
        const Vector2<double> b = pts.c[i] * (11.0 / 5.0);
        const Vector2<double> d = b - g.base_point(i);
        alpha[i] = std::atan2(d.y(), d.x());
    }
    return make_configuration(g, pose, alpha);
}

} // namespace

TEST_CASE("A rows and B diagonal follow the closed forms")
{
    const Geometry g;
    const auto cfg = inverse_kinematics(g, Posed::from_degrees(0.5, -1.0, 20.0), WorkingMode::from_label('c'));
    const auto jp = jacobians(g, cfg);
    const Vector2<double> p = cfg.p();
    const Matrix2<double> E = rot90<double>();
    for (int i = 0; i < 3; ++i) {
        const Vector2<double> distal = cfg.c[i] - cfg.b[i];
        CHECK(jp.A(i, 0) == doctest::Approx(distal.x()));
        CHECK(jp.A(i, 1) == doctest::Approx(distal.y()));
        CHECK(jp.A(i, 2) == doctest::Approx(-(distal.transpose() * E * (p - cfg.c[i]))(0)));
        CHECK(jp.bDiag[i] == doctest::Approx(((cfg.b[i] - cfg.a[i]).transpose() * E * distal)(0)));
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(jp.B(i, j) == 0.0);
    }
    CHECK(jp.detA == doctest::Approx(jp.A.determinant()));
}

TEST_CASE("reference postures reproduce the tabulated indices")
{
    const Geometry g;
    const auto sols = forward_kinematics(g, kReferenceAlpha);
    REQUIRE(sols.size() == 4);
    // Posture (1) has the largest orientation, posture (4) the smallest.
    const auto p1 = jacobians(g, make_configuration(g, sols[3], kReferenceAlpha));
    const auto p4 = jacobians(g, make_configuration(g, sols[0], kReferenceAlpha));
    auto rel = [](double v, double ref) { return std::abs(v - ref) / std::abs(ref); };
    CHECK(rel(p1.detA, 307.990) < 5e-3);
    CHECK(rel(p1.bDiag[0], -34.132) < 5e-3);
    CHECK(rel(p1.bDiag[1], -34.008) < 5e-3);
    CHECK(rel(p1.bDiag[2], 31.827) < 5e-3);
    CHECK(rel(p4.detA, 522.868) < 5e-3);
    CHECK(rel(p4.bDiag[0], -33.023) < 5e-3);
    CHECK(rel(p4.bDiag[1], -35.997) < 5e-3);
    CHECK(rel(p4.bDiag[2], 21.7203) < 5e-3);
    CHECK(working_mode_of(p1).sign_string() == "NNP");
    CHECK(working_mode_of(p4).sign_string() == "NNP");
    const auto r1 = singularity_report(p1);
    CHECK_FALSE(r1.isSerialSingular);
    CHECK_FALSE(r1.isParallelSingular);
    CHECK(r1.parallelMarginScaled > 1e-3);
}

TEST_CASE("leg decomposition identity")
{
    const Geometry g;
    CHECK(leg_identity_property(g, 500, 41) < 1e-9);
}

TEST_CASE("working_mode_of maps sign triples to letters")
{
    JacobianPair<double> jp;
    jp.legScale = 36;
    jp.bDiag = {1, 2, 3};
    CHECK(working_mode_of(jp).label() == 'a');
    jp.bDiag = {-1, -2, -3};
    CHECK(working_mode_of(jp).label() == 'g');
    jp.bDiag = {-1, 0, -3};
    try {
        working_mode_of(jp);
        FAIL("expected SerialSingular");
    } catch (const KinematicError& e) {
        CHECK(e.kind() == KinematicErrorKind::SerialSingular);
        CHECK(e.leg() == 2);
    }
}

TEST_CASE("concurrent distal links are a parallel singularity")
{
    const Geometry g;
    const auto cfg = concurrent_configuration(g);
    const auto jp = jacobians(g, cfg);
    const auto rep = singularity_report(jp);
    CHECK(rep.parallelMarginScaled < 1e-9);
    CHECK(rep.isParallelSingular);
    CHECK_FALSE(rep.isSerialSingular);
    CHECK_THROWS_AS(forward_velocity(jp, Vector3<double>(1, 0, 0)), KinematicError);
}

TEST_CASE("a stretched leg is a serial singularity")
{
    const Geometry g;
    const Posed pose(7 * std::cos(deg2rad(30.0)), 7 * std::sin(deg2rad(30.0)), 0.0);
    const auto sols = inverse_kinematics_all(g, pose);
    REQUIRE_FALSE(sols.empty());
    const auto& cfg = sols.front().config;
    CHECK(cfg.alpha[0] == doctest::Approx(deg2rad(30.0)));
    const auto jp = jacobians(g, cfg);
    const auto rep = singularity_report(jp);
    CHECK(rep.isSerialSingular);
    CHECK(std::abs(jp.bDiag[0]) < 1e-9);
    CHECK((cfg.b[0] - cfg.a[0]).dot(cfg.c[0] - cfg.b[0]) == doctest::Approx(g.l * g.m));
    CHECK_THROWS_AS(inverse_velocity(jp, Vector3<double>(1, 0, 0)), KinematicError);
}

TEST_CASE("velocity maps")
{
    const Geometry g;
    std::mt19937_64 rng(43);
    for (int n = 0; n < 200; ++n) {
        const Posed pose = random_reachable_pose(g, rng);
        const auto mode = all_working_modes()[std::size_t(n % 8)];
        const auto jp = jacobians(g, inverse_kinematics(g, pose, mode));
        const auto rep = singularity_report(jp);
        if (rep.parallelMarginScaled < 1e-4 || rep.serialMarginScaled < 1e-4) continue;
        CHECK(forward_velocity(jp, Vector3<double>(Vector3<double>::Zero())).norm() == 0.0);
        const Vector3<double> qdot(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
        const Vector3<double> t = forward_velocity(jp, qdot);
        CHECK(velocity_residual(jp, t, qdot) < 1e-10 * (1 + t.norm()) * jp.legScale);
        CHECK((inverse_velocity(jp, t) - qdot).norm() < 1e-9);
    }
}

TEST_CASE("joint rates agree with central differences of IK")
{
    const Geometry g;
    CHECK(velocity_fd_property(g, 300, 44) < 1e-6);
}
