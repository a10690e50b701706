#include <doctest.h>

#include <random>

#include "rrr/kinematics.hpp"
#include "support/oracles.hpp"

using namespace rrr;
using rrr::testing::random_reachable_pose;

namespace {

void check_invariants(const Geometry& g, const FullConfiguration<double>& cfg)
{
    const auto pts = platform_points(g, cfg.pose);
    for (int i = 0; i < 3; ++i) {
        CHECK((cfg.b[i] - (cfg.a[i] + g.l * unit(cfg.alpha[i]))).norm() == 0.0);
        CHECK(std::abs((cfg.c[i] - cfg.b[i]).norm() - g.m) < 1e-9);
        CHECK((cfg.c[i] - pts.c[i]).norm() < 1e-9);
    }
}

} // namespace

TEST_CASE("concentric aligned triangles put every leg at distance r - s")
{
    const Geometry g;
    const auto pts = platform_points(g, Posed(0, 0, 0));
    for (int i = 0; i < 3; ++i) CHECK((pts.c[i] - g.base_point(i)).norm() == doctest::Approx(5.0));
    for (const auto& mode : all_working_modes()) {
        const auto cfg = inverse_kinematics(g, Posed(0, 0, 0), mode);
        check_invariants(g, cfg);
    }
}

TEST_CASE("far poses are unreachable")
{
    const Geometry g;
    try {
        inverse_kinematics(g, Posed(100, 0, 0), WorkingMode::from_label('a'));
        FAIL("expected Unreachable");
    } catch (const KinematicError& e) {
        CHECK(e.kind() == KinematicErrorKind::Unreachable);
        CHECK(e.leg() >= 1);
    }
    CHECK(inverse_kinematics_all(g, Posed(100, 0, 0)).empty());
}

TEST_CASE("reference posture in mode NNP gives the reference joint values")
{
    const Geometry g;
    const auto cfg = inverse_kinematics(g, Posed::from_degrees(1.102, 1.956, 57.50), *WorkingMode::parse("NNP"));
    // The pose is rounded to 3 decimals, which moves alpha by about 1e-4.
    CHECK(std::abs(cfg.alpha[0] - 5.862610) < 5e-4);
    CHECK(std::abs(cfg.alpha[1] - 1.277470) < 5e-4);
    CHECK(std::abs(cfg.alpha[2] - 5.213885) < 5e-4);
    check_invariants(g, cfg);
}

TEST_CASE("IK sign coupling: the mode fixes the sign of every B_ii")
{
    const Geometry g;
    std::mt19937_64 rng(11);
    for (int n = 0; n < 300; ++n) {
        const Posed pose = random_reachable_pose(g, rng);
        for (const auto& mode : all_working_modes()) {
            const auto cfg = inverse_kinematics(g, pose, mode);
            check_invariants(g, cfg);
            const auto jp = jacobians(g, cfg);
            for (int i = 0; i < 3; ++i) CHECK(sign_of(jp.bDiag[i]) == mode.sign(i));
            CHECK(working_mode_of(jp) == mode);
        }
    }
}

TEST_CASE("flipping one elbow flips exactly one B_ii")
{
    const Geometry g;
    std::mt19937_64 rng(12);
    for (int n = 0; n < 200; ++n) {
        const Posed pose = random_reachable_pose(g, rng);
        for (const auto& mode : all_working_modes()) {
            const auto base = jacobians(g, inverse_kinematics(g, pose, mode));
            for (int leg = 0; leg < 3; ++leg) {
                const auto flipped = jacobians(g, inverse_kinematics(g, pose, mode.with_flipped(leg)));
                for (int j = 0; j < 3; ++j) {
                    const bool same = sign_of(flipped.bDiag[j]) == sign_of(base.bDiag[j]);
                    CHECK(same == (j != leg));
                }
                // Mirroring the elbow keeps |B_ii|.
                CHECK(std::abs(std::abs(flipped.bDiag[leg]) - std::abs(base.bDiag[leg])) < 1e-9);
            }
        }
    }
}

TEST_CASE("all-solution IK on a generic pose gives the 8 modes")
{
    const Geometry g;
    std::mt19937_64 rng(13);
    for (int n = 0; n < 50; ++n) {
        const Posed pose = random_reachable_pose(g, rng);
        const auto sols = inverse_kinematics_all(g, pose);
        REQUIRE(sols.size() == 8);
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(sols[k].mode == all_working_modes()[k]);
            const auto single = inverse_kinematics(g, pose, sols[k].mode);
            for (int i = 0; i < 3; ++i) CHECK(sols[k].config.alpha[i] == doctest::Approx(single.alpha[i]));
        }
    }
}

TEST_CASE("a stretched leg collapses its two branches")
{
    const Geometry g;
    // C_1 = 2 u(30 deg), A_1 = -10 u(30 deg): |C_1 - A_1| = l + m.
    const Posed pose(7 * std::cos(deg2rad(30.0)), 7 * std::sin(deg2rad(30.0)), 0.0);
    try {
        inverse_kinematics(g, pose, WorkingMode::from_label('a'));
        FAIL("expected OnSerialBoundary");
    } catch (const KinematicError& e) {
        CHECK(e.kind() == KinematicErrorKind::OnSerialBoundary);
        CHECK(e.leg() == 1);
    }
    const auto sols = inverse_kinematics_all(g, pose);
    REQUIRE(sols.size() == 4);
    for (const auto& s : sols) {
        CHECK(s.onBoundary[0]);
        CHECK_FALSE(s.onBoundary[1]);
        CHECK(s.mode.sign(0) == Sign::Positive);
        CHECK(s.config.alpha[0] == doctest::Approx(deg2rad(30.0)));
    }
}

TEST_CASE("make_configuration rejects joint values that do not close")
{
    const Geometry g;
    const Posed pose = Posed::from_degrees(1.102, 1.956, 57.5);
    const auto cfg = inverse_kinematics(g, pose, WorkingMode::from_label('e'));
    CHECK_NOTHROW(make_configuration(g, pose, cfg.alpha));
    auto bad = cfg.alpha;
    bad[1] += 0.1;
    CHECK_THROWS_AS(make_configuration(g, pose, bad), ValidationError);
}
