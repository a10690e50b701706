#include <doctest.h>

#include <random>

#include "rrr/kinematics.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace rrr;
using namespace rrr::testing;

namespace {

const std::array<double, 3> kReferenceAlpha{5.862610, 1.277470, 5.213885};

// Soundness: every FK solution closes all three legs, and sits at a
// sign-change crossing of the grid or near a grid local minimum (the residual
// valley can be elongated across many cells). Completeness: every
// Newton-refined crossing is among the FK solutions.
void check_against_oracles(const Geometry& g, const std::array<double, 3>& alpha)
{
    const auto sols = forward_kinematics(g, alpha);
    const auto minima = grid_fk_oracle(g, alpha);
    const auto crossings = grid_fk_crossings(g, alpha);
    for (const auto& s : sols) {
        const auto pts = platform_points(g, s);
        for (int i = 0; i < 3; ++i) {
            const Vector2<double> b = g.base_point(i) + g.l * unit(alpha[std::size_t(i)]);
            CHECK(std::abs((pts.c[i] - b).norm() - g.m) < 1e-9);
        }
        bool near = false;
        for (const auto& m : minima) near = near || pose_distance(m.pose, s) < 0.25;
        for (const auto& cl : crossings) near = near || pose_distance(cl.pose, s) < 0.05;
        CHECK(near);
    }
    for (const auto& cl : crossings) {
        Posed root;
        if (!newton_closure(g, alpha, cl.pose, root)) continue;
        double best = 1e300;
        for (const auto& s : sols) best = std::min(best, pose_distance(s, root));
        CHECK(best < 1e-7);
    }
}

} // namespace

TEST_CASE("reference joints: FK matches the brute-force grid oracle")
{
    const Geometry g;
    check_against_oracles(g, kReferenceAlpha);
}

TEST_CASE("random joints: FK matches the brute-force grid oracle")
{
    const Geometry g;
    std::mt19937_64 rng(21);
    for (int n = 0; n < 12; ++n) {
        std::array<double, 3> alpha;
        if (n % 2 == 0)
            alpha = inverse_kinematics(g, random_reachable_pose(g, rng), all_working_modes()[std::size_t(n % 8)]).alpha;
        else
            alpha = {uniform(rng, 0, kTwoPi<double>), uniform(rng, 0, kTwoPi<double>), uniform(rng, 0, kTwoPi<double>)};
        check_against_oracles(g, alpha);
    }
}

TEST_CASE("reference joints give four assembly modes near the tabulated poses")
{
    const Geometry g;
    const auto sols = forward_kinematics(g, kReferenceAlpha);
    REQUIRE(sols.size() == 4);
    const std::array<std::array<double, 3>, 4> table{{{1.102, 1.956, 57.50},
                                                      {0.705, 2.751, 46.85},
                                                      {4.638, -5.413, 32.35},
                                                      {-0.357, 2.720, 26.51}}};
    for (const auto& row : table) {
        bool found = false;
        for (const auto& s : sols)
            found = found || (std::abs(s.x - row[0]) < 5e-3 && std::abs(s.y - row[1]) < 5e-3 &&
                              std::abs(s.theta_deg() - row[2]) < 0.05);
        CHECK(found);
    }
    for (const auto& s : sols) CHECK(fk_residual(g, kReferenceAlpha, s) < 1e-9);
}

TEST_CASE("FK output is sorted by theta then x and deterministic")
{
    const Geometry g;
    const auto a = forward_kinematics(g, kReferenceAlpha);
    const auto b = forward_kinematics(g, kReferenceAlpha);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].x == b[k].x);
        CHECK(a[k].theta == b[k].theta);
        if (k > 0) CHECK(a[k - 1].theta <= a[k].theta);
    }
}

TEST_CASE("joints with no real assembly give an empty list")
{
    const Geometry g;
    // All proximal links pointing outward put b_i 16 units from the center.
    const std::array<double, 3> out{g.basePhase[0], g.basePhase[1], g.basePhase[2]};
    CHECK(forward_kinematics(g, out).empty());
}

TEST_CASE("FK round trips and solution bound")
{
    const Geometry g;
    const auto st = round_trip_property(g, 1500, 31);
    CHECK(st.missing == 0);
    CHECK(st.ikMismatch == 0);
    CHECK(st.worstPoseError < 1e-9);
    CHECK(st.worstAlphaError < 1e-9);
    CHECK(st.maxSolutions <= 6);
}

TEST_CASE("a mirrored platform makes the elimination degenerate for every theta")
{
    // Platform vertices ordered clockwise, b_i on a counter-clockwise
    // triangle of the same size: the 2x2 system is singular at all theta.
    Geometry g;
    g.l = 5;
    g.platformPhase = {deg2rad(210.0), deg2rad(90.0), deg2rad(330.0)};
    const std::array<double, 3> alpha{g.basePhase[0] + kPi<double>, g.basePhase[1] + kPi<double>,
                                      g.basePhase[2] + kPi<double>};
    try {
        forward_kinematics(g, alpha);
        FAIL("expected DegenerateLinearSystem");
    } catch (const KinematicError& e) {
        CHECK(e.kind() == KinematicErrorKind::DegenerateLinearSystem);
    }
}
