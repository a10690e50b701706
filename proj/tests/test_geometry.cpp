#include <doctest.h>

#include <set>

#include "rrr/kinematics.hpp"

using namespace rrr;

TEST_CASE("angles normalise into their ranges")
{
    CHECK(normalize_angle(3 * kPi<double>) == doctest::Approx(kPi<double>));
    CHECK(normalize_angle(-kPi<double>) == doctest::Approx(kPi<double>));
    CHECK(normalize_angle(0.25) == doctest::Approx(0.25));
    CHECK(wrap_two_pi(-0.5) == doctest::Approx(kTwoPi<double> - 0.5));
    CHECK(wrap_two_pi(kTwoPi<double>) == doctest::Approx(0.0));
    CHECK(shortest_arc(deg2rad(179.0), deg2rad(-179.0)) == doctest::Approx(deg2rad(2.0)));
    CHECK(rad2deg(deg2rad(12.35)) == doctest::Approx(12.35));
}

TEST_CASE("pose orientation is normalised")
{
    const Posed p(1, 2, kTwoPi<double> + 0.5);
    CHECK(p.theta == doctest::Approx(0.5));
    CHECK(Posed(0, 0, -kPi<double>).theta == doctest::Approx(kPi<double>));
    CHECK(Posed::from_degrees(0, 0, 57.5).theta_deg() == doctest::Approx(57.5));
}

TEST_CASE("platform points at the identity pose sit on the platform circle")
{
    const Geometry g;
    const auto pts = platform_points(g, Posed(0, 0, 0));
    for (int i = 0; i < 3; ++i) {
        CHECK(pts.c[i].norm() == doctest::Approx(5.0));
        CHECK(std::atan2(pts.c[i].y(), pts.c[i].x()) == doctest::Approx(normalize_angle(g.platformPhase[i])));
    }
    const auto wrapped = platform_points(g, Posed(0, 0, kTwoPi<double>));
    for (int i = 0; i < 3; ++i) CHECK((wrapped.c[i] - pts.c[i]).norm() < 1e-12);
}

TEST_CASE("platform points keep the platform rigid")
{
    const Geometry g;
    const Posed pose = Posed::from_degrees(1.102, 1.956, 57.50);
    const auto pts = platform_points(g, pose);
    for (int i = 0; i < 3; ++i) CHECK((pts.c[i] - pts.p).norm() == doctest::Approx(g.s));
    CHECK((pts.c[0] - pts.c[1]).norm() == doctest::Approx(g.s * std::sqrt(3.0)));
}

TEST_CASE("geometry validation")
{
    Geometry g;
    CHECK_NOTHROW(g.validate());
    g.l = 0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = Geometry{};
    g.basePhase[1] = g.basePhase[0] + kTwoPi<double>;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = Geometry{};
    g.platformPhase[2] = g.platformPhase[1];
    CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("geometry casts between scalars")
{
    const Geometry g;
    const auto f = g.cast<float>();
    CHECK(f.l == 6.0f);
    CHECK(double(f.basePhase[0]) == doctest::Approx(g.basePhase[0]));
}

TEST_CASE("working-mode letters follow the sign-triple table")
{
    const std::pair<char, const char*> table[] = {{'a', "PPP"}, {'b', "PNP"}, {'c', "PPN"}, {'d', "PNN"},
                                                  {'e', "NNP"}, {'f', "NPP"}, {'g', "NNN"}, {'h', "NPN"}};
    std::set<std::string> seen;
    for (const auto& [letter, signs] : table) {
        const auto byLetter = WorkingMode::from_label(letter);
        const auto bySigns = WorkingMode::parse(signs);
        REQUIRE(bySigns.has_value());
        CHECK(byLetter == *bySigns);
        CHECK(bySigns->label() == letter);
        CHECK(bySigns->sign_string() == signs);
        seen.insert(signs);
    }
    CHECK(seen.size() == 8);
    CHECK(all_working_modes().size() == 8);
    for (int k = 0; k < 8; ++k) CHECK(all_working_modes()[std::size_t(k)].index() == k);
}

TEST_CASE("working-mode parsing")
{
    CHECK(WorkingMode::parse("e")->sign_string() == "NNP");
    CHECK(WorkingMode::parse("--+")->sign_string() == "NNP");
    CHECK_FALSE(WorkingMode::parse("xyz").has_value());
    CHECK_FALSE(WorkingMode::parse("PP").has_value());
    const auto m = *WorkingMode::parse("PPP");
    CHECK(m.with_flipped(1).sign_string() == "PNP");
    CHECK(flip(Sign::Positive) == Sign::Negative);
    CHECK(sign_of(-2.0) == Sign::Negative);
}
