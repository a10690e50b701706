#include <doctest.h>

#include <map>
#include <random>

#include "rrr/aspects.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace rrr;
using namespace rrr::testing;

namespace {

const std::array<double, 3> kReferenceAlpha{5.862610, 1.277470, 5.213885};
const WorkingMode kNNP = *WorkingMode::parse("NNP");

AtlasOptions workspace_only()
{
    AtlasOptions o;
    o.jointDepth = 0;
    return o;
}

struct Reference {
    Geometry g;
    std::vector<Posed> sols = forward_kinematics(g, kReferenceAlpha);
    FullConfiguration<double> config(std::size_t k) const { return make_configuration(g, sols[k], kReferenceAlpha); }
};

} // namespace

TEST_CASE("every IN leaf belongs to exactly one component")
{
    const Geometry g;
    const auto atlas = enumerate_aspects(g, 5, workspace_only());
    REQUIRE(atlas.entries().size() == 16);
    std::mt19937_64 rng(1);
    for (const auto& e : atlas.entries()) {
        if (e.workspace.count_in() > 0) CHECK(e.component_count() >= 1);
        std::size_t cells = 0;
        for (auto n : e.componentLeaves) cells += n;
        std::size_t expected = 0;
        for (const auto& l : e.workspace.leaves())
            if (l.in) {
                CHECK(l.component >= 0);
                CHECK(l.component < e.component_count());
                expected += std::size_t(1) << (3 * (5 - l.depth));
            }
        CHECK(cells == expected);
        CHECK(connectivity_matches_flood_fill(e.workspace, rng));
    }
    CHECK(atlas.total() == atlas.total(Sign::Positive) + atlas.total(Sign::Negative));
}

TEST_CASE("the single-mode fast path agrees with the full classifier")
{
    const Geometry g;
    const auto all = enumerate_aspects(g, 5, workspace_only());
    for (const auto& mode : {kNNP, WorkingMode::from_label('a')}) {
        const auto one = build_aspects(g, 5, {std::pair{mode, Sign::Positive}, std::pair{mode, Sign::Negative}},
                                       workspace_only());
        for (Sign s : {Sign::Positive, Sign::Negative})
            CHECK(one.entry(mode, s).workspace.dump_string() == all.entry(mode, s).workspace.dump_string());
    }
}

TEST_CASE("a vanishing platform still tiles the box")
{
    Geometry g;
    g.s = 1e-3;
    const auto atlas = enumerate_aspects(g, 4, workspace_only());
    for (const auto& e : atlas.entries())
        CHECK(std::abs(e.workspace.volume_total() - Box3::workspace().volume()) < 1e-9);
}

TEST_CASE("joint-space octrees classify by direct kinematics")
{
    const Geometry g;
    AtlasOptions o;
    o.jointDepth = 3;
    o.fkSamples = 512;
    const auto atlas = enumerate_aspects(g, 4, o);
    std::size_t inCells = 0;
    for (const auto& e : atlas.entries()) {
        CHECK(e.joint.box() == Box3::joint_space());
        CHECK(std::abs(e.joint.volume_total() - Box3::joint_space().volume()) < 1e-9);
        inCells += e.joint.count_in();
    }
    CHECK(inCells > 0);
}

TEST_CASE("reference postures and aspects")
{
    const Reference ref;
    REQUIRE(ref.sols.size() == 4);
    const auto atlas = build_aspects(ref.g, 8, {std::pair{kNNP, Sign::Positive}}, workspace_only());
    const auto c1 = ref.config(3);
    const auto c4 = ref.config(0);
    CHECK(same_aspect(atlas, c1, c4));
    CHECK(same_aspect(atlas, c1, c1));
    CHECK(aspect_component(atlas, kNNP, Sign::Positive, c1.pose) >= 0);

    // Posture (3) is in mode NPP with detA < 0.
    const auto c3 = ref.config(1);
    const auto j3 = jacobians(ref.g, c3);
    CHECK(working_mode_of(j3).sign_string() == "NPP");
    CHECK(j3.detA < 0);
    try {
        same_aspect(atlas, c1, c3);
        FAIL("expected ModeMismatch");
    } catch (const KinematicError& e) {
        CHECK(e.kind() == KinematicErrorKind::ModeMismatch);
    }
}

TEST_CASE("each reference posture lies in an aspect of its own entry")
{
    const Reference ref;
    const auto atlas = enumerate_aspects(ref.g, 7, workspace_only());
    for (std::size_t k = 0; k < ref.sols.size(); ++k) {
        const auto jp = jacobians(ref.g, ref.config(k));
        const int comp = aspect_component(atlas, working_mode_of(jp), sign_of(jp.detA), ref.sols[k]);
        CHECK(comp >= 0);
    }
}

TEST_CASE("aspect membership is stable under refinement away from boundaries")
{
    const Geometry g;
    const auto coarse = build_aspects(g, 6, {std::pair{kNNP, Sign::Positive}}, workspace_only());
    const auto fine = build_aspects(g, 8, {std::pair{kNNP, Sign::Positive}}, workspace_only());
    const auto& tc = coarse.entry(kNNP, Sign::Positive).workspace;
    const auto& tf = fine.entry(kNNP, Sign::Positive).workspace;
    const auto res = tc.resolution();
    std::mt19937_64 rng(2);
    std::map<int, int> coarseToFine, fineToCoarse;
    int accepted = 0;
    for (int tries = 0; tries < 200000 && accepted < 100; ++tries) {
        const Eigen::Vector3d p(uniform(rng, -12, 12), uniform(rng, -12, 12), uniform(rng, 0, kTwoPi<double>));
        const auto& leaf = tc.leaves()[tc.locate(p)];
        if (!leaf.in) continue;
        // Interior: every probe within one coarse diagonal shares the component.
        bool interior = true;
        for (int dx = -1; dx <= 1 && interior; ++dx)
            for (int dy = -1; dy <= 1 && interior; ++dy)
                for (int dt = -1; dt <= 1 && interior; ++dt) {
                    Eigen::Vector3d q = p + Eigen::Vector3d(dx * res[0], dy * res[1], dt * res[2]);
                    if (std::abs(q[0]) >= 12 || std::abs(q[1]) >= 12) {
                        interior = false;
                        break;
                    }
                    const std::size_t i = tc.locate(q);
                    interior = tc.leaves()[i].in && tc.leaves()[i].component == leaf.component;
                }
        if (!interior) continue;
        const auto& fl = tf.leaves()[tf.locate(p)];
        REQUIRE(fl.in);
        ++accepted;
        const auto [a, freshA] = coarseToFine.emplace(leaf.component, fl.component);
        const auto [b, freshB] = fineToCoarse.emplace(fl.component, leaf.component);
        CHECK(a->second == fl.component);
        CHECK(b->second == leaf.component);
    }
    CHECK(accepted == 100);
}

TEST_CASE("characteristic surface of the reference aspect")
{
    const Reference ref;
    const auto atlas = build_aspects(ref.g, 6, {std::pair{kNNP, Sign::Positive}}, workspace_only());
    const int comp = aspect_component(atlas, kNNP, Sign::Positive, ref.sols[3]);
    REQUIRE(comp >= 0);
    const auto cs = characteristic_surface(ref.g, atlas, kNNP, Sign::Positive, comp);
    CHECK_FALSE(cs.boundaryCells.empty());
    CHECK_FALSE(cs.marked.empty());
    const auto& tree = atlas.entry(kNNP, Sign::Positive).workspace;
    for (std::size_t i : cs.marked) {
        CHECK(tree.leaves()[i].in);
        CHECK(tree.leaves()[i].component == comp);
    }
    CHECK_THROWS_AS(characteristic_surface(ref.g, atlas, kNNP, Sign::Positive, 100000), ValidationError);
}

TEST_CASE("manifest lists every entry")
{
    const Geometry g;
    const auto atlas = enumerate_aspects(g, 4, workspace_only());
    const auto m = atlas_manifest(atlas);
    CHECK(m["entries"].size() == 16);
    CHECK(m["total"] == atlas.total());
    const auto& first = m["entries"][0];
    CHECK(first["mode"] == "a");
    CHECK(first["signs"] == "PPP");
    CHECK(first["sign"] == "+");
    CHECK(first["workspace_dump"] == "workspace_a_PPP_pos.oct");
    CHECK(first["component_list"].size() == first["components"].get<std::size_t>());
}
