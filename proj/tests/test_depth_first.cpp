#include <stablegraph/depth_first.hpp>

#include <gtest/gtest.h>

#include <ranges>
#include <set>

using namespace stablegraph;

namespace {

struct SpaceCount {
    int s, n;
    std::size_t ordered;
};

// sizes of the ordered spaces, from exhaustive enumeration
const std::vector<SpaceCount> kCounts{{1, 0, 1},  {0, 1, 1},   {1, 1, 7},    {2, 0, 16}, {0, 2, 2},
                                      {2, 1, 248}, {3, 0, 560}, {1, 2, 86}, {0, 3, 18}};

}  // namespace

TEST(DepthFirst, TreesAreFixed) {
    for (const auto& g : all_orderings(shapes::star3())) {
        const auto t = dep(g);
        EXPECT_EQ(t.count(NodeKind::red), 0);
        EXPECT_EQ(t.count(NodeKind::blue), 0);
        EXPECT_EQ(glue(t).code(), g.code());
        EXPECT_EQ(erase(t).code(), t.code());
    }
}

TEST(DepthFirst, FigureEight) {
    const auto g = to_ordered(shapes::figure_eight());
    const auto t = dep(g);
    EXPECT_EQ(t.count(NodeKind::red), 2);
    EXPECT_EQ(t.count(NodeKind::blue), 2);
    EXPECT_EQ(t.count(NodeKind::internal), 1);
    EXPECT_EQ(glue(t).code(), g.code());
    // erasing the blue leaves leaves a planted binary tree with two unlabelled leaves
    const auto base = erase(t);
    EXPECT_EQ(base.count(NodeKind::unlabelled), 2);
    EXPECT_EQ(base.count(NodeKind::internal), 1);
}

TEST(DepthFirst, OrderedSpaceSizes) {
    for (const auto& c : kCounts) EXPECT_EQ(ordered_space(c.s, c.n).size(), c.ordered) << c.s << "," << c.n;
}

TEST(DepthFirst, RoundTripAndFibers) {
    for (const auto& c : kCounts) {
        const auto sp = ordered_space(c.s, c.n);
        for (std::size_t i = 0; i < sp.graphs.size(); ++i) {
            EXPECT_EQ(BigInt(sp.fibers[i].size()), ordering_count(sp.graphs[i]));
            for (const auto& g : sp.fibers[i]) {
                const auto t = dep(g);
                ASSERT_EQ(glue(t).code(), g.code());
                EXPECT_EQ(canonical_code(glue(t).forget_order()), canonical_code(sp.graphs[i]));
                EXPECT_EQ(t.count(NodeKind::red), c.s);
                EXPECT_EQ(t.count(NodeKind::blue), c.s);
            }
        }
    }
}

TEST(DepthFirst, FigureEightFiber) {
    const auto sp = ordered_space(2, 0);
    for (std::size_t i = 0; i < sp.graphs.size(); ++i) {
        if (canonical_code(sp.graphs[i]) == canonical_code(shapes::figure_eight())) {
            EXPECT_EQ(sp.fibers[i].size(), 3u);
        }
    }
}

TEST(DepthFirst, PlansBijectWithOrderedSpace) {
    for (const auto& c : kCounts) {
        std::size_t plans = 0;
        std::set<std::vector<int>> glued;
        std::set<CanonicalCode> shapes_hit;
        for (const auto& base : base_trees(c.s, c.n))
            for (const auto& plan : all_plans(base)) {
                ++plans;
                const auto paired = pair_of(base, plan);
                EXPECT_EQ(plan_of(paired), plan);
                EXPECT_EQ(erase(paired).code(), base.code());
                const auto g = glue(paired);
                glued.insert(g.code());
                shapes_hit.insert(canonical_code(g.forget_order()));
            }
        EXPECT_EQ(plans, c.ordered) << c.s << "," << c.n;
        EXPECT_EQ(glued.size(), c.ordered) << c.s << "," << c.n;
        EXPECT_EQ(shapes_hit.size(), enumerate_space(c.s, c.n).size());
    }
}

TEST(DepthFirst, DecompositionMatchesPlans) {
    // dep -> (erase, plan_of) -> pair_of recovers the paired tree
    const auto sp = ordered_space(2, 1);
    for (const auto& g : sp.fibers | std::views::join) {
        const auto t = dep(g);
        const auto base = erase(t);
        const auto plan = plan_of(t);
        EXPECT_EQ(plan_violation(base, plan), 0);
        EXPECT_EQ(pair_of(base, plan).code(), t.code());
    }
}

TEST(DepthFirst, EmptyPlanOnTrees) {
    for (const auto& base : base_trees(0, 3)) {
        const GluingPlan empty;
        EXPECT_EQ(plan_violation(base, empty), 0);
        EXPECT_EQ(pair_of(base, empty).code(), base.code());
    }
}

TEST(DepthFirst, RandomPlansRoundTrip) {
    RandomStream rng(3);
    int n = 0;
    for (auto [s, l] : std::vector<std::pair<int, int>>{{2, 1}, {3, 0}, {3, 2}, {4, 1}}) {
        const auto bases = base_trees(s, l);
        for (int r = 0; r < 2500; ++r, ++n) {
            const auto& base = bases[rng.below(bases.size())];
            const auto plan = random_plan(base, rng);
            ASSERT_EQ(plan_violation(base, plan), 0);
            const auto paired = pair_of(base, plan);
            ASSERT_EQ(plan_of(paired), plan);
            const auto g = glue(paired);
            ASSERT_EQ(g.surplus(), s);
            ASSERT_EQ(dep(g).code(), paired.code());
        }
    }
    EXPECT_EQ(n, 10000);
}

TEST(DepthFirst, FirstCornerIsRejected) {
    for (const auto& base : base_trees(1, 1)) {
        for (int v = 0; v < static_cast<int>(base.nodes.size()); ++v) {
            if (!base.is_internal(v)) continue;
            GluingPlan p;
            p.corners[{v, 1}] = {1};
            std::string why;
            EXPECT_EQ(plan_violation(base, p, &why), 4) << why;
            EXPECT_THROW(pair_of(base, p), std::invalid_argument);
        }
    }
}

TEST(DepthFirst, ViolationsReportCondition) {
    const auto base = base_trees(2, 0).front();
    const int root_child = base.nodes[0].children.front();
    GluingPlan p;
    p.corners[{0, 1}] = {1, 2};  // the root is not internal
    EXPECT_EQ(plan_violation(base, p), 1);
    GluingPlan q;
    q.edges[root_child] = {{}};
    EXPECT_EQ(plan_violation(base, q), 2);
    GluingPlan r;
    r.edges[root_child] = {{1}};
    EXPECT_EQ(plan_violation(base, r), 3);
    try {
        pair_of(base, r);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("condition 3"), std::string::npos);
    }
}
