#include <stablegraph/multigraph.hpp>
#include <stablegraph/weights.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace stablegraph;

namespace {

Multigraph cubic_pair() { return Multigraph(1, 3, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 2}}); }
Multigraph path2() { return Multigraph(2, 1, {{0, 2, 1}, {2, 1, 1}}); }

}  // namespace

TEST(Multigraph, Surplus) {
    EXPECT_EQ(shapes::single_edge().surplus(), 0);
    EXPECT_EQ(shapes::figure_eight().surplus(), 2);
    const auto t = shapes::theta();
    EXPECT_EQ(t.edge_count(), 4);
    EXPECT_EQ(t.vertex_count(), 3);
    EXPECT_EQ(t.surplus(), 2);
}

TEST(Multigraph, Degrees) {
    const auto f = shapes::figure_eight();
    EXPECT_EQ(f.degree(0), 1);
    EXPECT_EQ(f.degree(1), 5);
    const auto t = shapes::theta();
    EXPECT_EQ(t.degree(1), 4);
    EXPECT_EQ(t.degree(2), 3);
    const auto d = t.degrees();
    EXPECT_EQ(std::accumulate(d.begin(), d.end(), 0), 2 * t.edge_count());
}

TEST(Multigraph, MergesParallelEdges) {
    Multigraph g(1, 2, {{0, 1, 1}, {2, 1, 1}, {1, 2, 2}});
    ASSERT_EQ(g.edges().size(), 2u);
    EXPECT_EQ(g.edges()[1].mult, 3);
    EXPECT_THROW(Multigraph(1, 1, {{0, 2, 1}}), std::invalid_argument);
    EXPECT_THROW(Multigraph(1, 1, {{0, 1, 0}}), std::invalid_argument);
}

TEST(Multigraph, SymmetryCounts) {
    EXPECT_EQ(symmetry_count(shapes::figure_eight()), 1u);
    EXPECT_EQ(symmetry_count(cubic_pair()), 2u);
    EXPECT_EQ(symmetry_count(shapes::lollipop()), 1u);
    EXPECT_EQ(symmetry_count(shapes::theta()), 1u);
}

TEST(Multigraph, CanonicalCodeIsInvariant) {
    const auto t = cubic_pair();
    std::vector<int> perm{0, 1, 2};
    const auto c = canonical_code(t);
    do {
        EXPECT_EQ(canonical_code(t.relabel(perm)), c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NE(canonical_code(shapes::figure_eight()), canonical_code(shapes::theta()));
}

TEST(Multigraph, LeafLabelsMatter) {
    // relabelling leaves gives a different labelled graph
    Multigraph a(3, 2, {{0, 3, 1}, {1, 3, 1}, {3, 4, 1}, {2, 4, 1}, {4, 4, 1}});
    Multigraph b(3, 2, {{0, 3, 1}, {2, 3, 1}, {3, 4, 1}, {1, 4, 1}, {4, 4, 1}});
    EXPECT_NE(canonical_code(a), canonical_code(b));
}

TEST(Multigraph, SevenDistinctKernels) {
    const auto gs = enumerate_space(2, 0);
    std::set<CanonicalCode> codes;
    for (const auto& g : gs) codes.insert(canonical_code(g));
    EXPECT_EQ(codes.size(), 7u);
}

TEST(Multigraph, Membership) {
    EXPECT_TRUE(validate_membership(shapes::figure_eight(), 2, 0));
    EXPECT_FALSE(validate_membership(shapes::figure_eight(), 1, 0));
    EXPECT_TRUE(validate_membership(Multigraph(0, 1, {{0, 0, 2}}), 2, -1));
    EXPECT_FALSE(validate_membership(path2(), 0, 1));
    EXPECT_TRUE(validate_membership(shapes::star3(), 0, 2));
}

TEST(Multigraph, SelfLoopsAndMultiplicities) {
    const auto f = shapes::figure_eight();
    EXPECT_EQ(f.self_loops(), 2);
    EXPECT_EQ(f.mult_factorial_product(), 2);
    EXPECT_EQ(cubic_pair().mult_factorial_product(), 2);
    EXPECT_EQ(shapes::theta().mult_factorial_product(), 6);
}

TEST(Multigraph, SymmetryMatchesBruteForce) {
    // brute force: permutations of internal vertices preserving the edge multiset
    for (const auto& g : enumerate_space(2, 1)) {
        std::vector<int> perm(g.internal());
        std::iota(perm.begin(), perm.end(), 0);
        std::uint64_t count = 0;
        do {
            if (g.relabel(perm) == g) ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_EQ(symmetry_count(g), count);
    }
}
