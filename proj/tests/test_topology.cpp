#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "hiercode/error.hpp"
#include "hiercode/topology.hpp"

using namespace hiercode;

namespace {

GraphPtr path_graph(int p) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < p; ++i) e.emplace_back(i, i + 1);
    return std::make_shared<const DsnGraph>(std::vector<NodeParams>(static_cast<std::size_t>(p), NodeParams{2, 2, 1}), e);
}

std::vector<std::vector<int>> brute_force_cliques(const std::vector<std::vector<bool>>& adj) {
    const int p = static_cast<int>(adj.size());
    std::vector<std::vector<int>> cliques;
    for (unsigned mask = 1; mask < (1U << p); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < p; ++i)
            if (mask >> i & 1U) s.push_back(i);
        bool clique = true;
        for (std::size_t a = 0; a < s.size() && clique; ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b) clique = clique && adj[s[a]][s[b]];
        if (!clique) continue;
        bool maximal = true;
        for (int v = 0; v < p && maximal; ++v) {
            if (mask >> v & 1U) continue;
            bool all = true;
            for (int x : s) all = all && adj[x][v];
            if (all) maximal = false;
        }
        if (maximal) cliques.push_back(s);
    }
    std::sort(cliques.begin(), cliques.end());
    return cliques;
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
    EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
    EXPECT_EQ(parse_rational("7/4"), Rational(7, 4));
    EXPECT_EQ(parse_rational("3"), Rational(3));
    EXPECT_EQ(parse_rational("1.5e1"), Rational(15));
    EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
    EXPECT_THROW(parse_rational("x"), Error);
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_EQ(format_rational(Rational(5, 2)), "5/2");
}

TEST(Graph, RejectsDanglingEdgesAndBadParams) {
    auto bad_edge = [] { DsnGraph g({NodeParams{}, NodeParams{}}, {{0, 2}}); };
    try {
        bad_edge();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DanglingEdge);
    }
    EXPECT_THROW(DsnGraph({NodeParams{1, 1, 1}}, {}), Error);  // delta must be < r
    EXPECT_THROW(DsnGraph({NodeParams{}, NodeParams{}}, {{0, 0}}), Error);
}

TEST(Graph, HopAndLatencyDistances) {
    auto g = fixtures::mesh12(NodeParams{3, 3, 1});
    EXPECT_EQ(*g->hops(0, 11), 6);  // 1-2-5-8-9-10-12
    EXPECT_EQ(*g->distance(0, 11), Rational(6));
    std::map<Edge, Rational> lat;
    for (auto e : fixtures::mesh12_edges()) lat[e] = Rational(1);
    lat[{1, 2}] = Rational(1, 3);
    lat[{2, 3}] = Rational(1, 3);
    auto h = fixtures::mesh12(NodeParams{3, 3, 1}, lat);
    EXPECT_EQ(*h->distance(1, 3), Rational(2, 3));  // 2-3-4 beats 2-5-4
    EXPECT_EQ(*h->hops(1, 3), 2);
}

TEST(Graph, DisconnectedNodesHaveNoDistance) {
    DsnGraph g({NodeParams{}, NodeParams{}, NodeParams{}}, {{0, 1}});
    EXPECT_FALSE(g.distance(0, 2).has_value());
    EXPECT_EQ(*g.distance(1, 0), Rational(1));
}

TEST(Cliques, SmallGraphs) {
    DsnGraph tri({NodeParams{}, NodeParams{}, NodeParams{}}, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(max_cliques(tri), (std::vector<std::vector<int>>{{0, 1, 2}}));
    EXPECT_EQ(max_cliques(*path_graph(3)), (std::vector<std::vector<int>>{{0, 1}, {1, 2}}));
}

TEST(Cliques, AgreeWithSubsetEnumeration) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const int p = 3 + trial % 8;
        std::bernoulli_distribution coin(0.2 + 0.1 * (trial % 6));
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(p), std::vector<bool>(static_cast<std::size_t>(p)));
        std::vector<std::vector<int>> lists(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (coin(rng)) {
                    adj[i][j] = adj[j][i] = true;
                    lists[i].push_back(j);
                    lists[j].push_back(i);
                }
        EXPECT_EQ(max_cliques(lists), brute_force_cliques(adj)) << "trial " << trial;
    }
}

TEST(Cooperation, MeshInstanceIsCompatible) {
    CoopGraph cg = fixtures::mesh12_cooperation(fixtures::mesh12(NodeParams{3, 4, 1}));
    ValidationReport rep = validate_compatible(cg);
    EXPECT_TRUE(rep.ok()) << rep.summary();
    // Node 2 (1-based) helps at level 2 through {8,9} and at level 3 through {10,11}.
    EXPECT_EQ(cg.V(1, 2), (std::vector<int>{7, 8}));
    EXPECT_EQ(cg.V(1, 3), (std::vector<int>{9, 10}));
    EXPECT_EQ(cg.column_levels(1), (std::vector<int>{2, 3}));
    EXPECT_EQ(cg.L(1), 3);
    auto D = cooperation_matrix(cg);
    EXPECT_EQ(D[1][7], 2);
    EXPECT_EQ(D[1][10], 3);
    EXPECT_EQ(D[1][0], 1);
    EXPECT_EQ(D[1][3], 0);
}

TEST(Cooperation, MirrorsAndGroups) {
    CoopGraph cg = fixtures::mesh12_cooperation(fixtures::mesh12(NodeParams{3, 4, 1}));
    EXPECT_EQ(cg.mirror(0), std::optional<int>(2));
    EXPECT_EQ(cg.mirror(6), std::optional<int>(7));
    EXPECT_EQ(cg.cycles_in_group(3), (std::vector<int>{2, 4}));
    auto S = cg.clique_of_group(3);
    ASSERT_TRUE(S.has_value());
    EXPECT_TRUE(std::includes(S->begin(), S->end(), cg.cycle(2).Y.begin(), cg.cycle(2).Y.end()));
}

TEST(Cooperation, YSpanningTwoCliquesViolatesCliqueCondition) {
    auto g = path_graph(6);
    // Same group, Y sets {1,2} and {4,5}: no maximal clique of a path holds both.
    std::vector<CoopCycle> cyc = {{{3, 4}, {0, 1}, {}, 1, {{0, 2}, {1, 2}}}, {{0, 1}, {3, 4}, {}, 1, {{3, 2}, {4, 2}}}};
    auto cliques = max_cliques(*g);
    for (const auto& c : cliques) EXPECT_EQ(c.size(), 2u);
    ValidationReport rep = validate_compatible(CoopGraph(g, {}, cyc));
    EXPECT_TRUE(rep.violates(3)) << rep.summary();
}

TEST(Cooperation, OverlappingCyclesViolateDisjointness) {
    auto g = path_graph(6);
    std::vector<CoopCycle> cyc = {{{4, 5}, {0, 1}, {}, 1, {{0, 2}, {1, 2}}},
                                  {{4, 5}, {0, 1}, {}, 2, {{0, 3}, {1, 3}}}};
    ValidationReport rep = validate_compatible(CoopGraph(g, {}, cyc));
    EXPECT_TRUE(rep.violates(2)) << rep.summary();
    EXPECT_THROW(cooperation_matrix(CoopGraph(g, {}, cyc)), Error);
}

TEST(Cooperation, AdjacentCrossPairIsMalformed) {
    auto g = path_graph(6);
    // 2-3 is an edge, so {1,2} -> {3,4} is not a cycle at all.
    std::vector<CoopCycle> cyc = {{{0, 1}, {2, 3}, {}, 1, {{2, 2}, {3, 2}}}};
    ValidationReport rep = validate_compatible(CoopGraph(g, {}, cyc));
    EXPECT_TRUE(rep.violates(0)) << rep.summary();
}

TEST(Cooperation, AsymmetricFirstLevelIsRejected) {
    auto g = path_graph(3);
    ValidationReport rep = validate_compatible(CoopGraph(g, {{1}, {}, {1}}));
    EXPECT_TRUE(rep.violates(1));
}

TEST(Search, OutputIsCompatibleWithNonAdjacentCrossPairs) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 25; ++trial) {
        const int p = 6 + trial % 5;
        std::bernoulli_distribution coin(0.35);
        std::vector<Edge> e;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (coin(rng)) e.emplace_back(i, j);
        auto g = std::make_shared<const DsnGraph>(std::vector<NodeParams>(static_cast<std::size_t>(p), NodeParams{2, 4, 1}), e);
        SearchOptions opt;
        opt.a = [](const std::vector<int>&) { return 1; };
        opt.b = [](const std::vector<int>&, int) { return 2; };
        opt.prefer_triangles = trial % 2 == 1;
        SearchResult res = search_cooperation_graph(g, opt);
        ValidationReport rep = validate_compatible(res.coop);
        EXPECT_TRUE(rep.ok()) << "trial " << trial << ": " << rep.summary();
        EXPECT_GE(res.shortfall(), 0);
        for (const auto& c : res.coop.cycles()) {
            for (auto [i, j] : c.vertices()) EXPECT_FALSE(g->has_edge(i, j)) << "trial " << trial;
            for (const auto& [x, y] : c.f) EXPECT_TRUE(g->has_edge(x, y) || std::count(c.Y.begin(), c.Y.end(), x));
            for (const auto& [j, l] : c.level) EXPECT_GE(l, 2);
        }
        SearchResult again = search_cooperation_graph(g, opt);
        ASSERT_EQ(again.coop.cycles().size(), res.coop.cycles().size());
        for (std::size_t t = 0; t < res.coop.cycles().size(); ++t) {
            EXPECT_EQ(again.coop.cycle(static_cast<int>(t)).X, res.coop.cycle(static_cast<int>(t)).X);
            EXPECT_EQ(again.coop.cycle(static_cast<int>(t)).level, res.coop.cycle(static_cast<int>(t)).level);
        }
    }
}

TEST(Search, ReportsShortfallWhenMaterialRunsOut) {
    auto g = path_graph(4);
    SearchOptions opt;
    opt.a = [](const std::vector<int>&) { return 1; };
    opt.b = [](const std::vector<int>&, int) { return 3; };
    SearchResult res = search_cooperation_graph(g, opt);
    EXPECT_GT(res.shortfall(), 0);
    EXPECT_TRUE(validate_compatible(res.coop).ok());
}

TEST(Search, NoRequestsGiveFirstLevelOnly) {
    SearchResult res = search_cooperation_graph(fixtures::mesh12(NodeParams{3, 3, 1}), SearchOptions{});
    EXPECT_FALSE(res.coop.has_cycles());
    EXPECT_EQ(res.requested, 0);
}

TEST(Levels, OrderedByAverageDistance) {
    auto g = fixtures::mesh12(NodeParams{3, 4, 1});
    CoopGraph cg = fixtures::mesh12_cooperation(g);
    auto cycles = assign_levels(*g, cg.cycles());
    // Node 2 sees {8,9} (average 2.5) before {10,11} (average 4).
    EXPECT_EQ(cycles[0].level.at(1), 2);
    EXPECT_EQ(cycles[1].level.at(1), 3);
}
