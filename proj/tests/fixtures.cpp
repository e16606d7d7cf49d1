#include "fixtures.hpp"

#include <functional>
#include <set>

namespace fixtures {

namespace {

std::vector<int> zero_based(std::vector<int> v) {
    for (int& x : v) --x;
    return v;
}

std::map<int, int> zero_based(const std::map<int, int>& m) {
    std::map<int, int> out;
    for (auto [a, b] : m) out[a - 1] = b - 1;
    return out;
}

std::map<int, int> inverse(const std::map<int, int>& m) {
    std::map<int, int> out;
    for (auto [a, b] : m) out[b] = a;
    return out;
}

CoopCycle cycle(std::vector<int> X, std::vector<int> Y, int group, std::map<int, int> levels,
                std::map<int, int> f = {}) {
    CoopCycle c;
    c.X = zero_based(std::move(X));
    c.Y = zero_based(std::move(Y));
    c.f = zero_based(f);
    c.group = group;
    for (auto [j, l] : levels) c.level[j - 1] = l;
    return c;
}

}  // namespace

FieldPtr gf16() { return make_field(4); }
FieldPtr gf256() { return make_field(8); }

HierCode two_node_code() {
    FieldPtr f = gf16();
    auto g = std::make_shared<const DsnGraph>(std::vector<NodeParams>(2, NodeParams{3, 3, 1}), std::vector<Edge>{{0, 1}});
    CauchyIndicators ind{{f->beta_pow(1), f->beta_pow(2), f->beta_pow(3), f->beta_pow(7)},
                         {f->beta_pow(8), f->beta_pow(9), f->beta_pow(10), f->beta_pow(11)}};
    BuildOptions opt;
    opt.indicators = {{0, ind}, {1, ind}};
    return build_single_level(f, g, opt);
}

Messages two_node_messages() {
    FieldPtr f = gf16();
    return {{f->one(), f->beta(), f->beta_pow(2)}, {f->beta(), f->one(), f->zero()}};
}

std::vector<Edge> mesh12_edges() {
    const std::vector<Edge> one_based = {{1, 2},  {2, 3},  {2, 5},   {3, 4},  {4, 5},   {4, 6},
                                         {5, 6},  {5, 8},  {6, 7},   {7, 8},  {7, 9},   {7, 11},
                                         {8, 9},  {9, 10}, {10, 11}, {10, 12}, {11, 12}};
    std::vector<Edge> out;
    for (auto [a, b] : one_based) out.emplace_back(a - 1, b - 1);
    return out;
}

GraphPtr mesh12(NodeParams params, std::map<Edge, Rational> latencies) {
    return std::make_shared<const DsnGraph>(std::vector<NodeParams>(12, params), mesh12_edges(), std::move(latencies));
}

CoopGraph mesh12_cooperation(GraphPtr g) {
    std::vector<CoopCycle> cycles = {
        cycle({8, 9}, {2, 3}, 1, {{2, 2}, {3, 2}}),
        cycle({10, 11}, {2, 3}, 2, {{2, 3}, {3, 3}}),
        cycle({2, 3}, {8, 9}, 3, {{8, 2}, {9, 2}}),
        cycle({2, 3}, {10, 11}, 5, {{10, 3}, {11, 3}}),
        cycle({4, 6}, {8, 9}, 3, {{8, 2}, {9, 2}}),
        cycle({8, 9}, {4, 6}, 4, {{4, 2}, {6, 2}}),
        cycle({4, 5, 6}, {10, 11, 12}, 6, {{10, 2}, {11, 2}, {12, 2}}, {{4, 12}, {5, 10}, {6, 11}}),
        cycle({10, 11, 12}, {4, 5, 6}, 7, {{4, 3}, {5, 2}, {6, 3}}, {{12, 4}, {10, 5}, {11, 6}}),
    };
    return CoopGraph(std::move(g), {}, std::move(cycles));
}

RingMatching ring_panel(int which) {
    switch (which) {
        case 0: return {{{1, 2}, {4, 5}, {7, 8}}, {{2, 3}, {5, 6}, {8, 9}}, {{3, 1}, {6, 4}, {9, 7}}};
        case 1: return {{{1, 5}, {4, 2}, {7, 8}}, {{2, 6}, {5, 3}, {8, 9}}, {{3, 4}, {6, 1}, {9, 7}}};
        case 2: return {{{1, 8}, {4, 5}, {7, 2}}, {{2, 6}, {5, 3}, {8, 9}}, {{3, 7}, {6, 1}, {9, 4}}};
        default: return {{{1, 5}, {4, 2}, {7, 8}}, {{2, 3}, {5, 9}, {8, 6}}, {{3, 1}, {6, 4}, {9, 7}}};
    }
}

HierCode ring_code(const RingMatching& m) {
    const std::vector<std::vector<int>> V = {{1, 4, 7}, {2, 5, 8}, {3, 6, 9}};
    std::vector<Edge> edges;
    for (const auto& tri : V)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = a + 1; b < 3; ++b) edges.emplace_back(tri[a] - 1, tri[b] - 1);
    const std::map<int, int>* fs[3] = {&m.f1, &m.f2, &m.f3};
    for (const auto* f : fs)
        for (auto [a, b] : *f) edges.emplace_back(a - 1, b - 1);
    auto g = std::make_shared<const DsnGraph>(std::vector<NodeParams>(9, NodeParams{3, 3, 1}), edges);
    std::vector<CoopCycle> cycles;
    for (int t = 0; t < 3; ++t) {
        const auto& X = V[static_cast<std::size_t>(t)];
        const auto& Y = V[static_cast<std::size_t>((t + 1) % 3)];
        std::map<int, int> lx, ly;
        for (int x : X) lx[x] = 2;
        for (int y : Y) ly[y] = 2;
        cycles.push_back(cycle(X, Y, 1, ly, *fs[t]));
        cycles.push_back(cycle(Y, X, 1, lx, inverse(*fs[t])));
    }
    BuildOptions opt;
    opt.require_compatible = false;
    return build_multi_level(gf256(), CoopGraph(g, {}, cycles), opt);
}

std::pair<int, int> ring_extra_parities(const HierCode& code) {
    const Messages m = random_messages(code, 5);
    const Codewords c = encode(code, m);
    auto extras = [&](const std::set<int>& open) {
        std::map<int, RecoveredNode> rec;
        for (int i = 0; i < code.p(); ++i)
            if (!open.count(i)) rec[i] = {m[static_cast<std::size_t>(i)], Received::intact(c[static_cast<std::size_t>(i)]), Rational(0)};
        Ledger led = cross_parity_ledger(code, rec);
        std::map<int, int> out;
        for (int b : open) {
            int n = 0;
            for (const auto& e : led.extras[static_cast<std::size_t>(b)])
                if (e.kind == ColBlock::Kind::Cycle) n += static_cast<int>(e.values.size());
            out[b] = n;
        }
        return out;
    };
    std::function<int(const std::set<int>&)> best = [&](const std::set<int>& open) {
        int top = 0;
        for (auto [b, n] : extras(open)) {
            if (n == 0) continue;
            std::set<int> rest = open;
            rest.erase(b);
            top = std::max(top, n + best(rest));
        }
        return top;
    };
    const std::set<int> blue = {0, 1, 2};
    int init = 0;
    for (auto [b, n] : extras(blue)) init += n;
    return {init, best(blue)};
}

GraphPtr relay_tree() {
    std::vector<Edge> edges;
    const std::map<int, std::vector<int>> hubs = {
        {1, {0, 2, 3, 13, 14, 15}}, {4, {2, 5, 6}}, {7, {3, 6, 10}}, {9, {5, 6, 8}}, {11, {6, 10, 12}}};
    for (const auto& [h, leaves] : hubs)
        for (int x : leaves) edges.emplace_back(h, x);
    return std::make_shared<const DsnGraph>(std::vector<NodeParams>(16, NodeParams{2, 3, 1}), edges);
}

std::vector<int> relay_tree_weights() {
    std::vector<int> u(16, 0);
    for (int b : {0, 2, 3, 5, 10}) u[static_cast<std::size_t>(b)] = 4;
    for (int g : {6, 8, 12}) u[static_cast<std::size_t>(g)] = 3;
    return u;
}

std::pair<HierCode, HierCode> far_cycle_pair() {
    // 0 = b, 1 = y, 2 = z, 3 = w, 4 = x; path b - y - x - z - w.
    auto g = std::make_shared<const DsnGraph>(std::vector<NodeParams>(5, NodeParams{3, 3, 1}),
                                              std::vector<Edge>{{0, 1}, {1, 4}, {4, 2}, {2, 3}});
    HierCode single = build_single_level(gf256(), g);
    std::vector<CoopCycle> cycles = {cycle({1, 2}, {3, 4}, 1, {{3, 2}, {4, 2}}),
                                     cycle({3, 4}, {1, 2}, 2, {{1, 2}, {2, 2}})};
    HierCode multi = build_multi_level(gf256(), CoopGraph(g, {}, cycles));
    return {single, multi};
}

GraphPtr chain_family(int units) {
    std::vector<Edge> edges;
    for (int k = 0; k < units; ++k) {
        const int b = 3 * k, y = 3 * k + 1, z = 3 * k + 2;
        edges.emplace_back(b, y);
        edges.emplace_back(y, z);
        if (k + 1 < units) edges.emplace_back(z, 3 * (k + 1) + 1);
    }
    return std::make_shared<const DsnGraph>(std::vector<NodeParams>(static_cast<std::size_t>(3 * units), NodeParams{3, 3, 1}),
                                            edges);
}

std::vector<int> chain_weights(int units) {
    std::vector<int> u(static_cast<std::size_t>(3 * units), 0);
    for (int k = 0; k < units; ++k) u[static_cast<std::size_t>(3 * k)] = 4;
    return u;
}

GraphPtr star_family(int units) {
    // Unit layout: b, y1..y6, g1, g2.
    std::vector<Edge> edges;
    for (int k = 0; k < units; ++k) {
        const int base = 9 * k;
        for (int y = 1; y <= 6; ++y) edges.emplace_back(base, base + y);
        edges.emplace_back(base + 7, base + 1);
        edges.emplace_back(base + 8, base + 2);
        if (k + 1 < units) edges.emplace_back(base + 6, base + 9 + 1);
    }
    return std::make_shared<const DsnGraph>(std::vector<NodeParams>(static_cast<std::size_t>(9 * units), NodeParams{6, 3, 1}),
                                            edges);
}

std::vector<int> star_weights(int units) {
    std::vector<int> u(static_cast<std::size_t>(9 * units), 0);
    for (int k = 0; k < units; ++k) {
        u[static_cast<std::size_t>(9 * k)] = 9;
        u[static_cast<std::size_t>(9 * k + 7)] = 3;
        u[static_cast<std::size_t>(9 * k + 8)] = 3;
    }
    return u;
}

}  // namespace fixtures
