#pragma once

#include <boost/rational.hpp>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hiercode {

using Rational = boost::rational<long long>;

// Exact decimal or fraction parsing: "0.25", "3", "7/4".
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

struct NodeParams {
    int k = 1;
    int r = 1;
    int delta = 0;
    int n() const { return k + r; }
};

using Edge = std::pair<int, int>;

// Undirected DSN graph; node ids are 0-based here and 1-based in files.
class DsnGraph {
public:
    DsnGraph(std::vector<NodeParams> params, std::vector<Edge> edges,
             std::map<Edge, Rational> latencies = {});

    int p() const { return static_cast<int>(params_.size()); }
    const NodeParams& params(int i) const { return params_.at(static_cast<std::size_t>(i)); }
    const std::vector<NodeParams>& all_params() const { return params_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int i) const { return adj_.at(static_cast<std::size_t>(i)); }
    bool has_edge(int i, int j) const;

    bool has_latencies() const { return !latency_.empty(); }
    const std::map<Edge, Rational>& latencies() const { return latency_; }
    std::optional<Rational> latency(int i, int j) const;
    // Shortest path: latency sums when latencies are present, hop counts otherwise.
    std::optional<Rational> distance(int i, int j) const;
    std::optional<int> hops(int i, int j) const;

private:
    std::vector<NodeParams> params_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::map<Edge, Rational> latency_;
    std::shared_ptr<const std::vector<std::optional<Rational>>> dist_;
    std::shared_ptr<const std::vector<int>> hops_;
};

using GraphPtr = std::shared_ptr<const DsnGraph>;

std::vector<std::vector<int>> max_cliques(const std::vector<std::vector<int>>& adj);
std::vector<std::vector<int>> max_cliques(const DsnGraph& g);

struct CoopCycle {
    std::vector<int> X;
    std::vector<int> Y;
    std::map<int, int> f;      // triangles only: X -> Y, the unpaired edges
    int group = 1;
    std::map<int, int> level;  // column j in Y -> cooperation level (>= 2)

    bool triangle() const { return X.size() == 3; }
    std::vector<int> X_of(int j) const;
    std::vector<int> Y_of(int i) const;
    // Cooperation-matrix entries (i, j) covered: i in X, j in Y_of(i).
    std::vector<Edge> vertices() const;
};

struct Violation {
    int condition;  // 0 malformed, 1..4 compatibility conditions, 5 mirror symmetry
    std::string message;
    std::vector<int> ids;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool violates(int condition) const;
    std::string summary() const;
};

class CoopGraph {
public:
    // Empty M means M_i = N_i.
    CoopGraph(GraphPtr graph, std::vector<std::vector<int>> M = {}, std::vector<CoopCycle> cycles = {});

    const DsnGraph& graph() const { return *graph_; }
    const GraphPtr& graph_ptr() const { return graph_; }
    int p() const { return graph_->p(); }
    const std::vector<int>& M(int i) const { return M_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::vector<int>>& all_M() const { return M_; }
    const std::vector<CoopCycle>& cycles() const { return cycles_; }
    const CoopCycle& cycle(int t) const { return cycles_.at(static_cast<std::size_t>(t)); }
    bool has_cycles() const { return !cycles_.empty(); }

    std::vector<int> groups() const;
    std::vector<int> cycles_in_group(int g) const;                   // T_g
    std::vector<int> groups_of(int j) const;                         // A_j (j as a column)
    std::optional<std::vector<int>> clique_of_group(int g) const;    // S(g)
    std::vector<int> U(int j, int g) const;
    std::vector<int> R(int j, int l) const;
    std::vector<int> V(int j, int l) const;                          // I_j^l for l >= 2
    std::vector<int> T(int i, int l) const;                          // row cycles of i at level l
    std::vector<int> row_cycles(int i) const;
    std::optional<int> row_level(int t, int i) const;
    std::optional<int> mirror(int t) const;
    std::optional<int> group_at(int j, int l) const;                 // g(j;l)
    std::vector<int> column_levels(int j) const;                     // sorted, each >= 2
    int L(int i) const;
    // Maximal cliques of the first-level cooperation graph (edges j in M_i).
    std::vector<std::vector<int>> cooperation_cliques() const;

private:
    GraphPtr graph_;
    std::vector<std::vector<int>> M_;
    std::vector<CoopCycle> cycles_;
};

ValidationReport validate_compatible(const CoopGraph& cg);

// D_{i,j} = l iff j in I_i^l. Throws IncompatibleGraph.
std::vector<std::vector<int>> cooperation_matrix(const CoopGraph& cg);

struct PinnedCycle {
    std::vector<int> X;
    std::vector<int> Y;
    std::map<int, int> f;
    int group_key = 0;  // pinned cycles sharing a key share a group
};

struct SearchOptions {
    std::function<int(const std::vector<int>& clique)> a;                // groups per clique, default 0
    std::function<int(const std::vector<int>& clique, int group)> b;     // cycles per group, default 1
    std::vector<std::vector<int>> M;                                      // empty = N_i
    std::vector<PinnedCycle> pinned;
    bool prefer_triangles = false;
};

struct LevelConflict {
    int cycle;
    int row;
    std::vector<int> levels;
};

struct SearchResult {
    CoopGraph coop;
    int requested = 0;
    int created = 0;
    std::vector<LevelConflict> conflicts;
    int shortfall() const { return requested - created; }
};

SearchResult search_cooperation_graph(GraphPtr graph, const SearchOptions& options);

// Recompute levels from average distances (ascending z, ties by group number).
std::vector<CoopCycle> assign_levels(const DsnGraph& g, std::vector<CoopCycle> cycles);

}  // namespace hiercode
