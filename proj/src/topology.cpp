#include "hiercode/topology.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

Edge norm(int i, int j) { return i < j ? Edge{i, j} : Edge{j, i}; }

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const std::vector<int>& small, const std::vector<int>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::string ids_text(const std::vector<int>& ids) {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < ids.size(); ++k) os << (k ? "," : "") << ids[k] + 1;
    os << '}';
    return os.str();
}

void bron_kerbosch(const std::vector<std::vector<bool>>& adj, std::vector<int>& r, std::vector<int> p,
                   std::vector<int> x, std::vector<std::vector<int>>& out) {
    if (p.empty() && x.empty()) {
        out.push_back(r);
        return;
    }
    int pivot = -1;
    std::size_t best = 0;
    for (const auto* set : {&p, &x})
        for (int u : *set) {
            std::size_t c = 0;
            for (int v : p) c += adj[u][v] ? 1 : 0;
            if (pivot < 0 || c > best) {
                pivot = u;
                best = c;
            }
        }
    std::vector<int> candidates;
    for (int v : p)
        if (!adj[pivot][v]) candidates.push_back(v);
    for (int v : candidates) {
        std::vector<int> np, nx;
        for (int w : p)
            if (adj[v][w]) np.push_back(w);
        for (int w : x)
            if (adj[v][w]) nx.push_back(w);
        r.push_back(v);
        bron_kerbosch(adj, r, np, nx, out);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

}  // namespace

Rational parse_rational(const std::string& raw) {
    auto fail = [&]() { return Error(ErrorKind::ParseError, "bad rational '" + raw + "'"); };
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    if (text.empty()) throw fail();
    auto parse_int = [&](const std::string& s) {
        if (s.empty()) throw fail();
        std::size_t pos = 0;
        long long v;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw fail();
        }
        if (pos != s.size()) throw fail();
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string::npos) {
        long long den = parse_int(text.substr(slash + 1));
        if (den == 0) throw fail();
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    long long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string::npos) {
        exponent = parse_int(text.substr(e + 1));
        text = text.substr(0, e);
    }
    bool negative = !text.empty() && text[0] == '-';
    if (negative || (!text.empty() && text[0] == '+')) text = text.substr(1);
    std::string digits = text;
    long long scale = 0;
    if (auto dot = text.find('.'); dot != std::string::npos) {
        digits = text.substr(0, dot) + text.substr(dot + 1);
        scale = static_cast<long long>(text.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw fail();
    Rational value(parse_int(digits));
    scale -= exponent;
    for (; scale > 0; --scale) value /= 10;
    for (; scale < 0; ++scale) value *= 10;
    return negative ? -value : value;
}

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

DsnGraph::DsnGraph(std::vector<NodeParams> params, std::vector<Edge> edges, std::map<Edge, Rational> latencies)
    : params_(std::move(params)) {
    const int n = p();
    for (int i = 0; i < n; ++i) {
        const auto& q = params_[static_cast<std::size_t>(i)];
        if (q.k < 1 || q.r < 1 || q.delta < 0 || q.delta >= q.r)
            throw Error(ErrorKind::InvalidParams, "node " + std::to_string(i + 1) + " needs k >= 1 and r > delta >= 0");
    }
    std::set<Edge> seen;
    adj_.assign(static_cast<std::size_t>(n), {});
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw Error(ErrorKind::DanglingEdge, "edge references unknown node");
        if (a == b) throw Error(ErrorKind::DanglingEdge, "self-loop at node " + std::to_string(a + 1));
        Edge e = norm(a, b);
        if (!seen.insert(e).second) continue;
        edges_.push_back(e);
        adj_[static_cast<std::size_t>(a)].push_back(b);
        adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    std::sort(edges_.begin(), edges_.end());
    for (auto& v : adj_) std::sort(v.begin(), v.end());
    for (const auto& [e, t] : latencies) {
        Edge k = norm(e.first, e.second);
        if (!seen.count(k)) throw Error(ErrorKind::DanglingEdge, "latency given for a missing edge");
        if (t < 0) throw Error(ErrorKind::InvalidParams, "negative latency");
        auto [it, fresh] = latency_.emplace(k, t);
        if (!fresh && it->second != t) throw Error(ErrorKind::InvalidParams, "asymmetric latency");
    }
    if (!latency_.empty() && latency_.size() != edges_.size())
        throw Error(ErrorKind::InvalidParams, "latencies must be given for every edge");

    const auto un = static_cast<std::size_t>(n);
    std::vector<std::optional<Rational>> d(un * un);
    std::vector<int> h(un * un, -1);
    for (std::size_t i = 0; i < un; ++i) {
        d[i * un + i] = Rational(0);
        h[i * un + i] = 0;
    }
    for (auto [a, b] : edges_) {
        Rational w = latency_.empty() ? Rational(1) : latency_.at({a, b});
        auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        d[ua * un + ub] = d[ub * un + ua] = w;
        h[ua * un + ub] = h[ub * un + ua] = 1;
    }
    for (std::size_t k = 0; k < un; ++k)
        for (std::size_t i = 0; i < un; ++i) {
            if (!d[i * un + k]) continue;
            for (std::size_t j = 0; j < un; ++j) {
                if (!d[k * un + j]) continue;
                Rational via = *d[i * un + k] + *d[k * un + j];
                if (!d[i * un + j] || via < *d[i * un + j]) d[i * un + j] = via;
                int hv = h[i * un + k] + h[k * un + j];
                if (h[i * un + j] < 0 || hv < h[i * un + j]) h[i * un + j] = hv;
            }
        }
    dist_ = std::make_shared<const std::vector<std::optional<Rational>>>(std::move(d));
    hops_ = std::make_shared<const std::vector<int>>(std::move(h));
}

bool DsnGraph::has_edge(int i, int j) const {
    if (i < 0 || i >= p()) return false;
    return std::binary_search(adj_[static_cast<std::size_t>(i)].begin(), adj_[static_cast<std::size_t>(i)].end(), j);
}

std::optional<Rational> DsnGraph::latency(int i, int j) const {
    auto it = latency_.find(norm(i, j));
    if (it == latency_.end()) return std::nullopt;
    return it->second;
}

std::optional<Rational> DsnGraph::distance(int i, int j) const {
    return (*dist_)[static_cast<std::size_t>(i) * static_cast<std::size_t>(p()) + static_cast<std::size_t>(j)];
}

std::optional<int> DsnGraph::hops(int i, int j) const {
    int h = (*hops_)[static_cast<std::size_t>(i) * static_cast<std::size_t>(p()) + static_cast<std::size_t>(j)];
    if (h < 0) return std::nullopt;
    return h;
}

std::vector<std::vector<int>> max_cliques(const std::vector<std::vector<int>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (int j : adj[i]) {
            m[i][static_cast<std::size_t>(j)] = true;
            m[static_cast<std::size_t>(j)][i] = true;
        }
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> out;
    std::vector<int> r;
    bron_kerbosch(m, r, all, {}, out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> max_cliques(const DsnGraph& g) {
    std::vector<std::vector<int>> adj;
    for (int i = 0; i < g.p(); ++i) adj.push_back(g.neighbors(i));
    return max_cliques(adj);
}

std::vector<int> CoopCycle::X_of(int j) const {
    if (!triangle()) return X;
    std::vector<int> out;
    for (int i : X) {
        auto it = f.find(i);
        if (it == f.end() || it->second != j) out.push_back(i);
    }
    return out;
}

std::vector<int> CoopCycle::Y_of(int i) const {
    if (!triangle()) return Y;
    auto it = f.find(i);
    std::vector<int> out;
    for (int j : Y)
        if (it == f.end() || it->second != j) out.push_back(j);
    return out;
}

std::vector<Edge> CoopCycle::vertices() const {
    std::vector<Edge> out;
    for (int i : X)
        for (int j : Y_of(i)) out.emplace_back(i, j);
    return out;
}

bool ValidationReport::violates(int condition) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.condition == condition; });
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& v : violations) os << "condition " << v.condition << ": " << v.message << ' ' << ids_text(v.ids) << '\n';
    return os.str();
}

CoopGraph::CoopGraph(GraphPtr graph, std::vector<std::vector<int>> M, std::vector<CoopCycle> cycles)
    : graph_(std::move(graph)), M_(std::move(M)), cycles_(std::move(cycles)) {
    const int n = graph_->p();
    if (M_.empty())
        for (int i = 0; i < n; ++i) M_.push_back(graph_->neighbors(i));
    if (static_cast<int>(M_.size()) != n) throw Error(ErrorKind::InvalidParams, "M must list every node");
    for (auto& m : M_) {
        m = sorted_unique(m);
        for (int j : m)
            if (j < 0 || j >= n) throw Error(ErrorKind::DanglingEdge, "M references unknown node");
    }
    for (auto& c : cycles_) {
        c.X = sorted_unique(c.X);
        c.Y = sorted_unique(c.Y);
        for (int v : c.X)
            if (v < 0 || v >= n) throw Error(ErrorKind::DanglingEdge, "cycle references unknown node");
        for (int v : c.Y)
            if (v < 0 || v >= n) throw Error(ErrorKind::DanglingEdge, "cycle references unknown node");
    }
}

std::vector<int> CoopGraph::groups() const {
    std::vector<int> g;
    for (const auto& c : cycles_) g.push_back(c.group);
    return sorted_unique(g);
}

std::vector<int> CoopGraph::cycles_in_group(int g) const {
    std::vector<int> out;
    for (std::size_t t = 0; t < cycles_.size(); ++t)
        if (cycles_[t].group == g) out.push_back(static_cast<int>(t));
    return out;
}

std::vector<int> CoopGraph::groups_of(int j) const {
    std::vector<int> g;
    for (const auto& c : cycles_)
        if (contains(c.Y, j)) g.push_back(c.group);
    return sorted_unique(g);
}

std::vector<std::vector<int>> CoopGraph::cooperation_cliques() const { return max_cliques(M_); }

std::optional<std::vector<int>> CoopGraph::clique_of_group(int g) const {
    std::vector<int> need;
    for (int t : cycles_in_group(g)) need = set_union(need, cycles_[static_cast<std::size_t>(t)].Y);
    for (const auto& c : cooperation_cliques())
        if (is_subset(need, c)) return c;
    return std::nullopt;
}

std::vector<int> CoopGraph::U(int j, int g) const {
    std::vector<int> out;
    for (const auto& c : cycles_)
        if (c.group == g && contains(c.Y, j)) out = set_union(out, c.X_of(j));
    return out;
}

std::vector<int> CoopGraph::R(int j, int l) const {
    std::vector<int> out;
    for (std::size_t t = 0; t < cycles_.size(); ++t) {
        const auto& c = cycles_[t];
        auto it = c.level.find(j);
        if (contains(c.Y, j) && it != c.level.end() && it->second == l) out.push_back(static_cast<int>(t));
    }
    return out;
}

std::vector<int> CoopGraph::V(int j, int l) const {
    std::vector<int> out;
    for (int t : R(j, l)) out = set_union(out, cycles_[static_cast<std::size_t>(t)].X_of(j));
    return out;
}

std::optional<int> CoopGraph::mirror(int t) const {
    const auto& c = cycles_.at(static_cast<std::size_t>(t));
    for (std::size_t s = 0; s < cycles_.size(); ++s) {
        const auto& m = cycles_[s];
        if (m.X != c.Y || m.Y != c.X) continue;
        bool match = true;
        for (int i : c.X)
            if (m.X_of(i) != c.Y_of(i)) match = false;
        if (match) return static_cast<int>(s);
    }
    return std::nullopt;
}

std::optional<int> CoopGraph::row_level(int t, int i) const {
    auto m = mirror(t);
    if (!m) return std::nullopt;
    const auto& lv = cycles_[static_cast<std::size_t>(*m)].level;
    auto it = lv.find(i);
    if (it == lv.end()) return std::nullopt;
    return it->second;
}

std::vector<int> CoopGraph::row_cycles(int i) const {
    std::vector<int> out;
    for (std::size_t t = 0; t < cycles_.size(); ++t)
        if (contains(cycles_[t].X, i)) out.push_back(static_cast<int>(t));
    return out;
}

std::vector<int> CoopGraph::T(int i, int l) const {
    std::vector<int> out;
    for (int t : row_cycles(i))
        if (row_level(t, i) == l) out.push_back(t);
    return out;
}

std::optional<int> CoopGraph::group_at(int j, int l) const {
    std::vector<int> g;
    for (int t : R(j, l)) g.push_back(cycles_[static_cast<std::size_t>(t)].group);
    g = sorted_unique(g);
    if (g.size() != 1) return std::nullopt;
    return g.front();
}

std::vector<int> CoopGraph::column_levels(int j) const {
    std::vector<int> out;
    for (const auto& c : cycles_) {
        auto it = c.level.find(j);
        if (contains(c.Y, j) && it != c.level.end()) out.push_back(it->second);
    }
    return sorted_unique(out);
}

int CoopGraph::L(int i) const {
    int l = M(i).empty() ? 0 : 1;
    for (int v : column_levels(i)) l = std::max(l, v);
    return l;
}

ValidationReport validate_compatible(const CoopGraph& cg) {
    ValidationReport rep;
    const DsnGraph& g = cg.graph();
    auto add = [&](int cond, std::string msg, std::vector<int> ids) {
        rep.violations.push_back({cond, std::move(msg), std::move(ids)});
    };

    for (int i = 0; i < cg.p(); ++i)
        for (int j : cg.M(i)) {
            if (!g.has_edge(i, j)) add(1, "M_i contains a non-neighbor", {i, j});
            else if (!contains(cg.M(j), i)) add(1, "first-level cooperation is not symmetric", {i, j});
        }

    const auto& cycles = cg.cycles();
    std::vector<int> grp = cg.groups();
    for (std::size_t k = 0; k < grp.size(); ++k)
        if (grp[k] != static_cast<int>(k) + 1) {
            add(0, "group numbers must span 1..A", grp);
            break;
        }
    for (std::size_t t = 0; t < cycles.size(); ++t) {
        const auto& c = cycles[t];
        const int tid = static_cast<int>(t);
        if (c.X.size() != c.Y.size() || c.X.size() < 2 || c.X.size() > 3) {
            add(0, "cycle sides must both have size 2 or 3", {tid});
            continue;
        }
        std::vector<int> both;
        std::set_intersection(c.X.begin(), c.X.end(), c.Y.begin(), c.Y.end(), std::back_inserter(both));
        if (!both.empty()) add(0, "cycle sides overlap", both);
        if (c.triangle()) {
            std::set<int> image;
            bool ok = c.f.size() == 3;
            for (int i : c.X) {
                auto it = c.f.find(i);
                if (it == c.f.end() || !contains(c.Y, it->second)) ok = false;
                else image.insert(it->second);
            }
            if (!ok || image.size() != 3) add(0, "triangle cycle needs a bijection X -> Y", {tid});
        }
        for (int j : c.Y) {
            auto it = c.level.find(j);
            if (it == c.level.end() || it->second < 2) add(0, "every column needs a level >= 2", {tid, j});
        }
        for (auto [i, j] : c.vertices())
            if (g.has_edge(i, j)) add(0, "cycle vertex lies on an edge of G", {i, j});
    }

    std::map<Edge, int> owner;
    for (std::size_t t = 0; t < cycles.size(); ++t)
        for (auto v : cycles[t].vertices()) {
            auto [it, fresh] = owner.emplace(v, static_cast<int>(t));
            if (!fresh) add(2, "cycles share the vertex", {it->second, static_cast<int>(t), v.first, v.second});
        }

    for (int gid : grp)
        if (!cg.clique_of_group(gid)) add(3, "no maximum clique holds every Y_t of the group", {gid});

    for (int j = 0; j < cg.p(); ++j) {
        std::vector<int> levels = cg.column_levels(j);
        for (std::size_t k = 0; k < levels.size(); ++k)
            if (levels[k] != static_cast<int>(k) + 2) {
                add(4, "levels of node are not contiguous from 2", {j});
                break;
            }
        for (int l : levels) {
            auto gid = cg.group_at(j, l);
            if (!gid) {
                add(4, "level mixes several groups at node", {j, l});
                continue;
            }
            if (cg.V(j, l) != cg.U(j, *gid)) add(4, "V_{j;l} differs from U_{j;g}", {j, l, *gid});
        }
        for (int gid : cg.groups_of(j)) {
            std::set<int> lv;
            for (int t : cg.cycles_in_group(gid)) {
                const auto& c = cycles[static_cast<std::size_t>(t)];
                auto it = c.level.find(j);
                if (contains(c.Y, j) && it != c.level.end()) lv.insert(it->second);
            }
            if (lv.size() > 1) add(4, "group assigns several levels at node", {j, gid});
        }
    }

    for (std::size_t t = 0; t < cycles.size(); ++t)
        if (!cg.mirror(static_cast<int>(t))) add(5, "cycle has no mirror cycle", {static_cast<int>(t)});
    return rep;
}

std::vector<std::vector<int>> cooperation_matrix(const CoopGraph& cg) {
    ValidationReport rep = validate_compatible(cg);
    if (!rep.ok()) throw Error(ErrorKind::IncompatibleGraph, rep.summary());
    const auto n = static_cast<std::size_t>(cg.p());
    std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (int j : cg.M(static_cast<int>(i))) d[i][static_cast<std::size_t>(j)] = 1;
    for (const auto& c : cg.cycles())
        for (int i : c.Y)
            for (int j : c.X_of(i)) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c.level.at(i);
    return d;
}

std::vector<CoopCycle> assign_levels(const DsnGraph& g, std::vector<CoopCycle> cycles) {
    for (int i = 0; i < g.p(); ++i) {
        std::map<int, std::vector<int>> u;
        for (auto& c : cycles)
            if (contains(c.Y, i)) u[c.group] = set_union(u[c.group], c.X_of(i));
        std::vector<std::pair<Rational, int>> order;
        for (const auto& [gid, members] : u) {
            Rational total(0);
            for (int x : members) {
                auto d = g.distance(i, x);
                total += d ? *d : Rational(static_cast<long long>(g.p()) * 1000);
            }
            order.emplace_back(total / static_cast<long long>(members.size()), gid);
        }
        std::sort(order.begin(), order.end());
        std::map<int, int> level_of;
        for (std::size_t k = 0; k < order.size(); ++k) level_of[order[k].second] = static_cast<int>(k) + 2;
        for (auto& c : cycles)
            if (contains(c.Y, i)) c.level[i] = level_of[c.group];
    }
    return cycles;
}

namespace {

struct Candidate {
    std::vector<int> X;
    std::map<int, int> f;
};

// Bijections X -> Y leaving every unpaired cross pair outside E; sorted identity first.
std::vector<std::map<int, int>> admissible_matchings(const DsnGraph& g, const std::vector<int>& X,
                                                     const std::vector<int>& Y) {
    std::vector<std::map<int, int>> out;
    if (X.size() == 2) {
        for (int i : X)
            for (int j : Y)
                if (g.has_edge(i, j)) return out;
        out.emplace_back();
        return out;
    }
    std::vector<int> perm = Y;
    do {
        std::map<int, int> f;
        for (std::size_t k = 0; k < X.size(); ++k) f[X[k]] = perm[k];
        bool ok = true;
        for (int i : X)
            for (int j : Y)
                if (f[i] != j && g.has_edge(i, j)) ok = false;
        if (ok) out.push_back(f);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

void subsets_of_size(const std::vector<int>& s, std::size_t k, std::size_t start, std::vector<int>& cur,
                     std::set<std::vector<int>>& out) {
    if (cur.size() == k) {
        out.insert(cur);
        return;
    }
    for (std::size_t i = start; i < s.size(); ++i) {
        cur.push_back(s[i]);
        subsets_of_size(s, k, i + 1, cur, out);
        cur.pop_back();
    }
}

CoopCycle make_mirror(const CoopCycle& c, int group) {
    CoopCycle m;
    m.X = c.Y;
    m.Y = c.X;
    for (auto [i, j] : c.f) m.f[j] = i;
    m.group = group;
    return m;
}

}  // namespace

SearchResult search_cooperation_graph(GraphPtr graph, const SearchOptions& options) {
    const DsnGraph& g = *graph;
    CoopGraph base(graph, options.M);
    const auto cliques = base.cooperation_cliques();

    std::vector<CoopCycle> cycles;
    std::set<Edge> used;
    std::map<int, int> pinned_group;
    int next_group = 1;
    for (const auto& pc : options.pinned) {
        CoopCycle c;
        c.X = sorted_unique(pc.X);
        c.Y = sorted_unique(pc.Y);
        c.f = pc.f;
        auto it = pinned_group.find(pc.group_key);
        if (it == pinned_group.end()) it = pinned_group.emplace(pc.group_key, next_group++).first;
        c.group = it->second;
        for (auto v : c.vertices()) used.insert(v);
        cycles.push_back(std::move(c));
    }

    std::map<std::size_t, std::set<std::vector<int>>> pieces;  // cliques of size 2 and 3 in the cooperation graph
    for (std::size_t k : {std::size_t{2}, std::size_t{3}})
        for (const auto& c : cliques) {
            std::vector<int> cur;
            subsets_of_size(c, k, 0, cur, pieces[k]);
        }

    auto avg_distance = [&](const std::vector<int>& a, const std::vector<int>& b) {
        Rational total(0);
        for (int x : a)
            for (int y : b) {
                auto d = g.distance(x, y);
                total += d ? *d : Rational(static_cast<long long>(g.p()) * 1000);
            }
        return total / static_cast<long long>(a.size() * b.size());
    };

    SearchResult result{base, 0, 0, {}};
    for (const auto& S : cliques) {
        const int groups = options.a ? options.a(S) : 0;
        for (int gi = 0; gi < groups; ++gi) {
            const int want = options.b ? options.b(S, gi) : 1;
            const int gid = next_group++;
            int made = 0;
            result.requested += want;
            for (int ci = 0; ci < want; ++ci) {
                std::vector<std::size_t> sizes = options.prefer_triangles ? std::vector<std::size_t>{3, 2}
                                                                          : std::vector<std::size_t>{2, 3};
                bool placed = false;
                for (std::size_t sz : sizes) {
                    if (placed || S.size() < sz) continue;
                    std::set<std::vector<int>> ys;
                    std::vector<int> cur;
                    subsets_of_size(S, sz, 0, cur, ys);
                    for (const auto& Y : ys) {
                        std::vector<std::pair<Rational, Candidate>> cands;
                        for (const auto& X : pieces[sz]) {
                            std::vector<int> both;
                            std::set_intersection(X.begin(), X.end(), Y.begin(), Y.end(), std::back_inserter(both));
                            if (!both.empty()) continue;
                            for (auto& f : admissible_matchings(g, X, Y)) {
                                CoopCycle c{X, Y, f, 0, {}};
                                CoopCycle m = make_mirror(c, 0);
                                bool clash = false;
                                for (auto v : c.vertices()) clash = clash || used.count(v);
                                for (auto v : m.vertices()) clash = clash || used.count(v);
                                if (clash) continue;
                                cands.emplace_back(avg_distance(X, Y), Candidate{X, f});
                                break;
                            }
                        }
                        if (cands.empty()) continue;
                        std::stable_sort(cands.begin(), cands.end(),
                                         [](const auto& a, const auto& b) { return a.first < b.first; });
                        const Candidate& pick = cands.front().second;
                        CoopCycle c{pick.X, Y, pick.f, gid, {}};
                        CoopCycle m = make_mirror(c, 0);
                        for (auto v : c.vertices()) used.insert(v);
                        for (auto v : m.vertices()) used.insert(v);
                        cycles.push_back(c);
                        cycles.push_back(m);
                        placed = true;
                        ++made;
                        break;
                    }
                }
            }
            if (made == 0) --next_group;
            result.created += made;
        }
    }

    // Mirror cycles each get their own group, numbered after the primaries.
    for (auto& c : cycles)
        if (c.group == 0) c.group = next_group++;

    std::map<int, int> renumber;
    for (const auto& c : cycles) renumber.emplace(c.group, 0);
    int k = 1;
    for (auto& [old, fresh] : renumber) fresh = k++;
    for (auto& c : cycles) c.group = renumber[c.group];

    cycles = assign_levels(g, std::move(cycles));
    result.coop = CoopGraph(graph, base.all_M(), cycles);
    for (std::size_t t = 0; t < cycles.size(); ++t)
        for (int i : cycles[t].X) {
            std::set<int> lv;
            for (int j : cycles[t].Y_of(i)) lv.insert(cycles[t].level.at(j));
            if (lv.size() > 1)
                result.conflicts.push_back({static_cast<int>(t), i, std::vector<int>(lv.begin(), lv.end())});
        }
    return result;
}

}  // namespace hiercode
