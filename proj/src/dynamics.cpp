#include "hiercode/dynamics.hpp"

#include <algorithm>
#include <set>

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

using Ind = CauchyIndicators;

// Next `count` nonzero powers after the largest one used by ind, wrapping and skipping used values.
std::vector<Elem> power_tail(const Field& f, const Ind& ind, std::size_t count) {
    std::set<std::uint32_t> used;
    long long top = 0;
    for (const auto* side : {&ind.rows, &ind.cols})
        for (Elem e : *side) {
            used.insert(e.value);
            if (!e.is_zero()) top = std::max<long long>(top, f.log(e));
        }
    std::vector<Elem> out;
    const long long order = f.order();
    for (long long step = 1; step <= order && out.size() < count; ++step) {
        Elem e = f.beta_pow((top + step) % order);
        if (used.insert(e.value).second) out.push_back(e);
    }
    if (out.size() < count) throw Error(ErrorKind::FieldTooSmall, "no unused field elements left for new indicators");
    return out;
}

void require_single_level(const HierCode& code) {
    if (code.multi_level()) throw Error(ErrorKind::MultiLevelUnsupported, "add/split is defined for first-level codes only");
}

void require_codewords(const HierCode& code, const Codewords& c) {
    if (static_cast<int>(c.size()) != code.p()) throw Error(ErrorKind::LengthMismatch, "one codeword per node expected");
    for (int i = 0; i < code.p(); ++i)
        if (static_cast<int>(c[static_cast<std::size_t>(i)].size()) != code.n(i))
            throw Error(ErrorKind::LengthMismatch, "codeword " + std::to_string(i + 1) + " has the wrong length");
}

Messages systematic(const HierCode& code, const Codewords& c) {
    Messages m;
    for (int i = 0; i < code.p(); ++i) {
        const Vec& ci = c[static_cast<std::size_t>(i)];
        m.emplace_back(ci.begin(), ci.begin() + code.k(i));
    }
    return m;
}

Vec slice(const Vec& v, std::size_t from, std::size_t count) {
    return Vec(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + count));
}

Vec concat(Vec a, const Vec& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<Elem> pick(const std::vector<Elem>& v, std::size_t from, std::size_t count) { return slice(v, from, count); }

std::vector<Elem> cols_of_block(const HierCode& code, int i, int j) {
    auto blk = code.first_block(i, j);
    if (!blk) return {};
    return pick(code.indicators(i).cols, blk->offset, blk->width);
}

std::vector<CauchyIndicators> all_indicators(const HierCode& code) {
    std::vector<CauchyIndicators> ind;
    for (int i = 0; i < code.p(); ++i) ind.push_back(code.indicators(i));
    return ind;
}

HierCode rebuild(const HierCode& code, GraphPtr g, std::vector<std::vector<int>> M, std::vector<CauchyIndicators> ind) {
    CoopGraph coop(std::move(g), std::move(M));
    const bool ok = validate_compatible(coop).ok();
    return HierCode(code.field(), std::move(coop), std::move(ind), {}, ok);
}

}  // namespace

DynamicResult add_node(const HierCode& code, const Codewords& codewords, const NodeAdditionPlan& plan,
                       const Vec& message) {
    require_single_level(code);
    require_codewords(code, codewords);
    const int p = code.p();
    const Field& f = *code.field();
    std::vector<int> nb = plan.neighbors;
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (int j : nb)
        if (j < 0 || j >= p) throw Error(ErrorKind::DanglingEdge, "new node neighbour out of range");
    if (static_cast<int>(message.size()) != plan.params.k)
        throw Error(ErrorKind::LengthMismatch, "new message must have k symbols");

    const DsnGraph& g = code.graph();
    auto params = g.all_params();
    params.push_back(plan.params);
    auto edges = g.edges();
    auto lat = g.latencies();
    for (int j : nb) {
        edges.emplace_back(j, p);
        if (g.has_latencies()) {
            auto it = plan.latencies.find(j);
            if (it == plan.latencies.end()) throw Error(ErrorKind::InvalidParams, "latency missing for a new link");
            lat[{j, p}] = it->second;
        }
    }
    auto graph = std::make_shared<const DsnGraph>(std::move(params), std::move(edges), std::move(lat));

    auto M = code.coop().all_M();
    for (int j : nb) M[static_cast<std::size_t>(j)].push_back(p);
    M.push_back(nb);

    auto ind = all_indicators(code);
    const std::size_t dnew = static_cast<std::size_t>(plan.params.delta);
    for (int j : nb) {
        Ind& x = ind[static_cast<std::size_t>(j)];
        const std::size_t grow_rows = code.slot_total(j) == 0 ? static_cast<std::size_t>(code.delta(j)) : 0;
        auto fresh = power_tail(f, x, grow_rows + dnew);
        x.rows.insert(x.rows.end(), fresh.begin(), fresh.begin() + static_cast<std::ptrdiff_t>(grow_rows));
        x.cols.insert(x.cols.end(), fresh.begin() + static_cast<std::ptrdiff_t>(grow_rows), fresh.end());
    }
    ind.push_back(plan.indicators.value_or(Ind{}));

    DynamicResult out{rebuild(code, graph, std::move(M), std::move(ind)), codewords, systematic(code, codewords), nb};
    out.messages.push_back(message);

    for (int j : nb) {
        if (out.code.slot_total(j) == 0) continue;
        Vec add = vec_mul(vec_mul(message, out.code.B(p, j)), out.code.U(j));
        Vec& cj = out.codewords[static_cast<std::size_t>(j)];
        for (std::size_t a = 0; a < add.size(); ++a)
            cj[static_cast<std::size_t>(code.k(j)) + a] = f.add(cj[static_cast<std::size_t>(code.k(j)) + a], add[a]);
    }
    Vec parity = vec_mul(message, out.code.A(p));
    if (out.code.slot_total(p) > 0) {
        Vec s = vec_zero(static_cast<std::size_t>(plan.params.delta));
        for (int j : nb) s = vec_add(f, s, vec_mul(out.messages[static_cast<std::size_t>(j)], out.code.B(j, p)));
        parity = vec_add(f, parity, vec_mul(s, out.code.U(p)));
    }
    out.codewords.push_back(concat(message, parity));
    out.touched = nb;
    out.touched.push_back(p);
    return out;
}

DynamicResult split_node(const HierCode& code, const Codewords& codewords, const NodeSplitPlan& plan) {
    require_single_level(code);
    require_codewords(code, codewords);
    const int p = code.p(), i = plan.target;
    if (i < 0 || i >= p) throw Error(ErrorKind::InvalidSplit, "split target out of range");
    const NodeParams& q = code.graph().params(i);
    const NodeParams &a = plan.a, &b = plan.b;
    if (a.k + b.k != q.k || a.r + b.r != q.r || a.delta + b.delta != q.delta)
        throw Error(ErrorKind::InvalidSplit, "k, r and delta must split additively");
    if (a.k < 1 || b.k < 1 || a.delta < 0 || b.delta < 0 || a.r <= a.delta || b.r <= b.delta)
        throw Error(ErrorKind::InvalidSplit, "each half needs k >= 1 and r > delta");
    const Field& f = *code.field();
    const auto ka = static_cast<std::size_t>(a.k), ra = static_cast<std::size_t>(a.r);
    const auto da = static_cast<std::size_t>(a.delta), db = static_cast<std::size_t>(b.delta);
    const auto k = static_cast<std::size_t>(q.k), r = static_cast<std::size_t>(q.r);
    const auto d = static_cast<std::size_t>(q.delta);

    // Cross-parity sum held by i.
    const Vec& ci = codewords[static_cast<std::size_t>(i)];
    const Vec mi = slice(ci, 0, k);
    Vec s = vec_zero(d);
    Ind ti = code.indicators(i);
    if (code.slot_total(i) > 0) {
        Vec rhs = vec_add(f, slice(ci, k, r), vec_mul(mi, code.A(i)));
        AffineSolution sol = solve_affine(code.U(i).transpose(), rhs);
        if (!sol.consistent) throw Error(ErrorKind::InconsistentRecovery, "stored parity of the split node is inconsistent");
        if (!sol.all_determined()) throw Error(ErrorKind::UnderdeterminedS, "cross-parity sum is not uniquely determined");
        s = sol.values;
    } else {
        auto fresh = power_tail(f, ti, d);
        ti.rows.insert(ti.rows.end(), fresh.begin(), fresh.end());
    }

    const DsnGraph& g = code.graph();
    auto params = g.all_params();
    params[static_cast<std::size_t>(i)] = a;
    params.push_back(b);
    auto edges = g.edges();
    auto lat = g.latencies();
    edges.emplace_back(i, p);
    if (g.has_latencies()) lat[{i, p}] = plan.latency.value_or(Rational(0));
    for (int j : g.neighbors(i)) {
        edges.emplace_back(j, p);
        if (g.has_latencies()) lat[{std::min(j, p), std::max(j, p)}] = *g.latency(i, j);
    }
    auto graph = std::make_shared<const DsnGraph>(std::move(params), std::move(edges), std::move(lat));

    auto M = code.coop().all_M();
    const std::vector<int> Mi = M[static_cast<std::size_t>(i)];
    for (int j = 0; j < p; ++j)
        if (j != i && std::count(M[static_cast<std::size_t>(j)].begin(), M[static_cast<std::size_t>(j)].end(), i))
            M[static_cast<std::size_t>(j)].push_back(p);
    M[static_cast<std::size_t>(i)].push_back(p);
    std::vector<int> Mb = Mi;
    Mb.push_back(i);
    std::sort(Mb.begin(), Mb.end());
    M.push_back(Mb);

    auto ind = all_indicators(code);
    const std::size_t first_end = r + [&] {
        std::size_t w = 0;
        for (const auto& blk : code.blocks(i)) w += blk.width;
        return w;
    }();
    Ind ia, ib;
    ia.rows = concat(pick(ti.rows, 0, ka), pick(ti.rows, k, da));
    ia.cols = concat(concat(pick(ti.cols, 0, ra), pick(ti.cols, r, first_end - r)), pick(ti.cols, ra, db));
    ib.rows = concat(pick(ti.rows, ka, k - ka), pick(ti.rows, k + da, db));
    ib.cols = pick(ti.cols, ra, r - ra);
    for (int j : Mb)
        ib.cols = concat(ib.cols, j == i ? pick(ti.cols, 0, da) : cols_of_block(code, i, j));
    ind[static_cast<std::size_t>(i)] = ia;
    for (int j = 0; j < p; ++j) {
        if (j == i) continue;
        auto blk = code.first_block(j, i);
        if (!blk || db == 0) continue;
        auto& cols = ind[static_cast<std::size_t>(j)].cols;
        auto from = cols.begin() + static_cast<std::ptrdiff_t>(blk->offset + da);
        std::vector<Elem> moved(from, from + static_cast<std::ptrdiff_t>(db));
        cols.erase(from, from + static_cast<std::ptrdiff_t>(db));
        cols.insert(cols.end(), moved.begin(), moved.end());
    }
    ind.push_back(ib);

    DynamicResult out{rebuild(code, graph, std::move(M), std::move(ind)), codewords, systematic(code, codewords), {i, p}};
    const Vec ma = slice(mi, 0, ka), mb = slice(mi, ka, k - ka);
    out.messages[static_cast<std::size_t>(i)] = ma;
    out.messages.push_back(mb);
    const HierCode& nc = out.code;

    auto stored = [&](int node, const Vec& m, const Vec& slot) {
        Vec par = vec_mul(m, nc.A(node));
        if (nc.slot_total(node) > 0) par = vec_add(f, par, vec_mul(slot, nc.U(node)));
        return concat(m, par);
    };
    Vec sa = slice(s, 0, da), sb = slice(s, da, db);
    if (da > 0) sa = vec_add(f, sa, vec_mul(mb, nc.B(p, i)));
    if (db > 0) sb = vec_add(f, sb, vec_mul(ma, nc.B(i, p)));
    out.codewords[static_cast<std::size_t>(i)] = stored(i, ma, sa);
    out.codewords.push_back(stored(p, mb, sb));
    return out;
}

}  // namespace hiercode
