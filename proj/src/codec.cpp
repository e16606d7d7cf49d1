#include "hiercode/codec.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> unite(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return sorted_unique(out);
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    for (int x : a)
        if (!contains(b, x)) out.push_back(x);
    return out;
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::all_of(a.begin(), a.end(), [&](int x) { return contains(b, x); });
}

Vec truncated(const Vec& v, std::size_t n) {
    Vec out(n);
    for (std::size_t i = 0; i < n && i < v.size(); ++i) out[i] = v[i];
    return out;
}

void add_into(const Field& f, Vec& acc, const Vec& x) {
    if (acc.size() < x.size()) acc.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] = f.add(acc[i], x[i]);
}

std::optional<Rational> hop(const DsnGraph& g, int a, int b) { return g.distance(a, b); }

}  // namespace

HierCode::HierCode(FieldPtr field, CoopGraph coop, std::vector<CauchyIndicators> indicators,
                   std::map<std::pair<int, int>, int> gammas, bool compatible)
    : field_(std::move(field)), coop_(std::move(coop)), gammas_(std::move(gammas)), compatible_(compatible) {
    const int p = coop_.p();
    if (static_cast<int>(indicators.size()) != p) indicators.resize(static_cast<std::size_t>(p));
    nodes_.resize(static_cast<std::size_t>(p));
    const auto& cyc = coop_.cycles();
    for (int t = 0; t < static_cast<int>(cyc.size()); ++t)
        for (int x : cyc[static_cast<std::size_t>(t)].X) {
            auto it = gammas_.find({x, t});
            if (it == gammas_.end()) it = gammas_.emplace(std::pair{x, t}, 1).first;
            if (it->second < 1) throw Error(ErrorKind::InvalidParams, "gamma must be >= 1");
        }

    for (int i = 0; i < p; ++i) {
        Node& nd = nodes_[static_cast<std::size_t>(i)];
        const NodeParams& q = graph().params(i);
        const int L = coop_.L(i);
        nd.width.assign(static_cast<std::size_t>(std::max(L, 1)) + 1, 0);
        nd.width[1] = coop_.M(i).empty() ? 0 : q.delta;
        for (int l = 2; l <= L; ++l) {
            int w = 0;
            for (int t : coop_.R(i, l))
                for (int x : cyc[static_cast<std::size_t>(t)].X_of(i)) w = std::max(w, gamma(x, t));
            nd.width[static_cast<std::size_t>(l)] = w;
        }
        if (L < 1) nd.width.resize(2);
        int total = std::accumulate(nd.width.begin() + 1, nd.width.end(), 0);
        if (q.r - total < 0)
            throw Error(ErrorKind::InvalidParams,
                        "node " + std::to_string(i + 1) + ": r_i must cover delta_i plus all eta_{i;l}");
        std::size_t col = static_cast<std::size_t>(q.r);
        for (int j : coop_.M(i)) {
            std::size_t w = static_cast<std::size_t>(graph().params(j).delta);
            if (w == 0) continue;
            nd.blocks.push_back({ColBlock::Kind::First, j, col, w});
            col += w;
        }
        std::vector<std::pair<int, int>> rows;
        for (int t : coop_.row_cycles(i)) rows.emplace_back(coop_.row_level(t, i).value_or(1 << 20), t);
        std::sort(rows.begin(), rows.end());
        for (auto [lvl, t] : rows) {
            std::size_t w = static_cast<std::size_t>(gamma(i, t));
            nd.blocks.push_back({ColBlock::Kind::Cycle, t, col, w});
            col += w;
        }
        const std::size_t u = static_cast<std::size_t>(q.k + total), v = col;
        CauchyIndicators& ind = indicators[static_cast<std::size_t>(i)];
        if (ind.rows.empty() && ind.cols.empty()) {
            if (u + v > field_->order())
                throw Error(ErrorKind::FieldTooSmall, "node " + std::to_string(i + 1) + " needs " +
                                                          std::to_string(u + v) + " indicators, field has " +
                                                          std::to_string(field_->order()) + " nonzero elements");
            for (std::size_t a = 1; a <= u; ++a) ind.rows.push_back(field_->beta_pow(static_cast<long long>(a)));
            for (std::size_t b = 1; b <= v; ++b) ind.cols.push_back(field_->beta_pow(static_cast<long long>(u + b)));
        } else if (ind.rows.size() != u || ind.cols.size() != v) {
            throw Error(ErrorKind::DimensionMismatch, "node " + std::to_string(i + 1) + " indicators must be " +
                                                          std::to_string(u) + " rows and " + std::to_string(v) +
                                                          " columns");
        }
        nd.ind = ind;
        nd.T = Matrix::cauchy(field_, ind);
        nd.A = nd.T.block(0, static_cast<std::size_t>(q.k), 0, static_cast<std::size_t>(q.r));
        nd.S = nd.T.block(static_cast<std::size_t>(q.k), static_cast<std::size_t>(total), 0,
                          static_cast<std::size_t>(q.r));
    }

    for (int j = 0; j < p; ++j) {
        Node& nd = nodes_[static_cast<std::size_t>(j)];
        if (nd.width[1] > 0)
            for (int x : coop_.M(j)) nd.contrib.push_back({x, 1, -1, B(x, j)});
        for (int t = 0; t < static_cast<int>(cyc.size()); ++t) {
            const auto& c = cyc[static_cast<std::size_t>(t)];
            if (!contains(c.Y, j)) continue;
            const int l = c.level.at(j);
            const std::size_t eta = static_cast<std::size_t>(nd.width.at(static_cast<std::size_t>(l)));
            for (int x : c.X_of(j)) {
                Matrix e = E(x, t);
                Matrix pad = Matrix::zeros(field_, e.rows(), eta - e.cols());
                nd.contrib.push_back({x, l, t, hcat({e, pad})});
            }
        }
    }
}

int HierCode::gamma(int i, int t) const {
    auto it = gammas_.find({i, t});
    if (it == gammas_.end()) throw Error(ErrorKind::InvalidParams, "no gamma for this (node, cycle)");
    return it->second;
}

int HierCode::slot_width(int i, int level) const {
    const auto& w = node(i).width;
    if (level < 1 || level >= static_cast<int>(w.size())) return 0;
    return w[static_cast<std::size_t>(level)];
}

int HierCode::slot_total(int i) const {
    const auto& w = node(i).width;
    return std::accumulate(w.begin() + 1, w.end(), 0);
}

std::size_t HierCode::slot_offset(int i, int level) const {
    std::size_t off = 0;
    for (int l = 1; l < level; ++l) off += static_cast<std::size_t>(slot_width(i, l));
    return off;
}

Matrix HierCode::U(int i) const {
    return S(i).block(0, static_cast<std::size_t>(slot_width(i, 1)), 0, static_cast<std::size_t>(r(i)));
}

Matrix HierCode::V(int i, int level) const {
    return S(i).block(slot_offset(i, level), static_cast<std::size_t>(slot_width(i, level)), 0,
                      static_cast<std::size_t>(r(i)));
}

std::optional<ColBlock> HierCode::first_block(int i, int j) const {
    for (const auto& b : blocks(i))
        if (b.kind == ColBlock::Kind::First && b.key == j) return b;
    return std::nullopt;
}

std::optional<ColBlock> HierCode::cycle_block(int i, int t) const {
    for (const auto& b : blocks(i))
        if (b.kind == ColBlock::Kind::Cycle && b.key == t) return b;
    return std::nullopt;
}

Matrix HierCode::B(int i, int j) const {
    const auto ki = static_cast<std::size_t>(k(i));
    if (auto b = first_block(i, j)) return T(i).block(0, ki, b->offset, b->width);
    if (contains(coop_.M(i), j)) return Matrix::zeros(field_, ki, 0);
    throw Error(ErrorKind::InvalidParams, "nodes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                              " do not cooperate at the first level");
}

Matrix HierCode::E(int i, int t) const {
    auto b = cycle_block(i, t);
    if (!b) throw Error(ErrorKind::InvalidParams, "node is not a row of this cycle");
    return T(i).block(0, static_cast<std::size_t>(k(i)), b->offset, b->width);
}

Matrix HierCode::cross(int i, int j) const {
    Matrix out = Matrix::zeros(field_, static_cast<std::size_t>(k(i)), static_cast<std::size_t>(r(j)));
    for (const auto& c : contributions(j))
        if (c.from == i) out = out + c.block * V(j, c.level);
    return out;
}

Matrix HierCode::generator() const {
    std::vector<Matrix> rows;
    for (int x = 0; x < p(); ++x) {
        std::vector<Matrix> parts;
        const auto kx = static_cast<std::size_t>(k(x));
        for (int j = 0; j < p(); ++j) {
            const auto kj = static_cast<std::size_t>(k(j));
            if (x == j) {
                parts.push_back(Matrix::identity(field_, kx));
                parts.push_back(A(j));
            } else {
                parts.push_back(Matrix::zeros(field_, kx, kj));
                parts.push_back(cross(x, j));
            }
        }
        rows.push_back(hcat(parts));
    }
    return vcat(rows);
}

namespace {

void validate_structure(const ValidationReport& rep) {
    for (const auto& v : rep.violations)
        if (v.condition == 0 || v.condition == 1) throw Error(ErrorKind::IncompatibleGraph, rep.summary());
}

HierCode build(FieldPtr field, const CoopGraph& coop, const BuildOptions& options) {
    ValidationReport rep = validate_compatible(coop);
    validate_structure(rep);
    if (options.require_compatible && !rep.ok()) throw Error(ErrorKind::IncompatibleGraph, rep.summary());
    std::map<std::pair<int, int>, int> gammas;
    for (int t = 0; t < static_cast<int>(coop.cycles().size()); ++t) {
        auto it = options.cycle_gamma.find(t);
        int g = it == options.cycle_gamma.end() ? options.default_gamma : it->second;
        for (int x : coop.cycle(t).X) gammas[{x, t}] = g;
    }
    std::vector<CauchyIndicators> ind(static_cast<std::size_t>(coop.p()));
    for (const auto& [i, v] : options.indicators) {
        if (i < 0 || i >= coop.p()) throw Error(ErrorKind::InvalidParams, "indicators for unknown node");
        ind[static_cast<std::size_t>(i)] = v;
    }
    return HierCode(std::move(field), coop, std::move(ind), std::move(gammas), rep.ok());
}

}  // namespace

HierCode build_single_level(FieldPtr field, GraphPtr graph, const BuildOptions& options,
                            std::vector<std::vector<int>> M) {
    return build(std::move(field), CoopGraph(std::move(graph), std::move(M)), options);
}

HierCode build_multi_level(FieldPtr field, const CoopGraph& coop, const BuildOptions& options) {
    return build(std::move(field), coop, options);
}

std::vector<std::vector<Vec>> slot_values(const HierCode& code, const Messages& m) {
    if (static_cast<int>(m.size()) != code.p()) throw Error(ErrorKind::LengthMismatch, "one message per node");
    for (int i = 0; i < code.p(); ++i)
        if (static_cast<int>(m[static_cast<std::size_t>(i)].size()) != code.k(i))
            throw Error(ErrorKind::LengthMismatch, "message of node " + std::to_string(i + 1) + " must have k_i symbols");
    const Field& f = *code.field();
    std::vector<std::vector<Vec>> s(static_cast<std::size_t>(code.p()));
    for (int j = 0; j < code.p(); ++j) {
        auto& sj = s[static_cast<std::size_t>(j)];
        sj.resize(static_cast<std::size_t>(code.L(j)) + 1);
        for (int l = 1; l <= code.L(j); ++l)
            sj[static_cast<std::size_t>(l)] = vec_zero(static_cast<std::size_t>(code.slot_width(j, l)));
        for (const auto& c : code.contributions(j))
            add_into(f, sj[static_cast<std::size_t>(c.level)], vec_mul(m[static_cast<std::size_t>(c.from)], c.block));
    }
    return s;
}

Codewords encode(const HierCode& code, const Messages& m) {
    auto s = slot_values(code, m);
    const Field& f = *code.field();
    Codewords out;
    for (int j = 0; j < code.p(); ++j) {
        const Vec& mj = m[static_cast<std::size_t>(j)];
        Vec parity = vec_mul(mj, code.A(j));
        Vec stacked;
        for (int l = 1; l <= code.L(j); ++l) {
            const Vec& x = s[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
            stacked.insert(stacked.end(), x.begin(), x.end());
        }
        if (!stacked.empty()) parity = vec_add(f, parity, vec_mul(stacked, code.S(j)));
        Vec c = mj;
        c.insert(c.end(), parity.begin(), parity.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::pair<int, int>> group_slots(const HierCode& code, int g) {
    std::set<std::pair<int, int>> out;
    for (int t : code.coop().cycles_in_group(g)) {
        const auto& c = code.coop().cycle(t);
        for (int j : c.Y) out.emplace(j, c.level.at(j));
    }
    return {out.begin(), out.end()};
}

int group_pad_width(const HierCode& code, int g) {
    int w = 0;
    for (auto [j, l] : group_slots(code, g)) w = std::max(w, code.slot_width(j, l));
    return w;
}

ParityChecks parity_checks(const HierCode& code, int i) {
    const FieldPtr& f = code.field();
    const auto k = static_cast<std::size_t>(code.k(i)), r = static_cast<std::size_t>(code.r(i));
    const auto v = static_cast<std::size_t>(code.v(i));
    ParityChecks out;
    out.local = vcat({code.A(i), Matrix::identity(f, r), code.S(i)}).transpose();
    Matrix top = code.T(i).block(0, k, 0, v);
    Matrix bottom = hcat({Matrix::identity(f, r), Matrix::zeros(f, r, v - r)});
    out.global = vcat({top, bottom}).transpose();
    return out;
}

NodeDecode solve_node(const HierCode& code, int i, const Received& rx, const std::map<int, KnownSlot>& slots,
                      const std::vector<Extra>& extras) {
    const Field& f = *code.field();
    const auto k = static_cast<std::size_t>(code.k(i)), r = static_cast<std::size_t>(code.r(i));
    if (rx.values.size() != k + r || rx.erased.size() != k + r)
        throw Error(ErrorKind::LengthMismatch, "received word of node " + std::to_string(i + 1) + " must have n_i symbols");
    const Matrix& A = code.A(i);
    const Matrix& S = code.S(i);
    const Matrix& T = code.T(i);

    std::vector<std::size_t> erased_m;
    for (std::size_t a = 0; a < k; ++a)
        if (rx.erased[a]) erased_m.push_back(a);
    struct Unknown {
        int level;
        std::size_t row;  // row inside S
        std::size_t width;
    };
    std::vector<Unknown> unknown_slots;
    std::size_t n_unknown = erased_m.size();
    int used_level = 0;
    for (int l = 1; l <= code.L(i); ++l) {
        const auto w = static_cast<std::size_t>(code.slot_width(i, l));
        if (w == 0) continue;
        auto it = slots.find(l);
        if (it != slots.end()) {
            if (it->second.values.size() != w) throw Error(ErrorKind::LengthMismatch, "slot width mismatch");
            used_level = std::max(used_level, l);
            continue;
        }
        unknown_slots.push_back({l, code.slot_offset(i, l), w});
        n_unknown += w;
    }

    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t c = 0; c < r; ++c) {
        if (rx.erased[k + c]) continue;
        Vec row(n_unknown);
        std::size_t col = 0;
        for (std::size_t a : erased_m) row[col++] = A(a, c);
        for (const auto& us : unknown_slots)
            for (std::size_t b = 0; b < us.width; ++b) row[col++] = S(us.row + b, c);
        Elem b = rx.values[k + c];
        for (std::size_t a = 0; a < k; ++a)
            if (!rx.erased[a]) b = f.add(b, f.mul(rx.values[a], A(a, c)));
        for (const auto& [l, ks] : slots) {
            const std::size_t off = code.slot_offset(i, l);
            for (std::size_t x = 0; x < ks.values.size(); ++x) b = f.add(b, f.mul(ks.values[x], S(off + x, c)));
        }
        rows.push_back(std::move(row));
        rhs.push_back(b);
    }
    for (const auto& e : extras) {
        used_level = std::max(used_level, e.level);
        for (std::size_t w = 0; w < e.values.size(); ++w) {
            const std::size_t col = e.offset + w;
            Vec row(n_unknown);
            std::size_t idx = 0;
            for (std::size_t a : erased_m) row[idx++] = T(a, col);
            Elem b = e.values[w];
            for (std::size_t a = 0; a < k; ++a)
                if (!rx.erased[a]) b = f.add(b, f.mul(rx.values[a], T(a, col)));
            rows.push_back(std::move(row));
            rhs.push_back(b);
        }
    }
    Vec data;
    for (const auto& row : rows) data.insert(data.end(), row.begin(), row.end());
    AffineSolution sol = solve_affine(Matrix(code.field(), rows.size(), n_unknown, std::move(data)), rhs);

    NodeDecode out;
    out.level = used_level;
    if (!sol.consistent) {
        out.status = DecodeStatus::Inconsistent;
        return out;
    }
    bool m_ok = true;
    for (std::size_t x = 0; x < erased_m.size(); ++x) m_ok = m_ok && sol.determined[x];
    for (const auto& [l, ks] : slots) out.slots[l] = ks.values;
    std::size_t col = erased_m.size();
    for (const auto& us : unknown_slots) {
        bool all = true;
        Vec vals(us.width);
        for (std::size_t b = 0; b < us.width; ++b) {
            all = all && sol.determined[col + b];
            vals[b] = sol.values[col + b];
        }
        if (all) out.slots[us.level] = vals;
        col += us.width;
    }
    if (!m_ok) return out;
    out.status = DecodeStatus::Recovered;
    out.message.assign(rx.values.begin(), rx.values.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t x = 0; x < erased_m.size(); ++x) out.message[erased_m[x]] = sol.values[x];
    return out;
}

std::size_t Ledger::extra_count(int i, std::optional<ColBlock::Kind> kind) const {
    std::size_t n = 0;
    for (const auto& e : extras.at(static_cast<std::size_t>(i)))
        if (!kind || e.kind == *kind) ++n;
    return n;
}

Ledger cross_parity_ledger(const HierCode& code, const std::map<int, RecoveredNode>& recovered) {
    const Field& f = *code.field();
    const DsnGraph& g = code.graph();
    const int p = code.p();
    Ledger led;
    led.slots.resize(static_cast<std::size_t>(p));
    led.extras.resize(static_cast<std::size_t>(p));
    led.recovered.assign(static_cast<std::size_t>(p), false);
    for (const auto& [j, rn] : recovered) led.recovered[static_cast<std::size_t>(j)] = true;
    auto is_rec = [&](int x) { return led.recovered[static_cast<std::size_t>(x)]; };
    auto rec_time = [&](int x) { return recovered.at(x).time; };

    for (const auto& [j, rn] : recovered) {
        if (static_cast<int>(rn.message.size()) != code.k(j))
            throw Error(ErrorKind::LengthMismatch, "recovered message has the wrong length");
        Received rx = rn.codeword;
        for (std::size_t a = 0; a < rn.message.size(); ++a) {
            if (!rx.erased[a] && rx.values[a] != rn.message[a])
                throw Error(ErrorKind::InconsistentRecovery,
                            "message of node " + std::to_string(j + 1) + " contradicts its stored symbols");
            rx.values[a] = rn.message[a];
            rx.erased[a] = false;
        }
        NodeDecode d = solve_node(code, j, rx, {}, {});
        if (d.status == DecodeStatus::Inconsistent)
            throw Error(ErrorKind::InconsistentRecovery,
                        "message of node " + std::to_string(j + 1) + " does not re-encode to its parities");
        for (auto& [l, vals] : d.slots) led.slots[static_cast<std::size_t>(j)][l] = {vals, rn.time};
    }

    auto offer = [&](int j, int l, Vec vals, Rational time) {
        auto& m = led.slots[static_cast<std::size_t>(j)];
        auto it = m.find(l);
        if (it == m.end()) {
            m[l] = {std::move(vals), time};
            return true;
        }
        if (it->second.values != vals)
            throw Error(ErrorKind::InconsistentRecovery, "conflicting cross-parity sums at node " + std::to_string(j + 1));
        if (time < it->second.time) it->second.time = time;
        return false;
    };

    for (int j = 0; j < p; ++j)
        for (int l = 1; l <= code.L(j); ++l) {
            if (code.slot_width(j, l) == 0) continue;
            Vec sum = vec_zero(static_cast<std::size_t>(code.slot_width(j, l)));
            Rational time(0);
            bool ok = true;
            for (const auto& c : code.contributions(j)) {
                if (c.level != l) continue;
                auto d = hop(g, c.from, j);
                if (!is_rec(c.from) || !d) {
                    ok = false;
                    break;
                }
                add_into(f, sum, vec_mul(recovered.at(c.from).message, c.block));
                time = std::max(time, rec_time(c.from) + *d);
            }
            if (ok) offer(j, l, std::move(sum), time);
        }

    if (code.compatible()) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int gid : code.coop().groups()) {
                auto members = group_slots(code, gid);
                std::vector<std::pair<int, int>> missing;
                for (auto [j, l] : members)
                    if (!led.slots[static_cast<std::size_t>(j)].count(l)) missing.emplace_back(j, l);
                if (missing.size() != 1) continue;
                auto [j, l] = missing.front();
                Vec sum;
                Rational time(0);
                bool ok = true;
                for (auto [o, ol] : members) {
                    if (o == j) continue;
                    auto d = hop(g, o, j);
                    if (!d) {
                        ok = false;
                        break;
                    }
                    const KnownSlot& ks = led.slots[static_cast<std::size_t>(o)].at(ol);
                    add_into(f, sum, ks.values);
                    time = std::max(time, ks.time + *d);
                }
                if (!ok) continue;
                changed = offer(j, l, truncated(sum, static_cast<std::size_t>(code.slot_width(j, l))), time) || changed;
            }
        }
    }

    // Extract m_i * block for unrecovered i from a relay slot once the relay's other contributors are known.
    auto extract = [&](int i, int j, int l, const Contribution*& mine) -> std::optional<std::pair<Vec, Rational>> {
        auto it = led.slots[static_cast<std::size_t>(j)].find(l);
        if (it == led.slots[static_cast<std::size_t>(j)].end()) return std::nullopt;
        Vec val = it->second.values;
        Rational time = it->second.time;
        mine = nullptr;
        for (const auto& c : code.contributions(j)) {
            if (c.level != l) continue;
            if (c.from == i) {
                mine = &c;
                continue;
            }
            auto d = hop(g, c.from, j);
            if (!is_rec(c.from) || !d) return std::nullopt;
            add_into(f, val, vec_mul(recovered.at(c.from).message, c.block));
            time = std::max(time, rec_time(c.from) + *d);
        }
        auto d = hop(g, j, i);
        if (!mine || !d) return std::nullopt;
        return std::pair{val, time + *d};
    };

    for (int i = 0; i < p; ++i) {
        if (is_rec(i)) continue;
        auto& out = led.extras[static_cast<std::size_t>(i)];
        for (int j : code.coop().M(i)) {
            auto blk = code.first_block(i, j);
            if (!blk) continue;
            const Contribution* mine = nullptr;
            if (auto got = extract(i, j, 1, mine))
                out.push_back({ColBlock::Kind::First, j, j, 1, blk->offset, got->first, got->second});
        }
        for (int t : code.coop().row_cycles(i)) {
            auto blk = code.cycle_block(i, t);
            const auto& c = code.coop().cycle(t);
            std::optional<Extra> best;
            for (int j : c.Y_of(i)) {
                const Contribution* mine = nullptr;
                auto got = extract(i, j, c.level.at(j), mine);
                if (!got || !mine || mine->cycle != t) continue;
                if (!best || got->second < best->time)
                    best = Extra{ColBlock::Kind::Cycle, t, j, code.coop().row_level(t, i).value_or(2), blk->offset,
                                 truncated(got->first, blk->width), got->second};
            }
            if (best) out.push_back(*best);
        }
    }
    return led;
}

NodeDecode decode_local(const HierCode& code, int i, const Received& rx) {
    NodeDecode d = solve_node(code, i, rx, {}, {});
    if (!d.ok()) d.missing = code.coop().M(i);
    return d;
}

NodeDecode decode_cooperative(const HierCode& code, int i, const Received& rx, const Ledger& ledger) {
    NodeDecode d = solve_node(code, i, rx, ledger.slots.at(static_cast<std::size_t>(i)),
                              ledger.extras.at(static_cast<std::size_t>(i)));
    if (d.ok()) return d;
    std::vector<int> blockers;
    auto note = [&](const std::vector<int>& s) {
        for (int x : s)
            if (x != i && !ledger.recovered[static_cast<std::size_t>(x)]) blockers.push_back(x);
    };
    const CoopGraph& cg = code.coop();
    note(cg.M(i));
    for (int j : cg.M(i)) note(cg.M(j));
    for (int t : cg.row_cycles(i))
        for (int j : cg.cycle(t).Y_of(i)) {
            note({j});
            note(cg.V(j, cg.cycle(t).level.at(j)));
        }
    d.missing = sorted_unique(blockers);
    return d;
}

std::vector<NodeHierarchy> ec_hierarchy(const HierCode& code) {
    const CoopGraph& cg = code.coop();
    std::vector<NodeHierarchy> out;
    for (int i = 0; i < code.p(); ++i) {
        NodeHierarchy h;
        const int L = code.L(i);
        const int r = code.r(i);
        if (cg.M(i).empty() && L <= 1) {
            h.d = {r};
            h.I = {{}};
            h.A = {{}};
            h.B = {{}};
            out.push_back(std::move(h));
            continue;
        }
        h.d.assign(static_cast<std::size_t>(L) + 1, 0);
        h.I.assign(static_cast<std::size_t>(L) + 1, {});
        h.A.assign(static_cast<std::size_t>(L) + 1, {});
        h.B.assign(static_cast<std::size_t>(L) + 1, {});
        h.d[0] = r - code.slot_total(i);
        h.I[1] = cg.M(i);
        h.A[1] = cg.M(i);
        int d1 = r;
        std::vector<int> b1;
        for (int j : cg.M(i)) {
            d1 += code.delta(j);
            b1 = unite(b1, cg.M(j));
        }
        h.d[1] = d1;
        h.B[1] = minus(b1, unite({i}, cg.M(i)));
        for (int l = 2; l <= L; ++l) {
            const auto ul = static_cast<std::size_t>(l);
            std::vector<int> helpers, second = h.B[ul - 1];
            int gain = 0;
            for (int t : cg.T(i, l)) {
                const auto& c = cg.cycle(t);
                gain += code.gamma(i, t);
                for (int j : c.Y_of(i)) {
                    helpers = unite(helpers, {j});
                    second = unite(second, cg.V(j, c.level.at(j)));
                }
            }
            h.I[ul] = helpers;
            h.A[ul] = unite(h.A[ul - 1], helpers);
            h.B[ul] = minus(second, unite({i}, h.A[ul]));
            h.d[ul] = h.d[ul - 1] + gain;
        }
        out.push_back(std::move(h));
    }
    return out;
}

int lambda(const HierCode& code, int i, int level, const std::vector<int>& W) {
    const CoopGraph& cg = code.coop();
    const auto h = ec_hierarchy(code).at(static_cast<std::size_t>(i));
    if (h.d.size() == 1) return h.d[0];
    if (level <= 0) return h.d[0];
    level = std::min(level, static_cast<int>(h.d.size()) - 1);
    std::vector<int> R = unite(h.A[static_cast<std::size_t>(level)], W);
    int cap = code.r(i);
    for (int j : cg.M(i))
        if (subset(minus(cg.M(j), {i}), R)) cap += code.delta(j);
    for (int l = 2; l <= level; ++l)
        for (int t : cg.T(i, l)) {
            const auto& c = cg.cycle(t);
            bool ok = false;
            for (int j : c.Y_of(i)) ok = ok || subset(minus(cg.V(j, c.level.at(j)), {i}), R);
            if (ok) cap += code.gamma(i, t);
        }
    return cap;
}

std::vector<int> ErasurePattern::weights() const {
    std::vector<int> w;
    for (const auto& e : erased) w.push_back(static_cast<int>(e.size()));
    return w;
}

ErasurePattern ErasurePattern::none(int p) { return ErasurePattern{std::vector<std::vector<int>>(static_cast<std::size_t>(p))}; }

std::vector<Received> apply_pattern(const Codewords& c, const ErasurePattern& pattern) {
    if (pattern.erased.size() != c.size()) throw Error(ErrorKind::LengthMismatch, "pattern must cover every node");
    std::vector<Received> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        Received rx = Received::intact(c[i]);
        for (int pos : pattern.erased[i]) {
            if (pos < 0 || static_cast<std::size_t>(pos) >= c[i].size())
                throw Error(ErrorKind::LengthMismatch, "erased position outside the codeword");
            rx.erased[static_cast<std::size_t>(pos)] = true;
            rx.values[static_cast<std::size_t>(pos)] = Elem{0};
        }
        out.push_back(std::move(rx));
    }
    return out;
}

Certification certify(const HierCode& code, const std::vector<int>& u) {
    const CoopGraph& cg = code.coop();
    const int p = code.p();
    if (static_cast<int>(u.size()) != p) throw Error(ErrorKind::LengthMismatch, "one weight per node");
    Certification c;
    c.local.assign(static_cast<std::size_t>(p), false);
    c.stage.assign(static_cast<std::size_t>(p), -1);
    c.relays.assign(static_cast<std::size_t>(p), {});
    std::vector<std::string> reasons;
    for (int i = 0; i < p; ++i) {
        const int ui = u[static_cast<std::size_t>(i)];
        if (ui < 0 || ui > code.n(i)) {
            c.reason = "weight of node " + std::to_string(i + 1) + " exceeds n_i";
            return c;
        }
        if (ui <= code.r(i) - code.slot_total(i)) {
            c.local[static_cast<std::size_t>(i)] = true;
            c.stage[static_cast<std::size_t>(i)] = 0;
        }
    }
    if (code.multi_level() && !code.compatible()) {
        c.reason = "cooperation graph is not compatible";
        return c;
    }
    auto is_local = [&](int x) { return c.local[static_cast<std::size_t>(x)]; };
    std::vector<bool> blocked(static_cast<std::size_t>(p), false);
    for (int i = 0; i < p; ++i) {
        if (is_local(i)) continue;
        for (int j : cg.M(i))
            if (!is_local(j)) {
                blocked[static_cast<std::size_t>(i)] = true;
                reasons.push_back("nodes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                  " are adjacent and both need cooperation");
                break;
            }
    }
    auto ready = [&](const std::vector<int>& waiters, int self, const std::vector<int>& stage) {
        std::vector<int> kids;
        for (int x : waiters) {
            if (x == self || is_local(x)) continue;
            if (stage[static_cast<std::size_t>(x)] < 0) return std::optional<std::vector<int>>{};
            kids.push_back(x);
        }
        return std::optional<std::vector<int>>{kids};
    };
    for (int s = 1;; ++s) {
        std::vector<int> snapshot = c.stage;
        bool progress = false;
        for (int j = 0; j < p; ++j) {
            if (snapshot[static_cast<std::size_t>(j)] >= 0 || blocked[static_cast<std::size_t>(j)]) continue;
            const int uj = u[static_cast<std::size_t>(j)];
            std::vector<RelayUse> options;
            for (int k : cg.M(j)) {
                if (code.delta(k) == 0) continue;
                if (auto kids = ready(cg.M(k), j, snapshot)) options.push_back({k, -1, code.delta(k), *kids});
            }
            for (int t : cg.row_cycles(j)) {
                const auto& cyc = cg.cycle(t);
                for (int y : cyc.Y_of(j)) {
                    if (!is_local(y)) continue;
                    if (auto kids = ready(cg.V(y, cyc.level.at(y)), j, snapshot)) {
                        options.push_back({y, t, code.gamma(j, t), *kids});
                        break;
                    }
                }
            }
            std::stable_sort(options.begin(), options.end(),
                             [](const RelayUse& a, const RelayUse& b) { return a.relay < b.relay; });
            int cap = code.r(j);
            std::vector<RelayUse> chosen;
            for (const auto& o : options) {
                if (cap >= uj) break;
                cap += o.credit;
                chosen.push_back(o);
            }
            if (cap >= uj) {
                c.stage[static_cast<std::size_t>(j)] = s;
                c.relays[static_cast<std::size_t>(j)] = chosen;
                progress = true;
            }
        }
        if (!progress) break;
    }
    c.certified = std::all_of(c.stage.begin(), c.stage.end(), [](int s) { return s >= 0; });
    if (!c.certified) {
        if (reasons.empty()) {
            for (int i = 0; i < p; ++i)
                if (c.stage[static_cast<std::size_t>(i)] < 0) {
                    reasons.push_back("node " + std::to_string(i + 1) + " lacks enough unblocked relays");
                    break;
                }
        }
        c.reason = reasons.front();
    }
    return c;
}

std::vector<int> DecodingGraph::children(int v) const {
    std::vector<int> out;
    for (auto [a, b] : edges)
        if (a == v) out.push_back(b);
    return out;
}

std::vector<int> DecodingGraph::parents(int v) const {
    std::vector<int> out;
    for (auto [a, b] : edges)
        if (b == v) out.push_back(a);
    return out;
}

std::optional<DecodingGraph> decoding_graph(const HierCode& code, const std::vector<int>& u, int root) {
    Certification c = certify(code, u);
    if (root < 0 || root >= code.p()) throw Error(ErrorKind::InvalidParams, "root out of range");
    if (c.stage[static_cast<std::size_t>(root)] < 0) return std::nullopt;
    DecodingGraph g;
    g.root = root;
    std::set<int> nodes, relays, targets;
    std::set<Edge> edges;
    std::map<int, int> depth;
    // Children are certified at strictly earlier stages, so the recursion terminates.
    std::function<int(int)> visit = [&](int v) -> int {
        if (auto it = depth.find(v); it != depth.end()) return it->second;
        nodes.insert(v);
        if (c.local[static_cast<std::size_t>(v)]) {
            relays.insert(v);
            return depth[v] = 0;
        }
        targets.insert(v);
        int best = 0;
        for (const auto& use : c.relays[static_cast<std::size_t>(v)]) {
            nodes.insert(use.relay);
            relays.insert(use.relay);
            edges.emplace(v, use.relay);
            int below = 0;
            for (int kid : use.children) {
                edges.emplace(use.relay, kid);
                below = std::max(below, visit(kid));
            }
            best = std::max(best, 1 + below);
        }
        return depth[v] = best;
    };
    g.depth = visit(root);
    g.nodes.assign(nodes.begin(), nodes.end());
    g.edges.assign(edges.begin(), edges.end());
    g.relays.assign(relays.begin(), relays.end());
    g.targets.assign(targets.begin(), targets.end());
    return g;
}

bool Recovery::all_recovered() const {
    return std::all_of(nodes.begin(), nodes.end(), [](const NodeOutcome& n) { return n.recovered; });
}

Recovery recover(const HierCode& code, const std::vector<Received>& rx) {
    const int p = code.p();
    if (static_cast<int>(rx.size()) != p) throw Error(ErrorKind::LengthMismatch, "one received word per node");
    Recovery out;
    out.nodes.resize(static_cast<std::size_t>(p));
    std::map<int, RecoveredNode> state;
    out.rounds.emplace_back();
    for (int i = 0; i < p; ++i) {
        NodeDecode d = solve_node(code, i, rx[static_cast<std::size_t>(i)], {}, {});
        if (!d.ok()) continue;
        auto& o = out.nodes[static_cast<std::size_t>(i)];
        o.recovered = true;
        o.round = 0;
        o.capability = code.r(i) - code.slot_total(i);
        o.message = d.message;
        state[i] = {d.message, rx[static_cast<std::size_t>(i)], Rational(0)};
        out.rounds.back().push_back(i);
    }
    for (int round = 1; static_cast<int>(state.size()) < p; ++round) {
        Ledger led = cross_parity_ledger(code, state);
        std::vector<std::pair<int, RecoveredNode>> fresh;
        for (int i = 0; i < p; ++i) {
            if (state.count(i)) continue;
            const auto& slots = led.slots[static_cast<std::size_t>(i)];
            const auto& extras = led.extras[static_cast<std::size_t>(i)];
            std::set<Rational> times;
            for (const auto& [l, ks] : slots) times.insert(ks.time);
            for (const auto& e : extras) times.insert(e.time);
            for (const Rational& tau : times) {
                std::map<int, KnownSlot> use_slots;
                std::vector<Extra> use_extras;
                for (const auto& [l, ks] : slots)
                    if (ks.time <= tau) use_slots[l] = ks;
                for (const auto& e : extras)
                    if (e.time <= tau) use_extras.push_back(e);
                NodeDecode d = solve_node(code, i, rx[static_cast<std::size_t>(i)], use_slots, use_extras);
                if (!d.ok()) continue;
                auto& o = out.nodes[static_cast<std::size_t>(i)];
                o.recovered = true;
                o.round = round;
                o.time = tau;
                o.level = d.level;
                o.message = d.message;
                int unknown = code.slot_total(i);
                for (const auto& [l, ks] : slots) unknown -= static_cast<int>(ks.values.size());
                int gained = 0;
                for (const auto& e : extras) gained += static_cast<int>(e.values.size());
                o.capability = code.r(i) + gained - unknown;
                std::vector<int> src;
                for (const auto& e : use_extras) src.push_back(e.relay);
                o.sources = sorted_unique(src);
                fresh.emplace_back(i, RecoveredNode{d.message, rx[static_cast<std::size_t>(i)], tau});
                break;
            }
        }
        if (fresh.empty()) break;
        out.rounds.emplace_back();
        for (auto& [i, rn] : fresh) {
            out.rounds.back().push_back(i);
            state[i] = std::move(rn);
        }
    }
    return out;
}

std::vector<std::optional<Vec>> oracle_decode(const HierCode& code, const std::vector<Received>& rx) {
    const int p = code.p();
    const Field& f = *code.field();
    Matrix G = code.generator();
    std::vector<std::size_t> row0(static_cast<std::size_t>(p) + 1, 0), col0(static_cast<std::size_t>(p) + 1, 0);
    for (int i = 0; i < p; ++i) {
        row0[static_cast<std::size_t>(i) + 1] = row0[static_cast<std::size_t>(i)] + static_cast<std::size_t>(code.k(i));
        col0[static_cast<std::size_t>(i) + 1] = col0[static_cast<std::size_t>(i)] + static_cast<std::size_t>(code.n(i));
    }
    std::vector<std::size_t> unknown_row;  // global message index of each unknown
    std::vector<Elem> m(row0.back());
    std::vector<int> index(row0.back(), -1);
    for (int i = 0; i < p; ++i)
        for (int a = 0; a < code.k(i); ++a) {
            const std::size_t g = row0[static_cast<std::size_t>(i)] + static_cast<std::size_t>(a);
            const Received& r = rx[static_cast<std::size_t>(i)];
            if (r.erased[static_cast<std::size_t>(a)]) {
                index[g] = static_cast<int>(unknown_row.size());
                unknown_row.push_back(g);
            } else {
                m[g] = r.values[static_cast<std::size_t>(a)];
            }
        }
    std::vector<Vec> rows;
    Vec rhs;
    for (int j = 0; j < p; ++j)
        for (int c = code.k(j); c < code.n(j); ++c) {
            const Received& r = rx[static_cast<std::size_t>(j)];
            if (r.erased[static_cast<std::size_t>(c)]) continue;
            const std::size_t col = col0[static_cast<std::size_t>(j)] + static_cast<std::size_t>(c);
            Vec row(unknown_row.size());
            Elem b = r.values[static_cast<std::size_t>(c)];
            for (std::size_t g = 0; g < m.size(); ++g) {
                Elem coef = G(g, col);
                if (coef.is_zero()) continue;
                if (index[g] >= 0) row[static_cast<std::size_t>(index[g])] = coef;
                else b = f.add(b, f.mul(m[g], coef));
            }
            rows.push_back(std::move(row));
            rhs.push_back(b);
        }
    Vec data;
    for (const auto& row : rows) data.insert(data.end(), row.begin(), row.end());
    AffineSolution sol = solve_affine(Matrix(code.field(), rows.size(), unknown_row.size(), std::move(data)), rhs);
    std::vector<std::optional<Vec>> out(static_cast<std::size_t>(p));
    if (!sol.consistent) return out;
    for (int i = 0; i < p; ++i) {
        Vec msg;
        bool ok = true;
        for (std::size_t g = row0[static_cast<std::size_t>(i)]; g < row0[static_cast<std::size_t>(i) + 1]; ++g) {
            if (index[g] < 0) {
                msg.push_back(m[g]);
            } else {
                ok = ok && sol.determined[static_cast<std::size_t>(index[g])];
                msg.push_back(sol.values[static_cast<std::size_t>(index[g])]);
            }
        }
        if (ok) out[static_cast<std::size_t>(i)] = msg;
    }
    return out;
}

Messages random_messages(const HierCode& code, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, code.field()->size() - 1);
    Messages m;
    for (int i = 0; i < code.p(); ++i) {
        Vec v;
        for (int a = 0; a < code.k(i); ++a) v.push_back(Elem{pick(rng)});
        m.push_back(std::move(v));
    }
    return m;
}

RecoverabilityReport is_recoverable(const HierCode& code, const ErasurePattern& pattern, std::uint64_t seed) {
    RecoverabilityReport rep;
    const auto u = pattern.weights();
    rep.certification = certify(code, u);
    for (int i = 0; i < code.p(); ++i) rep.graphs.push_back(decoding_graph(code, u, i));
    Messages m = random_messages(code, seed);
    Recovery rec = recover(code, apply_pattern(encode(code, m), pattern));
    rep.operational_ok = rec.all_recovered();
    for (int i = 0; i < code.p() && rep.operational_ok; ++i)
        rep.operational_ok = rec.nodes[static_cast<std::size_t>(i)].message == m[static_cast<std::size_t>(i)];
    return rep;
}

}  // namespace hiercode
