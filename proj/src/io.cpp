#include "hiercode/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
}

int as_int(const json& v, const std::string& what) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
        try {
            std::size_t pos = 0;
            int x = std::stoi(v.get<std::string>(), &pos);
            if (pos == v.get<std::string>().size()) return x;
        } catch (const std::exception&) {
        }
    }
    bad(what + " must be an integer");
}

int node_id(const json& v, int p) {
    int id = as_int(v, "node id");
    if (id < 1 || id > p) throw Error(ErrorKind::DanglingEdge, "node id " + std::to_string(id) + " out of range");
    return id - 1;
}

int key_id(const std::string& k, int p) { return node_id(json(k), p); }

Rational as_rational(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
    bad("latency must be a number or a fraction string");
}

Elem as_elem(const Field& f, const json& v) {
    if (v.is_string()) return f.parse(v.get<std::string>());
    if (v.is_number_integer()) {
        long long x = v.get<long long>();
        if (x < 0 || x >= static_cast<long long>(f.size())) bad("field element out of range");
        return Elem{static_cast<std::uint32_t>(x)};
    }
    bad("field element must be a string or integer");
}

Vec as_vec(const Field& f, const json& v) {
    if (!v.is_array()) bad("expected an array of field elements");
    Vec out;
    for (const auto& e : v) out.push_back(as_elem(f, e));
    return out;
}

std::vector<int> id_list(const json& v, int p) {
    if (!v.is_array()) bad("expected an array of node ids");
    std::vector<int> out;
    for (const auto& e : v) out.push_back(node_id(e, p));
    return out;
}

NodeParams as_params(const json& v) {
    NodeParams q;
    q.k = as_int(v.at("k"), "k");
    q.r = as_int(v.at("r"), "r");
    q.delta = v.contains("delta") ? as_int(v.at("delta"), "delta") : 0;
    return q;
}

std::uint32_t as_poly(const json& v) {
    if (v.is_number_integer()) return v.get<std::uint32_t>();
    std::string s = v.get<std::string>();
    try {
        std::size_t pos = 0;
        unsigned long x = std::stoul(s, &pos, 0);
        if (pos == s.size()) return static_cast<std::uint32_t>(x);
    } catch (const std::exception&) {
    }
    bad("bad polynomial '" + s + "'");
}

Config parse_config_json(const json& j) {
    Config c;
    try {
        unsigned theta = 8;
        std::optional<std::uint32_t> poly;
        if (j.contains("field")) {
            const auto& fj = j.at("field");
            if (fj.contains("theta")) theta = static_cast<unsigned>(as_int(fj.at("theta"), "theta"));
            if (fj.contains("poly")) poly = as_poly(fj.at("poly"));
        }
        c.field = make_field(theta, poly);
        const Field& f = *c.field;

        const auto& nodes = j.at("nodes");
        const int p = static_cast<int>(nodes.size());
        std::vector<NodeParams> params(static_cast<std::size_t>(p));
        std::vector<bool> seen(static_cast<std::size_t>(p), false);
        for (const auto& nj : nodes) {
            int id = node_id(nj.at("id"), p);
            if (seen[static_cast<std::size_t>(id)]) bad("duplicate node id " + std::to_string(id + 1));
            seen[static_cast<std::size_t>(id)] = true;
            params[static_cast<std::size_t>(id)] = as_params(nj);
        }
        std::vector<Edge> edges;
        if (j.contains("edges"))
            for (const auto& e : j.at("edges")) {
                if (!e.is_array() || e.size() != 2) bad("edges must be pairs");
                edges.emplace_back(node_id(e[0], p), node_id(e[1], p));
            }
        std::map<Edge, Rational> lat;
        if (j.contains("latencies"))
            for (const auto& [k, v] : j.at("latencies").items()) {
                auto dash = k.find('-');
                if (dash == std::string::npos) bad("latency key must look like \"1-2\"");
                int a = key_id(k.substr(0, dash), p), b = key_id(k.substr(dash + 1), p);
                lat[{std::min(a, b), std::max(a, b)}] = as_rational(v);
            }
        c.graph = std::make_shared<const DsnGraph>(std::move(params), std::move(edges), std::move(lat));

        if (j.contains("cooperation")) {
            const auto& cj = j.at("cooperation");
            if (cj.contains("M")) {
                c.M.resize(static_cast<std::size_t>(p));
                std::vector<bool> given(static_cast<std::size_t>(p), false);
                for (const auto& [k, v] : cj.at("M").items()) {
                    int i = key_id(k, p);
                    c.M[static_cast<std::size_t>(i)] = id_list(v, p);
                    given[static_cast<std::size_t>(i)] = true;
                }
                for (int i = 0; i < p; ++i)
                    if (!given[static_cast<std::size_t>(i)]) c.M[static_cast<std::size_t>(i)] = c.graph->neighbors(i);
            }
            if (cj.contains("cycles")) {
                int t = 0;
                for (const auto& yj : cj.at("cycles")) {
                    CoopCycle cy;
                    cy.X = id_list(yj.at("X"), p);
                    cy.Y = id_list(yj.at("Y"), p);
                    if (yj.contains("f"))
                        for (const auto& [k, v] : yj.at("f").items()) cy.f[key_id(k, p)] = node_id(v, p);
                    cy.group = yj.contains("group") ? as_int(yj.at("group"), "group") : 1;
                    if (yj.contains("levels"))
                        for (const auto& [k, v] : yj.at("levels").items()) cy.level[key_id(k, p)] = as_int(v, "level");
                    if (yj.contains("gamma")) c.options.cycle_gamma[t] = as_int(yj.at("gamma"), "gamma");
                    c.cycles.push_back(std::move(cy));
                    ++t;
                }
            }
            if (cj.contains("default_gamma")) c.options.default_gamma = as_int(cj.at("default_gamma"), "default_gamma");
            if (cj.contains("require_compatible")) c.options.require_compatible = cj.at("require_compatible").get<bool>();
        }
        if (j.contains("indicators"))
            for (const auto& [k, v] : j.at("indicators").items())
                c.options.indicators[key_id(k, p)] = CauchyIndicators{as_vec(f, v.at("rows")), as_vec(f, v.at("cols"))};
        if (j.contains("messages")) {
            Messages m(static_cast<std::size_t>(p));
            for (const auto& [k, v] : j.at("messages").items()) m[static_cast<std::size_t>(key_id(k, p))] = as_vec(f, v);
            c.messages = m;
        }
        if (j.contains("simulation")) {
            const auto& sj = j.at("simulation");
            SimConfig sim;
            if (sj.contains("trials")) sim.trials = as_int(sj.at("trials"), "trials");
            if (sj.contains("seed")) sim.seed = sj.at("seed").get<std::uint64_t>();
            const std::string kind = sj.value("model", "explicit");
            if (kind == "explicit") {
                sim.model.kind = ErasureModel::Kind::Explicit;
                sim.model.pattern = ErasurePattern::none(p);
                if (sj.contains("pattern"))
                    for (const auto& [k, v] : sj.at("pattern").items())
                        for (const auto& x : v)
                            sim.model.pattern.erased[static_cast<std::size_t>(key_id(k, p))].push_back(as_int(x, "position") - 1);
            } else if (kind == "iid") {
                sim.model.kind = ErasureModel::Kind::Iid;
                sim.model.probability = sj.at("probability").get<double>();
            } else if (kind == "burst") {
                sim.model.kind = ErasureModel::Kind::Burst;
                sim.model.counts.assign(static_cast<std::size_t>(p), 0);
                for (const auto& [k, v] : sj.at("counts").items())
                    sim.model.counts[static_cast<std::size_t>(key_id(k, p))] = as_int(v, "count");
            } else {
                bad("unknown erasure model '" + kind + "'");
            }
            c.simulation = sim;
        }
        if (j.contains("search")) {
            const auto& sj = j.at("search");
            const int groups = sj.contains("groups_per_clique") ? as_int(sj.at("groups_per_clique"), "groups_per_clique") : 1;
            const int per = sj.contains("cycles_per_group") ? as_int(sj.at("cycles_per_group"), "cycles_per_group") : 1;
            c.search.a = [groups](const std::vector<int>&) { return groups; };
            c.search.b = [per](const std::vector<int>&, int) { return per; };
            c.search.prefer_triangles = sj.value("prefer_triangles", false);
        }
        c.search.M = c.M;
    } catch (const json::exception& e) {
        bad(std::string("config: ") + e.what());
    }
    return c;
}

std::string elem_text(const Field& f, Elem e) { return f.to_power(e); }

Elem parse_hex(const Field& f, const std::string& tok) {
    std::string s = tok;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s = s.substr(2);
    try {
        std::size_t pos = 0;
        unsigned long v = std::stoul(s, &pos, 16);
        if (pos == s.size() && v < f.size()) return Elem{static_cast<std::uint32_t>(v)};
    } catch (const std::exception&) {
    }
    bad("bad symbol '" + tok + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

// Lines of "id: body", returned in id order.
std::vector<std::pair<int, std::string>> id_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (split_ws(line).empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) bad("line without ':' in codeword file");
        out.emplace_back(as_int(json(split_ws(line.substr(0, colon)).at(0)), "node id"), line.substr(colon + 1));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].first != static_cast<int>(i) + 1) bad("node ids must run 1..p without gaps");
    return out;
}

}  // namespace

CoopGraph Config::coop() const { return CoopGraph(graph, M, cycles); }

HierCode Config::build() const {
    if (cycles.empty()) return build_single_level(field, graph, options, M);
    return build_multi_level(field, coop(), options);
}

Config parse_config(const std::string& text) { return parse_config_json(parse_json(text)); }

Config load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string dump_config(const HierCode& code, int indent) {
    const Field& f = *code.field();
    const DsnGraph& g = code.graph();
    ojson j;
    std::ostringstream poly;
    poly << "0x" << std::hex << f.poly();
    j["field"] = {{"theta", f.theta()}, {"poly", poly.str()}};
    j["nodes"] = ojson::array();
    for (int i = 0; i < g.p(); ++i) {
        const auto& q = g.params(i);
        j["nodes"].push_back({{"id", i + 1}, {"k", q.k}, {"r", q.r}, {"delta", q.delta}});
    }
    j["edges"] = ojson::array();
    for (auto [a, b] : g.edges()) j["edges"].push_back({a + 1, b + 1});
    if (g.has_latencies()) {
        ojson lat = ojson::object();
        for (const auto& [e, t] : g.latencies())
            lat[std::to_string(e.first + 1) + "-" + std::to_string(e.second + 1)] = format_rational(t);
        j["latencies"] = lat;
    }
    ojson coop;
    ojson M = ojson::object();
    for (int i = 0; i < g.p(); ++i) {
        ojson ids = ojson::array();
        for (int x : code.coop().M(i)) ids.push_back(x + 1);
        M[std::to_string(i + 1)] = ids;
    }
    coop["M"] = M;
    if (code.multi_level()) {
        coop["cycles"] = ojson::array();
        for (int t = 0; t < static_cast<int>(code.coop().cycles().size()); ++t) {
            const CoopCycle& c = code.coop().cycle(t);
            ojson cj;
            auto ids = [](const std::vector<int>& v) {
                ojson a = ojson::array();
                for (int x : v) a.push_back(x + 1);
                return a;
            };
            cj["X"] = ids(c.X);
            cj["Y"] = ids(c.Y);
            if (!c.f.empty()) {
                ojson fm = ojson::object();
                for (auto [a, b] : c.f) fm[std::to_string(a + 1)] = b + 1;
                cj["f"] = fm;
            }
            cj["group"] = c.group;
            ojson lv = ojson::object();
            for (auto [y, l] : c.level) lv[std::to_string(y + 1)] = l;
            cj["levels"] = lv;
            cj["gamma"] = code.gamma(c.X.front(), t);
            coop["cycles"].push_back(cj);
        }
        coop["require_compatible"] = code.compatible();
    }
    j["cooperation"] = coop;
    ojson ind = ojson::object();
    for (int i = 0; i < g.p(); ++i) {
        ojson rows = ojson::array(), cols = ojson::array();
        for (Elem e : code.indicators(i).rows) rows.push_back(elem_text(f, e));
        for (Elem e : code.indicators(i).cols) cols.push_back(elem_text(f, e));
        ind[std::to_string(i + 1)] = {{"rows", rows}, {"cols", cols}};
    }
    j["indicators"] = ind;
    return j.dump(indent);
}

NodeAdditionPlan parse_addition_plan(const std::string& text, const Field& field, Vec* message) {
    json j = parse_json(text);
    NodeAdditionPlan plan;
    try {
        plan.params = as_params(j.at("node"));
        for (const auto& v : j.at("neighbors")) {
            int id = as_int(v, "neighbour id");
            if (id < 1) throw Error(ErrorKind::DanglingEdge, "neighbour id out of range");
            plan.neighbors.push_back(id - 1);
        }
        if (j.contains("latencies"))
            for (const auto& [k, v] : j.at("latencies").items()) plan.latencies[as_int(json(k), "neighbour id") - 1] = as_rational(v);
        if (j.contains("indicators"))
            plan.indicators = CauchyIndicators{as_vec(field, j.at("indicators").at("rows")),
                                               as_vec(field, j.at("indicators").at("cols"))};
        if (message) *message = j.contains("message") ? as_vec(field, j.at("message")) : Vec(static_cast<std::size_t>(plan.params.k));
    } catch (const json::exception& e) {
        bad(std::string("addition plan: ") + e.what());
    }
    return plan;
}

NodeSplitPlan parse_split_plan(const std::string& text) {
    json j = parse_json(text);
    NodeSplitPlan plan;
    try {
        plan.target = as_int(j.at("target"), "target") - 1;
        plan.a = as_params(j.at("a"));
        plan.b = as_params(j.at("b"));
        if (j.contains("latency")) plan.latency = as_rational(j.at("latency"));
    } catch (const json::exception& e) {
        bad(std::string("split plan: ") + e.what());
    }
    return plan;
}

std::string format_codewords(const Field& f, const std::vector<Received>& words) {
    std::ostringstream os;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const Received& w = words[i];
        os << i + 1 << ":";
        std::vector<std::size_t> er;
        for (std::size_t a = 0; a < w.size(); ++a) {
            if (w.erased[a]) {
                os << " ?";
                er.push_back(a + 1);
            } else {
                os << ' ' << f.to_hex(w.values[a]);
            }
        }
        if (!er.empty()) {
            os << " ; erased: ";
            for (std::size_t e = 0; e < er.size(); ++e) os << (e ? "," : "") << er[e];
        }
        os << "\n";
    }
    return os.str();
}

std::string format_codewords(const Field& f, const Codewords& words) {
    std::vector<Received> rx;
    for (const auto& w : words) rx.push_back(Received::intact(w));
    return format_codewords(f, rx);
}

std::vector<Received> parse_codewords(const Field& f, const std::string& text) {
    std::vector<Received> out;
    for (const auto& [id, body] : id_lines(text)) {
        std::string syms = body, erased;
        if (auto semi = body.find(';'); semi != std::string::npos) {
            syms = body.substr(0, semi);
            erased = body.substr(semi + 1);
        }
        Received r;
        for (const auto& tok : split_ws(syms)) {
            const bool gap = tok == "?";
            r.values.push_back(gap ? Elem{0} : parse_hex(f, tok));
            r.erased.push_back(gap);
        }
        if (!erased.empty()) {
            auto colon = erased.find(':');
            if (colon == std::string::npos || split_ws(erased.substr(0, colon)) != std::vector<std::string>{"erased"})
                bad("expected 'erased:' clause on line " + std::to_string(id));
            std::string list = erased.substr(colon + 1);
            std::replace(list.begin(), list.end(), ',', ' ');
            for (const auto& tok : split_ws(list)) {
                int pos = as_int(json(tok), "erased position");
                if (pos < 1 || pos > static_cast<int>(r.size())) bad("erased position out of range on line " + std::to_string(id));
                r.erased[static_cast<std::size_t>(pos - 1)] = true;
                r.values[static_cast<std::size_t>(pos - 1)] = Elem{0};
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_messages(const Field& f, const Messages& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.size(); ++i) {
        os << i + 1 << ":";
        for (Elem e : m[i]) os << ' ' << f.to_hex(e);
        os << "\n";
    }
    return os.str();
}

Messages parse_messages(const Field& f, const std::string& text) {
    Messages out;
    for (const auto& [id, body] : id_lines(text)) {
        Vec v;
        for (const auto& tok : split_ws(body)) v.push_back(parse_hex(f, tok));
        out.push_back(std::move(v));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
    out << text;
}

}  // namespace hiercode
