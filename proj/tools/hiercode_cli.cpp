#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hiercode/dynamics.hpp"
#include "hiercode/error.hpp"
#include "hiercode/io.hpp"
#include "hiercode/sim.hpp"

using namespace hiercode;

namespace {

struct Common {
    std::string config;
    std::uint64_t seed = 1;
    int trials = -1;
    std::string report;
    bool summary = false;
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

Codewords codewords_of(const HierCode& code, const std::string& path) {
    Codewords c;
    for (const auto& r : parse_codewords(*code.field(), read_file(path))) {
        if (r.erasure_count()) throw Error(ErrorKind::ParseError, "stored codewords must not contain erasures");
        c.push_back(r.values);
    }
    return c;
}

// "1:4,5;3:1" -> 0-based erased positions.
ErasurePattern parse_pattern(const std::string& text, int p) {
    ErasurePattern pat = ErasurePattern::none(p);
    std::stringstream nodes(text);
    std::string item;
    while (std::getline(nodes, item, ';')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "pattern items look like id:pos,pos");
        int id = std::stoi(item.substr(0, colon));
        if (id < 1 || id > p) throw Error(ErrorKind::DanglingEdge, "pattern names an unknown node");
        std::stringstream pos(item.substr(colon + 1));
        std::string x;
        while (std::getline(pos, x, ','))
            if (!x.empty()) pat.erased[static_cast<std::size_t>(id - 1)].push_back(std::stoi(x) - 1);
    }
    return pat;
}

int run_encode(const Common& o, const std::string& messages, const std::string& out) {
    Config cfg = load_config(o.config);
    HierCode code = cfg.build();
    Messages m = !messages.empty() ? parse_messages(*code.field(), read_file(messages))
                                   : cfg.messages ? *cfg.messages : random_messages(code, o.seed);
    emit(out, format_codewords(*code.field(), encode(code, m)));
    return 0;
}

int run_decode(const Common& o, const std::string& words, const std::string& out) {
    HierCode code = load_config(o.config).build();
    RecoveryTrace trace = run_recovery(code, parse_codewords(*code.field(), read_file(words)));
    std::ostringstream os;
    for (int i = 0; i < code.p(); ++i) {
        const auto& n = trace.nodes[static_cast<std::size_t>(i)];
        os << i + 1 << ":";
        if (!n.recovered) os << " unrecovered";
        for (Elem e : n.message) os << ' ' << code.field()->to_hex(e);
        os << "\n";
    }
    emit(out, os.str());
    if (!o.report.empty()) write_file(o.report, trace.to_json() + "\n");
    return trace.all_recovered() ? 0 : 2;
}

int run_simulate(const Common& o) {
    Config cfg = load_config(o.config);
    HierCode code = cfg.build();
    SimConfig sim = cfg.simulation.value_or(SimConfig{});
    if (!cfg.simulation) sim.model.pattern = ErasurePattern::none(code.p());
    sim.seed = o.seed;
    if (o.trials >= 0) sim.trials = o.trials;
    SweepReport rep = sweep(code, sim);
    emit(o.report, rep.to_json() + "\n");
    if (o.summary) std::cerr << rep.summary_table();
    if (rep.certified_failed) std::cerr << "WARNING: " << rep.certified_failed << " certified patterns failed to recover\n";
    return rep.certified_failed ? 3 : 0;
}

int run_check(const Common& o, const std::string& pattern) {
    Config cfg = load_config(o.config);
    HierCode code = cfg.build();
    ErasurePattern pat = !pattern.empty() ? parse_pattern(pattern, code.p())
                         : cfg.simulation ? cfg.simulation->model.pattern
                                          : ErasurePattern::none(code.p());
    RecoverabilityReport rep = is_recoverable(code, pat, o.seed);
    nlohmann::ordered_json j;
    j["certified"] = rep.certification.certified;
    j["reason"] = rep.certification.reason;
    j["operational"] = rep.operational_ok;
    j["counterexample"] = rep.counterexample();
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (int s : rep.certification.stage) stages.push_back(s);
    j["stage"] = stages;
    j["decoding_graphs"] = nlohmann::ordered_json::array();
    for (const auto& g : rep.graphs) {
        if (!g) continue;
        nlohmann::ordered_json gj;
        gj["root"] = g->root + 1;
        gj["depth"] = g->depth;
        gj["edges"] = nlohmann::ordered_json::array();
        for (auto [a, b] : g->edges) gj["edges"].push_back({a + 1, b + 1});
        j["decoding_graphs"].push_back(gj);
    }
    emit(o.report, j.dump(2) + "\n");
    if (rep.counterexample()) std::cerr << "WARNING: certified pattern was not recovered\n";
    return rep.counterexample() ? 3 : 0;
}

int run_search(const Common& o) {
    Config cfg = load_config(o.config);
    SearchResult res = search_cooperation_graph(cfg.graph, cfg.search);
    HierCode code = build_multi_level(cfg.field, res.coop, cfg.options);
    emit(o.report, dump_config(code) + "\n");
    if (res.shortfall() > 0) std::cerr << "shortfall: " << res.shortfall() << " cycles could not be placed\n";
    for (const auto& c : res.conflicts)
        std::cerr << "level conflict on cycle " << c.cycle + 1 << " at row node " << c.row + 1 << "\n";
    return 0;
}

int run_dynamic(const Common& o, bool add, const std::string& plan, const std::string& words,
                const std::string& out_config, const std::string& out_words) {
    HierCode code = load_config(o.config).build();
    Codewords c = codewords_of(code, words);
    const std::string text = read_file(plan);
    std::optional<DynamicResult> res;
    if (add) {
        Vec m;
        NodeAdditionPlan ap = parse_addition_plan(text, *code.field(), &m);
        res.emplace(add_node(code, c, ap, m));
    } else {
        res.emplace(split_node(code, c, parse_split_plan(text)));
    }
    emit(out_config, dump_config(res->code) + "\n");
    emit(out_words, format_codewords(*code.field(), res->codewords));
    return 0;
}

int run_dump(const Common& o, int node) {
    HierCode code = load_config(o.config).build();
    if (node > 0) {
        if (node > code.p()) throw Error(ErrorKind::DanglingEdge, "unknown node");
        emit(o.report, code.T(node - 1).dump());
    } else {
        emit(o.report, code.generator().dump());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical cooperative erasure codes"};
    app.require_subcommand(1);
    Common o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "topology config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--report", o.report, "output path, '-' for stdout");
    };
    std::string messages, out, words, pattern, plan, out_config, out_words;
    int node = 0;

    auto* enc = app.add_subcommand("encode", "encode messages");
    common(enc);
    enc->add_option("--messages", messages, "message file");
    enc->add_option("--out", out, "codeword file");

    auto* dec = app.add_subcommand("decode", "recover messages from erased codewords");
    common(dec);
    dec->add_option("--codewords", words, "codeword file")->required()->check(CLI::ExistingFile);
    dec->add_option("--out", out, "message output");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo recovery sweep");
    common(sim);
    sim->add_option("--trials", o.trials, "number of trials");
    sim->add_flag("--summary", o.summary, "print a summary table to stderr");

    auto* chk = app.add_subcommand("check-pattern", "certify an erasure pattern");
    common(chk);
    chk->add_option("--pattern", pattern, "erasures as id:pos,pos;id:pos (1-based)");

    auto* srch = app.add_subcommand("search-graph", "search for a cooperation graph");
    common(srch);

    auto* addn = app.add_subcommand("add-node", "add a node to a first-level code");
    auto* spl = app.add_subcommand("split-node", "split a node of a first-level code");
    for (auto* sub : {addn, spl}) {
        common(sub);
        sub->add_option("--plan", plan, "plan file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--codewords", words, "stored codewords")->required()->check(CLI::ExistingFile);
        sub->add_option("--out-config", out_config, "updated topology");
        sub->add_option("--out-codewords", out_words, "updated codewords");
    }

    auto* dump = app.add_subcommand("dump-generator", "print G, or T_i with --node");
    common(dump);
    dump->add_option("--node", node, "node id (1-based)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*enc) return run_encode(o, messages, out);
        if (*dec) return run_decode(o, words, out);
        if (*sim) return run_simulate(o);
        if (*chk) return run_check(o, pattern);
        if (*srch) return run_search(o);
        if (*addn) return run_dynamic(o, true, plan, words, out_config, out_words);
        if (*spl) return run_dynamic(o, false, plan, words, out_config, out_words);
        if (*dump) return run_dump(o, node);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
