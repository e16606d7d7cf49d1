#include "hiercode/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

}  // namespace

bool RecoveryTrace::all_recovered() const {
    return std::all_of(nodes.begin(), nodes.end(), [](const TraceNode& n) { return n.recovered; });
}

bool RecoveryTrace::all_correct() const {
    return std::all_of(nodes.begin(), nodes.end(), [](const TraceNode& n) { return !n.recovered || n.correct; });
}

double RecoveryTrace::mean_delta() const {
    long long sum = 0;
    int count = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].recovered) {
            sum += delta(static_cast<int>(i));
            ++count;
        }
    return count ? static_cast<double>(sum) / count : 0.0;
}

std::string RecoveryTrace::to_json() const {
    nlohmann::ordered_json j;
    j["rounds"] = nlohmann::ordered_json::array();
    for (const auto& r : rounds) {
        nlohmann::ordered_json ids = nlohmann::ordered_json::array();
        for (int i : r) ids.push_back(i + 1);
        j["rounds"].push_back(ids);
    }
    j["nodes"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const TraceNode& n = nodes[i];
        nlohmann::ordered_json e;
        e["id"] = i + 1;
        e["recovered"] = n.recovered;
        e["round"] = n.round;
        e["level"] = n.level;
        e["time"] = format_rational(n.time);
        e["capability"] = n.capability;
        e["delta"] = delta(static_cast<int>(i));
        nlohmann::ordered_json src = nlohmann::ordered_json::array();
        for (int s : n.sources) src.push_back(s + 1);
        e["sources"] = src;
        e["correct"] = n.correct;
        j["nodes"].push_back(e);
    }
    j["all_recovered"] = all_recovered();
    return j.dump(2);
}

RecoveryTrace run_recovery(const HierCode& code, const std::vector<Received>& rx, const Messages& truth) {
    Recovery rec = recover(code, rx);
    RecoveryTrace t;
    t.rounds = rec.rounds;
    for (int i = 0; i < code.p(); ++i) {
        const NodeOutcome& o = rec.nodes[static_cast<std::size_t>(i)];
        TraceNode n;
        n.recovered = o.recovered;
        n.round = o.round;
        n.level = o.level;
        n.time = o.time;
        n.capability = o.capability;
        n.sources = o.sources;
        n.message = o.message;
        if (o.recovered && !truth.empty()) n.correct = o.message == truth[static_cast<std::size_t>(i)];
        t.nodes.push_back(std::move(n));
        t.r.push_back(code.r(i));
    }
    return t;
}

RecoveryTrace run_recovery(const HierCode& code, const ErasurePattern& pattern, std::uint64_t seed) {
    Messages m = random_messages(code, seed);
    return run_recovery(code, apply_pattern(encode(code, m), pattern), m);
}

void validate(const HierCode& code, const SimConfig& sim) {
    if (sim.trials < 0) throw Error(ErrorKind::InvalidParams, "trials must be nonnegative");
    const ErasureModel& m = sim.model;
    switch (m.kind) {
        case ErasureModel::Kind::Explicit:
            if (static_cast<int>(m.pattern.erased.size()) != code.p())
                throw Error(ErrorKind::LengthMismatch, "pattern must list every node");
            for (int i = 0; i < code.p(); ++i)
                for (int x : m.pattern.erased[static_cast<std::size_t>(i)])
                    if (x < 0 || x >= code.n(i)) throw Error(ErrorKind::InvalidParams, "erased position out of range");
            break;
        case ErasureModel::Kind::Iid:
            if (!(m.probability >= 0.0 && m.probability <= 1.0))
                throw Error(ErrorKind::InvalidParams, "erasure probability must lie in [0, 1]");
            break;
        case ErasureModel::Kind::Burst:
            if (static_cast<int>(m.counts.size()) != code.p())
                throw Error(ErrorKind::LengthMismatch, "burst counts must list every node");
            for (int i = 0; i < code.p(); ++i) {
                int c = m.counts[static_cast<std::size_t>(i)];
                if (c < 0 || c > code.n(i)) throw Error(ErrorKind::InvalidParams, "burst count exceeds n_i");
            }
            break;
    }
}

ErasurePattern sample_pattern(const HierCode& code, const ErasureModel& model, std::mt19937_64& rng) {
    ErasurePattern pat = ErasurePattern::none(code.p());
    switch (model.kind) {
        case ErasureModel::Kind::Explicit:
            return model.pattern;
        case ErasureModel::Kind::Iid: {
            std::bernoulli_distribution coin(model.probability);
            for (int i = 0; i < code.p(); ++i)
                for (int x = 0; x < code.n(i); ++x)
                    if (coin(rng)) pat.erased[static_cast<std::size_t>(i)].push_back(x);
            break;
        }
        case ErasureModel::Kind::Burst:
            for (int i = 0; i < code.p(); ++i) {
                std::vector<int> pos(static_cast<std::size_t>(code.n(i)));
                std::iota(pos.begin(), pos.end(), 0);
                std::shuffle(pos.begin(), pos.end(), rng);
                pos.resize(static_cast<std::size_t>(model.counts[static_cast<std::size_t>(i)]));
                std::sort(pos.begin(), pos.end());
                pat.erased[static_cast<std::size_t>(i)] = pos;
            }
            break;
    }
    return pat;
}

double percentile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    rank = std::clamp<std::size_t>(rank, 1, v.size());
    return v[rank - 1];
}

double SweepReport::recovery_rate(int i) const {
    return trials ? static_cast<double>(recovered_count.at(static_cast<std::size_t>(i))) / trials : 0.0;
}

SweepReport sweep(const HierCode& code, const SimConfig& sim) {
    validate(code, sim);
    SweepReport rep;
    rep.trials = sim.trials;
    rep.seed = sim.seed;
    rep.p = code.p();
    rep.recovered_count.assign(static_cast<std::size_t>(code.p()), 0);
    std::mt19937_64 rng(sim.seed);
    double delta_sum = 0;
    long long delta_n = 0;
    bool first_delta = true;
    for (int trial = 0; trial < sim.trials; ++trial) {
        ErasurePattern pat = sample_pattern(code, sim.model, rng);
        const std::uint64_t msg_seed = rng();
        Messages m = random_messages(code, msg_seed);
        RecoveryTrace tr = run_recovery(code, apply_pattern(encode(code, m), pat), m);
        const bool ok = tr.all_recovered() && tr.all_correct();
        for (int i = 0; i < code.p(); ++i) {
            const TraceNode& n = tr.nodes[static_cast<std::size_t>(i)];
            if (!n.recovered) continue;
            ++rep.recovered_count[static_cast<std::size_t>(i)];
            if (!n.correct) ++rep.wrong_messages;
            rep.latencies.push_back(to_double(n.time));
            const double d = tr.delta(i);
            delta_sum += d;
            ++delta_n;
            rep.delta_min = first_delta ? d : std::min(rep.delta_min, d);
            rep.delta_max = first_delta ? d : std::max(rep.delta_max, d);
            first_delta = false;
        }
        if (ok) ++rep.all_recovered_trials;
        const bool cert = certify(code, pat.weights()).certified;
        if (cert && ok) ++rep.certified_recovered;
        else if (cert) ++rep.certified_failed;
        else if (ok) ++rep.refused_recovered;
        else ++rep.refused_failed;
    }
    if (delta_n) rep.delta_mean = delta_sum / static_cast<double>(delta_n);
    if (!rep.latencies.empty()) {
        rep.latency_mean = std::accumulate(rep.latencies.begin(), rep.latencies.end(), 0.0) /
                           static_cast<double>(rep.latencies.size());
        rep.latency_p50 = percentile(rep.latencies, 0.5);
        rep.latency_p90 = percentile(rep.latencies, 0.9);
        rep.latency_p99 = percentile(rep.latencies, 0.99);
        rep.latency_max = *std::max_element(rep.latencies.begin(), rep.latencies.end());
    }
    return rep;
}

std::string SweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["trials"] = trials;
    j["seed"] = seed;
    j["nodes"] = p;
    nlohmann::ordered_json rates = nlohmann::ordered_json::array();
    for (int i = 0; i < p; ++i) rates.push_back(recovery_rate(i));
    j["recovery_rate"] = rates;
    j["all_recovered_trials"] = all_recovered_trials;
    j["wrong_messages"] = wrong_messages;
    j["latency"] = {{"mean", latency_mean}, {"p50", latency_p50}, {"p90", latency_p90}, {"p99", latency_p99},
                    {"max", latency_max}};
    j["delta"] = {{"mean", delta_mean}, {"min", delta_min}, {"max", delta_max}};
    j["certified_vs_operational"] = {{"certified_recovered", certified_recovered},
                                   {"certified_failed", certified_failed},
                                   {"refused_recovered", refused_recovered},
                                   {"refused_failed", refused_failed}};
    return j.dump(2);
}

std::string SweepReport::summary_table() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << "trials " << trials << "  seed " << seed << "  nodes " << p << "\n";
    os << "all recovered   " << all_recovered_trials << "/" << trials << "\n";
    os << "delta mean      " << delta_mean << "  [" << delta_min << ", " << delta_max << "]\n";
    os << "latency mean    " << latency_mean << "  p50 " << latency_p50 << "  p90 " << latency_p90 << "  max "
       << latency_max << "\n";
    os << "certified       ok " << certified_recovered << "  failed " << certified_failed << "\n";
    os << "refused         ok " << refused_recovered << "  failed " << refused_failed << "\n";
    os << "node  rate\n";
    for (int i = 0; i < p; ++i) os << std::setw(4) << i + 1 << "  " << recovery_rate(i) << "\n";
    return os.str();
}

}  // namespace hiercode
