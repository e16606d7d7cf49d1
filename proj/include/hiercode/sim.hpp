#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hiercode/codec.hpp"

namespace hiercode {

struct TraceNode {
    bool recovered = false;
    int round = -1;      // decoding-depth layer; 0 is local
    int level = 0;       // 0 local, otherwise highest cooperation level used
    Rational time{0};
    int capability = 0;  // d_i realised at recovery
    std::vector<int> sources;
    bool correct = true;  // message matches the transmitted one
    Vec message;
};

struct RecoveryTrace {
    std::vector<std::vector<int>> rounds;
    std::vector<TraceNode> nodes;
    std::vector<int> r;  // r_i, for Delta_i = d_i - r_i
    bool all_recovered() const;
    bool all_correct() const;
    int delta(int i) const { return nodes.at(static_cast<std::size_t>(i)).capability - r.at(static_cast<std::size_t>(i)); }
    // Mean Delta_i over recovered nodes.
    double mean_delta() const;
    std::string to_json() const;
};

RecoveryTrace run_recovery(const HierCode& code, const std::vector<Received>& rx, const Messages& truth = {});
RecoveryTrace run_recovery(const HierCode& code, const ErasurePattern& pattern, std::uint64_t seed = 1);

struct ErasureModel {
    enum class Kind { Explicit, Iid, Burst };
    Kind kind = Kind::Explicit;
    ErasurePattern pattern;    // Explicit
    double probability = 0.0;  // Iid, per symbol
    std::vector<int> counts;   // Burst, erasures per node at uniform positions
};

struct SimConfig {
    int trials = 1;
    std::uint64_t seed = 1;
    ErasureModel model;
};

// Validates the model against the code; throws InvalidParams / LengthMismatch.
void validate(const HierCode& code, const SimConfig& sim);
ErasurePattern sample_pattern(const HierCode& code, const ErasureModel& model, std::mt19937_64& rng);

struct SweepReport {
    int trials = 0;
    std::uint64_t seed = 0;
    int p = 0;
    std::vector<int> recovered_count;  // per node
    int all_recovered_trials = 0;
    int wrong_messages = 0;
    std::vector<double> latencies;     // every recovered node's completion time, in trial order
    double latency_mean = 0, latency_p50 = 0, latency_p90 = 0, latency_p99 = 0, latency_max = 0;
    double delta_mean = 0, delta_min = 0, delta_max = 0;
    int certified_recovered = 0;
    int certified_failed = 0;  // counterexamples
    int refused_recovered = 0;
    int refused_failed = 0;

    double recovery_rate(int i) const;
    std::string to_json() const;
    std::string summary_table() const;
};

SweepReport sweep(const HierCode& code, const SimConfig& sim);

// Nearest-rank percentile of an unsorted sample, q in [0, 1].
double percentile(std::vector<double> v, double q);

}  // namespace hiercode
