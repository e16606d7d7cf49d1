#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hiercode/codec.hpp"

namespace hiercode {

struct NodeAdditionPlan {
    NodeParams params;
    std::vector<int> neighbors;                  // existing ids, 0-based
    std::optional<CauchyIndicators> indicators;  // for the new node; default beta^1..beta^(u+v)
    std::map<int, Rational> latencies;           // neighbor -> link latency, needed when the graph has latencies
};

struct NodeSplitPlan {
    int target = 0;
    NodeParams a;  // i^a keeps the target id
    NodeParams b;  // i^b is appended as node p
    std::optional<Rational> latency;  // i^a - i^b link, defaults to 0 when the graph has latencies
};

struct DynamicResult {
    HierCode code;
    Codewords codewords;
    Messages messages;
    std::vector<int> touched;  // nodes whose stored codeword may differ
};

// Appends node p with the plan's neighbors; other codewords are updated additively.
DynamicResult add_node(const HierCode& code, const Codewords& codewords, const NodeAdditionPlan& plan,
                       const Vec& message);

// Replaces node i by i^a (id i) and i^b (id p); neighbours' codewords stay bit-identical.
DynamicResult split_node(const HierCode& code, const Codewords& codewords, const NodeSplitPlan& plan);

}  // namespace hiercode
