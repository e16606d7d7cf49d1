#pragma once

#include <map>
#include <vector>

#include "hiercode/codec.hpp"

namespace fixtures {

using namespace hiercode;

FieldPtr gf16();
FieldPtr gf256();

// Two nodes, k = r = 3, delta = 1 over GF(16), both T_i on rows (b, b^2, b^3, b^7), cols (b^8..b^11).
HierCode two_node_code();
Messages two_node_messages();

// The twelve-node mesh; ids are 0-based, edges listed 1-based in the source.
std::vector<Edge> mesh12_edges();
GraphPtr mesh12(NodeParams params, std::map<Edge, Rational> latencies = {});

// Three-level cooperation on the mesh: edge-pair cycles around nodes 2,3 / 8,9 / 4,6 / 10,11 and a
// triangle pair {4,5,6} <-> {10,11,12} (1-based).
CoopGraph mesh12_cooperation(GraphPtr g);

// Nine nodes in three triangles with cycles V1 -> V2 -> V3 -> V1 plus mirrors, one group at level 2.
// Each map sends X_t to Y_t (1-based).
struct RingMatching {
    std::map<int, int> f1, f2, f3;
};
RingMatching ring_panel(int which);  // 0 = left-most .. 3 = right-most
HierCode ring_code(const RingMatching& m);
// Cycle extra parities of the blue nodes 1,2,3 with everything else recovered: (available at once,
// best total over recovery orders where each step recovers a blue node that has at least one).
std::pair<int, int> ring_extra_parities(const HierCode& code);

// Sixteen nodes: relays 1,4,7,9,11 (0-based) and the weight vector that needs them in a chain.
GraphPtr relay_tree();
std::vector<int> relay_tree_weights();

// Node b with relay y and a far cycle {b,y} -> {z,w}; returns (single-level, multi-level) codes.
std::pair<HierCode, HierCode> far_cycle_pair();

// Structured families used by the reliability sweep.
GraphPtr chain_family(int units);  // units of (b, y, z)
GraphPtr star_family(int units);   // units of (b, y1..y6, g1, g2)
std::vector<int> chain_weights(int units);
std::vector<int> star_weights(int units);

}  // namespace fixtures
