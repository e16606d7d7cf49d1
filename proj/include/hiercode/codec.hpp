#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hiercode/matrix.hpp"
#include "hiercode/topology.hpp"

namespace hiercode {

struct BuildOptions {
    std::map<int, CauchyIndicators> indicators;  // node -> explicit T_i indicators
    int default_gamma = 1;
    std::map<int, int> cycle_gamma;              // cycle t -> gamma_{i;t} for every i in X_t
    bool require_compatible = true;
};

// Column block of T_i beyond the first r_i columns.
struct ColBlock {
    enum class Kind { First, Cycle };
    Kind kind;
    int key;  // partner node j (First) or cycle t (Cycle)
    std::size_t offset;  // column offset inside T_i
    std::size_t width;
};

// What node x adds to slot (j, level): m_x * block, block is k_x x width(j, level).
struct Contribution {
    int from;
    int level;
    int cycle;  // -1 for first-level
    Matrix block;
};

class HierCode {
public:
    HierCode(FieldPtr field, CoopGraph coop, std::vector<CauchyIndicators> indicators,
             std::map<std::pair<int, int>, int> gammas, bool compatible);

    const FieldPtr& field() const { return field_; }
    const CoopGraph& coop() const { return coop_; }
    const DsnGraph& graph() const { return coop_.graph(); }
    int p() const { return coop_.p(); }
    bool multi_level() const { return coop_.has_cycles(); }
    bool compatible() const { return compatible_; }

    int k(int i) const { return graph().params(i).k; }
    int r(int i) const { return graph().params(i).r; }
    int delta(int i) const { return graph().params(i).delta; }
    int n(int i) const { return graph().params(i).n(); }
    int u(int i) const { return static_cast<int>(T(i).rows()); }
    int v(int i) const { return static_cast<int>(T(i).cols()); }
    int L(int i) const { return static_cast<int>(node(i).width.size()) - 1; }

    const CauchyIndicators& indicators(int i) const { return node(i).ind; }
    const std::map<std::pair<int, int>, int>& gammas() const { return gammas_; }
    int gamma(int i, int t) const;
    // Slot widths: level 1 is delta_i (0 when M_i is empty), level l >= 2 is eta_{i;l}.
    int slot_width(int i, int level) const;
    int slot_total(int i) const;
    std::size_t slot_offset(int i, int level) const;  // row offset of the level inside S(i)

    const Matrix& T(int i) const { return node(i).T; }
    const Matrix& A(int i) const { return node(i).A; }
    // Stacked [U_i; V_{i;2}; ...], slot_total x r_i.
    const Matrix& S(int i) const { return node(i).S; }
    Matrix U(int i) const;
    Matrix V(int i, int level) const;
    const std::vector<ColBlock>& blocks(int i) const { return node(i).blocks; }
    std::optional<ColBlock> first_block(int i, int j) const;
    std::optional<ColBlock> cycle_block(int i, int t) const;
    Matrix B(int i, int j) const;  // first-level k_i x delta_j
    Matrix E(int i, int t) const;  // k_i x gamma_{i;t}
    // A_{i,j}: k_i x r_j, zero unless i, j cooperate.
    Matrix cross(int i, int j) const;
    Matrix generator() const;

    const std::vector<Contribution>& contributions(int j) const { return node(j).contrib; }

private:
    struct Node {
        CauchyIndicators ind;
        Matrix T, A, S;
        std::vector<int> width;  // index = level, width[0] unused
        std::vector<ColBlock> blocks;
        std::vector<Contribution> contrib;
    };
    const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }

    FieldPtr field_;
    CoopGraph coop_;
    std::map<std::pair<int, int>, int> gammas_;
    bool compatible_;
    std::vector<Node> nodes_;
};

HierCode build_single_level(FieldPtr field, GraphPtr graph, const BuildOptions& options = {},
                            std::vector<std::vector<int>> M = {});
HierCode build_multi_level(FieldPtr field, const CoopGraph& coop, const BuildOptions& options = {});

using Messages = std::vector<Vec>;
using Codewords = std::vector<Vec>;

// Per node, per level (index 0 empty) cross-parity sums s_{i;l}.
std::vector<std::vector<Vec>> slot_values(const HierCode& code, const Messages& m);
Codewords encode(const HierCode& code, const Messages& m);

// Slots sharing group g: (node, level), plus their common padded width.
std::vector<std::pair<int, int>> group_slots(const HierCode& code, int g);
int group_pad_width(const HierCode& code, int g);

struct ParityChecks {
    Matrix local;   // r x (n + slot_total), acting on (c, s)
    Matrix global;  // v x n, acting on c with slot terms removed
};
ParityChecks parity_checks(const HierCode& code, int i);

// Known value of m_i times columns [offset, offset + values.size()) of T_i.
struct Extra {
    ColBlock::Kind kind;
    int key;    // relay node (First) or cycle (Cycle)
    int relay;  // node whose slot supplied the value
    int level;  // cooperation level credited to the holder
    std::size_t offset;
    Vec values;
    Rational time{0};
};

struct KnownSlot {
    Vec values;
    Rational time{0};
};

enum class DecodeStatus { Recovered, Fail, Inconsistent };

struct NodeDecode {
    DecodeStatus status = DecodeStatus::Fail;
    Vec message;
    std::map<int, Vec> slots;  // levels fully determined by the solve
    int level = 0;             // highest cooperation level among the inputs used
    std::vector<int> missing;  // nodes whose recovery would unlock more inputs
    bool ok() const { return status == DecodeStatus::Recovered; }
};

// Joint solve for erased message symbols and unknown slot sums of node i.
NodeDecode solve_node(const HierCode& code, int i, const Received& rx, const std::map<int, KnownSlot>& slots,
                      const std::vector<Extra>& extras);

struct RecoveredNode {
    Vec message;
    Received codeword;
    Rational time{0};
};

struct Ledger {
    std::vector<std::map<int, KnownSlot>> slots;  // node -> level -> value
    std::vector<std::vector<Extra>> extras;       // for unrecovered nodes
    std::vector<bool> recovered;
    std::size_t extra_count(int i, std::optional<ColBlock::Kind> kind = std::nullopt) const;
};

// Throws InconsistentRecovery when a claimed message contradicts its stored symbols.
Ledger cross_parity_ledger(const HierCode& code, const std::map<int, RecoveredNode>& recovered);

NodeDecode decode_local(const HierCode& code, int i, const Received& rx);
NodeDecode decode_cooperative(const HierCode& code, int i, const Received& rx, const Ledger& ledger);

struct NodeHierarchy {
    std::vector<int> d;                   // d_{i,0..L_i}
    std::vector<std::vector<int>> I;      // helper sets per level (I[0] empty)
    std::vector<std::vector<int>> A;      // cumulative helpers
    std::vector<std::vector<int>> B;      // second-tier nodes
};
std::vector<NodeHierarchy> ec_hierarchy(const HierCode& code);
// Capability of node i with A_i^l and W recovered; W outside B_i^l is ignored.
int lambda(const HierCode& code, int i, int level, const std::vector<int>& W);

// Erased coordinate positions per node (0-based in c_i = (m_i, parity)).
struct ErasurePattern {
    std::vector<std::vector<int>> erased;
    std::vector<int> weights() const;
    static ErasurePattern none(int p);
};

std::vector<Received> apply_pattern(const Codewords& c, const ErasurePattern& pattern);

struct RelayUse {
    int relay;
    int cycle;  // -1 for first-level
    int credit;
    std::vector<int> children;  // non-locally-recoverable nodes the relay waits for
};

struct Certification {
    bool certified = false;
    std::string reason;
    std::vector<bool> local;           // V^L membership
    std::vector<int> stage;            // certification stage, -1 if uncertified, 0 for V^L
    std::vector<std::vector<RelayUse>> relays;
};
Certification certify(const HierCode& code, const std::vector<int>& u);

struct DecodingGraph {
    int root = -1;
    std::vector<int> nodes;
    std::vector<Edge> edges;  // parent -> child
    std::vector<int> relays;  // nodes in V^L
    std::vector<int> targets; // nodes in V^NL
    int depth = 0;
    std::vector<int> children(int v) const;
    std::vector<int> parents(int v) const;
};
std::optional<DecodingGraph> decoding_graph(const HierCode& code, const std::vector<int>& u, int root);

struct NodeOutcome {
    bool recovered = false;
    int round = -1;
    Rational time{0};
    int level = 0;
    int capability = 0;  // r_i plus usable extras minus unknown slot entries, at recovery
    std::vector<int> sources;  // nodes whose data fed the decode
    Vec message;
};

struct Recovery {
    std::vector<NodeOutcome> nodes;
    std::vector<std::vector<int>> rounds;  // ids recovered in each round
    bool all_recovered() const;
};

// Jacobi fixed point: round 0 local, later rounds read the previous round's ledger.
Recovery recover(const HierCode& code, const std::vector<Received>& rx);

// Full-system elimination over every unerased coordinate of G.
std::vector<std::optional<Vec>> oracle_decode(const HierCode& code, const std::vector<Received>& rx);

struct RecoverabilityReport {
    Certification certification;
    std::vector<std::optional<DecodingGraph>> graphs;
    bool operational_ok = false;
    bool counterexample() const { return certification.certified && !operational_ok; }
};
RecoverabilityReport is_recoverable(const HierCode& code, const ErasurePattern& pattern, std::uint64_t seed = 1);

Messages random_messages(const HierCode& code, std::uint64_t seed);

}  // namespace hiercode
