#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "netshield/meta.hpp"

namespace netshield {

// Everything the dynamic program needs, built once per instance: the base
// network G(empty,1), its meta decomposition, the purchasable blocks and the
// vulnerable-region data of the not-immunised branch.
struct SolverContext {
    Instance inst;
    Network base;  // G(empty, 1)
    MetaGraph meta;
    MetaTree tree;
    std::vector<PurchasableBlock> blocks;
    std::vector<int> block_of_tree;  // tree id -> index into blocks, or -1

    long long total_vuln_weight = 0;  // sum of |z| over vulnerable meta-nodes
    long long du = 0;                 // Delta(u, empty, 0)
    long long u_region_weight = 1;    // |W(u, empty, 0)|
};

// PreconditionError if G(empty,*) is disconnected.
SolverContext make_context(const Instance& inst);

// Per-child reconstruction action at a Cut: leave the child subtree alone,
// buy one bare link into the child Block, or adopt the child's own
// (necessarily non-empty) table strategy.
enum class CutAction : std::uint8_t { Skip, PureLink, UseChildBr };

struct DpEntry {
    Rational value;
    int links = 0;
    std::vector<long long> child_m;        // m consumed per child, in child order
    std::vector<CutAction> child_action;   // Cut entries only
};

// m -> best entry. m counts attacked nodes: the summed member count of the
// subtree's vulnerable meta-nodes whose delta equals delta0.
using NodeTable = std::map<long long, DpEntry>;

struct SliceTables {
    long long delta0 = 0;
    long long a_count = 1;
    std::vector<NodeTable> per_node;  // indexed by tree id
    long long entries() const;
};

// One (delta0, |A|) slice of the dynamic program, bottom-up over the
// meta-tree. Slices are independent pure computations over the shared tree.
SliceTables compute_slice(const SolverContext& ctx, long long delta0, long long a_count);

enum class BrBranch { Immunised, NotImmAttacked, NotImmSafe };

struct BestResponse {
    Strategy strategy;
    Rational utility;
    BrBranch branch = BrBranch::Immunised;
    long long delta0 = 0;   // certificate: min delta of the final network
    long long a_count = 0;  // certificate: total attacked-node count
    long long slices = 0;          // deterministic work counters
    long long table_entries = 0;
};

BestResponse best_response(const Instance& inst);
BestResponse best_response(const SolverContext& ctx);

// ---- reference evaluation (test surface; shares no code with the tables) ----

// Delta(z, S) on G(empty,1) plus u's links to the representatives of the
// given blocks, by direct simulation.
long long delta_of_meta_under(const SolverContext& ctx, const std::vector<int>& block_tree_ids, int meta_id);

// Vulnerable meta-nodes of T(v) whose delta under S equals delta0.
std::vector<int> restricted_attack_set(const SolverContext& ctx, const std::vector<int>& block_tree_ids,
                                       long long delta0, int tree_node);

// Nothing unless every vulnerable meta-node of T(v) has delta >= delta0;
// otherwise -alpha |S cap T(v)| + (1/a_count) * sum over the restricted
// attack set of |z| * |CC_u(z, S)|.
std::optional<Rational> restricted_utility_eval(const SolverContext& ctx, const std::vector<int>& block_tree_ids,
                                                long long delta0, long long a_count, int tree_node);

// Whether the empty strategy satisfies the (delta0, m) conditions on T(v).
bool empty_valid(const SolverContext& ctx, int tree_node, long long delta0, long long m);

// Links materialized from block representatives, plus the immunisation bit.
Strategy materialize_strategy(const SolverContext& ctx, const std::vector<int>& block_tree_ids, bool immunised);

// Replays a table entry back into its block set (solver-internal, exposed
// for the table-soundness tests).
std::vector<int> reconstruct_blocks(const SolverContext& ctx, const SliceTables& slice, int tree_node, long long m);

}  // namespace netshield
